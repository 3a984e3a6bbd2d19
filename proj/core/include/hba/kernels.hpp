#ifndef HBA_KERNELS_HPP_
#define HBA_KERNELS_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hba/types.hpp"

namespace hba {

// GSC constants of a kernel: |D^3 h(x)[v]u,u| <= M |u|_x^2 |v|_x^(nu-2) |v|_2^(3-nu).
// theta is set only for self-concordant barriers, where |grad h(x)|*_x <= sqrt(theta).
struct KernelParams {
  double M = 2.0;
  double nu = 3.0;
  std::optional<double> theta;
};

// Barrier kernel on an open convex set. Implementations are immutable after
// construction and may be shared across threads.
//
// value/gradient/hessian throw DomainError outside the open domain.
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual KernelParams params() const = 0;
  virtual bool in_domain(const Vector& x) const = 0;

  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  // Diagonal kernels answer hessian_diagonal; hessian() is always available.
  virtual bool diagonal_hessian() const = 0;
  virtual Vector hessian_diagonal(const Vector& x) const;
  virtual Matrix hessian(const Vector& x) const = 0;

  // A strictly interior point, used as a default start by callers.
  virtual Vector interior_point() const = 0;

 protected:
  void require_domain(const Vector& x) const;
};

using KernelHandle = std::shared_ptr<const Kernel>;

enum class KernelKind {
  kBurg,              // -sum log x_i on R^n_{++}
  kEntropyBarrier,    // sum (x_i log x_i - log x_i) on R^n_{++}
  kPower,             // sum (1 - x_i/kappa)^(-kappa) on x_i < kappa
  kInverseSqrt,       // sum (1 - x_i^2)^(-1/2) on (-1, 1)^n
  kPolyhedral,        // -sum log(d_j - b_j^T x) on {Bx < d}
  kSecondOrderCone,   // -log(t^2 - |w|^2) on {t > |w|}, x = (t, w)
  kRegularizedBurg,   // -sum log x_i + (c/2) |x|^2 on R^n_{++}, declared order in [3, 4]
};

// Shape data for make_kernel. Only the fields relevant to the kind are read.
struct KernelShape {
  double kappa = 1.0;  // power kernel
  double c = 1.0;      // regularized Burg curvature (rho / mu in the SCAD model)
  double order = 3.0;  // regularized Burg declared order nu
  Matrix B;            // polyhedral rows b_j^T
  Vector d;            // polyhedral right-hand side
};

KernelHandle make_kernel(KernelKind kind, int n, const KernelShape& shape = {});

// Parses "burg", "entropy", "power", "inverse-sqrt", "polyhedral", "soc",
// "regularized-burg". Returns nullopt for unknown names.
std::optional<KernelKind> parse_kernel_kind(const std::string& name);
std::string kernel_kind_name(KernelKind kind);

// Block-separable sum h(x) = sum_j h_j(x_j) over consecutive coordinate blocks.
// All blocks must share nu <= 3; the sum carries M = max_j M_j.
KernelHandle make_sum_kernel(std::vector<KernelHandle> blocks);

// factor * h with the given declared parameters.
KernelHandle make_scaled_kernel(KernelHandle base, double factor, KernelParams params);

// Same function as base, but reports the supplied parameters. Used to build
// deliberately mis-specified kernels for negative tests.
KernelHandle with_params(KernelHandle base, KernelParams params);

// Closed-form constants of the power kernel, exposed for tests and docs.
double power_kernel_M(double kappa);
double power_kernel_nu(double kappa);

// M of -log x + (c/2) x^2 declared at order nu in [3, 4], from H >= c I.
double regularized_burg_M(double c, double nu);

}  // namespace hba

#endif  // HBA_KERNELS_HPP_
