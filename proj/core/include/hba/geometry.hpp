#ifndef HBA_GEOMETRY_HPP_
#define HBA_GEOMETRY_HPP_

#include <optional>
#include <utility>

#include "hba/kernels.hpp"

namespace hba {

// Hessian metric at a fixed interior point. Diagonal kernels use O(n)
// reciprocal paths; dense kernels use a Cholesky factorization.
class LocalGeometry {
 public:
  LocalGeometry(const Kernel& h, const Vector& x, bool force_dense = false);

  const Vector& point() const { return x_; }
  int dimension() const { return static_cast<int>(x_.size()); }
  bool is_diagonal() const { return diagonal_; }

  double norm(const Vector& d) const;       // sqrt(d^T H d)
  double dual_norm(const Vector& d) const;  // sqrt(d^T H^{-1} d)
  Vector apply(const Vector& d) const;      // H d
  Vector solve(const Vector& r) const;      // H^{-1} r
  Matrix solve(const Matrix& R) const;      // H^{-1} R
  // With H = L L^T (L = diag(sqrt(H)) in the diagonal case):
  Matrix whiten(const Matrix& R) const;        // L^{-1} R
  Vector unwhiten(const Vector& r) const;      // L^{-T} r

  // Exact extreme eigenvalues of H(x). Computed on first use for dense H.
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  Matrix dense() const;

 private:
  void compute_eigenvalues() const;

  Vector x_;
  bool diagonal_;
  Vector hdiag_;
  Vector hdiag_inv_;
  Matrix H_;
  Eigen::LLT<Matrix> llt_;
  mutable std::optional<std::pair<double, double>> eig_;
};

// D_h(y, x) = h(y) - h(x) - <grad h(x), y - x>. x must be interior.
double bregman(const Kernel& h, const Vector& x, const Vector& y);

// d_nu(x, y) = (nu-2)/2 * M * |y-x|_2^(3-nu) * |y-x|_x^(nu-2).
double gsc_distance(const Kernel& h, const Vector& x, const Vector& y);
double gsc_distance(double M, double nu, double euclid, double local);

bool dikin_contains(const Kernel& h, const Vector& x, const Vector& y, double r);

// Bregman bound function omega_nu(t); t < 1 required.
double omega_nu(double nu, double t);

// Finite-difference check of the GSC inequality along (u, v) at x.
bool gsc_line_check(const Kernel& h, const Vector& x, const Vector& u, const Vector& v);

struct LineCheckDetail {
  double lhs = 0.0;  // |d/dt u^T H(x + t v) u| at t = 0
  double rhs = 0.0;  // M |u|_x^2 |v|_x^(nu-2) |v|_2^(3-nu)
  bool passed = true;
};
LineCheckDetail gsc_line_check_detail(const Kernel& h, const Vector& x, const Vector& u,
                                      const Vector& v);

// (M/2)^(2/(nu-2)) * h with parameters (2, nu).
KernelHandle rescale_to_M2(const KernelHandle& h);
double rescale_factor(double M, double nu);

// ((1-r)^(2/(nu-2)), (1-r)^(-2/(nu-2))) with r = d_nu(x, y) < 1.
std::pair<double, double> hessian_sandwich(const Kernel& h, const Vector& x, const Vector& y);
std::pair<double, double> hessian_sandwich_factors(double nu, double r);

}  // namespace hba

#endif  // HBA_GEOMETRY_HPP_
