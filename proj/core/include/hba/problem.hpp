#ifndef HBA_PROBLEM_HPP_
#define HBA_PROBLEM_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

#include "hba/directions.hpp"
#include "hba/kernels.hpp"

namespace hba {

// Smooth objective on the kernel's interior.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
};

using ObjectiveHandle = std::shared_ptr<const Objective>;

// 1/2 x^T Q x + q^T x + c0 with Q symmetric.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix Q, Vector q, double c0 = 0.0);
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  const Matrix& Q() const { return Q_; }
  const Vector& q() const { return q_; }

 private:
  Matrix Q_;
  Vector q_;
  double c0_;
};

class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;
  FunctionObjective(ValueFn value, GradFn grad) : value_(std::move(value)), grad_(std::move(grad)) {}
  double value(const Vector& x) const override { return value_(x); }
  Vector gradient(const Vector& x) const override { return grad_(x); }

 private:
  ValueFn value_;
  GradFn grad_;
};

struct Problem {
  int n = 0;
  ObjectiveHandle objective;
  ConstraintSet cons;
  KernelHandle kernel;
  std::optional<double> smoothness;  // an L for which (f, h) is L-smooth, if known
  double f_lower_bound = -std::numeric_limits<double>::infinity();
  std::optional<Vector> x0;          // interior feasible start
};

// Throws ConstructionError on inconsistent dimensions or missing parts.
void validate(const Problem& problem);

// ---- SCAD regression ----------------------------------------------------

struct ScadParams {
  double zeta = 0.01;
  double a = 10.0;
};

// (p(t), p'(t)) for t >= 0; the derivative is one-sided at the branch points.
std::pair<double, double> scad_penalty(const ScadParams& params, double t);

// Split model with x = (beta_plus, beta_minus) in R^{2d}_{++}.
struct ScadModel {
  Problem problem;
  Matrix W;
  Vector y;
  ScadParams params;
  double mu = 0.0;
  double rho = 1.0;  // max(1, |Q|) with Q = B^T W^T W B

  Vector beta(const Vector& x) const;  // x_{1..d} - x_{d+1..2d}
  // Regression objective 1/2 |y - W B x|^2 + sum p(x_i + x_{d+i}).
  double regression_objective(const Vector& x) const;
  Vector regression_gradient(const Vector& x) const;
  // SCAD objective in the unsplit variable beta.
  double folded_objective(const Vector& beta) const;
};

// The returned problem pairs the regularized Burg kernel
// h(x) = -sum log x_i + rho/(2 mu) |x|^2 with the objective
// regression_objective(x) - rho/2 |x|^2, which is concave, so the pair is
// 0-smooth and f + mu h equals the regression objective plus mu * Burg.
ScadModel build_scad_problem(const Matrix& W, const Vector& y, const ScadParams& params,
                             double mu);

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration_norm(const Matrix& Q, int iterations, std::uint64_t seed = 1);

// ---- L^p minimization ---------------------------------------------------

struct LpParams {
  double p = 0.5;
  Matrix A;
  Vector b;
};

// sum x_i^p over {Ax = b, x > 0} with the Burg kernel. x0 comes from phase 1.
Problem build_lp_problem(const LpParams& params);

// Strictly positive x with Ax = b, or InfeasibleError.
Vector positive_feasible_point(const ConstraintSet& cons);

}  // namespace hba

#endif  // HBA_PROBLEM_HPP_
