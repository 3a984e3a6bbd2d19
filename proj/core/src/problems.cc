#include <cmath>
#include <random>
#include <sstream>

#include "hba/problem.hpp"
#include "hba/solver.hpp"

namespace hba {

QuadraticObjective::QuadraticObjective(Matrix Q, Vector q, double c0)
    : Q_(std::move(Q)), q_(std::move(q)), c0_(c0) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != q_.size()) {
    throw ConstructionError("quadratic objective: Q must be n x n and q of length n");
  }
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(Q_ * x) + q_.dot(x) + c0_;
}

Vector QuadraticObjective::gradient(const Vector& x) const { return Q_ * x + q_; }

void validate(const Problem& problem) {
  if (!problem.objective) throw ConstructionError("problem: missing objective");
  if (!problem.kernel) throw ConstructionError("problem: missing kernel");
  if (problem.kernel->dimension() != problem.n) {
    throw ConstructionError("problem: kernel dimension differs from n");
  }
  if (problem.cons.cols() != problem.n) {
    std::ostringstream os;
    os << "problem: constraint matrix has " << problem.cons.cols() << " columns, expected "
       << problem.n;
    throw ConstructionError(os.str());
  }
  if (problem.x0 && problem.x0->size() != problem.n) {
    throw ConstructionError("problem: x0 has the wrong dimension");
  }
}

// ---- SCAD ----------------------------------------------------------------

std::pair<double, double> scad_penalty(const ScadParams& params, double t) {
  if (!(t >= 0.0)) throw DomainError("scad_penalty: t must be >= 0");
  const double z = params.zeta;
  const double a = params.a;
  if (t < z) return {z * t, z};
  if (t <= a * z) return {(-0.5 * z * z + a * z * t - 0.5 * t * t) / (a - 1.0), (a * z - t) / (a - 1.0)};
  return {0.5 * (a + 1.0) * z * z, 0.0};
}

double power_iteration_norm(const Matrix& Q, int iterations, std::uint64_t seed) {
  if (Q.rows() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(Q.rows());
  for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector w = Q * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    est = v.dot(w);
    v = w / nw;
  }
  return std::max(est, v.dot(Q * v));
}

namespace {

class ScadObjective final : public Objective {
 public:
  ScadObjective(Matrix W, Vector y, ScadParams params, double rho)
      : W_(std::move(W)), y_(std::move(y)), params_(params), rho_(rho), d_(W_.cols()) {}

  Vector beta(const Vector& x) const { return x.head(d_) - x.tail(d_); }

  double regression(const Vector& x) const {
    const Vector r = y_ - W_ * beta(x);
    double pen = 0.0;
    for (int i = 0; i < d_; ++i) pen += scad_penalty(params_, x[i] + x[d_ + i]).first;
    return 0.5 * r.squaredNorm() + pen;
  }

  Vector regression_gradient(const Vector& x) const {
    const Vector u = W_.transpose() * (W_ * beta(x) - y_);
    Vector g(2 * d_);
    for (int i = 0; i < d_; ++i) {
      const double dp = scad_penalty(params_, x[i] + x[d_ + i]).second;
      g[i] = u[i] + dp;
      g[d_ + i] = -u[i] + dp;
    }
    return g;
  }

  double value(const Vector& x) const override {
    return regression(x) - 0.5 * rho_ * x.squaredNorm();
  }
  Vector gradient(const Vector& x) const override {
    return regression_gradient(x) - rho_ * x;
  }

 private:
  Matrix W_;
  Vector y_;
  ScadParams params_;
  double rho_;
  int d_;
};

}  // namespace

Vector ScadModel::beta(const Vector& x) const {
  const auto d = W.cols();
  return x.head(d) - x.tail(d);
}

double ScadModel::regression_objective(const Vector& x) const {
  return static_cast<const ScadObjective&>(*problem.objective).regression(x);
}

Vector ScadModel::regression_gradient(const Vector& x) const {
  return static_cast<const ScadObjective&>(*problem.objective).regression_gradient(x);
}

double ScadModel::folded_objective(const Vector& b) const {
  double pen = 0.0;
  for (int i = 0; i < b.size(); ++i) pen += scad_penalty(params, std::abs(b[i])).first;
  return 0.5 * (y - W * b).squaredNorm() + pen;
}

ScadModel build_scad_problem(const Matrix& W, const Vector& y, const ScadParams& params,
                             double mu) {
  if (W.rows() != y.size()) {
    std::ostringstream os;
    os << "SCAD problem: W has " << W.rows() << " rows but y has " << y.size() << " entries";
    throw ConstructionError(os.str());
  }
  if (W.cols() == 0) throw ConstructionError("SCAD problem: W has no columns");
  if (!(params.a > 2.0) || !(params.zeta > 0.0)) {
    throw ConstructionError("SCAD problem: requires a > 2 and zeta > 0");
  }
  if (!(mu > 0.0)) throw ConstructionError("SCAD problem: mu must be positive");

  const int d = static_cast<int>(W.cols());
  Matrix WB(W.rows(), 2 * d);
  WB << W, -W;
  const Matrix Q = WB.transpose() * WB;

  ScadModel m;
  m.W = W;
  m.y = y;
  m.params = params;
  m.mu = mu;
  m.rho = std::max(1.0, power_iteration_norm(Q, 100));

  KernelShape shape;
  shape.c = m.rho / mu;
  shape.order = 3.0;
  m.problem.n = 2 * d;
  m.problem.objective = std::make_shared<ScadObjective>(W, y, params, m.rho);
  m.problem.cons = ConstraintSet(2 * d);
  m.problem.kernel = make_kernel(KernelKind::kRegularizedBurg, 2 * d, shape);
  m.problem.smoothness = 0.0;
  m.problem.x0 = m.problem.kernel->interior_point();
  return m;
}

// ---- L^p -----------------------------------------------------------------

namespace {

class LpObjective final : public Objective {
 public:
  explicit LpObjective(double p) : p_(p) {}
  double value(const Vector& x) const override { return x.array().pow(p_).sum(); }
  Vector gradient(const Vector& x) const override { return p_ * x.array().pow(p_ - 1.0); }

 private:
  double p_;
};

class LinearObjective final : public Objective {
 public:
  explicit LinearObjective(Vector c) : c_(std::move(c)) {}
  double value(const Vector& x) const override { return c_.dot(x); }
  Vector gradient(const Vector&) const override { return c_; }

 private:
  Vector c_;
};

}  // namespace

// Homogenized phase 1: drive the artificial s to zero on
//   A x - tau b + s r = 0,  1^T x + tau + s = n + 2,  (x, tau, s) > 0,
// started at the all-ones point with r = b - A 1. A small s is then removed
// with the least-norm correction d, A d = r.
Vector positive_feasible_point(const ConstraintSet& cons) {
  const int n = cons.cols();
  const int m = cons.rows();
  const Vector ones = Vector::Ones(n);
  if (m == 0 || cons.feasible(ones)) return ones;
  const Matrix& A = cons.A();
  const Vector& b = cons.b();
  const Vector r = b - A * ones;

  Matrix A1 = Matrix::Zero(m + 1, n + 2);
  A1.topLeftCorner(m, n) = A;
  A1.col(n).head(m) = -b;
  A1.col(n + 1).head(m) = r;
  A1.row(m).setOnes();
  Vector b1 = Vector::Zero(m + 1);
  b1[m] = n + 2.0;

  Problem p;
  p.n = n + 2;
  Vector c = Vector::Zero(n + 2);
  c[n + 1] = 1.0;
  p.objective = std::make_shared<LinearObjective>(c);
  try {
    p.cons = ConstraintSet(A1, b1);
  } catch (const RankError& e) {
    throw InfeasibleError(std::string("phase 1: degenerate constraint data: ") + e.what());
  }
  p.kernel = make_kernel(KernelKind::kBurg, n + 2);
  p.smoothness = 0.0;
  p.x0 = Vector::Ones(n + 2);

  Eigen::LLT<Matrix> aat(A * A.transpose());
  const Vector d = A.transpose() * aat.solve(r);

  SolverConfig cfg;
  cfg.L = 0.0;
  cfg.epsilon = 1e-8;
  cfg.max_iters = 2000;
  for (double mu = 1.0; mu >= 1e-10; mu *= 0.1) {
    cfg.mu = mu;
    const SolveResult res = hba_solve(p, cfg);
    if (res.termination == Termination::kNumericalFailure) break;
    const Vector& z = res.x_final;
    const double tau = z[n];
    const double s = z[n + 1];
    const Vector x = (z.head(n) + s * d) / tau;
    if (x.minCoeff() > 0.0 && cons.feasible(x)) return x;
    p.x0 = z;
  }
  throw InfeasibleError("phase 1: no strictly positive solution of Ax = b found");
}

Problem build_lp_problem(const LpParams& params) {
  if (!(params.p > 0.0 && params.p <= 1.0)) {
    throw ConstructionError("L^p problem: p must lie in (0, 1]");
  }
  const int n = static_cast<int>(params.A.cols());
  if (n == 0) throw ConstructionError("L^p problem: empty sensing matrix");
  Problem p;
  p.n = n;
  p.objective = std::make_shared<LpObjective>(params.p);
  p.cons = ConstraintSet(params.A, params.b);
  p.kernel = make_kernel(KernelKind::kBurg, n);
  p.smoothness = 0.0;  // concave f: the descent inequality holds with any L >= 0
  p.f_lower_bound = 0.0;
  p.x0 = positive_feasible_point(p.cons);
  return p;
}

}  // namespace hba
