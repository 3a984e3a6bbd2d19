#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hba/problem.hpp"

namespace hba {
namespace {

Matrix gaussian(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  }
  return A;
}

Vector positive(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 2.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

TEST(ScadPenalty, BranchValues) {
  const ScadParams p{0.01, 10.0};
  EXPECT_EQ(scad_penalty(p, 0.0).first, 0.0);
  EXPECT_NEAR(scad_penalty(p, 0.005).first, 5e-5, 1e-18);
  EXPECT_NEAR(scad_penalty(p, 0.005).second, 0.01, 1e-18);
  const auto [v, d] = scad_penalty(p, 0.2);
  EXPECT_NEAR(v, 5.5e-4, 1e-18);
  EXPECT_EQ(d, 0.0);
  EXPECT_THROW(scad_penalty(p, -1e-3), DomainError);
}

TEST(ScadPenalty, ContinuousAndC1AtBranchPoints) {
  const ScadParams p{0.01, 10.0};
  for (double t0 : {p.zeta, p.a * p.zeta}) {
    const double e = 1e-9;
    const auto lo = scad_penalty(p, t0 - e), hi = scad_penalty(p, t0 + e);
    EXPECT_NEAR(lo.first, hi.first, 3.0 * e * p.zeta);
    EXPECT_NEAR(lo.second, hi.second, 1e-9);
  }
}

TEST(ScadPenalty, NondecreasingAndConcave) {
  const ScadParams p{0.3, 3.7};
  double prev_v = 0.0, prev_d = scad_penalty(p, 0.0).second;
  for (int i = 1; i <= 400; ++i) {
    const auto [v, d] = scad_penalty(p, 2.0 * i / 400.0);
    EXPECT_GE(v, prev_v - 1e-15);
    EXPECT_LE(d, prev_d + 1e-15);
    prev_v = v;
    prev_d = d;
  }
}

class ScadModelTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(31);
    W_ = gaussian(20, 4, rng);
    std::normal_distribution<double> g;
    y_.resize(20);
    for (int i = 0; i < 20; ++i) y_[i] = g(rng);
    model_ = build_scad_problem(W_, y_, {0.05, 3.7}, 1e-2);
  }
  Matrix W_;
  Vector y_;
  ScadModel model_;
};

TEST_F(ScadModelTest, Shapes) {
  EXPECT_EQ(model_.problem.n, 8);
  EXPECT_EQ(model_.problem.kernel->dimension(), 8);
  EXPECT_EQ(model_.problem.cons.rows(), 0);
  ASSERT_TRUE(model_.problem.smoothness.has_value());
  EXPECT_EQ(*model_.problem.smoothness, 0.0);
  const Matrix WB = (Matrix(4, 8) << Matrix::Identity(4, 4), -Matrix::Identity(4, 4)).finished();
  const double Qnorm = (WB.transpose() * W_.transpose() * W_ * WB).norm();
  EXPECT_GE(model_.rho, 1.0);
  EXPECT_LE(model_.rho, Qnorm * (1.0 + 1e-9));
}

TEST_F(ScadModelTest, NearZeroSplitGivesHalfResponseNorm) {
  const Vector x = Vector::Constant(8, 1e-9);
  EXPECT_NEAR(model_.regression_objective(x), 0.5 * y_.squaredNorm(), 1e-6);
}

TEST_F(ScadModelTest, RegressionGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 10; ++k) {
    const Vector x = positive(8, rng);
    const Vector g = model_.regression_gradient(x);
    for (int i = 0; i < 8; ++i) {
      const double e = 1e-6;
      Vector xp = x, xm = x;
      xp[i] += e;
      xm[i] -= e;
      const double fd = (model_.regression_objective(xp) - model_.regression_objective(xm)) / (2 * e);
      EXPECT_NEAR(g[i], fd, 1e-5 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_F(ScadModelTest, ObjectiveGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(33);
  const Objective& f = *model_.problem.objective;
  const Vector x = positive(8, rng);
  const Vector g = f.gradient(x);
  for (int i = 0; i < 8; ++i) {
    const double e = 1e-6;
    Vector xp = x, xm = x;
    xp[i] += e;
    xm[i] -= e;
    EXPECT_NEAR(g[i], (f.value(xp) - f.value(xm)) / (2 * e), 1e-5 * (1.0 + std::abs(g[i])));
  }
}

TEST_F(ScadModelTest, PotentialEqualsRegressionPlusBurg) {
  std::mt19937_64 rng(34);
  const double mu = model_.mu;
  for (int k = 0; k < 20; ++k) {
    const Vector x = positive(8, rng);
    const double F = model_.problem.objective->value(x) + mu * model_.problem.kernel->value(x);
    const double burg = -x.array().log().sum();
    EXPECT_NEAR(F, model_.regression_objective(x) + mu * burg, 1e-10 * (1.0 + std::abs(F)));
  }
}

TEST_F(ScadModelTest, SplitMatchesFoldedObjective) {
  std::mt19937_64 rng(35);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Vector beta(4);
    for (int i = 0; i < 4; ++i) beta[i] = g(rng);
    Vector x(8);
    x << beta.cwiseMax(0.0), (-beta).cwiseMax(0.0);
    EXPECT_LT((model_.beta(x) - beta).norm(), 1e-15);
    EXPECT_NEAR(model_.regression_objective(x), model_.folded_objective(beta), 1e-10);
  }
}

TEST(ScadModel, DimensionMismatchThrows) {
  EXPECT_THROW(build_scad_problem(Matrix::Ones(5, 2), Vector::Ones(4), {}, 1e-2),
               ConstructionError);
}

TEST(PowerIteration, MatchesEigenSolver) {
  std::mt19937_64 rng(36);
  const Matrix G = gaussian(10, 6, rng);
  const Matrix Q = G.transpose() * G;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  EXPECT_NEAR(power_iteration_norm(Q, 500), es.eigenvalues().maxCoeff(),
              1e-8 * es.eigenvalues().maxCoeff());
}

TEST(LpProblem, ValuesAtOnes) {
  LpParams lp;
  lp.p = 0.5;
  lp.A = Matrix::Ones(1, 5);
  lp.b = Vector::Constant(1, 5.0);
  const Problem p = build_lp_problem(lp);
  EXPECT_NEAR(p.objective->value(Vector::Ones(5)), 5.0, 1e-15);
  EXPECT_LT((p.objective->gradient(Vector::Ones(5)) - Vector::Constant(5, 0.5)).norm(), 1e-15);
  EXPECT_EQ(p.f_lower_bound, 0.0);
  ASSERT_TRUE(p.x0.has_value());
  EXPECT_TRUE(p.kernel->in_domain(*p.x0));
  EXPECT_TRUE(p.cons.feasible(*p.x0));
  lp.p = 1.0;
  const Problem q = build_lp_problem(lp);
  EXPECT_LT((q.objective->gradient(Vector::Constant(5, 0.3)) - Vector::Ones(5)).norm(), 1e-15);
}

TEST(LpProblem, Concavity) {
  LpParams lp;
  lp.A = Matrix::Ones(1, 6);
  lp.b = Vector::Ones(1);
  const Problem p = build_lp_problem(lp);
  std::mt19937_64 rng(37);
  for (int k = 0; k < 100; ++k) {
    const Vector x = positive(6, rng), y = positive(6, rng);
    const auto& f = *p.objective;
    EXPECT_GE(f.value(0.5 * (x + y)), 0.5 * (f.value(x) + f.value(y)) - 1e-14);
  }
}

TEST(LpProblem, RejectsBadExponent) {
  LpParams lp;
  lp.A = Matrix::Ones(1, 2);
  lp.b = Vector::Ones(1);
  lp.p = 1.5;
  EXPECT_THROW(build_lp_problem(lp), ConstructionError);
}

TEST(PhaseOne, FindsInteriorPoint) {
  std::mt19937_64 rng(38);
  for (int k = 0; k < 20; ++k) {
    Matrix A = gaussian(5, 20, rng).cwiseAbs();
    const Vector b = A * positive(20, rng);
    const ConstraintSet cons(A, b);
    const Vector x = positive_feasible_point(cons);
    EXPECT_GT(x.minCoeff(), 0.0);
    EXPECT_TRUE(cons.feasible(x));
  }
}

TEST(PhaseOne, DetectsInfeasibility) {
  // x1 + x2 = -1 has no positive solution.
  const ConstraintSet cons(Matrix::Ones(1, 2), Vector::Constant(1, -1.0));
  EXPECT_THROW(positive_feasible_point(cons), InfeasibleError);
  // x1 - x2 = 0 and x1 + x2 = 0 force x = 0, not interior.
  Matrix A(2, 2);
  A << 1, -1, 1, 1;
  EXPECT_THROW(positive_feasible_point(ConstraintSet(A, Vector::Zero(2))), InfeasibleError);
}

TEST(Problem, ValidateCatchesMissingParts) {
  Problem p;
  p.n = 2;
  EXPECT_THROW(validate(p), ConstructionError);
  p.objective = std::make_shared<QuadraticObjective>(Matrix::Identity(2, 2), Vector::Zero(2));
  p.kernel = make_kernel(KernelKind::kBurg, 3);
  p.cons = ConstraintSet(2);
  EXPECT_THROW(validate(p), ConstructionError);
}

}  // namespace
}  // namespace hba
