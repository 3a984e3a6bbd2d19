#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hba/geometry.hpp"
#include "hba_tools/kernel_checks.hpp"
#include "oracle_values.hpp"

namespace hba {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Bregman, BurgScalarValue) {
  const auto h = make_kernel(KernelKind::kBurg, 1);
  EXPECT_NEAR(bregman(*h, vec({1.0}), vec({2.0})), oracle::kBurgBregman12, 1e-12);
}

TEST(Bregman, BurgSeparableSum) {
  const auto h = make_kernel(KernelKind::kBurg, 2);
  EXPECT_NEAR(bregman(*h, vec({1.0, 2.0}), vec({2.0, 1.0})), 0.5, 1e-12);
}

TEST(Bregman, OutsideDomainIsInfinite) {
  const auto h = make_kernel(KernelKind::kBurg, 1);
  EXPECT_EQ(bregman(*h, vec({1.0}), vec({-1.0})), std::numeric_limits<double>::infinity());
}

TEST(Bregman, NonnegativeOnRandomPairs) {
  const auto h = make_kernel(KernelKind::kEntropyBarrier, 4);
  tools::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vector x = tools::sample_interior(*h, rng);
    const Vector y = tools::sample_interior(*h, rng);
    EXPECT_GE(bregman(*h, x, y), -1e-14);
  }
}

TEST(GscDistance, BurgExample) {
  const auto h = make_kernel(KernelKind::kBurg, 1);
  EXPECT_NEAR(gsc_distance(*h, vec({1.0}), vec({1.5})), 0.5, 1e-15);
}

TEST(GscDistance, OrderFourFormula) {
  EXPECT_NEAR(gsc_distance(1.0, 4.0, 2.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(gsc_distance(2.0, 3.0, 5.0, 0.25), 0.25, 1e-15);  // nu = 3: M/2 |.|_x
}

TEST(Dikin, ContainmentExamples) {
  const auto h = make_kernel(KernelKind::kBurg, 1);
  EXPECT_TRUE(dikin_contains(*h, vec({1.0}), vec({1.5}), 1.0));
  EXPECT_TRUE(std::isfinite(h->value(vec({1.5}))));
  EXPECT_FALSE(dikin_contains(*h, vec({1.0}), vec({3.0}), 1.0));
}

TEST(Dikin, UnitBallStaysInDomain) {
  for (auto kind : {KernelKind::kBurg, KernelKind::kInverseSqrt, KernelKind::kPower,
                    KernelKind::kSecondOrderCone}) {
    const auto h = make_kernel(kind, 3);
    tools::Rng rng(21);
    for (int k = 0; k < 100; ++k) {
      const Vector x = tools::sample_interior(*h, rng);
      const Vector y = tools::point_at_distance(*h, x, 0.999, rng);
      EXPECT_TRUE(h->in_domain(y)) << h->name();
    }
  }
}

TEST(OmegaNu, ClosedFormValues) {
  EXPECT_NEAR(omega_nu(3.0, 0.5), oracle::kOmega3Half, 1e-13);
  EXPECT_NEAR(omega_nu(4.0, 0.5), oracle::kOmega4Half, 1e-13);
}

TEST(OmegaNu, QuadratureOracleAllBranches) {
  EXPECT_NEAR(omega_nu(3.0, -0.5), oracle::kOmega3MinusHalf, 1e-13);
  EXPECT_NEAR(omega_nu(4.0, -0.5), oracle::kOmega4MinusHalf, 1e-13);
  EXPECT_NEAR(omega_nu(2.6, 0.5), oracle::kOmega26Half, 1e-13);
  EXPECT_NEAR(omega_nu(2.6, -0.5), oracle::kOmega26MinusHalf, 1e-13);
  EXPECT_NEAR(omega_nu(3.5, 0.5), oracle::kOmega35Half, 1e-13);
  EXPECT_NEAR(omega_nu(3.5, -0.5), oracle::kOmega35MinusHalf, 1e-13);
  EXPECT_NEAR(omega_nu(2.5, 0.3), oracle::kOmega25Point3, 1e-13);
}

TEST(OmegaNu, SmallArgumentLimit) {
  for (double nu : {2.2, 2.6, 3.0, 3.5, 4.0}) {
    EXPECT_LT(std::abs(omega_nu(nu, 1e-9) - 0.5), 1e-6) << nu;
    EXPECT_NEAR(omega_nu(nu, 0.0), 0.5, 1e-15) << nu;
  }
}

TEST(OmegaNu, ContinuousAcrossSeriesSwitch) {
  for (double nu : {2.6, 3.0, 3.5, 4.0}) {
    for (double t : {0.99e-4, 1.01e-4, -0.99e-4, -1.01e-4}) {
      const double a = omega_nu(nu, t);
      const double b = omega_nu(nu, t * (1.0 + 1e-6));
      EXPECT_NEAR(a, b, 1e-9) << nu << " " << t;
    }
  }
}

TEST(OmegaNu, IncreasingInT) {
  for (double nu : {2.6, 3.0, 3.5, 4.0}) {
    double prev = omega_nu(nu, -0.9);
    for (int i = -89; i <= 89; ++i) {
      const double cur = omega_nu(nu, i / 100.0);
      EXPECT_GT(cur, prev) << nu << " " << i;
      prev = cur;
    }
  }
}

TEST(OmegaNu, RejectsOutOfRange) {
  EXPECT_THROW(omega_nu(3.0, 1.0), DomainError);
  EXPECT_THROW(omega_nu(1.5, 0.1), DomainError);
}

TEST(LineCheck, BurgAtOneIsTight) {
  const auto h = make_kernel(KernelKind::kBurg, 1);
  const auto d = gsc_line_check_detail(*h, vec({1.0}), vec({1.0}), vec({1.0}));
  EXPECT_NEAR(d.lhs, 2.0, 1e-6);
  EXPECT_NEAR(d.rhs, 2.0, 1e-12);
  EXPECT_TRUE(d.passed);
}

TEST(LineCheck, PowerKernelRandomDraws) {
  const auto h = make_kernel(KernelKind::kPower, 3);
  tools::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vector x = tools::sample_interior(*h, rng);
    EXPECT_TRUE(gsc_line_check(*h, x, tools::sample_direction(*h, x, rng),
                               tools::sample_direction(*h, x, rng)));
  }
}

TEST(Rescale, FactorExamples) {
  EXPECT_NEAR(rescale_factor(8.0, 4.0), 4.0, 1e-14);
  EXPECT_NEAR(rescale_factor(3.25, 2.8), oracle::kRescale3p25, 1e-12);
  EXPECT_NEAR(rescale_factor(2.0, 3.0), 1.0, 1e-15);
}

TEST(Rescale, RescaledKernelHasMTwo) {
  const auto h = make_kernel(KernelKind::kInverseSqrt, 2);
  const auto r = rescale_to_M2(h);
  EXPECT_EQ(r->params().M, 2.0);
  EXPECT_EQ(r->params().nu, h->params().nu);
  const Vector x = vec({0.3, -0.2});
  EXPECT_NEAR(r->value(x), rescale_factor(3.25, 2.8) * h->value(x), 1e-12);
  tools::Rng rng(8);
  EXPECT_TRUE(tools::check_line_inequality(*r, rng).passed);
}

TEST(HessianSandwich, FactorsAtHalf) {
  const auto [lo, hi] = hessian_sandwich_factors(3.0, 0.5);
  EXPECT_NEAR(lo, 0.25, 1e-15);
  EXPECT_NEAR(hi, 4.0, 1e-15);
}

TEST(HessianSandwich, EigenvaluesWithinFactors) {
  const auto h = make_kernel(KernelKind::kBurg, 2);
  tools::Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const Vector x = tools::sample_interior(*h, rng);
    const Vector y = tools::point_at_distance(*h, x, 0.3, rng);
    const auto [lo, hi] = hessian_sandwich(*h, x, y);
    // Generalized eigenvalues of H(y) relative to H(x).
    const Vector ratio = h->hessian_diagonal(y).cwiseQuotient(h->hessian_diagonal(x));
    EXPECT_GE(ratio.minCoeff(), lo * (1.0 - 1e-12));
    EXPECT_LE(ratio.maxCoeff(), hi * (1.0 + 1e-12));
  }
}

TEST(LocalGeometry, DenseAndDiagonalAgree) {
  const auto h = make_kernel(KernelKind::kEntropyBarrier, 3);
  const Vector x = vec({0.5, 1.0, 2.0});
  const LocalGeometry d(*h, x), f(*h, x, true);
  const Vector u = vec({1.0, -2.0, 0.5});
  EXPECT_NEAR(d.norm(u), f.norm(u), 1e-13);
  EXPECT_NEAR(d.dual_norm(u), f.dual_norm(u), 1e-13);
  EXPECT_NEAR(d.min_eigenvalue(), f.min_eigenvalue(), 1e-12);
  EXPECT_NEAR(d.max_eigenvalue(), f.max_eigenvalue(), 1e-12);
  EXPECT_LT((d.whiten(Matrix(u)) - f.whiten(Matrix(u))).norm(), 1e-13);
  EXPECT_LT((d.unwhiten(u) - f.unwhiten(u)).norm(), 1e-13);
}

TEST(LocalGeometry, WhitenFactorReproducesInverse) {
  const auto h = make_kernel(KernelKind::kSecondOrderCone, 3);
  const LocalGeometry g(*h, vec({2.0, 0.5, -0.3}));
  const Vector r = vec({0.3, 1.0, -1.0});
  // L^{-T} L^{-1} r = H^{-1} r
  EXPECT_LT((g.unwhiten(g.whiten(Matrix(r)).col(0)) - g.solve(r)).norm(), 1e-12);
}

}  // namespace
}  // namespace hba
