#include "hba/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hba {

LocalGeometry::LocalGeometry(const Kernel& h, const Vector& x, bool force_dense)
    : x_(x), diagonal_(h.diagonal_hessian() && !force_dense) {
  if (diagonal_) {
    hdiag_ = h.hessian_diagonal(x);
    if (!hdiag_.allFinite() || hdiag_.minCoeff() <= 0.0) {
      throw NumericalError(h.name() + ": Hessian not positive definite");
    }
    hdiag_inv_ = hdiag_.cwiseInverse();
  } else {
    H_ = h.hessian(x);
    if (!H_.allFinite()) throw NumericalError(h.name() + ": non-finite Hessian");
    llt_.compute(H_);
    if (llt_.info() != Eigen::Success) {
      throw NumericalError(h.name() + ": Hessian not positive definite");
    }
  }
}

double LocalGeometry::norm(const Vector& d) const {
  if (diagonal_) return std::sqrt((hdiag_.array() * d.array().square()).sum());
  return (llt_.matrixU() * d).norm();
}

double LocalGeometry::dual_norm(const Vector& d) const {
  if (diagonal_) return std::sqrt((hdiag_inv_.array() * d.array().square()).sum());
  return llt_.matrixL().solve(d).norm();
}

Vector LocalGeometry::apply(const Vector& d) const {
  if (diagonal_) return hdiag_.cwiseProduct(d);
  return H_ * d;
}

Vector LocalGeometry::solve(const Vector& r) const {
  if (diagonal_) return hdiag_inv_.cwiseProduct(r);
  return llt_.solve(r);
}

Matrix LocalGeometry::solve(const Matrix& R) const {
  if (diagonal_) return hdiag_inv_.asDiagonal() * R;
  return llt_.solve(R);
}

Matrix LocalGeometry::whiten(const Matrix& R) const {
  if (diagonal_) return hdiag_inv_.cwiseSqrt().asDiagonal() * R;
  return llt_.matrixL().solve(R);
}

Vector LocalGeometry::unwhiten(const Vector& r) const {
  if (diagonal_) return hdiag_inv_.cwiseSqrt().cwiseProduct(r);
  return llt_.matrixU().solve(r);
}

Matrix LocalGeometry::dense() const {
  if (diagonal_) return hdiag_.asDiagonal();
  return H_;
}

void LocalGeometry::compute_eigenvalues() const {
  if (eig_) return;
  if (diagonal_) {
    eig_ = {hdiag_.minCoeff(), hdiag_.maxCoeff()};
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H_, Eigen::EigenvaluesOnly);
  eig_ = {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double LocalGeometry::min_eigenvalue() const {
  compute_eigenvalues();
  return eig_->first;
}

double LocalGeometry::max_eigenvalue() const {
  compute_eigenvalues();
  return eig_->second;
}

double bregman(const Kernel& h, const Vector& x, const Vector& y) {
  const double hx = h.value(x);
  if (!h.in_domain(y)) return std::numeric_limits<double>::infinity();
  const Vector g = h.gradient(x);
  return h.value(y) - hx - g.dot(y - x);
}

double gsc_distance(double M, double nu, double euclid, double local) {
  if (euclid == 0.0 || local == 0.0) return 0.0;
  return 0.5 * (nu - 2.0) * M * std::exp((3.0 - nu) * std::log(euclid) +
                                         (nu - 2.0) * std::log(local));
}

double gsc_distance(const Kernel& h, const Vector& x, const Vector& y) {
  LocalGeometry geo(h, x);
  const Vector d = y - x;
  const KernelParams p = h.params();
  return gsc_distance(p.M, p.nu, d.norm(), geo.norm(d));
}

bool dikin_contains(const Kernel& h, const Vector& x, const Vector& y, double r) {
  return gsc_distance(h, x, y) < r;
}

namespace {

constexpr double kBranchTol = 1e-6;
constexpr double kSeriesCutoff = 1e-4;

double binom(double a, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (a - i) / (i + 1);
  return c;
}

}  // namespace

double omega_nu(double nu, double t) {
  if (!(t < 1.0)) {
    std::ostringstream os;
    os << "omega_nu: argument " << t << " must be < 1";
    throw DomainError(os.str());
  }
  if (!(nu > 2.0 && nu <= 4.0)) throw DomainError("omega_nu: nu must lie in (2, 4]");
  const bool small = std::abs(t) < kSeriesCutoff;
  if (std::abs(nu - 3.0) < kBranchTol) {
    if (small) return 0.5 + t * (1.0 / 3.0 + t * (0.25 + t * 0.2));
    return (-t - std::log1p(-t)) / (t * t);
  }
  if (std::abs(nu - 4.0) < kBranchTol) {
    if (small) return 0.5 + t * (1.0 / 6.0 + t * (1.0 / 12.0 + t / 20.0));
    return ((1.0 - t) * std::log1p(-t) + t) / (t * t);
  }
  const double K = (nu - 2.0) / (4.0 - nu);
  const double a = 2.0 * (3.0 - nu) / (2.0 - nu);
  if (small) {
    double s = 0.0;
    double tk = 1.0;
    for (int k = 0; k < 4; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      s += -(K / a) * binom(a, k + 2) * sign * tk;
      tk *= t;
    }
    return s;
  }
  const double pw_m1 = std::expm1(a * std::log1p(-t));  // (1-t)^a - 1
  return K / t * (-pw_m1 / (a * t) - 1.0);
}

LineCheckDetail gsc_line_check_detail(const Kernel& h, const Vector& x, const Vector& u,
                                      const Vector& v) {
  const KernelParams p = h.params();
  LocalGeometry geo(h, x);
  LineCheckDetail out;
  const double ux = geo.norm(u);
  const double vx = geo.norm(v);
  const double v2 = v.norm();
  if (ux == 0.0 || v2 == 0.0) return out;
  out.rhs = p.M * ux * ux * std::exp((p.nu - 2.0) * std::log(vx) + (3.0 - p.nu) * std::log(v2));

  auto quad = [&](const Vector& z) {
    if (h.diagonal_hessian()) return (h.hessian_diagonal(z).array() * u.array().square()).sum();
    return u.dot(h.hessian(z) * u);
  };
  // Step sized so that the probe points sit at d_nu = 1e-4 from x.
  double s = 1e-4 / gsc_distance(p.M, p.nu, v2, vx);
  int tries = 0;
  while (!(h.in_domain(x + s * v) && h.in_domain(x - s * v))) {
    if (++tries > 10) throw DomainError("gsc_line_check: probe step leaves the domain");
    s *= 0.5;
  }
  // Richardson-extrapolated central difference.
  const double d1 = (quad(x + s * v) - quad(x - s * v)) / (2.0 * s);
  const double d2 = (quad(x + 0.5 * s * v) - quad(x - 0.5 * s * v)) / s;
  out.lhs = std::abs((4.0 * d2 - d1) / 3.0);
  out.passed = out.lhs <= out.rhs + 1e-3 * (1.0 + out.rhs);
  return out;
}

bool gsc_line_check(const Kernel& h, const Vector& x, const Vector& u, const Vector& v) {
  return gsc_line_check_detail(h, x, u, v).passed;
}

double rescale_factor(double M, double nu) {
  return std::exp(2.0 / (nu - 2.0) * std::log(M / 2.0));
}

KernelHandle rescale_to_M2(const KernelHandle& h) {
  const KernelParams p = h->params();
  if (!(p.nu > 2.0)) throw DomainError("rescale_to_M2 requires nu > 2");
  KernelParams q = p;
  q.M = 2.0;
  const double c = rescale_factor(p.M, p.nu);
  // A theta-SCB scaled by c has |grad|* scaled by sqrt(c).
  if (q.theta) q.theta = *q.theta * c;
  return make_scaled_kernel(h, c, q);
}

std::pair<double, double> hessian_sandwich_factors(double nu, double r) {
  if (!(r < 1.0) || r < 0.0) throw DomainError("hessian_sandwich: d_nu(x, y) must lie in [0, 1)");
  const double e = 2.0 / (nu - 2.0) * std::log1p(-r);
  return {std::exp(e), std::exp(-e)};
}

std::pair<double, double> hessian_sandwich(const Kernel& h, const Vector& x, const Vector& y) {
  return hessian_sandwich_factors(h.params().nu, gsc_distance(h, x, y));
}

}  // namespace hba
