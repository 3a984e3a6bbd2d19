#include "hba_tools/kernel_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hba/geometry.hpp"

namespace hba::tools {

namespace {

Vector gaussian(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void note_violation(CheckResult& r, double violation, const std::string& what) {
  r.worst = std::max(r.worst, violation);
  if (violation > 0.0) {
    ++r.failures;
    if (r.detail.empty()) r.detail = what;
  }
}

}  // namespace

Vector sample_direction(const Kernel& h, const Vector& x, Rng& rng) {
  const Vector u = gaussian(h.dimension(), rng);
  return u / LocalGeometry(h, x).norm(u);
}

Vector point_at_distance(const Kernel& h, const Vector& x, double r, Rng& rng) {
  const KernelParams p = h.params();
  const LocalGeometry geo(h, x);
  const Vector u = gaussian(h.dimension(), rng);
  const double d1 = gsc_distance(p.M, p.nu, u.norm(), geo.norm(u));
  return x + (r / d1) * u;
}

Vector sample_interior(const Kernel& h, Rng& rng, int steps, double radius) {
  Vector x = h.interior_point();
  for (int s = 0; s < steps; ++s) {
    const Vector y = point_at_distance(h, x, radius * uniform(rng, 0.0, 1.0), rng);
    if (h.in_domain(y)) x = y;
  }
  return x;
}

bool boundary_point(const Kernel& h, const Vector& x, Rng& rng, Vector* xb) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Vector w = gaussian(h.dimension(), rng);
    double hi = 1.0;
    int doublings = 0;
    while (h.in_domain(x + hi * w) && doublings < 60) {
      hi *= 2.0;
      ++doublings;
    }
    if (h.in_domain(x + hi * w)) continue;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (h.in_domain(x + mid * w) ? lo : hi) = mid;
    }
    *xb = x + lo * w;
    return true;
  }
  return false;
}

CheckResult check_finite_differences(const Kernel& h, Rng& rng, int draws, double rel_tol) {
  CheckResult r;
  r.name = "finite-differences";
  const int n = h.dimension();
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_interior(h, rng);
    const Vector g = h.gradient(x);
    const Matrix H = h.hessian(x);
    Vector g_fd(n);
    Matrix H_fd(n, n);
    for (int i = 0; i < n; ++i) {
      double s = 1e-6 * (1.0 + std::abs(x[i]));
      Vector e = Vector::Zero(n);
      e[i] = 1.0;
      while (!(h.in_domain(x + s * e) && h.in_domain(x - s * e))) s *= 0.5;
      g_fd[i] = (h.value(x + s * e) - h.value(x - s * e)) / (2.0 * s);
      H_fd.col(i) = (h.gradient(x + s * e) - h.gradient(x - s * e)) / (2.0 * s);
    }
    const double eg = (g - g_fd).cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff());
    const double eh = (H - H_fd).cwiseAbs().maxCoeff() / (1.0 + H.cwiseAbs().maxCoeff());
    std::ostringstream os;
    os << "draw " << k << ": gradient error " << eg << ", Hessian error " << eh;
    note_violation(r, std::max(eg, eh) / rel_tol - 1.0, os.str());
    ++r.draws;
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_bregman_sandwich(const Kernel& h, Rng& rng, int draws, double slack) {
  CheckResult r;
  r.name = "bregman-sandwich";
  const KernelParams p = h.params();
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_interior(h, rng);
    const double dist = 0.9 * uniform(rng, 0.0, 1.0);
    const Vector y = point_at_distance(h, x, dist, rng);
    if (!h.in_domain(y)) {
      note_violation(r, 1.0, "Dikin ellipsoid point left the domain");
      ++r.draws;
      continue;
    }
    const double D = bregman(h, x, y);
    const double n2 = std::pow(LocalGeometry(h, x).norm(y - x), 2);
    const double lo = omega_nu(p.nu, -dist) * n2;
    const double hi = omega_nu(p.nu, dist) * n2;
    const double scale = std::max({1.0, std::abs(h.value(x)), std::abs(h.value(y))});
    const double viol = std::max(lo - D, D - hi) / scale;
    std::ostringstream os;
    os << "draw " << k << ": d=" << dist << " lower=" << lo << " D=" << D << " upper=" << hi;
    note_violation(r, viol / slack - 1.0, os.str());
    ++r.draws;
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_line_inequality(const Kernel& h, Rng& rng, int draws) {
  CheckResult r;
  r.name = "gsc-line-check";
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_interior(h, rng);
    const Vector u = sample_direction(h, x, rng);
    const Vector v = sample_direction(h, x, rng);
    const LineCheckDetail d = gsc_line_check_detail(h, x, u, v);
    r.worst = std::max(r.worst, d.rhs > 0.0 ? d.lhs / d.rhs : 0.0);
    if (!d.passed) {
      ++r.failures;
      if (r.detail.empty()) {
        std::ostringstream os;
        os << "draw " << k << ": |D3 term| " << d.lhs << " > bound " << d.rhs;
        r.detail = os.str();
      }
    }
    ++r.draws;
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_barrier_blowup(const Kernel& h, Rng& rng, int draws) {
  CheckResult r;
  r.name = "barrier-blowup";
  const double min_step = 0.9 * std::log(2.0);
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_interior(h, rng);
    Vector xb;
    ++r.draws;
    if (!boundary_point(h, x, rng, &xb)) {
      note_violation(r, 1.0, "no boundary point found along 20 random rays");
      continue;
    }
    std::vector<double> vals;
    for (int j = 0; j <= 60; ++j) {
      const Vector xj = xb + std::ldexp(1.0, -j) * (x - xb);
      if (!h.in_domain(xj)) break;
      vals.push_back(h.value(xj));
    }
    const double peak = *std::max_element(vals.begin(), vals.end());
    bool ok = peak > 1e6;
    double worst_step = 0.0;
    if (!ok && vals.size() > 40) {
      worst_step = vals[21] - vals[20];
      for (int j = 21; j <= 40; ++j) worst_step = std::min(worst_step, vals[j] - vals[j - 1]);
      ok = worst_step >= min_step;
    }
    std::ostringstream os;
    os << "draw " << k << ": peak h=" << peak << " over " << vals.size()
       << " points, smallest increment on k in [20,40] " << worst_step;
    note_violation(r, ok ? 0.0 : 1.0, os.str());
  }
  r.passed = r.failures == 0;
  return r;
}

CheckResult check_theta(const Kernel& h, Rng& rng, int draws) {
  CheckResult r;
  r.name = "theta-bound";
  const KernelParams p = h.params();
  if (!p.theta) {
    r.detail = "not a self-concordant barrier; skipped";
    return r;
  }
  const double bound = std::sqrt(*p.theta);
  for (int k = 0; k < draws; ++k) {
    const Vector x = sample_interior(h, rng);
    const double gn = LocalGeometry(h, x).dual_norm(h.gradient(x));
    r.worst = std::max(r.worst, gn / bound);
    std::ostringstream os;
    os << "draw " << k << ": |grad h|* = " << gn << " > sqrt(theta) = " << bound;
    note_violation(r, gn - bound * (1.0 + 1e-9), os.str());
    ++r.draws;
  }
  r.passed = r.failures == 0;
  return r;
}

bool KernelCheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

KernelCheckReport run_kernel_checks(const Kernel& h, std::uint64_t seed) {
  Rng rng(seed);
  KernelCheckReport rep;
  rep.kernel = h.name();
  rep.checks.push_back(check_finite_differences(h, rng));
  rep.checks.push_back(check_bregman_sandwich(h, rng));
  rep.checks.push_back(check_line_inequality(h, rng));
  rep.checks.push_back(check_barrier_blowup(h, rng));
  rep.checks.push_back(check_theta(h, rng));
  return rep;
}

}  // namespace hba::tools
