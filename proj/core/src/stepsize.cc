#include "hba/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hba/geometry.hpp"
#include "hba/types.hpp"

namespace hba {

namespace {
constexpr double kBranchTol = 1e-6;
}

OrderBranch order_branch(double nu) {
  if (!(nu > 2.0 && nu <= 4.0)) throw DomainError("GSC order nu must lie in (2, 4]");
  if (std::abs(nu - 3.0) < kBranchTol) return OrderBranch::kThree;
  if (std::abs(nu - 4.0) < kBranchTol) return OrderBranch::kFour;
  return nu < 3.0 ? OrderBranch::kBelowThree : OrderBranch::kBetween;
}

namespace {

double alpha_formula(OrderBranch br, double nu, double L_plus_mu, double delta) {
  switch (br) {
    case OrderBranch::kThree:
      return 1.0 / (delta + L_plus_mu);
    case OrderBranch::kFour:
      return -std::expm1(-delta / L_plus_mu) / delta;
    default: {
      const double q = delta * (4.0 - nu) / (L_plus_mu * (nu - 2.0));
      const double p = (nu - 2.0) / (4.0 - nu);
      return -std::expm1(-p * std::log1p(q)) / delta;
    }
  }
}

}  // namespace

double alpha_opt(double nu, double L_plus_mu, double delta) {
  if (!(L_plus_mu > 0.0)) throw DomainError("alpha_opt: L + mu must be positive");
  const OrderBranch br = order_branch(nu);
  if (delta <= 0.0) return 1.0 / L_plus_mu;
  double a = alpha_formula(br, nu, L_plus_mu, delta);
  // For delta >> L + mu the exact value is 1/delta minus a term below the
  // rounding unit; step back until alpha * delta < 1 holds in floating point.
  while (a * delta >= 1.0) a = std::nextafter(a, 0.0);
  return a;
}

double alpha_opt(const StepContext& ctx) { return alpha_opt(ctx.nu, ctx.L_plus_mu, ctx.delta); }

double eta(const StepContext& ctx, double t) {
  if (t * ctx.delta >= 1.0) {
    std::ostringstream os;
    os << "eta: t * delta = " << t * ctx.delta << " must be < 1";
    throw DomainError(os.str());
  }
  const double l2 = ctx.lambda * ctx.lambda;
  return t * l2 - ctx.L_plus_mu * omega_nu(ctx.nu, t * ctx.delta) * t * t * l2;
}

double b_constant(double nu) { return (2.0 - nu) / (4.0 - nu); }

double gamma_tilde(double nu) {
  switch (order_branch(nu)) {
    case OrderBranch::kThree:
      return 1.0 - std::log(2.0);
    case OrderBranch::kFour:
      return 1.0;
    default: {
      const double e = 2.0 * (3.0 - nu) / (4.0 - nu);
      return 1.0 - std::expm1(e * std::log(2.0)) / e;
    }
  }
}

double gamma_hat(double nu) {
  switch (order_branch(nu)) {
    case OrderBranch::kThree:
      return 1.0;
    case OrderBranch::kFour:
      return std::exp(-1.0);
    default:
      return gamma_tilde(nu) * (4.0 - nu) / (nu - 2.0);
  }
}

double omega_tilde(const StepContext& ctx, double t) {
  if (t <= 0.0) return 0.0;
  const double nu = ctx.nu;
  const double M = ctx.M;
  const double Lm = ctx.L_plus_mu;
  switch (order_branch(nu)) {
    case OrderBranch::kThree:
      return 2.0 * (1.0 - std::log(2.0)) * t / (M * Lm) * std::min(Lm, 0.5 * M * t);
    case OrderBranch::kFour:
      return t * std::exp(-1.0) * std::min(1.0 / (std::sqrt(ctx.tau_h) * M), t / Lm);
    case OrderBranch::kBelowThree: {
      const double curv = 2.0 * std::pow(ctx.sigma_h, 0.5 * (3.0 - nu)) / (M * (nu - 2.0));
      return gamma_tilde(nu) * t * std::min(curv, t / (-b_constant(nu) * Lm));
    }
    case OrderBranch::kBetween: {
      // delta <= M (nu-2)/2 * lambda * tau_h^((nu-3)/2) since beta >= lambda / sqrt(tau_h).
      const double curv = 2.0 / (M * (nu - 2.0)) * std::pow(ctx.tau_h, -0.5 * (nu - 3.0));
      return gamma_tilde(nu) * t * std::min(curv, t / (-b_constant(nu) * Lm));
    }
  }
  return 0.0;
}

}  // namespace hba
