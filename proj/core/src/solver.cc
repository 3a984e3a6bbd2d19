#include "hba/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hba/geometry.hpp"
#include "hba/stepsize.hpp"

namespace hba {

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::kEpsilonStationary: return "epsilon-stationary";
    case Termination::kNearOptimal: return "near-optimal";
    case Termination::kIterationCap: return "iteration-cap";
    case Termination::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConstructionError(std::string("solver config: ") + what + " must be positive");
    }
  };
  positive(mu, "mu");
  positive(epsilon, "epsilon");
  positive(feas_tol, "feas_tol");
  positive(grad_tol, "grad_tol");
  if (max_iters <= 0) throw ConstructionError("solver config: max_iters must be positive");
  if (adaptive) {
    positive(L0, "L0");
    positive(adaptive_floor, "adaptive_floor");
  } else if (!(L >= 0.0) || !std::isfinite(L)) {
    throw ConstructionError("solver config: L must be >= 0");
  }
  if (!(analytic_center_c >= 0.0)) {
    throw ConstructionError("solver config: analytic_center_c must be >= 0");
  }
}

bool is_four_epsilon_preset(const SolverConfig& cfg) {
  return std::abs(cfg.mu - 4.0 * cfg.epsilon) <= 1e-12 * cfg.mu;
}

long k2_bound(const SolverConfig& cfg, double nu, double f0) {
  const double eps = cfg.epsilon;
  const double num = (4.0 * eps * (cfg.analytic_center_c - 0.25) + f0 - cfg.f_lower_bound) *
                     (cfg.L + 4.0 * eps);
  const double k2 = std::ceil(num / (gamma_hat(nu) * eps * eps));
  if (!(k2 >= 0.0)) return 0;
  if (k2 > static_cast<double>(std::numeric_limits<long>::max() / 2)) {
    return std::numeric_limits<long>::max() / 2;
  }
  return static_cast<long>(k2);
}

namespace {

bool finite_vec(const Vector& v) { return v.allFinite(); }

Vector starting_point(const Problem& problem) {
  if (problem.x0) return *problem.x0;
  return problem.kernel->interior_point();
}

SolveResult run(const Problem& problem, const SolverConfig& cfg, bool adaptive) {
  validate(problem);
  cfg.validate();
  const Kernel& h = *problem.kernel;
  const Objective& f = *problem.objective;
  const ConstraintSet& cons = problem.cons;
  const KernelParams kp = h.params();
  const double mu = cfg.mu;
  const double eps = cfg.epsilon;

  SolveResult res;
  res.kernel_params = kp;
  Vector x = starting_point(problem);
  if (!h.in_domain(x)) throw DomainError("solver: starting point is not interior");
  const double feas_tol = cfg.feas_tol * (1.0 + cons.b().norm());
  if (cons.residual(x) > feas_tol) throw DomainError("solver: starting point is infeasible");

  const bool potential_rule = cfg.stopping == StoppingRule::kPotentialDecrease;
  long cap = cfg.max_iters;
  bool k2_cap = false;

  Estimates est{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  double L_k = adaptive ? cfg.L0 : cfg.L;
  const double L_floor = adaptive ? cfg.L0 * cfg.adaptive_floor : 0.0;

  auto fail = [&](const std::string& why) {
    res.termination = Termination::kNumericalFailure;
    res.message = why;
  };

  try {
    for (long k = 0;; ++k) {
      const double fx = f.value(x);
      const Vector gf = f.gradient(x);
      if (!std::isfinite(fx) || !finite_vec(gf)) {
        fail("objective returned a non-finite value or gradient");
        break;
      }
      const double hx = h.value(x);
      const Vector gh = h.gradient(x);
      const double Fx = fx + mu * hx;
      const Vector g = gf + mu * gh;

      const LocalGeometry geo(h, x);
      const SearchDirection dir = solve_direction(geo, cons, g, kp.M, kp.nu);
      est.sigma_h = std::min(est.sigma_h, geo.min_eigenvalue());
      est.tau_h = std::max(est.tau_h, geo.max_eigenvalue());
      est.M_mu = std::max(est.M_mu, geo.dual_norm(gh));

      if (k == 0 && potential_rule && is_four_epsilon_preset(cfg) && !adaptive) {
        res.K2 = k2_bound(cfg, kp.nu, fx);
        if (*res.K2 <= cap) {
          cap = *res.K2;
          k2_cap = true;
        }
      }

      IterateRecord row;
      row.k = static_cast<int>(k);
      row.F_mu = Fx;
      row.f = fx;
      row.h = hx;
      row.lambda = dir.lambda;
      row.beta = dir.beta;
      row.delta = dir.delta;
      row.chi = criticality(geo, gf, dir.y, cons);
      row.next_F_mu = Fx;
      res.x_final = x;
      res.y_final = dir.y;
      if (cfg.keep_iterates) res.iterates.push_back(x);

      if (cfg.stopping == StoppingRule::kLambdaThreshold && dir.lambda <= eps) {
        res.termination = Termination::kEpsilonStationary;
        res.trace.push_back(row);
        break;
      }
      if (k >= cap) {
        res.termination = k2_cap ? Termination::kNearOptimal : Termination::kIterationCap;
        res.trace.push_back(row);
        break;
      }

      // Step selection. Each trial evaluates f once at z.
      Vector z;
      double fz = 0.0, hz = 0.0, alpha = 0.0, L_step = L_k;
      int evals = 0;
      bool numerically_failed = false;
      auto trial = [&](double L_trial) -> bool {
        alpha = alpha_opt(kp.nu, L_trial + mu, dir.delta);
        z = x + alpha * dir.v;
        for (int halvings = 0; !h.in_domain(z); ++halvings) {
          if (halvings == 5) {
            std::ostringstream os;
            os << "trial point left the domain at k=" << k << " (alpha*delta=" << alpha * dir.delta
               << ")";
            fail(os.str());
            numerically_failed = true;
            return false;
          }
          alpha *= 0.5;
          z = x + alpha * dir.v;
        }
        fz = f.value(z);
        ++evals;
        if (!std::isfinite(fz)) {
          fail("objective returned a non-finite value at a trial point");
          numerically_failed = true;
          return false;
        }
        hz = h.value(z);
        return true;
      };

      if (!adaptive) {
        if (!trial(L_k)) break;
      } else {
        bool accepted = false;
        for (int i = 0; i <= 80; ++i) {
          L_step = std::max(L_floor, std::ldexp(L_k, i - 1));
          if (!trial(L_step)) break;
          const Vector dz = z - x;
          const double model = fx + gf.dot(dz);
          const double u = 4.0 * std::numeric_limits<double>::epsilon();
          // Near stationarity h(z) - h(x) - <grad h, dz> cancels to noise;
          // the sandwich lower bound omega(-d) |dz|_x^2 is a certified floor.
          const double breg_lo = omega_nu(kp.nu, -alpha * dir.delta) * alpha * alpha *
                                 dir.lambda * dir.lambda;
          const double breg_noise = u * (std::abs(hz) + std::abs(hx) + std::abs(gh.dot(dz)));
          const double breg = std::max(hz - hx - gh.dot(dz) - breg_noise, breg_lo);
          // f itself may be a sum of cancelling terms, so its evaluation
          // error gets a wider allowance than the inner product.
          const double f_noise = 8.0 * u * (std::abs(fz) + std::abs(fx));
          const double roundoff = f_noise + u * std::abs(gf.dot(dz));
          if (fz <= model + L_step * breg + roundoff) {
            accepted = true;
            break;
          }
        }
        if (numerically_failed) break;
        if (!accepted) {
          std::ostringstream os;
          os << "line search exceeded 80 doublings at k=" << k << " (L=" << L_step << ")";
          throw SmoothnessViolation(os.str());
        }
        L_k = L_step;
      }
      if (numerically_failed) break;

      const double Fz = fz + mu * hz;
      StepContext ctx;
      ctx.nu = kp.nu;
      ctx.L_plus_mu = L_step + mu;
      ctx.delta = dir.delta;
      ctx.lambda = dir.lambda;
      row.alpha = alpha;
      row.L_k = L_step;
      row.Delta = eta(ctx, alpha);
      row.evals = evals;
      row.next_F_mu = Fz;
      res.function_evals += evals;

      if (potential_rule && Fz - Fx >= -gamma_hat(kp.nu) * eps * eps / (L_step + mu)) {
        // Report x^K; the step to z is not taken.
        row.alpha = 0.0;
        row.Delta = 0.0;
        row.next_F_mu = Fx;
        res.termination = Termination::kEpsilonStationary;
        res.trace.push_back(row);
        break;
      }

      res.trace.push_back(row);
      x = z;
      ++res.iterations;
    }
  } catch (const NumericalError& e) {
    fail(e.what());
  } catch (const RankError& e) {
    // The Schur complement loses rank when iterates approach the boundary.
    fail(e.what());
  }
  if (cfg.sigma_h_override) est.sigma_h = *cfg.sigma_h_override;
  if (cfg.tau_h_override) est.tau_h = *cfg.tau_h_override;
  res.estimates = est;
  return res;
}

class ZeroObjective final : public Objective {
 public:
  explicit ZeroObjective(int n) : n_(n) {}
  double value(const Vector&) const override { return 0.0; }
  Vector gradient(const Vector&) const override { return Vector::Zero(n_); }

 private:
  int n_;
};

}  // namespace

SolveResult hba_solve(const Problem& problem, const SolverConfig& cfg) {
  return run(problem, cfg, false);
}

SolveResult ahba_solve(const Problem& problem, const SolverConfig& cfg) {
  return run(problem, cfg, true);
}

SolveResult solve(const Problem& problem, const SolverConfig& cfg) {
  return run(problem, cfg, cfg.adaptive);
}

AnalyticCenter analytic_center(const KernelHandle& h, const ConstraintSet& cons,
                               const Vector& x_init, double tol, int max_iters) {
  Problem p;
  p.n = h->dimension();
  p.objective = std::make_shared<ZeroObjective>(p.n);
  p.cons = cons;
  p.kernel = h;
  p.smoothness = 0.0;
  p.f_lower_bound = 0.0;
  p.x0 = x_init;

  SolverConfig cfg;
  cfg.mu = 1.0;
  cfg.L = 0.0;
  cfg.epsilon = tol;
  cfg.max_iters = max_iters;
  cfg.stopping = StoppingRule::kLambdaThreshold;
  const SolveResult r = hba_solve(p, cfg);
  if (r.termination == Termination::kNumericalFailure) {
    throw NumericalError("analytic center: " + r.message);
  }
  if (r.termination != Termination::kEpsilonStationary) {
    std::ostringstream os;
    os << "analytic center: no convergence after " << max_iters
       << " iterations (lambda=" << r.trace.back().lambda
       << "); the kernel may be unbounded below on the feasible set";
    throw NumericalError(os.str());
  }

  AnalyticCenter out;
  out.x = r.x_final;
  out.lambda = r.trace.back().lambda;
  out.iterations = r.iterations;
  const KernelParams kp = h->params();
  const double t = 0.5 * kp.M * out.lambda;
  if (order_branch(kp.nu) == OrderBranch::kThree && t < 1.0) {
    // Self-concordant bound h(x0) - min h <= (2/M)^2 (-t - ln(1 - t)).
    out.c = (2.0 / kp.M) * (2.0 / kp.M) * (-t - std::log1p(-t));
  } else {
    // First-order bound lambda * |x - x0|_{x0}, with |x0|_{x0} + 1 as the diameter proxy.
    const LocalGeometry geo(*h, out.x);
    out.c = out.lambda * (geo.norm(out.x) + 1.0);
  }
  return out;
}

double trace_omega_tilde(const SolveResult& result, const SolverConfig& cfg,
                         const IterateRecord& row) {
  StepContext ctx;
  ctx.nu = result.kernel_params.nu;
  ctx.M = result.kernel_params.M;
  ctx.L_plus_mu = (cfg.adaptive ? row.L_k : cfg.L) + cfg.mu;
  ctx.delta = row.delta;
  ctx.lambda = row.lambda;
  ctx.sigma_h = result.estimates.sigma_h;
  ctx.tau_h = result.estimates.tau_h;
  return omega_tilde(ctx, row.lambda);
}

StoppingReport stopping_times(const SolveResult& result, const SolverConfig& cfg) {
  StoppingReport rep;
  if (result.trace.empty()) return rep;
  const double eps = cfg.epsilon;
  const double nu = result.kernel_params.nu;

  rep.L_used = cfg.L;
  if (cfg.adaptive) {
    rep.L_used = 0.0;
    for (const auto& r : result.trace) rep.L_used = std::max(rep.L_used, r.L_k);
  }
  StepContext ctx;
  ctx.nu = nu;
  ctx.M = result.kernel_params.M;
  ctx.L_plus_mu = rep.L_used + cfg.mu;
  ctx.sigma_h = result.estimates.sigma_h;
  ctx.tau_h = result.estimates.tau_h;
  const double threshold = gamma_hat(nu) * eps * eps / ctx.L_plus_mu;

  for (const auto& r : result.trace) {
    if (!rep.N_empirical && r.lambda < eps) rep.N_empirical = r.k;
    if (!rep.K1_empirical && omega_tilde(ctx, r.lambda) < threshold) rep.K1_empirical = r.k;
  }
  const double f0 = result.trace.front().f;
  const double budget = f0 - cfg.f_lower_bound + cfg.mu * cfg.analytic_center_c;
  rep.N_bound = std::ceil(budget / omega_tilde(ctx, eps));

  if (is_four_epsilon_preset(cfg) && !cfg.adaptive) {
    rep.K2 = result.K2 ? *result.K2 : k2_bound(cfg, nu, f0);
    rep.reached_K2 = result.termination == Termination::kNearOptimal;
    if (rep.reached_K2) {
      rep.eps_global = true;
      for (const auto& r : result.trace) {
        if (r.alpha > 0.0 && r.next_F_mu - r.F_mu >= -threshold) rep.eps_global = false;
      }
    }
  }
  rep.sanity = result.trace.back().f - cfg.f_lower_bound <= budget;
  return rep;
}

}  // namespace hba
