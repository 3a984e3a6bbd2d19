#ifndef HBA_SOLVER_HPP_
#define HBA_SOLVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "hba/problem.hpp"

namespace hba {

enum class StoppingRule {
  kLambdaThreshold,    // stop once lambda_k <= epsilon
  kPotentialDecrease,  // stop once F(x^{k+1}) - F(x^k) >= -gamma_hat eps^2 / (L + mu)
  kIterationCap,       // run exactly max_iters steps
};

enum class Termination { kEpsilonStationary, kNearOptimal, kIterationCap, kNumericalFailure };

std::string termination_name(Termination t);

struct SolverConfig {
  double mu = 1e-3;
  bool adaptive = false;
  double L = 1.0;   // fixed mode
  double L0 = 1.0;  // adaptive mode, initial estimate
  double epsilon = 1e-6;
  int max_iters = 10000;
  double f_lower_bound = 0.0;
  double analytic_center_c = 0.0;
  StoppingRule stopping = StoppingRule::kLambdaThreshold;
  double feas_tol = 1e-9;
  double grad_tol = 1e-10;  // analytic-center tolerance
  // Replace the trajectory eigenvalue extremes in the decrease bound.
  std::optional<double> sigma_h_override;
  std::optional<double> tau_h_override;
  // Adaptive estimates never drop below L0 * adaptive_floor.
  double adaptive_floor = 0x1p-60;
  bool keep_iterates = false;  // store every x^k in SolveResult::iterates

  void validate() const;
};

// One row per visited iterate. Step fields (alpha, Delta, L_k) describe the
// move from x^k to x^{k+1} and are zero on the terminal row.
struct IterateRecord {
  int k = 0;
  double F_mu = 0;
  double f = 0;
  double h = 0;
  double lambda = 0;
  double beta = 0;
  double delta = 0;
  double alpha = 0;
  double L_k = 0;
  double chi = 0;
  double Delta = 0;
  int evals = 0;
  double next_F_mu = 0;  // F at x^{k+1}; equals F_mu on the terminal row
};

using IterateTrace = std::vector<IterateRecord>;

struct Estimates {
  double sigma_h = 0;  // min eigenvalue of H over visited iterates
  double tau_h = 0;    // max eigenvalue of H over visited iterates
  double M_mu = 0;     // max |grad h(x^k)|*_{x^k}
};

struct SolveResult {
  Vector x_final;
  Vector y_final;
  Termination termination = Termination::kIterationCap;
  std::string message;
  IterateTrace trace;
  Estimates estimates;
  KernelParams kernel_params;
  int iterations = 0;       // accepted steps
  long function_evals = 0;  // objective evaluations at trial points
  std::optional<long> K2;   // iteration cap from the mu = 4 eps preset
  std::vector<Vector> iterates;  // x^0, x^1, ... when keep_iterates is set
};

struct AnalyticCenter {
  Vector x;
  double c = 0;  // h(x) >= h(x0) - c estimate over the feasible set
  double lambda = 0;
  int iterations = 0;
};

// Damped Newton on h over {Ax = b}; NumericalError if h is unbounded below.
AnalyticCenter analytic_center(const KernelHandle& h, const ConstraintSet& cons,
                               const Vector& x_init, double tol, int max_iters = 500);

SolveResult hba_solve(const Problem& problem, const SolverConfig& cfg);
SolveResult ahba_solve(const Problem& problem, const SolverConfig& cfg);
// Dispatches on cfg.adaptive.
SolveResult solve(const Problem& problem, const SolverConfig& cfg);

// Whether (mu, epsilon) form the mu = 4 eps preset.
bool is_four_epsilon_preset(const SolverConfig& cfg);
long k2_bound(const SolverConfig& cfg, double nu, double f0);

struct StoppingReport {
  std::optional<int> N_empirical;   // first k with lambda_k < eps
  std::optional<int> K1_empirical;  // first k with omega_tilde(lambda_k) < gamma_hat eps^2 / (L+mu)
  double N_bound = 0;               // ceil((f(x0) - f_lb + mu c) / omega_tilde(eps))
  std::optional<long> K2;           // only for the mu = 4 eps preset
  bool reached_K2 = false;
  bool eps_global = false;          // K2 reached with the decrease above threshold throughout
  bool sanity = true;               // f(x^K) - f_lb <= f(x0) - f_lb + mu c
  double L_used = 0;
};

StoppingReport stopping_times(const SolveResult& result, const SolverConfig& cfg);

// omega_tilde context for iterate k of a trace.
double trace_omega_tilde(const SolveResult& result, const SolverConfig& cfg,
                         const IterateRecord& row);

}  // namespace hba

#endif  // HBA_SOLVER_HPP_
