#ifndef HBA_STEPSIZE_HPP_
#define HBA_STEPSIZE_HPP_

namespace hba {

// Inputs of the closed-form step rule and the decrease bound. M is the
// kernel's GSC scale; sigma_h and tau_h bound the Hessian spectrum and are
// only read by omega_tilde for nu != 3.
struct StepContext {
  double nu = 3.0;
  double L_plus_mu = 1.0;
  double delta = 0.0;
  double lambda = 0.0;
  double sigma_h = 1.0;
  double tau_h = 1.0;
  double M = 2.0;
};

// Branch selection shared by the step rule and its constants.
enum class OrderBranch { kBelowThree, kThree, kBetween, kFour };
OrderBranch order_branch(double nu);

// Worst-case optimal step; 1/(L+mu) when delta = 0. alpha * delta < 1 always.
double alpha_opt(const StepContext& ctx);
double alpha_opt(double nu, double L_plus_mu, double delta);

// eta(t) = t lambda^2 - (L+mu) omega_nu(t delta) t^2 lambda^2, t delta < 1.
double eta(const StepContext& ctx, double t);

// Guaranteed decrease as a function of t = lambda.
double omega_tilde(const StepContext& ctx, double t);

double b_constant(double nu);     // (2-nu)/(4-nu)
double gamma_tilde(double nu);    // limits 1 - ln 2 at nu = 3 and 1 at nu = 4
double gamma_hat(double nu);

}  // namespace hba

#endif  // HBA_STEPSIZE_HPP_
