#ifndef HBA_TOOLS_EXPERIMENTS_HPP_
#define HBA_TOOLS_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hba/problem.hpp"
#include "hba/solver.hpp"

namespace hba::tools {

// ---- data ingestion -----------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Regression data split by a train indicator column.
struct RegressionData {
  std::vector<std::string> predictors;
  Matrix W_train, W_test;
  Vector y_train, y_test;
  double y_offset = 0.0;  // training mean removed from y, 0 if not centered
};

struct PrepOptions {
  std::string response = "lpsa";
  std::string train_column = "train";
  bool standardize = true;       // on the training split, sample standard deviation
  bool center_response = true;   // subtract the training mean of y
};

// Tab- or comma-separated text with a header row. Columns without a name
// (row indices) are dropped; every remaining column except the response and
// the train flag is a predictor. Train flags: T/F, TRUE/FALSE, 1/0.
RegressionData load_regression_data(std::istream& in, const PrepOptions& opt = {});
RegressionData load_regression_data_file(const std::string& path, const PrepOptions& opt = {});

// ---- SCAD experiment ----------------------------------------------------

struct ScadRun {
  Vector beta;
  Vector fitted_test;
  double test_error = 0.0;      // mean squared error on the test split
  double baseline_error = 0.0;  // same with beta = 0
  double train_objective = 0.0;
  SolveResult result;
  double rho = 0.0;
};

ScadRun run_scad(const RegressionData& data, const ScadParams& params, const SolverConfig& cfg);

// ---- L^p recovery -------------------------------------------------------

// m x n Gaussian matrix with orthonormal rows.
Matrix make_sensing_matrix(int m, int n, std::mt19937_64& rng);

struct LpTrial {
  int sparsity = 0;
  int trial = 0;
  bool success = false;
  double linf_error = 0.0;
  int iterations = 0;
  long evals = 0;
  int retries = 0;
  Termination termination = Termination::kIterationCap;
  Vector x_true, x_solved;
};

struct LpRecoverySpec {
  int n = 120;
  int m = 30;
  double p = 0.5;
  std::vector<int> sparsities = {2, 5, 8, 10, 12, 15};
  int trials = 50;
  std::uint64_t seed = 1;
  SolverConfig cfg;  // adaptive by default in make_lp_config
  double success_tol = 0.1;
  double zero_threshold = 1e-3;
};

SolverConfig make_lp_config(double mu);

LpTrial run_lp_trial(const LpRecoverySpec& spec, int sparsity, int trial);

// Success: |threshold(x) - x_true|_inf < tol, entries below zero_threshold set to 0.
bool recovery_success(const Vector& x, const Vector& x_true, double tol, double zero_threshold,
                      double* linf = nullptr);

struct RecoveryRow {
  int sparsity = 0;
  int trials = 0;
  int successes = 0;
  double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct RecoveryTable {
  std::vector<RecoveryRow> rows;
  std::vector<LpTrial> trials;  // sorted by (sparsity, trial)
};

RecoveryTable run_lp_recovery(const LpRecoverySpec& spec);

// ---- step-size curves ---------------------------------------------------

// Wide CSV: t, then alpha for each nu.
void write_step_curve(std::ostream& os, double L_plus_mu, const std::vector<double>& nus,
                      const std::vector<double>& t_grid);

}  // namespace hba::tools

#endif  // HBA_TOOLS_EXPERIMENTS_HPP_
