#include "hba_tools/experiments.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hba/stepsize.hpp"
#include "hba/trace_io.hpp"

namespace hba::tools {

// ---- data ingestion -----------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"'");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\"'");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, int line, const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("cannot parse '" + s + "' in column '" + column + "' as a number", line);
  }
  return v;
}

bool parse_flag(const std::string& s, int line) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  if (u == "T" || u == "TRUE" || u == "1") return true;
  if (u == "F" || u == "FALSE" || u == "0") return false;
  throw ParseError("train flag '" + s + "' is not one of T/F/TRUE/FALSE/1/0", line);
}

}  // namespace

RegressionData load_regression_data(std::istream& in, const PrepOptions& opt) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  char delim = ',';
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    delim = line.find('\t') != std::string::npos ? '\t' : ',';
    header = split(line, delim);
    break;
  }
  if (header.empty()) throw ParseError("missing header row", lineno);

  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };

  std::vector<std::vector<double>> rows;
  std::vector<bool> train;
  std::vector<int> predictor_cols;
  int resp = -1, flag = -1;
  bool header_fixed = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line, delim);
    if (!header_fixed) {
      // Header written without a row-name column.
      if (fields.size() == header.size() + 1) header.insert(header.begin(), "");
      resp = find(opt.response);
      flag = find(opt.train_column);
      if (resp < 0) throw ParseError("response column '" + opt.response + "' not found", 1);
      if (flag < 0) throw ParseError("train column '" + opt.train_column + "' not found", 1);
      for (int j = 0; j < static_cast<int>(header.size()); ++j) {
        if (j != resp && j != flag && !header[j].empty()) predictor_cols.push_back(j);
      }
      if (predictor_cols.empty()) throw ParseError("no predictor columns", 1);
      header_fixed = true;
    }
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "expected " << header.size() << " fields, found " << fields.size();
      throw ParseError(os.str(), lineno);
    }
    std::vector<double> row;
    for (int j : predictor_cols) row.push_back(parse_double(fields[j], lineno, header[j]));
    row.push_back(parse_double(fields[resp], lineno, header[resp]));
    rows.push_back(std::move(row));
    train.push_back(parse_flag(fields[flag], lineno));
  }
  if (rows.empty()) throw ParseError("no data rows", lineno);

  const int d = static_cast<int>(predictor_cols.size());
  const int ntrain = static_cast<int>(std::count(train.begin(), train.end(), true));
  const int ntest = static_cast<int>(rows.size()) - ntrain;
  if (ntrain < 2) throw ParseError("fewer than two training rows", lineno);

  RegressionData out;
  for (int j : predictor_cols) out.predictors.push_back(header[j]);
  out.W_train.resize(ntrain, d);
  out.W_test.resize(ntest, d);
  out.y_train.resize(ntrain);
  out.y_test.resize(ntest);
  int itr = 0, ite = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int j = 0; j < d; ++j) {
      (train[r] ? out.W_train(itr, j) : out.W_test(ite, j)) = rows[r][j];
    }
    (train[r] ? out.y_train[itr++] : out.y_test[ite++]) = rows[r][d];
  }

  if (opt.standardize) {
    for (int j = 0; j < d; ++j) {
      const double mean = out.W_train.col(j).mean();
      const double var =
          (out.W_train.col(j).array() - mean).square().sum() / static_cast<double>(ntrain - 1);
      const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
      out.W_train.col(j) = (out.W_train.col(j).array() - mean) / sd;
      out.W_test.col(j) = (out.W_test.col(j).array() - mean) / sd;
    }
  }
  if (opt.center_response) {
    out.y_offset = out.y_train.mean();
    out.y_train.array() -= out.y_offset;
    out.y_test.array() -= out.y_offset;
  }
  return out;
}

RegressionData load_regression_data_file(const std::string& path, const PrepOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return load_regression_data(in, opt);
}

// ---- SCAD -----------------------------------------------------------------

ScadRun run_scad(const RegressionData& data, const ScadParams& params, const SolverConfig& cfg) {
  const ScadModel model = build_scad_problem(data.W_train, data.y_train, params, cfg.mu);
  SolverConfig c = cfg;
  c.adaptive = false;
  c.L = *model.problem.smoothness;
  ScadRun run;
  run.rho = model.rho;
  run.result = hba_solve(model.problem, c);
  run.beta = model.beta(run.result.x_final);
  run.train_objective = model.regression_objective(run.result.x_final);
  run.fitted_test = data.W_test * run.beta;
  const Eigen::Index nt = data.y_test.size();
  if (nt > 0) {
    run.test_error = (data.y_test - run.fitted_test).squaredNorm() / static_cast<double>(nt);
    run.baseline_error = data.y_test.squaredNorm() / static_cast<double>(nt);
  }
  return run;
}

// ---- L^p recovery -------------------------------------------------------

Matrix make_sensing_matrix(int m, int n, std::mt19937_64& rng) {
  if (m <= 0 || m >= n) throw ConstructionError("sensing matrix needs 0 < m < n");
  std::normal_distribution<double> g;
  Matrix G(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) G(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, m);
  return Q.transpose();
}

bool recovery_success(const Vector& x, const Vector& x_true, double tol, double zero_threshold,
                      double* linf) {
  Vector t = x;
  for (int i = 0; i < t.size(); ++i) {
    if (std::abs(t[i]) < zero_threshold) t[i] = 0.0;
  }
  const double err = (t - x_true).cwiseAbs().maxCoeff();
  if (linf) *linf = err;
  return err < tol;
}

SolverConfig make_lp_config(double mu) {
  SolverConfig cfg;
  cfg.mu = mu;
  cfg.adaptive = true;
  cfg.L0 = 1.0;
  cfg.epsilon = 1e-6;
  cfg.max_iters = 3000;
  cfg.f_lower_bound = 0.0;
  cfg.stopping = StoppingRule::kLambdaThreshold;
  return cfg;
}

LpTrial run_lp_trial(const LpRecoverySpec& spec, int sparsity, int trial) {
  if (sparsity < 0 || sparsity > spec.n) throw ConstructionError("sparsity out of range");
  LpTrial out;
  out.sparsity = sparsity;
  out.trial = trial;
  for (int retry = 0; retry <= 10; ++retry) {
    std::seed_seq seq{static_cast<std::uint64_t>(spec.seed), static_cast<std::uint64_t>(sparsity),
                      static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(retry)};
    std::mt19937_64 rng(seq);
    const Matrix A = make_sensing_matrix(spec.m, spec.n, rng);
    std::vector<int> idx(spec.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    Vector x_true = Vector::Zero(spec.n);
    for (int i = 0; i < sparsity; ++i) x_true[idx[i]] = 1.0;

    LpParams lp;
    lp.p = spec.p;
    lp.A = A;
    lp.b = A * x_true;
    Problem prob;
    try {
      prob = build_lp_problem(lp);
    } catch (const InfeasibleError&) {
      continue;
    } catch (const RankError&) {
      continue;
    }
    const SolveResult res = solve(prob, spec.cfg);
    out.retries = retry;
    out.x_true = x_true;
    out.x_solved = res.x_final;
    out.iterations = res.iterations;
    out.evals = res.function_evals;
    out.termination = res.termination;
    out.success = res.termination != Termination::kNumericalFailure &&
                  recovery_success(res.x_final, x_true, spec.success_tol, spec.zero_threshold,
                                   &out.linf_error);
    return out;
  }
  throw ConstructionError("sensing matrix construction failed after 10 retries");
}

RecoveryTable run_lp_recovery(const LpRecoverySpec& spec) {
  if (spec.trials < 1) throw ConstructionError("trials must be >= 1");
  RecoveryTable table;
  for (int s : spec.sparsities) {
    RecoveryRow row;
    row.sparsity = s;
    for (int t = 0; t < spec.trials; ++t) {
      LpTrial tr = run_lp_trial(spec, s, t);
      ++row.trials;
      row.successes += tr.success ? 1 : 0;
      table.trials.push_back(std::move(tr));
    }
    table.rows.push_back(row);
  }
  std::stable_sort(table.trials.begin(), table.trials.end(),
                   [](const LpTrial& a, const LpTrial& b) {
                     return std::tie(a.sparsity, a.trial) < std::tie(b.sparsity, b.trial);
                   });
  return table;
}

// ---- step curves ----------------------------------------------------------

void write_step_curve(std::ostream& os, double L_plus_mu, const std::vector<double>& nus,
                      const std::vector<double>& t_grid) {
  os << "t";
  for (double nu : nus) {
    std::ostringstream label;
    label << nu;
    os << ",nu=" << label.str();
  }
  os << '\n';
  for (double t : t_grid) {
    os << format_number(t);
    for (double nu : nus) os << ',' << format_number(alpha_opt(nu, L_plus_mu, t));
    os << '\n';
  }
}

}  // namespace hba::tools
