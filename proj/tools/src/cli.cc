#include "hba_tools/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hba/trace_io.hpp"
#include "hba_tools/experiments.hpp"
#include "hba_tools/kernel_checks.hpp"
#include "hba_tools/problem_io.hpp"

namespace hba::tools {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  double mu = 0.0;
  double epsilon = 0.0;
  int max_iters = 0;
  bool adaptive = false;
  std::optional<double> fixed_L;
  double L0 = 1.0;
};

SolverFlags defaults(double mu, double epsilon, int max_iters) {
  SolverFlags f;
  f.mu = mu;
  f.epsilon = epsilon;
  f.max_iters = max_iters;
  return f;
}

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_L) {
  cmd->add_option("--mu", f.mu, "barrier weight mu > 0")->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "stationarity tolerance")->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters, "iteration cap")->capture_default_str();
  if (with_L) {
    auto* a = cmd->add_flag("--adaptive", f.adaptive, "adaptive smoothness estimate (AHBA)");
    auto* l = cmd->add_option("--fixed-L", f.fixed_L, "fixed smoothness constant L (HBA)");
    a->excludes(l);
    l->excludes(a);
    cmd->add_option("--L0", f.L0, "initial estimate for --adaptive")->capture_default_str();
  }
}

void apply(const SolverFlags& f, SolverConfig& cfg) {
  cfg.mu = f.mu;
  cfg.epsilon = f.epsilon;
  cfg.max_iters = f.max_iters;
  cfg.L0 = f.L0;
  if (f.adaptive) cfg.adaptive = true;
  if (f.fixed_L) {
    cfg.adaptive = false;
    cfg.L = *f.fixed_L;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void close_out(std::ofstream& os, const fs::path& path) {
  os.close();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    try {
      out.push_back(std::stod(item, &pos));
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size()) throw UsageError("not a number: '" + item + "'");
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

// ---- solve ----------------------------------------------------------------

int cmd_solve(const std::string& problem_path, const std::string& out_dir, const SolverFlags& f,
              std::ostream& out) {
  std::ifstream in(problem_path);
  if (!in) throw IoError("cannot open " + problem_path);
  const Problem prob = read_problem_json(in);

  SolverConfig cfg;
  apply(f, cfg);
  cfg.f_lower_bound = std::isfinite(prob.f_lower_bound) ? prob.f_lower_bound : 0.0;
  if (!f.adaptive && !f.fixed_L) {
    if (prob.smoothness) {
      cfg.L = *prob.smoothness;
    } else {
      cfg.adaptive = true;
    }
  }
  const SolveResult res = solve(prob, cfg);

  ensure_dir(out_dir);
  const fs::path trace_path = fs::path(out_dir) / "trace.csv";
  auto ts = open_out(trace_path);
  write_trace_csv(ts, res.trace);
  close_out(ts, trace_path);
  const fs::path result_path = fs::path(out_dir) / "result.json";
  auto rs = open_out(result_path);
  write_result_json(rs, res);
  close_out(rs, result_path);

  out << "termination: " << termination_name(res.termination) << '\n'
      << "iterations: " << res.iterations << '\n'
      << "function evaluations: " << res.function_evals << '\n';
  if (!res.trace.empty()) {
    out << "F_mu: " << format_number(res.trace.back().F_mu) << '\n'
        << "lambda: " << format_number(res.trace.back().lambda) << '\n';
  }
  return res.termination == Termination::kNumericalFailure ? kExitCheckFailed : kExitOk;
}

// ---- scad -----------------------------------------------------------------

int cmd_scad(const std::string& data_path, const ScadParams& params, const SolverFlags& f,
             std::optional<double> max_test_error, bool raw, const std::string& out_dir,
             std::ostream& out) {
  PrepOptions prep;
  prep.standardize = !raw;
  prep.center_response = !raw;
  std::ifstream in(data_path);
  if (!in) throw IoError("cannot open " + data_path);
  const RegressionData data = load_regression_data(in, prep);

  SolverConfig cfg;
  apply(f, cfg);
  const ScadRun run = run_scad(data, params, cfg);

  ensure_dir(out_dir);
  const fs::path fitted_path = fs::path(out_dir) / "fitted.csv";
  auto fs_ = open_out(fitted_path);
  fs_ << "index,y_true,y_fitted\n";
  for (Eigen::Index i = 0; i < data.y_test.size(); ++i) {
    fs_ << i << ',' << format_number(data.y_test[i] + data.y_offset) << ','
        << format_number(run.fitted_test[i] + data.y_offset) << '\n';
  }
  close_out(fs_, fitted_path);

  const fs::path coef_path = fs::path(out_dir) / "coefficients.csv";
  auto cs = open_out(coef_path);
  cs << "predictor,beta\n";
  for (std::size_t j = 0; j < data.predictors.size(); ++j) {
    cs << data.predictors[j] << ',' << format_number(run.beta[static_cast<Eigen::Index>(j)])
       << '\n';
  }
  close_out(cs, coef_path);

  const fs::path trace_path = fs::path(out_dir) / "trace.csv";
  auto ts = open_out(trace_path);
  write_trace_csv(ts, run.result.trace);
  close_out(ts, trace_path);

  out << "train rows: " << data.y_train.size() << ", test rows: " << data.y_test.size() << '\n'
      << "termination: " << termination_name(run.result.termination) << " after "
      << run.result.iterations << " iterations\n"
      << "test error: " << format_number(run.test_error) << '\n'
      << "baseline test error (beta = 0): " << format_number(run.baseline_error) << '\n';
  if (max_test_error && !(run.test_error <= *max_test_error)) {
    out << "FAIL: test error exceeds " << format_number(*max_test_error) << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---- lp-recovery ----------------------------------------------------------

int cmd_lp_recovery(LpRecoverySpec spec, const SolverFlags& f, int example_sparsity,
                    const std::string& out_dir, std::ostream& out) {
  if (spec.m <= 0 || spec.m >= spec.n) throw UsageError("lp-recovery requires 0 < m < n");
  if (spec.trials < 1) throw UsageError("lp-recovery requires --trials >= 1");
  for (int s : spec.sparsities) {
    if (s < 0 || s > spec.n) throw UsageError("sparsity out of range");
  }
  spec.cfg = make_lp_config(f.mu);
  apply(f, spec.cfg);
  if (!f.fixed_L) spec.cfg.adaptive = true;
  const RecoveryTable table = run_lp_recovery(spec);

  ensure_dir(out_dir);
  const fs::path rec_path = fs::path(out_dir) / "recovery.csv";
  auto rs = open_out(rec_path);
  rs << "sparsity,trials,successes,rate\n";
  for (const auto& row : table.rows) {
    rs << row.sparsity << ',' << row.trials << ',' << row.successes << ','
       << format_number(row.rate()) << '\n';
    out << "s=" << row.sparsity << ": " << row.successes << "/" << row.trials << " recovered\n";
  }
  close_out(rs, rec_path);

  const fs::path trials_path = fs::path(out_dir) / "trials.csv";
  auto tr = open_out(trials_path);
  tr << "sparsity,trial,success,linf_error,iterations,evals,retries,termination\n";
  for (const auto& t : table.trials) {
    tr << t.sparsity << ',' << t.trial << ',' << (t.success ? 1 : 0) << ','
       << format_number(t.linf_error) << ',' << t.iterations << ',' << t.evals << ','
       << t.retries << ',' << termination_name(t.termination) << '\n';
  }
  close_out(tr, trials_path);

  const LpTrial* example = &table.trials.front();
  for (const auto& t : table.trials) {
    if (t.sparsity == example_sparsity) {
      example = &t;
      break;
    }
  }
  const fs::path ex_path = fs::path(out_dir) / "example_signal.csv";
  auto es = open_out(ex_path);
  es << "index,x_true,x_solved\n";
  for (Eigen::Index i = 0; i < example->x_true.size(); ++i) {
    es << i << ',' << format_number(example->x_true[i]) << ','
       << format_number(example->x_solved[i]) << '\n';
  }
  close_out(es, ex_path);
  return kExitOk;
}

// ---- step-curve -----------------------------------------------------------

int cmd_step_curve(double L_plus_mu, const std::vector<double>& nus, std::vector<double> grid,
                   double t_max, int t_points, const std::string& out_path, std::ostream& out) {
  if (!(L_plus_mu > 0.0)) throw UsageError("--L-plus-mu must be positive");
  if (grid.empty()) {
    if (t_points < 2 || !(t_max > 0.0)) throw UsageError("need --t-points >= 2 and --t-max > 0");
    for (int i = 0; i < t_points; ++i) grid.push_back(t_max * i / (t_points - 1));
  }
  for (double t : grid) {
    if (!(t >= 0.0)) throw UsageError("grid values must be >= 0");
  }
  for (double nu : nus) {
    if (!(nu >= 2.0 && nu <= 4.0)) throw UsageError("nu must lie in [2, 4]");
  }
  if (out_path.empty() || out_path == "-") {
    write_step_curve(out, L_plus_mu, nus, grid);
    return kExitOk;
  }
  const fs::path p(out_path);
  if (p.has_parent_path()) ensure_dir(p.parent_path().string());
  auto os = open_out(p);
  write_step_curve(os, L_plus_mu, nus, grid);
  close_out(os, p);
  return kExitOk;
}

// ---- kernel-check ---------------------------------------------------------

KernelHandle catalog_kernel(const std::string& kind_name, int n, const KernelShape& base) {
  const auto kind = parse_kernel_kind(kind_name);
  if (!kind) throw UsageError("unknown kernel kind '" + kind_name + "'");
  if (n < 1) throw UsageError("--dim must be >= 1");
  KernelShape shape = base;
  if (*kind == KernelKind::kPolyhedral) {
    // Box [-1, 1]^n cut by sum x <= n / 2.
    shape.B = Matrix::Zero(2 * n + 1, n);
    shape.B.topRows(n) = Matrix::Identity(n, n);
    shape.B.middleRows(n, n) = -Matrix::Identity(n, n);
    shape.B.row(2 * n).setOnes();
    shape.d = Vector::Ones(2 * n + 1);
    shape.d[2 * n] = 0.5 * n;
  }
  if (*kind == KernelKind::kSecondOrderCone && n < 2) throw UsageError("soc needs --dim >= 2");
  return make_kernel(*kind, n, shape);
}

int cmd_kernel_check(const std::string& kind, int n, const KernelShape& shape, double m_scale,
                     std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  KernelHandle h = catalog_kernel(kind, n, shape);
  if (m_scale != 1.0) {
    KernelParams p = h->params();
    p.M *= m_scale;
    h = with_params(h, p);
  }
  const KernelCheckReport rep = run_kernel_checks(*h, seed);
  const KernelParams p = h->params();
  out << "kernel " << rep.kernel << " n=" << n << " M=" << format_number(p.M)
      << " nu=" << format_number(p.nu) << " seed=" << seed << '\n';
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.draws << " draws, "
        << c.failures << " failures)";
    if (!c.passed && !c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const fs::path path = fs::path(out_dir) / "kernel_check.csv";
    auto os = open_out(path);
    os << "check,passed,draws,failures,worst\n";
    for (const auto& c : rep.checks) {
      os << c.name << ',' << (c.passed ? 1 : 0) << ',' << c.draws << ',' << c.failures << ','
         << format_number(c.worst) << '\n';
    }
    close_out(os, path);
  }
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hessian-barrier interior-point solver and experiment drivers", "hba"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::string out_dir;

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a problem read from a JSON file");
  std::string problem_path;
  SolverFlags solve_flags = defaults(1e-3, 1e-6, 10000);
  solve_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--out", out_dir, "output directory")->required();
  solve_cmd->add_option("--seed", seed, "unused; accepted for uniformity");
  add_solver_flags(solve_cmd, solve_flags, true);

  // scad
  auto* scad_cmd = app.add_subcommand("scad", "SCAD-penalized regression on a train/test split");
  std::string data_path;
  ScadParams scad;
  SolverFlags scad_flags = defaults(1e-3, 1e-6, 5000);
  std::optional<double> max_test_error;
  bool raw = false;
  scad_cmd->add_option("data", data_path, "tab- or comma-separated data file")->required();
  scad_cmd->add_option("--zeta", scad.zeta, "SCAD zeta")->capture_default_str();
  scad_cmd->add_option("--a", scad.a, "SCAD a > 2")->capture_default_str();
  scad_cmd->add_option("--out", out_dir, "output directory")->required();
  scad_cmd->add_option("--seed", seed, "unused; accepted for uniformity");
  scad_cmd->add_option("--max-test-error", max_test_error, "exit 1 if the test error is larger");
  scad_cmd->add_flag("--raw", raw, "skip standardization and response centering");
  add_solver_flags(scad_cmd, scad_flags, false);

  // lp-recovery
  auto* lp_cmd = app.add_subcommand("lp-recovery", "sparse recovery by L^p minimization");
  LpRecoverySpec spec;
  SolverFlags lp_flags = defaults(1.0, 1e-6, 3000);
  std::string sparsity_list = "2,5,8,10,12,15";
  int example_sparsity = 5;
  lp_cmd->add_option("--n", spec.n, "signal length")->capture_default_str();
  lp_cmd->add_option("--m", spec.m, "number of observations")->capture_default_str();
  lp_cmd->add_option("--p", spec.p, "exponent in (0, 1]")->capture_default_str();
  lp_cmd->add_option("--sparsity", sparsity_list, "comma-separated sparsity levels")
      ->capture_default_str();
  lp_cmd->add_option("--trials", spec.trials, "trials per sparsity level")->capture_default_str();
  lp_cmd->add_option("--example-sparsity", example_sparsity, "sparsity of the example signal")
      ->capture_default_str();
  lp_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  lp_cmd->add_option("--out", out_dir, "output directory")->required();
  add_solver_flags(lp_cmd, lp_flags, true);

  // step-curve
  auto* step_cmd = app.add_subcommand("step-curve", "optimal step size as a function of delta");
  double L_plus_mu = 10.0;
  std::string nu_list = "2.6,3,3.5,4";
  std::string t_list;
  double t_max = 20.0;
  int t_points = 201;
  std::string step_out;
  step_cmd->add_option("--L-plus-mu", L_plus_mu, "L + mu")->capture_default_str();
  step_cmd->add_option("--nu", nu_list, "comma-separated orders")->capture_default_str();
  step_cmd->add_option("--t", t_list, "explicit comma-separated grid of delta values");
  step_cmd->add_option("--t-max", t_max, "grid upper end")->capture_default_str();
  step_cmd->add_option("--t-points", t_points, "grid size")->capture_default_str();
  step_cmd->add_option("--out", step_out, "output CSV file (default stdout)");
  step_cmd->add_option("--seed", seed, "unused; accepted for uniformity");

  // kernel-check
  auto* kc_cmd = app.add_subcommand("kernel-check", "property checks for a catalog kernel");
  std::string kind;
  int dim = 3;
  KernelShape shape;
  double m_scale = 1.0;
  std::string kc_out;
  kc_cmd->add_option("kind", kind, "burg, entropy, power, inverse-sqrt, polyhedral, soc, "
                                   "regularized-burg")
      ->required();
  kc_cmd->add_option("--dim", dim, "dimension")->capture_default_str();
  kc_cmd->add_option("--kappa", shape.kappa, "power kernel exponent")->capture_default_str();
  kc_cmd->add_option("--c", shape.c, "regularized Burg curvature")->capture_default_str();
  kc_cmd->add_option("--order", shape.order, "regularized Burg order in [3, 4]")
      ->capture_default_str();
  kc_cmd->add_option("--M-scale", m_scale, "multiply the declared M (negative testing)")
      ->capture_default_str();
  kc_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  kc_cmd->add_option("--out", kc_out, "optional directory for kernel_check.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(problem_path, out_dir, solve_flags, out);
    if (*scad_cmd) {
      return cmd_scad(data_path, scad, scad_flags, max_test_error, raw, out_dir, out);
    }
    if (*lp_cmd) {
      spec.seed = seed;
      spec.sparsities.clear();
      for (double s : parse_list(sparsity_list)) {
        if (s != static_cast<int>(s)) throw UsageError("sparsity levels must be integers");
        spec.sparsities.push_back(static_cast<int>(s));
      }
      return cmd_lp_recovery(spec, lp_flags, example_sparsity, out_dir, out);
    }
    if (*step_cmd) {
      std::vector<double> grid;
      if (!t_list.empty()) grid = parse_list(t_list);
      return cmd_step_curve(L_plus_mu, parse_list(nu_list), grid, t_max, t_points, step_out, out);
    }
    if (*kc_cmd) return cmd_kernel_check(kind, dim, shape, m_scale, seed, kc_out, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << data_path << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const ProblemFormatError& e) {
    err << "error: " << problem_path << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConstructionError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RankError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace hba::tools
