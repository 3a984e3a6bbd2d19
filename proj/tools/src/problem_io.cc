#include "hba_tools/problem_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "hba/trace_io.hpp"

namespace hba::tools {

namespace {

using nlohmann::json;

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ProblemFormatError(std::string(what) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ProblemFormatError(std::string(what) + ": non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const char* what, Eigen::Index cols_hint = -1) {
  if (!j.is_array()) throw ProblemFormatError(std::string(what) + ": expected an array of rows");
  if (j.empty()) return Matrix(0, cols_hint < 0 ? 0 : cols_hint);
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix M(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = to_vector(j[r], what);
    if (row.size() != cols) throw ProblemFormatError(std::string(what) + ": ragged rows");
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

class LpPower final : public Objective {
 public:
  explicit LpPower(double p) : p_(p) {}
  double value(const Vector& x) const override { return x.array().pow(p_).sum(); }
  Vector gradient(const Vector& x) const override { return p_ * x.array().pow(p_ - 1.0); }

 private:
  double p_;
};

}  // namespace

Problem read_problem_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ProblemFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProblemFormatError("top level must be an object");
  if (!j.contains("objective")) throw ProblemFormatError("missing 'objective'");
  if (!j.contains("kernel")) throw ProblemFormatError("missing 'kernel'");

  Problem p;
  const json& obj = j["objective"];
  const std::string type = obj.value("type", "");
  bool lp = false;
  if (type == "quadratic") {
    const Vector q = to_vector(obj.at("q"), "objective.q");
    const Matrix Q = to_matrix(obj.at("Q"), "objective.Q", q.size());
    p.n = static_cast<int>(q.size());
    p.objective = std::make_shared<QuadraticObjective>(Q, q, obj.value("c0", 0.0));
  } else if (type == "lp") {
    const double pw = obj.value("p", 0.5);
    if (!(pw > 0.0 && pw <= 1.0)) throw ProblemFormatError("objective.p must lie in (0, 1]");
    p.objective = std::make_shared<LpPower>(pw);
    p.smoothness = 0.0;
    p.f_lower_bound = 0.0;
    lp = true;
  } else {
    throw ProblemFormatError("objective.type must be 'quadratic' or 'lp'");
  }

  if (j.contains("A")) {
    const Matrix A = to_matrix(j["A"], "A");
    const Vector b = j.contains("b") ? to_vector(j["b"], "b") : Vector::Zero(A.rows());
    if (p.n == 0) p.n = static_cast<int>(A.cols());
    p.cons = A.rows() == 0 ? ConstraintSet(p.n) : ConstraintSet(A, b);
  } else {
    if (p.n == 0) p.n = j.value("n", 0);
    p.cons = ConstraintSet(p.n);
  }
  if (p.n <= 0) throw ProblemFormatError("cannot infer the dimension n");

  const json& kj = j["kernel"];
  const auto kind = parse_kernel_kind(kj.value("kind", ""));
  if (!kind) throw ProblemFormatError("unknown kernel kind '" + kj.value("kind", "") + "'");
  KernelShape shape;
  shape.kappa = kj.value("kappa", 1.0);
  shape.c = kj.value("c", 1.0);
  shape.order = kj.value("order", 3.0);
  if (kj.contains("B")) shape.B = to_matrix(kj["B"], "kernel.B");
  if (kj.contains("d")) shape.d = to_vector(kj["d"], "kernel.d");
  p.kernel = make_kernel(*kind, p.n, shape);

  if (j.contains("L")) p.smoothness = j["L"].get<double>();
  if (j.contains("f_lower_bound")) p.f_lower_bound = j["f_lower_bound"].get<double>();
  if (j.contains("x0")) {
    p.x0 = to_vector(j["x0"], "x0");
  } else {
    const Vector c = p.kernel->interior_point();
    if (p.cons.feasible(c)) {
      p.x0 = c;
    } else if (*kind == KernelKind::kBurg || *kind == KernelKind::kEntropyBarrier || lp) {
      p.x0 = positive_feasible_point(p.cons);
    } else {
      throw ProblemFormatError("x0 required: kernel interior point is not feasible");
    }
  }
  validate(p);
  return p;
}

void write_result_json(std::ostream& os, const SolveResult& r) {
  json j;
  j["termination"] = termination_name(r.termination);
  j["message"] = r.message;
  j["iterations"] = r.iterations;
  j["function_evals"] = r.function_evals;
  j["x"] = to_json(r.x_final);
  j["y"] = to_json(r.y_final);
  if (!r.trace.empty()) {
    j["F_mu"] = r.trace.back().F_mu;
    j["f"] = r.trace.back().f;
    j["lambda"] = r.trace.back().lambda;
  }
  j["sigma_h"] = r.estimates.sigma_h;
  j["tau_h"] = r.estimates.tau_h;
  j["kernel_M"] = r.kernel_params.M;
  j["kernel_nu"] = r.kernel_params.nu;
  if (r.K2) j["K2"] = *r.K2;
  os << j.dump(2) << '\n';
}

}  // namespace hba::tools
