#include "hba/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace hba {

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {"k",   "F_mu",  "f",   "lambda",
                                                "beta", "delta", "alpha", "L_k",
                                                "chi", "Delta", "evals"};
  return cols;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const IterateTrace& trace) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : trace) {
    os << r.k << ',' << format_number(r.F_mu) << ',' << format_number(r.f) << ','
       << format_number(r.lambda) << ',' << format_number(r.beta) << ','
       << format_number(r.delta) << ',' << format_number(r.alpha) << ','
       << format_number(r.L_k) << ',' << format_number(r.chi) << ','
       << format_number(r.Delta) << ',' << r.evals << '\n';
  }
}

}  // namespace hba
