#ifndef HBA_TOOLS_PROBLEM_IO_HPP_
#define HBA_TOOLS_PROBLEM_IO_HPP_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "hba/problem.hpp"
#include "hba/solver.hpp"

namespace hba::tools {

class ProblemFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON problem description read by `hba solve`:
//   {
//     "objective": {"type": "quadratic", "Q": [[...]], "q": [...], "c0": 0}
//               | {"type": "lp", "p": 0.5},
//     "A": [[...]], "b": [...],                      optional, default no rows
//     "kernel": {"kind": "burg", "kappa": 1, "c": 1, "order": 3,
//                "B": [[...]], "d": [...]},
//     "x0": [...],                                   optional
//     "L": 1.0, "f_lower_bound": 0.0                 optional
//   }
// Without x0 the kernel's interior point is used when it is feasible, and
// phase 1 otherwise (positive-orthant kernels only).
Problem read_problem_json(std::istream& in);

// Result summary: termination, counts, final iterate and multiplier.
void write_result_json(std::ostream& os, const SolveResult& result);

}  // namespace hba::tools

#endif  // HBA_TOOLS_PROBLEM_IO_HPP_
