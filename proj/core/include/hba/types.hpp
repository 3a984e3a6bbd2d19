#ifndef HBA_TYPES_HPP_
#define HBA_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hba {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Point outside the open domain of a kernel, or an argument outside the
// domain of a scalar function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid construction data (shape mismatch, empty interior, bad parameter).
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient constraint matrix or singular Schur complement.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loss of interiority, NaN from an oracle, or an unbounded analytic center.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// AHBA line search could not find an admissible smoothness constant.
class SmoothnessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No strictly feasible point exists for the constraint data.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hba

#endif  // HBA_TYPES_HPP_
