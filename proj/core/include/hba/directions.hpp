#ifndef HBA_DIRECTIONS_HPP_
#define HBA_DIRECTIONS_HPP_

#include "hba/geometry.hpp"
#include "hba/kernels.hpp"

namespace hba {

// Affine constraints Ax = b with A of full row rank; m = 0 is allowed.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(int n);  // no constraints on R^n
  ConstraintSet(Matrix A, Vector b);

  int rows() const { return static_cast<int>(A_.rows()); }
  int cols() const { return static_cast<int>(A_.cols()); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }

  double residual(const Vector& x) const;  // |Ax - b|_2, 0 when m = 0
  double feasibility_tolerance() const { return 1e-9 * (1.0 + b_.norm()); }
  bool feasible(const Vector& x) const { return residual(x) <= feasibility_tolerance(); }

 private:
  Matrix A_;
  Vector b_;
};

struct SearchDirection {
  Vector v;           // primal direction, Av = 0
  Vector y;           // dual multiplier, Hv - A^T y = -g
  double lambda = 0;  // |v|_x
  double beta = 0;    // |v|_2
  double delta = 0;   // M (nu-2)/2 lambda^(nu-2) beta^(3-nu)
};

// Curvature scale delta from (lambda, beta); 0 when lambda = 0.
double curvature_scale(double M, double nu, double lambda, double beta);

// Solves min <g, v> + 1/2 |v|_x^2 s.t. Av = 0 via the Schur complement.
SearchDirection solve_direction(const LocalGeometry& geo, const ConstraintSet& cons,
                                const Vector& g, double M, double nu);
SearchDirection solve_direction(const Kernel& h, const ConstraintSet& cons, const Vector& x,
                                const Vector& g);

// chi(x, y) = |grad_f - A^T y|*_x.
double criticality(const LocalGeometry& geo, const Vector& grad_f, const Vector& y,
                   const ConstraintSet& cons);
double criticality(const Kernel& h, const Vector& x, const Vector& grad_f, const Vector& y,
                   const ConstraintSet& cons);

// P_x H(x)^{-1} grad: the Riemannian gradient restricted to {Av = 0}.
Vector riemannian_gradient(const Kernel& h, const ConstraintSet& cons, const Vector& x,
                           const Vector& grad);

}  // namespace hba

#endif  // HBA_DIRECTIONS_HPP_
