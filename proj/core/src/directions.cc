#include "hba/directions.hpp"

#include <cmath>
#include <sstream>

namespace hba {

ConstraintSet::ConstraintSet(int n) : A_(0, n), b_(0) {}

ConstraintSet::ConstraintSet(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    std::ostringstream os;
    os << "constraints: A has " << A_.rows() << " rows but b has " << b_.size() << " entries";
    throw ConstructionError(os.str());
  }
  if (A_.rows() == 0) return;
  if (A_.rows() > A_.cols()) throw RankError("constraints: more rows than columns");
  if (!A_.allFinite() || !b_.allFinite()) throw ConstructionError("constraints: non-finite data");
  // Pivots below 1e-10 * |A| relative to the largest one count as zero.
  Eigen::ColPivHouseholderQR<Matrix> qr(A_.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() < A_.rows()) {
    std::ostringstream os;
    os << "constraints: A has rank " << qr.rank() << " < " << A_.rows() << " rows";
    throw RankError(os.str());
  }
}

double ConstraintSet::residual(const Vector& x) const {
  if (A_.rows() == 0) return 0.0;
  return (A_ * x - b_).norm();
}

double curvature_scale(double M, double nu, double lambda, double beta) {
  if (lambda <= 0.0 || beta <= 0.0) return 0.0;
  return M * 0.5 * (nu - 2.0) *
         std::exp((nu - 2.0) * std::log(lambda) + (3.0 - nu) * std::log(beta));
}

SearchDirection solve_direction(const LocalGeometry& geo, const ConstraintSet& cons,
                                const Vector& g, double M, double nu) {
  if (g.size() != geo.dimension() || cons.cols() != geo.dimension()) {
    throw ConstructionError("solve_direction: gradient, constraints and point differ in size");
  }
  SearchDirection d;
  const Vector hinv_g = geo.solve(g);
  if (cons.rows() == 0) {
    d.v = -hinv_g;
    d.y = Vector(0);
  } else {
    const Matrix& A = cons.A();
    const Matrix hinv_at = geo.solve(Matrix(A.transpose()));
    const Matrix schur = A * hinv_at;
    Eigen::LLT<Matrix> llt(schur);
    if (llt.info() == Eigen::Success) {
      d.y = llt.solve(A * hinv_g);
      d.v = hinv_at * d.y - hinv_g;
    }
    if (llt.info() != Eigen::Success || !d.y.allFinite()) {
      // Near the boundary A H^-1 A^T can be singular to working precision
      // while L^-1 A^T is still well conditioned: solve the least-squares
      // form min |L^-1 (g - A^T y)| instead of the normal equations.
      const Matrix B = geo.whiten(Matrix(A.transpose()));
      const Vector r = geo.whiten(Matrix(g));
      Eigen::ColPivHouseholderQR<Matrix> qr(B);
      qr.setThreshold(1e-14);
      if (qr.rank() < A.rows()) {
        throw RankError("solve_direction: Schur complement A H^-1 A^T is singular");
      }
      d.y = qr.solve(r);
      d.v = -geo.unwhiten(r - B * d.y);
    }
    if (!d.y.allFinite() || !d.v.allFinite()) {
      throw RankError("solve_direction: Schur solve produced non-finite values");
    }
  }
  // |v|_x rather than sqrt(-<g, v>): the latter has an O(sqrt(u |g| |v|))
  // round-off floor that stalls the lambda <= eps test near stationarity.
  d.lambda = geo.norm(d.v);
  d.beta = d.v.norm();
  d.delta = curvature_scale(M, nu, d.lambda, d.beta);
  return d;
}

SearchDirection solve_direction(const Kernel& h, const ConstraintSet& cons, const Vector& x,
                                const Vector& g) {
  const LocalGeometry geo(h, x);
  const KernelParams p = h.params();
  return solve_direction(geo, cons, g, p.M, p.nu);
}

double criticality(const LocalGeometry& geo, const Vector& grad_f, const Vector& y,
                   const ConstraintSet& cons) {
  if (cons.rows() == 0) return geo.dual_norm(grad_f);
  return geo.dual_norm(grad_f - cons.A().transpose() * y);
}

double criticality(const Kernel& h, const Vector& x, const Vector& grad_f, const Vector& y,
                   const ConstraintSet& cons) {
  return criticality(LocalGeometry(h, x), grad_f, y, cons);
}

Vector riemannian_gradient(const Kernel& h, const ConstraintSet& cons, const Vector& x,
                           const Vector& grad) {
  return -solve_direction(h, cons, x, grad).v;
}

}  // namespace hba
