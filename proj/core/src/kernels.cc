#include "hba/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace hba {

Vector Kernel::hessian_diagonal(const Vector& x) const {
  if (!diagonal_hessian()) {
    throw std::logic_error(name() + ": hessian_diagonal on a dense kernel");
  }
  return hessian(x).diagonal();
}

void Kernel::require_domain(const Vector& x) const {
  if (x.size() != dimension()) {
    std::ostringstream os;
    os << name() << ": expected dimension " << dimension() << ", got " << x.size();
    throw DomainError(os.str());
  }
  if (!in_domain(x)) throw DomainError(name() + ": point outside the open domain");
}

namespace {

// Coordinate-wise sum of a scalar barrier phi.
class SeparableKernel : public Kernel {
 public:
  explicit SeparableKernel(int n) : n_(n) {
    if (n <= 0) throw ConstructionError("kernel dimension must be positive");
  }

  int dimension() const override { return n_; }
  bool diagonal_hessian() const override { return true; }

  bool in_domain(const Vector& x) const override {
    if (x.size() != n_) return false;
    for (int i = 0; i < n_; ++i) {
      if (!std::isfinite(x[i]) || !inside(x[i])) return false;
    }
    return true;
  }

  double value(const Vector& x) const override {
    require_domain(x);
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += phi(x[i]);
    return s;
  }

  Vector gradient(const Vector& x) const override {
    require_domain(x);
    Vector g(n_);
    for (int i = 0; i < n_; ++i) g[i] = dphi(x[i]);
    return g;
  }

  Vector hessian_diagonal(const Vector& x) const override {
    require_domain(x);
    Vector h(n_);
    for (int i = 0; i < n_; ++i) h[i] = d2phi(x[i]);
    return h;
  }

  Matrix hessian(const Vector& x) const override { return hessian_diagonal(x).asDiagonal(); }

 protected:
  virtual bool inside(double t) const = 0;
  virtual double phi(double t) const = 0;
  virtual double dphi(double t) const = 0;
  virtual double d2phi(double t) const = 0;

  int n_;
};

class BurgKernel final : public SeparableKernel {
 public:
  using SeparableKernel::SeparableKernel;
  std::string name() const override { return "burg"; }
  KernelParams params() const override { return {2.0, 3.0, static_cast<double>(n_)}; }
  Vector interior_point() const override { return Vector::Ones(n_); }

 protected:
  bool inside(double t) const override { return t > 0.0; }
  double phi(double t) const override { return -std::log(t); }
  double dphi(double t) const override { return -1.0 / t; }
  double d2phi(double t) const override { return 1.0 / (t * t); }
};

class EntropyBarrierKernel final : public SeparableKernel {
 public:
  using SeparableKernel::SeparableKernel;
  std::string name() const override { return "entropy"; }
  KernelParams params() const override { return {2.0, 3.0, std::nullopt}; }
  Vector interior_point() const override { return Vector::Ones(n_); }

 protected:
  bool inside(double t) const override { return t > 0.0; }
  double phi(double t) const override { return (t - 1.0) * std::log(t); }
  double dphi(double t) const override { return std::log(t) + 1.0 - 1.0 / t; }
  double d2phi(double t) const override { return (t + 1.0) / (t * t); }
};

class PowerKernel final : public SeparableKernel {
 public:
  PowerKernel(int n, double kappa) : SeparableKernel(n), kappa_(kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw ConstructionError("power kernel requires kappa > 0");
    }
  }
  std::string name() const override { return "power"; }
  KernelParams params() const override {
    return {power_kernel_M(kappa_), power_kernel_nu(kappa_), std::nullopt};
  }
  Vector interior_point() const override { return Vector::Zero(n_); }

 protected:
  bool inside(double t) const override { return t < kappa_; }
  double s(double t) const { return 1.0 - t / kappa_; }
  double phi(double t) const override { return std::pow(s(t), -kappa_); }
  double dphi(double t) const override { return std::pow(s(t), -kappa_ - 1.0); }
  double d2phi(double t) const override {
    return (kappa_ + 1.0) / kappa_ * std::pow(s(t), -kappa_ - 2.0);
  }

 private:
  double kappa_;
};

class InverseSqrtKernel final : public SeparableKernel {
 public:
  using SeparableKernel::SeparableKernel;
  std::string name() const override { return "inverse-sqrt"; }
  // Numerical maximum of |phi'''| / phi''^(7/5) is about 3.243.
  KernelParams params() const override { return {3.25, 14.0 / 5.0, std::nullopt}; }
  Vector interior_point() const override { return Vector::Zero(n_); }

 protected:
  bool inside(double t) const override { return t > -1.0 && t < 1.0; }
  double q(double t) const { return (1.0 - t) * (1.0 + t); }
  double phi(double t) const override { return 1.0 / std::sqrt(q(t)); }
  double dphi(double t) const override { return t * std::pow(q(t), -1.5); }
  double d2phi(double t) const override { return (1.0 + 2.0 * t * t) * std::pow(q(t), -2.5); }
};

class RegularizedBurgKernel final : public SeparableKernel {
 public:
  RegularizedBurgKernel(int n, double c, double order)
      : SeparableKernel(n), c_(c), order_(order) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw ConstructionError("regularized Burg requires c > 0");
    }
    if (!(order >= 3.0 && order <= 4.0)) {
      throw ConstructionError("regularized Burg order must lie in [3, 4]");
    }
  }
  std::string name() const override { return "regularized-burg"; }
  KernelParams params() const override {
    return {regularized_burg_M(c_, order_), order_, std::nullopt};
  }
  Vector interior_point() const override { return Vector::Constant(n_, 1.0 / std::sqrt(c_)); }

 protected:
  bool inside(double t) const override { return t > 0.0; }
  double phi(double t) const override { return -std::log(t) + 0.5 * c_ * t * t; }
  double dphi(double t) const override { return -1.0 / t + c_ * t; }
  double d2phi(double t) const override { return 1.0 / (t * t) + c_; }

 private:
  double c_;
  double order_;
};

// Finds x with Bx < d by minimizing a smoothed max of the constraint
// residuals with Newton's method, tightening the smoothing each round.
std::optional<Vector> polyhedral_interior(const Matrix& B, const Vector& d) {
  const int n = static_cast<int>(B.cols());
  Vector x = Vector::Zero(n);
  auto worst = [&](const Vector& z) { return (B * z - d).maxCoeff(); };
  if (worst(x) < 0.0) return x;
  for (double beta : {1.0, 10.0, 100.0, 1e3, 1e4}) {
    for (int it = 0; it < 100; ++it) {
      const Vector r = beta * (B * x - d);
      const double rmax = r.maxCoeff();
      const Vector w = (r.array() - rmax).exp();
      const Vector p = w / w.sum();
      const double val = (rmax + std::log(w.sum())) / beta;
      const Vector grad = B.transpose() * p;
      Matrix hess = beta * (B.transpose() * p.asDiagonal() * B - grad * grad.transpose());
      hess += 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff()) * Matrix::Identity(n, n);
      const Vector step = -hess.ldlt().solve(grad);
      double t = 1.0;
      Vector trial = x + step;
      auto lse = [&](const Vector& z) {
        const Vector rz = beta * (B * z - d);
        const double m = rz.maxCoeff();
        return (m + std::log((rz.array() - m).exp().sum())) / beta;
      };
      while (t > 1e-12 && !(lse(trial) <= val + 1e-4 * t * grad.dot(step))) {
        t *= 0.5;
        trial = x + t * step;
      }
      if (t <= 1e-12) break;
      x = trial;
      if (worst(x) < 0.0) return x;
      if (grad.norm() < 1e-12) break;
    }
  }
  return std::nullopt;
}

class PolyhedralKernel final : public Kernel {
 public:
  PolyhedralKernel(int n, Matrix B, Vector d) : n_(n), B_(std::move(B)), d_(std::move(d)) {
    if (B_.cols() != n || B_.rows() != d_.size() || B_.rows() == 0) {
      throw ConstructionError("polyhedral barrier: B must be p x n and d of length p >= 1");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(B_);
    qr.setThreshold(1e-10);
    if (qr.rank() < n) {
      throw ConstructionError("polyhedral barrier: B must have full column rank");
    }
    auto x = polyhedral_interior(B_, d_);
    if (!x) throw ConstructionError("polyhedral barrier: empty interior");
    interior_ = *x;
  }

  std::string name() const override { return "polyhedral"; }
  int dimension() const override { return n_; }
  KernelParams params() const override {
    return {2.0, 3.0, static_cast<double>(B_.rows())};
  }
  bool diagonal_hessian() const override { return false; }
  Vector interior_point() const override { return interior_; }

  bool in_domain(const Vector& x) const override {
    if (x.size() != n_ || !x.allFinite()) return false;
    return (d_ - B_ * x).minCoeff() > 0.0;
  }

  double value(const Vector& x) const override {
    require_domain(x);
    return -(d_ - B_ * x).array().log().sum();
  }

  Vector gradient(const Vector& x) const override {
    require_domain(x);
    const Vector s = d_ - B_ * x;
    return B_.transpose() * s.cwiseInverse();
  }

  Matrix hessian(const Vector& x) const override {
    require_domain(x);
    const Vector s = d_ - B_ * x;
    const Vector w = s.cwiseInverse();
    return B_.transpose() * w.cwiseAbs2().asDiagonal() * B_;
  }

 private:
  int n_;
  Matrix B_;
  Vector d_;
  Vector interior_;
};

class SocKernel final : public Kernel {
 public:
  explicit SocKernel(int n) : n_(n) {
    if (n < 2) throw ConstructionError("second-order cone barrier needs n >= 2");
  }
  std::string name() const override { return "soc"; }
  int dimension() const override { return n_; }
  KernelParams params() const override { return {2.0, 3.0, 2.0}; }
  bool diagonal_hessian() const override { return false; }
  Vector interior_point() const override {
    Vector x = Vector::Zero(n_);
    x[0] = 1.0;
    return x;
  }

  bool in_domain(const Vector& x) const override {
    if (x.size() != n_ || !x.allFinite()) return false;
    return x[0] > 0.0 && slack(x) > 0.0;
  }

  double value(const Vector& x) const override {
    require_domain(x);
    return -std::log(slack(x));
  }

  Vector gradient(const Vector& x) const override {
    require_domain(x);
    return -2.0 * reflect(x) / slack(x);
  }

  Matrix hessian(const Vector& x) const override {
    require_domain(x);
    const double s = slack(x);
    const Vector jx = reflect(x);
    Matrix H = 4.0 * jx * jx.transpose() / (s * s);
    H(0, 0) -= 2.0 / s;
    for (int i = 1; i < n_; ++i) H(i, i) += 2.0 / s;
    return H;
  }

 private:
  static double slack(const Vector& x) {
    const auto w = x.tail(x.size() - 1);
    return (x[0] - w.norm()) * (x[0] + w.norm());
  }
  static Vector reflect(const Vector& x) {
    Vector j = -x;
    j[0] = x[0];
    return j;
  }

  int n_;
};

class SumKernel final : public Kernel {
 public:
  explicit SumKernel(std::vector<KernelHandle> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ConstructionError("sum kernel needs at least one block");
    params_ = blocks_.front()->params();
    n_ = 0;
    bool all_theta = true;
    double theta = 0.0;
    diagonal_ = true;
    for (const auto& b : blocks_) {
      if (!b) throw ConstructionError("sum kernel: null block");
      const KernelParams p = b->params();
      if (std::abs(p.nu - params_.nu) > 1e-12) {
        throw ConstructionError("sum kernel: blocks must share the order nu");
      }
      params_.M = std::max(params_.M, p.M);
      if (p.theta) {
        theta += *p.theta;
      } else {
        all_theta = false;
      }
      diagonal_ = diagonal_ && b->diagonal_hessian();
      offsets_.push_back(n_);
      n_ += b->dimension();
    }
    if (blocks_.size() > 1 && params_.nu > 3.0 + 1e-12) {
      throw ConstructionError("sum kernel: block sums are only valid for nu <= 3");
    }
    params_.theta = all_theta ? std::optional<double>(theta) : std::nullopt;
  }

  std::string name() const override {
    std::string s = "sum(";
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      if (j) s += ",";
      s += blocks_[j]->name();
    }
    return s + ")";
  }
  int dimension() const override { return n_; }
  KernelParams params() const override { return params_; }
  bool diagonal_hessian() const override { return diagonal_; }

  Vector interior_point() const override {
    Vector x(n_);
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      x.segment(offsets_[j], blocks_[j]->dimension()) = blocks_[j]->interior_point();
    }
    return x;
  }

  bool in_domain(const Vector& x) const override {
    if (x.size() != n_) return false;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      if (!blocks_[j]->in_domain(block(x, j))) return false;
    }
    return true;
  }

  double value(const Vector& x) const override {
    require_domain(x);
    double s = 0.0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) s += blocks_[j]->value(block(x, j));
    return s;
  }

  Vector gradient(const Vector& x) const override {
    require_domain(x);
    Vector g(n_);
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      g.segment(offsets_[j], blocks_[j]->dimension()) = blocks_[j]->gradient(block(x, j));
    }
    return g;
  }

  Vector hessian_diagonal(const Vector& x) const override {
    if (!diagonal_) return Kernel::hessian_diagonal(x);
    require_domain(x);
    Vector h(n_);
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      h.segment(offsets_[j], blocks_[j]->dimension()) =
          blocks_[j]->hessian_diagonal(block(x, j));
    }
    return h;
  }

  Matrix hessian(const Vector& x) const override {
    require_domain(x);
    Matrix H = Matrix::Zero(n_, n_);
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const int k = blocks_[j]->dimension();
      H.block(offsets_[j], offsets_[j], k, k) = blocks_[j]->hessian(block(x, j));
    }
    return H;
  }

 private:
  Vector block(const Vector& x, std::size_t j) const {
    return x.segment(offsets_[j], blocks_[j]->dimension());
  }

  std::vector<KernelHandle> blocks_;
  std::vector<int> offsets_;
  KernelParams params_;
  int n_ = 0;
  bool diagonal_ = true;
};

class ScaledKernel final : public Kernel {
 public:
  ScaledKernel(KernelHandle base, double factor, KernelParams params)
      : base_(std::move(base)), factor_(factor), params_(params) {
    if (!base_) throw ConstructionError("scaled kernel: null base");
    if (!(factor > 0.0) || !std::isfinite(factor)) {
      throw ConstructionError("scaled kernel: factor must be positive");
    }
  }
  std::string name() const override {
    if (factor_ == 1.0) return base_->name();
    std::ostringstream os;
    os << factor_ << "*" << base_->name();
    return os.str();
  }
  int dimension() const override { return base_->dimension(); }
  KernelParams params() const override { return params_; }
  bool in_domain(const Vector& x) const override { return base_->in_domain(x); }
  bool diagonal_hessian() const override { return base_->diagonal_hessian(); }
  Vector interior_point() const override { return base_->interior_point(); }
  double value(const Vector& x) const override { return factor_ * base_->value(x); }
  Vector gradient(const Vector& x) const override { return factor_ * base_->gradient(x); }
  Vector hessian_diagonal(const Vector& x) const override {
    return factor_ * base_->hessian_diagonal(x);
  }
  Matrix hessian(const Vector& x) const override { return factor_ * base_->hessian(x); }

 private:
  KernelHandle base_;
  double factor_;
  KernelParams params_;
};

void check_params(const KernelParams& p) {
  if (!(p.M > 0.0) || !std::isfinite(p.M)) throw ConstructionError("kernel M must be > 0");
  if (!(p.nu > 2.0 && p.nu <= 4.0)) throw ConstructionError("kernel nu must lie in (2, 4]");
  if (p.theta && !(*p.theta >= 0.0)) throw ConstructionError("kernel theta must be >= 0");
}

}  // namespace

double power_kernel_M(double kappa) {
  return (2.0 + kappa) / kappa * std::pow(kappa / (1.0 + kappa), 1.0 / (2.0 + kappa));
}

double power_kernel_nu(double kappa) { return 2.0 * (3.0 + kappa) / (2.0 + kappa); }

double regularized_burg_M(double c, double nu) {
  return 2.0 * std::pow(c, -(nu - 3.0) / 2.0);
}

KernelHandle make_kernel(KernelKind kind, int n, const KernelShape& shape) {
  switch (kind) {
    case KernelKind::kBurg:
      return std::make_shared<BurgKernel>(n);
    case KernelKind::kEntropyBarrier:
      return std::make_shared<EntropyBarrierKernel>(n);
    case KernelKind::kPower:
      return std::make_shared<PowerKernel>(n, shape.kappa);
    case KernelKind::kInverseSqrt:
      return std::make_shared<InverseSqrtKernel>(n);
    case KernelKind::kPolyhedral:
      return std::make_shared<PolyhedralKernel>(n, shape.B, shape.d);
    case KernelKind::kSecondOrderCone:
      return std::make_shared<SocKernel>(n);
    case KernelKind::kRegularizedBurg:
      return std::make_shared<RegularizedBurgKernel>(n, shape.c, shape.order);
  }
  throw ConstructionError("unknown kernel kind");
}

std::optional<KernelKind> parse_kernel_kind(const std::string& name) {
  static const std::pair<const char*, KernelKind> table[] = {
      {"burg", KernelKind::kBurg},
      {"entropy", KernelKind::kEntropyBarrier},
      {"power", KernelKind::kPower},
      {"inverse-sqrt", KernelKind::kInverseSqrt},
      {"polyhedral", KernelKind::kPolyhedral},
      {"soc", KernelKind::kSecondOrderCone},
      {"regularized-burg", KernelKind::kRegularizedBurg},
  };
  for (const auto& [key, kind] : table) {
    if (name == key) return kind;
  }
  return std::nullopt;
}

std::string kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kBurg: return "burg";
    case KernelKind::kEntropyBarrier: return "entropy";
    case KernelKind::kPower: return "power";
    case KernelKind::kInverseSqrt: return "inverse-sqrt";
    case KernelKind::kPolyhedral: return "polyhedral";
    case KernelKind::kSecondOrderCone: return "soc";
    case KernelKind::kRegularizedBurg: return "regularized-burg";
  }
  return "unknown";
}

KernelHandle make_sum_kernel(std::vector<KernelHandle> blocks) {
  return std::make_shared<SumKernel>(std::move(blocks));
}

KernelHandle make_scaled_kernel(KernelHandle base, double factor, KernelParams params) {
  check_params(params);
  return std::make_shared<ScaledKernel>(std::move(base), factor, params);
}

KernelHandle with_params(KernelHandle base, KernelParams params) {
  return make_scaled_kernel(std::move(base), 1.0, params);
}

}  // namespace hba
