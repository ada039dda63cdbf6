#include "obd/cost_function.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace obd {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::kQuadratic: return "quadratic";
    case CostKind::kNormTracking: return "norm_tracking";
    case CostKind::kComposite: return "composite";
    case CostKind::kIndicator: return "indicator";
  }
  return "unknown";
}

// ---- QuadraticCost

QuadraticCost::QuadraticCost(Matrix q, Vector center, double offset)
    : q_(std::move(q)), center_(std::move(center)), offset_(offset) {
  if (q_.rows() != q_.cols() || q_.rows() != center_.size() || center_.size() == 0) {
    throw DimensionMismatch("quadratic: Q must be d x d with d = dim(center) >= 1");
  }
  if (!q_.allFinite() || !center_.allFinite() || !std::isfinite(offset_) || offset_ < 0.0) {
    throw InvalidArgument("quadratic: parameters must be finite with offset >= 0");
  }
  const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("quadratic: Q is not symmetric");
  }
  q_ = 0.5 * (q_ + q_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-12 * scale) {
    throw InvalidArgument("quadratic: Q is not positive semidefinite");
  }
}

QuadraticCost::QuadraticCost(Matrix a, Vector y) : a_(std::move(a)), y_(std::move(y)) {
  if (a_.rows() != y_.size() || a_.cols() == 0) {
    throw DimensionMismatch("make_quadratic: A must have as many rows as y");
  }
  if (!a_.allFinite() || !y_.allFinite()) {
    throw InvalidArgument("make_quadratic: A and y must be finite");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a_);
  if (qr.rank() < a_.cols()) throw InvalidArgument("make_quadratic: A is rank deficient");
  center_ = qr.solve(y_);
  q_ = a_.transpose() * a_;
  offset_ = a_.rows() == a_.cols() ? 0.0 : (a_ * center_ - y_).squaredNorm();
}

double QuadraticCost::value(const Vector& x) const {
  require_dimension(x, dimension(), "quadratic cost");
  if (has_factor()) return (a_ * x - y_).squaredNorm();
  const Vector u = x - center_;
  return std::max(0.0, u.dot(q_ * u)) + offset_;
}

Vector QuadraticCost::gradient(const Vector& x) const {
  require_dimension(x, dimension(), "quadratic cost");
  if (has_factor()) return 2.0 * a_.transpose() * (a_ * x - y_);
  return 2.0 * q_ * (x - center_);
}

std::optional<Matrix> QuadraticCost::hessian(const Vector& x) const {
  require_dimension(x, dimension(), "quadratic cost");
  return Matrix(2.0 * q_);
}

SmoothValue QuadraticCost::smoothed(const Vector& x, double /*eps*/) const {
  return {value(x), gradient(x), 2.0 * q_};
}

// ---- NormTrackingCost

NormTrackingCost::NormTrackingCost(Vector v, Norm tracking, Norm switching, double weight,
                                   double offset)
    : v_(std::move(v)),
      tracking_(std::move(tracking)),
      switching_(std::move(switching)),
      weight_(weight),
      offset_(offset) {
  if (v_.size() == 0 || !v_.allFinite()) {
    throw InvalidArgument("norm_tracking: v must be finite with dimension >= 1");
  }
  if (!(weight_ > 0.0) || !std::isfinite(weight_)) {
    throw InvalidArgument("norm_tracking: weight must be positive and finite");
  }
  if (!(offset_ >= 0.0) || !std::isfinite(offset_)) {
    throw InvalidArgument("norm_tracking: offset must be finite and non-negative");
  }
  for (const Norm* n : {&tracking_, &switching_}) {
    if (n->kind() == NormKind::kMahalanobis) require_dimension(v_, n->q().rows(), "norm_tracking");
  }
  alpha_ = weight_ * norm_ratio_lower_bound(tracking_, switching_, v_.size());
}

double NormTrackingCost::value(const Vector& x) const {
  require_dimension(x, dimension(), "norm_tracking cost");
  return weight_ * tracking_(x - v_) + offset_;
}

Vector NormTrackingCost::gradient(const Vector& x) const {
  require_dimension(x, dimension(), "norm_tracking cost");
  return weight_ * tracking_.subgradient(x - v_);
}

SmoothValue NormTrackingCost::smoothed(const Vector& x, double eps) const {
  require_dimension(x, dimension(), "norm_tracking cost");
  SmoothValue s = tracking_.smoothed(x - v_, eps);
  s.value = weight_ * s.value + offset_;
  s.gradient *= weight_;
  s.hessian *= weight_;
  return s;
}

double NormTrackingCost::smoothing_gap(double eps) const {
  return weight_ * tracking_.smoothing_gap(eps, v_.size());
}

// ---- CompositeCost

CompositeCost::CompositeCost(std::shared_ptr<const CostModel> g,
                             std::shared_ptr<const CostModel> h, double minimizer_tol)
    : g_(std::move(g)), h_(std::move(h)) {
  if (!g_ || !h_) throw InvalidArgument("make_composite: null component");
  if (g_->dimension() != h_->dimension()) throw DimensionMismatch("make_composite: dimensions");
  if (!g_->alpha()) throw InvalidArgument("make_composite: g must declare alpha");
  if (g_->kind() == CostKind::kIndicator || h_->kind() == CostKind::kIndicator) {
    throw InvalidArgument("make_composite: indicator components are not supported");
  }
  // h may be flat (e.g. identically zero); then g's minimizer also minimizes h.
  const double h_at_gmin = h_->value(g_->minimizer());
  if ((h_->minimizer() - g_->minimizer()).norm() > minimizer_tol &&
      h_at_gmin - h_->min_value() > minimizer_tol) {
    throw InvalidArgument("make_composite: g and h minimizers differ");
  }
}

double CompositeCost::value(const Vector& x) const { return g_->value(x) + h_->value(x); }

Vector CompositeCost::gradient(const Vector& x) const {
  return g_->gradient(x) + h_->gradient(x);
}

std::optional<Matrix> CompositeCost::hessian(const Vector& x) const {
  auto hg = g_->hessian(x);
  auto hh = h_->hessian(x);
  if (!hg || !hh || !smooth()) return std::nullopt;
  return Matrix(*hg + *hh);
}

SmoothValue CompositeCost::smoothed(const Vector& x, double eps) const {
  SmoothValue a = g_->smoothed(x, eps);
  const SmoothValue b = h_->smoothed(x, eps);
  a.value += b.value;
  a.gradient += b.gradient;
  a.hessian += b.hessian;
  return a;
}

double CompositeCost::smoothing_gap(double eps) const {
  return g_->smoothing_gap(eps) + h_->smoothing_gap(eps);
}

// ---- IndicatorCost

IndicatorCost::IndicatorCost(FeasibleSet set, const Vector& anchor, double tol)
    : set_(std::move(set)), tol_(tol) {
  require_dimension(anchor, set_.dimension(), "indicator cost");
  anchor_ = set_.project(anchor);
}

double IndicatorCost::value(const Vector& x) const {
  require_dimension(x, dimension(), "indicator cost");
  return set_.contains(x, tol_) ? 0.0 : std::numeric_limits<double>::infinity();
}

Vector IndicatorCost::gradient(const Vector& x) const {
  require_dimension(x, dimension(), "indicator cost");
  return Vector::Zero(x.size());
}

SmoothValue IndicatorCost::smoothed(const Vector& x, double /*eps*/) const {
  const Eigen::Index d = dimension();
  return {value(x), Vector::Zero(d), Matrix::Zero(d, d)};
}

// ---- CostFunction

CostFunction::CostFunction(std::shared_ptr<const CostModel> model) : model_(std::move(model)) {
  if (!model_) throw InvalidArgument("CostFunction: null model");
}

double CostFunction::value(const Vector& x) const { return model_->value(x); }

Vector CostFunction::gradient(const Vector& x) const { return model_->gradient(x); }

CostFunction make_quadratic(const Matrix& a, const Vector& y) {
  return CostFunction(std::make_shared<QuadraticCost>(a, y));
}

CostFunction make_quadratic_form(const Matrix& q, const Vector& center, double offset) {
  return CostFunction(std::make_shared<QuadraticCost>(q, center, offset));
}

CostFunction make_norm_tracking(const Vector& v, const Norm& tracking, const Norm& switching,
                                double weight, double offset) {
  return CostFunction(
      std::make_shared<NormTrackingCost>(v, tracking, switching, weight, offset));
}

CostFunction make_composite(const CostFunction& g, const CostFunction& h, double minimizer_tol) {
  return CostFunction(std::make_shared<CompositeCost>(g.shared(), h.shared(), minimizer_tol));
}

CostFunction make_indicator(const FeasibleSet& set, const Vector& anchor) {
  return CostFunction(std::make_shared<IndicatorCost>(set, anchor));
}

}  // namespace obd
