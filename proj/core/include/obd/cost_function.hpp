#pragma once

#include <memory>
#include <optional>
#include <string>

#include "obd/feasible_set.hpp"
#include "obd/linalg.hpp"
#include "obd/norm.hpp"

namespace obd {

enum class CostKind { kQuadratic, kNormTracking, kComposite, kIndicator };

std::string to_string(CostKind kind);

// Convex hitting cost f_t with a known minimizer. Implementations are immutable.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual CostKind kind() const = 0;
  virtual Eigen::Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  // Gradient, or a subgradient where f is not differentiable (zero at the minimizer).
  virtual Vector gradient(const Vector& x) const = 0;
  virtual std::optional<Matrix> hessian(const Vector& /*x*/) const { return std::nullopt; }
  // Twice differentiable approximation with f - gap <= smoothed <= f; exact for smooth costs.
  virtual SmoothValue smoothed(const Vector& x, double eps) const = 0;
  virtual double smoothing_gap(double /*eps*/) const { return 0.0; }
  virtual const Vector& minimizer() const = 0;
  virtual double min_value() const = 0;
  virtual std::optional<double> alpha() const { return std::nullopt; }
  virtual bool smooth() const = 0;
};

// (x - c)^T Q (x - c) + r, or ||A x - y||^2 when built from (A, y).
class QuadraticCost final : public CostModel {
 public:
  QuadraticCost(Matrix q, Vector center, double offset);
  QuadraticCost(Matrix a, Vector y);

  CostKind kind() const override { return CostKind::kQuadratic; }
  Eigen::Index dimension() const override { return center_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<Matrix> hessian(const Vector& x) const override;
  SmoothValue smoothed(const Vector& x, double eps) const override;
  const Vector& minimizer() const override { return center_; }
  double min_value() const override { return offset_; }
  bool smooth() const override { return true; }

  const Matrix& q() const { return q_; }
  const Vector& center() const { return center_; }
  double offset() const { return offset_; }
  bool has_factor() const { return a_.size() > 0; }
  const Matrix& a() const { return a_; }
  const Vector& y() const { return y_; }

 private:
  Matrix q_;
  Vector center_;
  double offset_ = 0.0;
  Matrix a_;
  Vector y_;
};

// weight * ||x - v||_a + offset; alpha = weight * inf ||u||_a / ||u||_switching.
class NormTrackingCost final : public CostModel {
 public:
  NormTrackingCost(Vector v, Norm tracking, Norm switching, double weight, double offset);

  CostKind kind() const override { return CostKind::kNormTracking; }
  Eigen::Index dimension() const override { return v_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  SmoothValue smoothed(const Vector& x, double eps) const override;
  double smoothing_gap(double eps) const override;
  const Vector& minimizer() const override { return v_; }
  double min_value() const override { return offset_; }
  std::optional<double> alpha() const override { return alpha_; }
  bool smooth() const override { return false; }

  const Norm& tracking_norm() const { return tracking_; }
  const Norm& switching_norm() const { return switching_; }
  double weight() const { return weight_; }
  double offset() const { return offset_; }

 private:
  Vector v_;
  Norm tracking_;
  Norm switching_;
  double weight_;
  double offset_;
  double alpha_;
};

class CostFunction;

// g + h with a shared minimizer; alpha taken from g.
class CompositeCost final : public CostModel {
 public:
  CompositeCost(std::shared_ptr<const CostModel> g, std::shared_ptr<const CostModel> h,
                double minimizer_tol);

  CostKind kind() const override { return CostKind::kComposite; }
  Eigen::Index dimension() const override { return g_->dimension(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<Matrix> hessian(const Vector& x) const override;
  SmoothValue smoothed(const Vector& x, double eps) const override;
  double smoothing_gap(double eps) const override;
  const Vector& minimizer() const override { return g_->minimizer(); }
  double min_value() const override { return g_->min_value() + h_->min_value(); }
  std::optional<double> alpha() const override { return g_->alpha(); }
  bool smooth() const override { return g_->smooth() && h_->smooth(); }

  const CostModel& g() const { return *g_; }
  const CostModel& h() const { return *h_; }

 private:
  std::shared_ptr<const CostModel> g_;
  std::shared_ptr<const CostModel> h_;
};

// 0 on a convex set, +infinity off it (a hard constraint round).
class IndicatorCost final : public CostModel {
 public:
  IndicatorCost(FeasibleSet set, const Vector& anchor, double tol = 1e-9);

  CostKind kind() const override { return CostKind::kIndicator; }
  Eigen::Index dimension() const override { return set_.dimension(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  SmoothValue smoothed(const Vector& x, double eps) const override;
  const Vector& minimizer() const override { return anchor_; }
  double min_value() const override { return 0.0; }
  bool smooth() const override { return false; }

  const FeasibleSet& set() const { return set_; }

 private:
  FeasibleSet set_;
  Vector anchor_;
  double tol_;
};

// Shared handle to an immutable cost model.
class CostFunction {
 public:
  CostFunction() = default;
  explicit CostFunction(std::shared_ptr<const CostModel> model);

  CostKind kind() const { return model_->kind(); }
  Eigen::Index dimension() const { return model_->dimension(); }
  double operator()(const Vector& x) const { return value(x); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  std::optional<Matrix> hessian(const Vector& x) const { return model_->hessian(x); }
  SmoothValue smoothed(const Vector& x, double eps) const { return model_->smoothed(x, eps); }
  double smoothing_gap(double eps) const { return model_->smoothing_gap(eps); }
  const Vector& minimizer() const { return model_->minimizer(); }
  double min_value() const { return model_->min_value(); }
  std::optional<double> alpha() const { return model_->alpha(); }
  bool smooth() const { return model_->smooth(); }
  bool is_indicator() const { return model_->kind() == CostKind::kIndicator; }

  const CostModel& model() const { return *model_; }
  const std::shared_ptr<const CostModel>& shared() const { return model_; }

  template <typename T>
  const T* as() const {
    return dynamic_cast<const T*>(model_.get());
  }

  explicit operator bool() const { return static_cast<bool>(model_); }

 private:
  std::shared_ptr<const CostModel> model_;
};

// ||A x - y||_2^2; A must have full column rank.
CostFunction make_quadratic(const Matrix& a, const Vector& y);
// (x - center)^T Q (x - center) + offset with Q symmetric positive definite.
CostFunction make_quadratic_form(const Matrix& q, const Vector& center, double offset = 0.0);
CostFunction make_norm_tracking(const Vector& v, const Norm& tracking,
                                const Norm& switching = Norm::l2(), double weight = 1.0,
                                double offset = 0.0);
CostFunction make_composite(const CostFunction& g, const CostFunction& h,
                            double minimizer_tol = 1e-9);
CostFunction make_indicator(const FeasibleSet& set, const Vector& anchor);

}  // namespace obd
