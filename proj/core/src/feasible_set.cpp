#include "obd/feasible_set.hpp"

#include <cmath>
#include <limits>

#include "obd/geometry.hpp"

namespace obd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_dimension(Eigen::Index d, const char* what) {
  if (d < 1) throw InvalidArgument(std::string(what) + ": dimension must be >= 1");
}

void require_nonzero_normal(const Vector& a, const char* what) {
  require_positive_dimension(a.size(), what);
  if (!a.allFinite() || a.squaredNorm() == 0.0) {
    throw InvalidArgument(std::string(what) + ": normal vector must be finite and non-zero");
  }
}
}  // namespace

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kWholeSpace: return "whole_space";
    case SetKind::kBox: return "box";
    case SetKind::kBall: return "ball";
    case SetKind::kSimplex: return "simplex";
    case SetKind::kHalfspace: return "halfspace";
    case SetKind::kHyperplane: return "hyperplane";
  }
  return "unknown";
}

SetKind set_kind_from_string(const std::string& name) {
  if (name == "whole_space") return SetKind::kWholeSpace;
  if (name == "box") return SetKind::kBox;
  if (name == "ball") return SetKind::kBall;
  if (name == "simplex") return SetKind::kSimplex;
  if (name == "halfspace") return SetKind::kHalfspace;
  if (name == "hyperplane") return SetKind::kHyperplane;
  throw InvalidArgument("unknown feasible set kind '" + name + "'");
}

FeasibleSet FeasibleSet::whole_space(Eigen::Index d) {
  require_positive_dimension(d, "whole_space");
  FeasibleSet s;
  s.d_ = d;
  return s;
}

FeasibleSet FeasibleSet::box(const Vector& lo, const Vector& hi) {
  require_positive_dimension(lo.size(), "box");
  require_same_dimension(lo, hi, "box");
  if (!lo.allFinite() || !hi.allFinite() || (lo.array() > hi.array()).any()) {
    throw InvalidArgument("box: bounds must be finite with lo <= hi");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kBox;
  s.d_ = lo.size();
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

FeasibleSet FeasibleSet::ball(const Vector& center, double radius, const Norm& norm) {
  require_positive_dimension(center.size(), "ball");
  if (!center.allFinite() || !(radius >= 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("ball: center must be finite and radius finite, non-negative");
  }
  if (norm.kind() == NormKind::kMahalanobis) {
    require_dimension(center, norm.q().rows(), "ball");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kBall;
  s.d_ = center.size();
  s.lo_ = center;
  s.radius_ = radius;
  s.norm_ = norm;
  return s;
}

FeasibleSet FeasibleSet::simplex(Eigen::Index d, double delta) {
  require_positive_dimension(d, "simplex");
  if (!(delta > 0.0) || static_cast<double>(d) * delta >= 1.0) {
    throw InvalidArgument("simplex: delta must satisfy 0 < delta < 1/d");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kSimplex;
  s.d_ = d;
  s.radius_ = delta;
  return s;
}

FeasibleSet FeasibleSet::halfspace(const Vector& a, double b) {
  require_nonzero_normal(a, "halfspace");
  if (!std::isfinite(b)) throw InvalidArgument("halfspace: offset must be finite");
  FeasibleSet s;
  s.kind_ = SetKind::kHalfspace;
  s.d_ = a.size();
  s.lo_ = a;
  s.radius_ = b;
  return s;
}

FeasibleSet FeasibleSet::hyperplane(const Vector& a, double b) {
  require_nonzero_normal(a, "hyperplane");
  if (!std::isfinite(b)) throw InvalidArgument("hyperplane: offset must be finite");
  FeasibleSet s;
  s.kind_ = SetKind::kHyperplane;
  s.d_ = a.size();
  s.lo_ = a;
  s.radius_ = b;
  return s;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != d_ || !x.allFinite()) return false;
  switch (kind_) {
    case SetKind::kWholeSpace: return true;
    case SetKind::kBox:
      return ((x - lo_).array() >= -tol).all() && ((hi_ - x).array() >= -tol).all();
    case SetKind::kBall: return norm_(x - lo_) <= radius_ + tol * std::max(1.0, radius_);
    case SetKind::kSimplex:
      return std::abs(x.sum() - 1.0) <= tol && (x.array() >= radius_ - tol).all();
    case SetKind::kHalfspace: return lo_.dot(x) <= radius_ + tol * (1.0 + std::abs(radius_));
    case SetKind::kHyperplane:
      return std::abs(lo_.dot(x) - radius_) <= tol * (1.0 + std::abs(radius_));
  }
  return false;
}

bool FeasibleSet::bounded() const {
  return kind_ == SetKind::kBox || kind_ == SetKind::kBall || kind_ == SetKind::kSimplex ||
         (kind_ == SetKind::kHyperplane && d_ == 1);
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case SetKind::kBox: return (hi_ - lo_).norm();
    case SetKind::kBall:
      switch (norm_.kind()) {
        case NormKind::kL2:
        case NormKind::kL1: return 2.0 * radius_;
        case NormKind::kLInf: return 2.0 * radius_ * std::sqrt(static_cast<double>(d_));
        case NormKind::kMahalanobis:
          return 2.0 * radius_ / std::sqrt(norm_.q_eigenvalues().minCoeff());
      }
      return kInf;
    case SetKind::kSimplex:
      return d_ == 1 ? 0.0 : std::sqrt(2.0) * (1.0 - static_cast<double>(d_) * radius_);
    case SetKind::kHyperplane: return d_ == 1 ? 0.0 : kInf;
    case SetKind::kWholeSpace:
    case SetKind::kHalfspace: return kInf;
  }
  return kInf;
}

Vector FeasibleSet::project(const Vector& x) const {
  require_dimension(x, d_, "FeasibleSet::project");
  switch (kind_) {
    case SetKind::kWholeSpace: return x;
    case SetKind::kBox: return x.cwiseMax(lo_).cwiseMin(hi_);
    case SetKind::kBall: {
      const Vector u = x - lo_;
      switch (norm_.kind()) {
        case NormKind::kL2: {
          const double n = u.norm();
          return n <= radius_ ? x : Vector(lo_ + u * (radius_ / n));
        }
        case NormKind::kL1: return lo_ + project_l1_ball(u, radius_).point;
        case NormKind::kLInf: return lo_ + project_linf_ball(u, radius_);
        case NormKind::kMahalanobis:
          return lo_ + project_ellipsoid(norm_.q_eigenvalues(), norm_.q_eigenvectors(), radius_, u)
                           .point;
      }
      return x;
    }
    case SetKind::kSimplex: {
      const double free_mass = 1.0 - static_cast<double>(d_) * radius_;
      return (project_simplex((x.array() - radius_).matrix(), free_mass).array() + radius_)
          .matrix();
    }
    case SetKind::kHalfspace: {
      const double excess = lo_.dot(x) - radius_;
      return excess <= 0.0 ? x : Vector(x - excess / lo_.squaredNorm() * lo_);
    }
    case SetKind::kHyperplane:
      return x - (lo_.dot(x) - radius_) / lo_.squaredNorm() * lo_;
  }
  return x;
}

Vector FeasibleSet::interior_point() const {
  switch (kind_) {
    case SetKind::kWholeSpace: return Vector::Zero(d_);
    case SetKind::kBox: return 0.5 * (lo_ + hi_);
    case SetKind::kBall: return lo_;
    case SetKind::kSimplex: return Vector::Constant(d_, 1.0 / static_cast<double>(d_));
    case SetKind::kHalfspace: return (radius_ - 1.0) / lo_.squaredNorm() * lo_;
    case SetKind::kHyperplane: return radius_ / lo_.squaredNorm() * lo_;
  }
  return Vector::Zero(d_);
}

}  // namespace obd
