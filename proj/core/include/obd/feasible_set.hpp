#pragma once

#include <string>

#include "obd/linalg.hpp"
#include "obd/norm.hpp"

namespace obd {

enum class SetKind { kWholeSpace, kBox, kBall, kSimplex, kHalfspace, kHyperplane };

std::string to_string(SetKind kind);
SetKind set_kind_from_string(const std::string& name);

// Decision set X. Halfspace is {a^T x <= b}, Hyperplane {a^T x = b},
// Simplex(delta) {sum x = 1, x_i >= delta}.
class FeasibleSet {
 public:
  FeasibleSet() = default;  // whole space of dimension 0; use the factories

  static FeasibleSet whole_space(Eigen::Index d);
  static FeasibleSet box(const Vector& lo, const Vector& hi);
  static FeasibleSet ball(const Vector& center, double radius, const Norm& norm = Norm::l2());
  static FeasibleSet simplex(Eigen::Index d, double delta);
  static FeasibleSet halfspace(const Vector& a, double b);
  static FeasibleSet hyperplane(const Vector& a, double b);

  SetKind kind() const { return kind_; }
  Eigen::Index dimension() const { return d_; }

  bool contains(const Vector& x, double tol = 1e-9) const;
  // Euclidean diameter; infinity for unbounded sets.
  double diameter() const;
  // Euclidean projection (closed form for every kind).
  Vector project(const Vector& x) const;
  Vector interior_point() const;
  bool bounded() const;

  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Vector& center() const { return lo_; }
  double radius() const { return radius_; }
  const Norm& ball_norm() const { return norm_; }
  double delta() const { return radius_; }
  const Vector& normal() const { return lo_; }
  double offset() const { return radius_; }

 private:
  SetKind kind_ = SetKind::kWholeSpace;
  Eigen::Index d_ = 0;
  Vector lo_;  // box lower bounds, ball center, or halfspace/hyperplane normal
  Vector hi_;  // box upper bounds
  double radius_ = 0.0;  // ball radius, simplex delta, or halfspace/hyperplane offset
  Norm norm_;
};

}  // namespace obd
