#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "obd/errors.hpp"

namespace obd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A decision x_t in R^d.
using Point = Eigen::VectorXd;
// x_1, ..., x_T (the start x_0 is stored separately).
using Trajectory = std::vector<Point>;

inline bool all_finite(const Vector& x) { return x.allFinite(); }

inline void require_same_dimension(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  }
}

inline void require_dimension(const Vector& a, Eigen::Index d, const char* what) {
  if (a.size() != d) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(d) +
                            ", got " + std::to_string(a.size()));
  }
}

// Value, gradient and Hessian of a twice differentiable function at one point.
struct SmoothValue {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

}  // namespace obd
