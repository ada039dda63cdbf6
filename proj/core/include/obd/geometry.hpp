#pragma once

#include "obd/linalg.hpp"

namespace obd {

// Euclidean projections onto elementary convex sets.

struct L1BallProjection {
  Vector point;
  double threshold = 0.0;  // soft-threshold level; 0 when u is already inside
};
L1BallProjection project_l1_ball(const Vector& u, double radius);

Vector project_linf_ball(const Vector& u, double radius);

// {x : x >= 0, sum x = mass}
Vector project_simplex(const Vector& u, double mass = 1.0);

struct EllipsoidProjection {
  Vector point;
  double multiplier = 0.0;  // mu with u - x = mu * Q x
  int iterations = 0;
};
// Projects u onto {x : x^T Q x <= r^2} given Q = V diag(lambda) V^T.
EllipsoidProjection project_ellipsoid(const Vector& lambda, const Matrix& v, double radius,
                                      const Vector& u, int max_iter = 200);

}  // namespace obd
