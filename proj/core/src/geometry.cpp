#include "obd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace obd {

L1BallProjection project_l1_ball(const Vector& u, double radius) {
  if (radius < 0.0) throw InvalidArgument("project_l1_ball: negative radius");
  if (u.lpNorm<1>() <= radius) return {u, 0.0};
  if (radius == 0.0) return {Vector::Zero(u.size()), u.cwiseAbs().maxCoeff()};
  std::vector<double> a(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) a[i] = std::abs(u(i));
  std::sort(a.begin(), a.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cumulative += a[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (a[k] - candidate > 0.0) theta = candidate;
  }
  Vector x(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double m = std::max(std::abs(u(i)) - theta, 0.0);
    x(i) = u(i) >= 0 ? m : -m;
  }
  return {x, theta};
}

Vector project_linf_ball(const Vector& u, double radius) {
  if (radius < 0.0) throw InvalidArgument("project_linf_ball: negative radius");
  return u.cwiseMax(-radius).cwiseMin(radius);
}

Vector project_simplex(const Vector& u, double mass) {
  if (mass < 0.0) throw InvalidArgument("project_simplex: negative mass");
  std::vector<double> a(u.data(), u.data() + u.size());
  std::sort(a.begin(), a.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cumulative += a[k];
    const double candidate = (cumulative - mass) / static_cast<double>(k + 1);
    if (a[k] - candidate > 0.0) theta = candidate;
  }
  return (u.array() - theta).cwiseMax(0.0).matrix();
}

EllipsoidProjection project_ellipsoid(const Vector& lambda, const Matrix& v, double radius,
                                      const Vector& u, int max_iter) {
  if (radius < 0.0) throw InvalidArgument("project_ellipsoid: negative radius");
  const Vector w = v.transpose() * u;
  const double r2 = radius * radius;
  auto level = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double y = w(i) / (1.0 + mu * lambda(i));
      s += lambda(i) * y * y;
    }
    return s;
  };
  if (level(0.0) <= r2) return {u, 0.0, 0};
  if (radius == 0.0) {
    return {Vector::Zero(u.size()), std::numeric_limits<double>::infinity(), 0};
  }
  double lo = 0.0;
  double hi = std::sqrt((w.array().square() / lambda.array()).sum()) / radius;
  int it = 0;
  for (; it < max_iter && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) > r2 ? lo : hi) = mid;
  }
  // hi is on the feasible side.
  const Vector y = (w.array() / (1.0 + hi * lambda.array())).matrix();
  return {v * y, hi, it};
}

}  // namespace obd
