#pragma once

#include <cmath>
#include <random>

#include <Eigen/QR>

namespace obd {

template <typename Rng>
Matrix random_orthogonal(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

template <typename Rng>
Matrix random_conditioned_matrix(Eigen::Index d, double cond, Rng& rng) {
  const Matrix u = random_orthogonal(d, rng);
  const Matrix v = random_orthogonal(d, rng);
  Vector sigma(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s = d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
    sigma(i) = std::pow(cond, s);
  }
  return u * sigma.asDiagonal() * v.transpose();
}

}  // namespace obd
