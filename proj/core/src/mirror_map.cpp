#include "obd/mirror_map.hpp"

#include <cmath>

namespace obd {

std::string to_string(MirrorKind kind) {
  switch (kind) {
    case MirrorKind::kEuclidean: return "euclidean";
    case MirrorKind::kMahalanobis: return "mahalanobis";
    case MirrorKind::kNegativeEntropy: return "entropy";
  }
  return "unknown";
}

MirrorMap MirrorMap::euclidean() { return MirrorMap(); }

MirrorMap MirrorMap::mahalanobis(const Matrix& q) {
  MirrorMap map;
  map.kind_ = MirrorKind::kMahalanobis;
  map.norm_ = Norm::mahalanobis(q);
  return map;
}

MirrorMap MirrorMap::negative_entropy(double delta) {
  if (!(delta > 0.0) || delta >= 1.0) {
    throw InvalidArgument("negative_entropy: delta must lie in (0, 1)");
  }
  MirrorMap map;
  map.kind_ = MirrorKind::kNegativeEntropy;
  map.norm_ = Norm::l1();
  map.delta_ = delta;
  map.m_ = 1.0 / (2.0 * std::log(2.0));
  map.big_m_ = 1.0 / (delta * std::log(2.0));
  return map;
}

MirrorMap MirrorMap::with_grad_bound(double g) const {
  if (!(g >= 0.0)) throw InvalidArgument("with_grad_bound: G must be non-negative");
  MirrorMap copy = *this;
  copy.grad_bound_ = g;
  return copy;
}

bool MirrorMap::in_domain(const Vector& x) const {
  if (!x.allFinite()) return false;
  if (kind_ == MirrorKind::kMahalanobis && x.size() != norm_.q().rows()) return false;
  if (kind_ == MirrorKind::kNegativeEntropy) return (x.array() >= 0.5 * delta_).all();
  return true;
}

void MirrorMap::check_domain(const Vector& x) const {
  if (kind_ == MirrorKind::kMahalanobis) require_dimension(x, norm_.q().rows(), "mirror map");
  if (!in_domain(x)) {
    throw DomainError(name() + " mirror map: point outside domain" +
                      (kind_ == MirrorKind::kNegativeEntropy ? " (coordinate below delta/2)" : ""));
  }
}

double MirrorMap::phi(const Vector& x) const {
  check_domain(x);
  switch (kind_) {
    case MirrorKind::kEuclidean: return 0.5 * x.squaredNorm();
    case MirrorKind::kMahalanobis: return 0.5 * x.dot(norm_.q() * x);
    case MirrorKind::kNegativeEntropy: return (x.array() * x.array().log()).sum();
  }
  return 0.0;
}

Vector MirrorMap::grad(const Vector& x) const {
  check_domain(x);
  switch (kind_) {
    case MirrorKind::kEuclidean: return x;
    case MirrorKind::kMahalanobis: return norm_.q() * x;
    case MirrorKind::kNegativeEntropy: return (x.array().log() + 1.0).matrix();
  }
  return x;
}

Vector MirrorMap::inv_grad(const Vector& z) const {
  switch (kind_) {
    case MirrorKind::kEuclidean: return z;
    case MirrorKind::kMahalanobis:
      require_dimension(z, norm_.q().rows(), "mirror map");
      return norm_.q_inverse() * z;
    case MirrorKind::kNegativeEntropy: return (z.array() - 1.0).exp().matrix();
  }
  return z;
}

Matrix MirrorMap::hessian(const Vector& x) const {
  check_domain(x);
  switch (kind_) {
    case MirrorKind::kEuclidean: return Matrix::Identity(x.size(), x.size());
    case MirrorKind::kMahalanobis: return norm_.q();
    case MirrorKind::kNegativeEntropy: return Matrix(x.cwiseInverse().asDiagonal());
  }
  return Matrix();
}

double bregman_divergence(const MirrorMap& map, const Vector& x, const Vector& y) {
  require_same_dimension(x, y, "bregman_divergence");
  map.check_domain(x);
  map.check_domain(y);
  const Vector u = x - y;
  switch (map.kind()) {
    case MirrorKind::kEuclidean: return 0.5 * u.squaredNorm();
    case MirrorKind::kMahalanobis: return 0.5 * u.dot(map.norm().q() * u);
    case MirrorKind::kNegativeEntropy:
      return (x.array() * (x.array() / y.array()).log() - x.array() + y.array()).sum();
  }
  return 0.0;
}

}  // namespace obd
