#pragma once

#include <optional>
#include <string>

#include "obd/linalg.hpp"
#include "obd/norm.hpp"

namespace obd {

enum class MirrorKind { kEuclidean, kMahalanobis, kNegativeEntropy };

std::string to_string(MirrorKind kind);

// Potential Phi together with the moduli (m, M) of its Bregman sandwich in norm():
//   (m/2)||x - y||^2 <= D_Phi(x, y) <= (M/2)||x - y||^2.
// Euclidean: 1/2 ||x||_2^2, (1, 1) in l2.
// Mahalanobis: 1/2 x^T Q x, (1, 1) in ||.||_Q.
// Negative entropy: sum x_i ln x_i, (1/(2 ln 2), 1/(delta ln 2)) in l1 on Simplex(delta).
class MirrorMap {
 public:
  MirrorMap() = default;  // Euclidean

  static MirrorMap euclidean();
  static MirrorMap mahalanobis(const Matrix& q);
  static MirrorMap negative_entropy(double delta);

  MirrorKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }

  double phi(const Vector& x) const;
  Vector grad(const Vector& x) const;
  Vector inv_grad(const Vector& z) const;
  Matrix hessian(const Vector& x) const;

  double strong_convexity() const { return m_; }
  double smoothness() const { return big_m_; }
  double condition_number() const { return big_m_ / m_; }
  const Norm& norm() const { return norm_; }
  double delta() const { return delta_; }

  // Optional bound G >= ||grad Phi(x)||_* over the feasible set.
  std::optional<double> grad_bound() const { return grad_bound_; }
  MirrorMap with_grad_bound(double g) const;

  // Throws DomainError if x is outside the domain (entropy: any coordinate < delta/2).
  void check_domain(const Vector& x) const;
  bool in_domain(const Vector& x) const;

 private:
  MirrorKind kind_ = MirrorKind::kEuclidean;
  Norm norm_;
  double m_ = 1.0;
  double big_m_ = 1.0;
  double delta_ = 0.0;
  std::optional<double> grad_bound_;
};

// D_Phi(x, y) = Phi(x) - Phi(y) - <grad Phi(y), x - y>, evaluated in closed form per kind.
double bregman_divergence(const MirrorMap& map, const Vector& x, const Vector& y);

}  // namespace obd
