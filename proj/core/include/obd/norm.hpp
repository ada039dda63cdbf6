#pragma once

#include <memory>
#include <string>

#include "obd/linalg.hpp"

namespace obd {

enum class NormKind { kL2, kL1, kLInf, kMahalanobis };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

// One of the four supported norms on R^d. Mahalanobis norms carry their matrix Q
// (validated symmetric positive definite at construction) and its factorizations.
class Norm {
 public:
  Norm() = default;  // L2

  static Norm l2();
  static Norm l1();
  static Norm linf();
  // Throws InvalidArgument unless Q is square, symmetric (to symmetry_tol relative) and SPD.
  static Norm mahalanobis(const Matrix& q, double symmetry_tol = 1e-10);

  NormKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }

  double operator()(const Vector& x) const;
  double dual(const Vector& z) const;

  // An element of the subdifferential of ||.|| at u; the zero vector at u = 0.
  Vector subgradient(const Vector& u) const;

  // Twice differentiable approximation s_eps with s_eps(u) <= ||u|| <= s_eps(u) + smoothing_gap(eps, d).
  // L2/Mahalanobis: sqrt(||u||^2 + eps^2) - eps; L1: sum of sqrt(u_i^2 + eps^2) - eps;
  // LInf: eps * log sum_i (exp(u_i/eps) + exp(-u_i/eps)) - eps * log(2d).
  SmoothValue smoothed(const Vector& u, double eps) const;
  double smoothing_gap(double eps, Eigen::Index d) const;

  // Mahalanobis data; throw InvalidArgument for other kinds.
  const Matrix& q() const;
  const Matrix& q_inverse() const;
  const Vector& q_eigenvalues() const;   // ascending
  const Matrix& q_eigenvectors() const;  // orthonormal columns
  Eigen::Index dimension_hint() const;   // d for Mahalanobis, 0 otherwise

  bool operator==(const Norm& other) const;

 private:
  struct MahalanobisData {
    Matrix q;
    Matrix q_inv;
    Vector eigenvalues;
    Matrix eigenvectors;
  };
  NormKind kind_ = NormKind::kL2;
  std::shared_ptr<const MahalanobisData> data_;

  void require_q(const Vector& x) const;
};

inline double dual_norm(const Norm& norm, const Vector& z) { return norm.dual(z); }

// k1 ||x|| <= ||x||_2 <= k2 ||x|| for every x in R^d (tight constants).
struct NormEquivalence {
  double k1 = 1.0;
  double k2 = 1.0;
};
NormEquivalence norm_equivalence_constants(const Norm& norm, Eigen::Index d);

// Largest c with ||u||_a >= c ||u||_s for all u in R^d.
double norm_ratio_lower_bound(const Norm& a, const Norm& s, Eigen::Index d);

}  // namespace obd
