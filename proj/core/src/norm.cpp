#include "obd/norm.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace obd {

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::kL2: return "l2";
    case NormKind::kL1: return "l1";
    case NormKind::kLInf: return "linf";
    case NormKind::kMahalanobis: return "mahalanobis";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "l2") return NormKind::kL2;
  if (name == "l1") return NormKind::kL1;
  if (name == "linf") return NormKind::kLInf;
  if (name == "mahalanobis") return NormKind::kMahalanobis;
  throw InvalidArgument("unknown norm kind '" + name + "'");
}

Norm Norm::l2() { return Norm(); }

Norm Norm::l1() {
  Norm n;
  n.kind_ = NormKind::kL1;
  return n;
}

Norm Norm::linf() {
  Norm n;
  n.kind_ = NormKind::kLInf;
  return n;
}

Norm Norm::mahalanobis(const Matrix& q, double symmetry_tol) {
  if (q.rows() == 0 || q.rows() != q.cols()) {
    throw InvalidArgument("mahalanobis: Q must be a non-empty square matrix");
  }
  if (!q.allFinite()) throw InvalidArgument("mahalanobis: Q has non-finite entries");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale) {
    throw InvalidArgument("mahalanobis: Q is not symmetric");
  }
  const Matrix sym = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success || eig.eigenvalues()(0) <= 0.0 ||
      eig.eigenvalues()(0) <= 1e-14 * eig.eigenvalues().maxCoeff()) {
    throw InvalidArgument("mahalanobis: Q is not positive definite");
  }
  auto data = std::make_shared<MahalanobisData>();
  data->q = sym;
  data->eigenvalues = eig.eigenvalues();
  data->eigenvectors = eig.eigenvectors();
  data->q_inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                eig.eigenvectors().transpose();
  Norm n;
  n.kind_ = NormKind::kMahalanobis;
  n.data_ = std::move(data);
  return n;
}

void Norm::require_q(const Vector& x) const {
  require_dimension(x, data_->q.rows(), "mahalanobis norm");
}

double Norm::operator()(const Vector& x) const {
  switch (kind_) {
    case NormKind::kL2: return x.norm();
    case NormKind::kL1: return x.lpNorm<1>();
    case NormKind::kLInf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    case NormKind::kMahalanobis:
      require_q(x);
      return std::sqrt(std::max(0.0, x.dot(data_->q * x)));
  }
  return 0.0;
}

double Norm::dual(const Vector& z) const {
  switch (kind_) {
    case NormKind::kL2: return z.norm();
    case NormKind::kL1: return z.size() == 0 ? 0.0 : z.lpNorm<Eigen::Infinity>();
    case NormKind::kLInf: return z.lpNorm<1>();
    case NormKind::kMahalanobis:
      require_q(z);
      return std::sqrt(std::max(0.0, z.dot(data_->q_inv * z)));
  }
  return 0.0;
}

Vector Norm::subgradient(const Vector& u) const {
  Vector g = Vector::Zero(u.size());
  const double n = (*this)(u);
  if (n == 0.0) return g;
  switch (kind_) {
    case NormKind::kL2: return u / n;
    case NormKind::kL1:
      for (Eigen::Index i = 0; i < u.size(); ++i) g(i) = (u(i) > 0) - (u(i) < 0);
      return g;
    case NormKind::kLInf: {
      Eigen::Index i = 0;
      u.cwiseAbs().maxCoeff(&i);
      g(i) = u(i) > 0 ? 1.0 : -1.0;
      return g;
    }
    case NormKind::kMahalanobis: return data_->q * u / n;
  }
  return g;
}

SmoothValue Norm::smoothed(const Vector& u, double eps) const {
  if (!(eps > 0.0)) throw InvalidArgument("smoothed norm: eps must be positive");
  const Eigen::Index d = u.size();
  SmoothValue out;
  switch (kind_) {
    case NormKind::kL2: {
      const double r = std::sqrt(u.squaredNorm() + eps * eps);
      out.value = r - eps;
      out.gradient = u / r;
      out.hessian = (Matrix::Identity(d, d) - u * u.transpose() / (r * r)) / r;
      return out;
    }
    case NormKind::kMahalanobis: {
      require_q(u);
      const Vector qu = data_->q * u;
      const double r = std::sqrt(std::max(0.0, u.dot(qu)) + eps * eps);
      out.value = r - eps;
      out.gradient = qu / r;
      out.hessian = (data_->q - qu * qu.transpose() / (r * r)) / r;
      return out;
    }
    case NormKind::kL1: {
      out.value = 0.0;
      out.gradient.resize(d);
      out.hessian = Matrix::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double r = std::sqrt(u(i) * u(i) + eps * eps);
        out.value += r - eps;
        out.gradient(i) = u(i) / r;
        out.hessian(i, i) = eps * eps / (r * r * r);
      }
      return out;
    }
    case NormKind::kLInf: {
      const double top = u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff();
      Vector plus(d), minus(d);
      double total = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        plus(i) = std::exp((u(i) - top) / eps);
        minus(i) = std::exp((-u(i) - top) / eps);
        total += plus(i) + minus(i);
      }
      plus /= total;
      minus /= total;
      out.value = top + eps * std::log(total) - eps * std::log(2.0 * static_cast<double>(d));
      out.gradient = plus - minus;
      out.hessian = (Matrix((plus + minus).asDiagonal()) -
                     out.gradient * out.gradient.transpose()) / eps;
      return out;
    }
  }
  return out;
}

double Norm::smoothing_gap(double eps, Eigen::Index d) const {
  switch (kind_) {
    case NormKind::kL2:
    case NormKind::kMahalanobis: return eps;
    case NormKind::kL1: return eps * static_cast<double>(d);
    case NormKind::kLInf: return eps * std::log(2.0 * static_cast<double>(d));
  }
  return eps;
}

const Matrix& Norm::q() const {
  if (kind_ != NormKind::kMahalanobis) throw InvalidArgument("norm has no Q matrix");
  return data_->q;
}

const Matrix& Norm::q_inverse() const {
  if (kind_ != NormKind::kMahalanobis) throw InvalidArgument("norm has no Q matrix");
  return data_->q_inv;
}

const Vector& Norm::q_eigenvalues() const {
  if (kind_ != NormKind::kMahalanobis) throw InvalidArgument("norm has no Q matrix");
  return data_->eigenvalues;
}

const Matrix& Norm::q_eigenvectors() const {
  if (kind_ != NormKind::kMahalanobis) throw InvalidArgument("norm has no Q matrix");
  return data_->eigenvectors;
}

Eigen::Index Norm::dimension_hint() const {
  return kind_ == NormKind::kMahalanobis ? data_->q.rows() : 0;
}

bool Norm::operator==(const Norm& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != NormKind::kMahalanobis) return true;
  return data_ == other.data_ ||
         (data_->q.rows() == other.data_->q.rows() && data_->q == other.data_->q);
}

NormEquivalence norm_equivalence_constants(const Norm& norm, Eigen::Index d) {
  if (d < 1) throw InvalidArgument("norm_equivalence_constants: d must be >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  switch (norm.kind()) {
    case NormKind::kL2: return {1.0, 1.0};
    case NormKind::kL1: return {1.0 / sd, 1.0};
    case NormKind::kLInf: return {1.0, sd};
    case NormKind::kMahalanobis: {
      const Vector& lam = norm.q_eigenvalues();
      return {1.0 / std::sqrt(lam.maxCoeff()), 1.0 / std::sqrt(lam.minCoeff())};
    }
  }
  return {1.0, 1.0};
}

double norm_ratio_lower_bound(const Norm& a, const Norm& s, Eigen::Index d) {
  if (a == s) return 1.0;
  if (a.kind() == NormKind::kMahalanobis && s.kind() == NormKind::kMahalanobis) {
    // min u^T Qa u / u^T Qs u is the smallest generalized eigenvalue.
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(a.q(), s.q());
    return std::sqrt(std::max(0.0, ges.eigenvalues().minCoeff()));
  }
  // ||u||_a >= ||u||_2 / k2(a) >= k1(s) ||u||_s / k2(a); tight for every other pair.
  return norm_equivalence_constants(s, d).k1 / norm_equivalence_constants(a, d).k2;
}

}  // namespace obd
