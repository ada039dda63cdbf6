#include "obd/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "obd/geometry.hpp"

namespace obd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Phi and its derivatives without the entropy domain guard: inner iterates may pass below
// delta/2 on their way to a feasible answer.
double phi_raw(const MirrorMap& map, const Vector& x) {
  switch (map.kind()) {
    case MirrorKind::kEuclidean: return 0.5 * x.squaredNorm();
    case MirrorKind::kMahalanobis: return 0.5 * x.dot(map.norm().q() * x);
    case MirrorKind::kNegativeEntropy:
      if ((x.array() <= 0.0).any()) return kInf;
      return (x.array() * x.array().log()).sum();
  }
  return kInf;
}

Vector grad_raw(const MirrorMap& map, const Vector& x) {
  switch (map.kind()) {
    case MirrorKind::kEuclidean: return x;
    case MirrorKind::kMahalanobis: return map.norm().q() * x;
    case MirrorKind::kNegativeEntropy: return (x.array().log() + 1.0).matrix();
  }
  return x;
}

Matrix hessian_raw(const MirrorMap& map, const Vector& x) {
  switch (map.kind()) {
    case MirrorKind::kEuclidean: return Matrix::Identity(x.size(), x.size());
    case MirrorKind::kMahalanobis: return map.norm().q();
    case MirrorKind::kNegativeEntropy: return Matrix(x.cwiseInverse().asDiagonal());
  }
  return Matrix();
}

struct Equalities {
  Matrix a;
  Vector b;
};

std::optional<Equalities> equalities_of(const FeasibleSet& set) {
  const Eigen::Index d = set.dimension();
  if (set.kind() == SetKind::kHyperplane) {
    return Equalities{set.normal().transpose(), Vector::Constant(1, set.offset())};
  }
  if (set.kind() == SetKind::kSimplex) {
    return Equalities{Matrix::Ones(1, d), Vector::Ones(1)};
  }
  return std::nullopt;
}

// F(x) = D_Phi(x, ref) + eta * f_eps(x); f may be absent (pure Bregman projection).
class Regularized {
 public:
  Regularized(const MirrorMap& map, const CostFunction* f, double eta, double eps,
              const Vector& ref)
      : map_(map), f_(f), eta_(eta), eps_(eps), ref_(ref),
        phi_ref_(phi_raw(map, ref)), grad_ref_(grad_raw(map, ref)) {}

  double value(const Vector& x) const {
    const double p = phi_raw(map_, x);
    if (!std::isfinite(p)) return kInf;
    double v = p - phi_ref_ - grad_ref_.dot(x - ref_);
    if (f_ != nullptr && eta_ > 0.0) v += eta_ * cost(x);
    return v;
  }

  void evaluate(const Vector& x, double& value, Vector& grad, Matrix* hess) const {
    const double p = phi_raw(map_, x);
    value = p - phi_ref_ - grad_ref_.dot(x - ref_);
    grad = grad_raw(map_, x) - grad_ref_;
    if (hess != nullptr) *hess = hessian_raw(map_, x);
    if (f_ != nullptr && eta_ > 0.0) {
      const SmoothValue s = f_->smoothed(x, eps_);
      value += eta_ * s.value;
      grad += eta_ * s.gradient;
      if (hess != nullptr) *hess += eta_ * s.hessian;
    }
  }

  bool entropy() const { return map_.kind() == MirrorKind::kNegativeEntropy; }

 private:
  double cost(const Vector& x) const {
    return f_->smooth() ? f_->value(x) : f_->smoothed(x, eps_).value;
  }

  const MirrorMap& map_;
  const CostFunction* f_;
  double eta_;
  double eps_;
  Vector ref_;
  double phi_ref_;
  Vector grad_ref_;
};

struct InnerResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on F, optionally restricted to {A x = b} (x must already satisfy it).
InnerResult newton(const Regularized& problem, Vector x, const Equalities* eq, int max_iter) {
  const Eigen::Index d = x.size();
  const Eigen::Index k = eq != nullptr ? eq->a.rows() : 0;
  InnerResult out;
  double fx = 0.0;
  Vector g;
  Matrix h;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    problem.evaluate(x, fx, g, &h);
    Vector dx;
    if (k == 0) {
      Eigen::LDLT<Matrix> ldlt(h);
      dx = ldlt.solve(-g);
      if (!dx.allFinite() || g.dot(dx) > 0.0) dx = Eigen::PartialPivLU<Matrix>(h).solve(-g);
    } else {
      Matrix kkt = Matrix::Zero(d + k, d + k);
      kkt.topLeftCorner(d, d) = h;
      kkt.topRightCorner(d, k) = eq->a.transpose();
      kkt.bottomLeftCorner(k, d) = eq->a;
      Vector rhs = Vector::Zero(d + k);
      rhs.head(d) = -g;
      // Re-centre on the affine set to remove drift.
      rhs.tail(k) = eq->b - eq->a * x;
      dx = Eigen::PartialPivLU<Matrix>(kkt).solve(rhs).head(d);
    }
    if (!dx.allFinite()) break;
    const double decrement = -g.dot(dx);
    if (dx.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>()) ||
        decrement <= 1e-30) {
      out.converged = true;
      break;
    }
    double t = 1.0;
    if (problem.entropy()) {
      while (t > 1e-20 && ((x + t * dx).array() <= 0.0).any()) t *= 0.5;
    }
    double f_new = problem.value(x + t * dx);
    int halvings = 0;
    while (!(f_new <= fx - 1e-4 * t * decrement + 8.0 * kEps * std::abs(fx)) && halvings < 80) {
      t *= 0.5;
      f_new = problem.value(x + t * dx);
      ++halvings;
    }
    if (halvings == 80) {
      out.converged = decrement <= 1e-20 * (1.0 + std::abs(fx));
      break;
    }
    x += t * dx;
    if (t == 1.0 && dx.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

// Accelerated projected gradient with backtracking and gradient-based restart. The curvature
// and stopping tests use gradients only, so they stay meaningful below the rounding level of F.
InnerResult projected_gradient(const Regularized& problem, const FeasibleSet& set, Vector x,
                               int max_iter) {
  InnerResult out;
  x = set.project(x);
  Vector x_old = x;
  double lip = 1.0;
  double theta = 1.0;
  double fy = 0.0;
  double f_new = 0.0;
  Vector gy;
  Vector g_new;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    Vector y = set.project(x + ((theta - 1.0) / theta_next) * (x - x_old));
    problem.evaluate(y, fy, gy, nullptr);
    if (!std::isfinite(fy)) {
      y = x;
      problem.evaluate(y, fy, gy, nullptr);
    }
    Vector x_new;
    for (int bt = 0; bt < 100; ++bt) {
      x_new = set.project(y - gy / lip);
      const Vector step = x_new - y;
      problem.evaluate(x_new, f_new, g_new, nullptr);
      if (std::isfinite(f_new) && g_new.allFinite() &&
          (g_new - gy).dot(step) <= lip * step.squaredNorm() * (1.0 + 1e-12)) {
        break;
      }
      lip *= 2.0;
    }
    const Vector step = x_new - y;
    const bool restart = (y - x_new).dot(x_new - x) > 0.0;
    x_old = x;
    x = x_new;
    theta = restart ? 1.0 : theta_next;
    lip *= 0.9;
    if (step.norm() <= 1e-13 * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

double dual_norm_modulo(const Norm& norm, const Vector& r, const Vector& a) {
  // min over nu of ||r + nu a||_*.
  if (norm.kind() == NormKind::kL2) return (r - (a.dot(r) / a.squaredNorm()) * a).norm();
  if (norm.kind() == NormKind::kMahalanobis) {
    const Vector qa = norm.q_inverse() * a;
    return norm.dual(r - (qa.dot(r) / qa.dot(a)) * a);
  }
  const double bound = 2.0 * norm.dual(r) / norm.dual(a);
  double lo = -bound;
  double hi = bound;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + bound); ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (norm.dual(r + m1 * a) <= norm.dual(r + m2 * a)) hi = m2; else lo = m1;
  }
  return norm.dual(r + 0.5 * (lo + hi) * a);
}

void require_feasible_start(const FeasibleSet& feasible, const Vector& x_prev) {
  if (!feasible.contains(x_prev, 1e-7)) {
    throw DomainError("project_sublevel: x_prev lies outside the feasible set");
  }
}

Vector kl_project_simplex(const Vector& x, double delta) {
  const Eigen::Index d = x.size();
  std::vector<bool> fixed(d, false);
  double c = 0.0;
  for (Eigen::Index round = 0; round <= d; ++round) {
    double free_sum = 0.0;
    Eigen::Index n_fixed = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (fixed[i]) ++n_fixed; else free_sum += x(i);
    }
    c = (1.0 - delta * static_cast<double>(n_fixed)) / free_sum;
    bool changed = false;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!fixed[i] && c * x(i) < delta) {
        fixed[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Vector y(d);
  for (Eigen::Index i = 0; i < d; ++i) y(i) = fixed[i] ? delta : c * x(i);
  return y;
}

}  // namespace

std::string to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::kUnchanged: return "unchanged";
    case ProjectionMethod::kClosedForm: return "closed_form";
    case ProjectionMethod::kSpectral: return "spectral";
    case ProjectionMethod::kDualBisection: return "dual_bisection";
    case ProjectionMethod::kSetOnly: return "set_only";
    case ProjectionMethod::kIterative: return "iterative";
  }
  return "unknown";
}

SetProjection project_set(const MirrorMap& map, const FeasibleSet& set, const Vector& x,
                          const ProjectionOptions& opts) {
  require_dimension(x, set.dimension(), "project_set");
  if (!x.allFinite()) throw InvalidArgument("project_set: x must be finite");
  if (set.kind() == SetKind::kWholeSpace) return {x, ProjectionMethod::kClosedForm, 0};
  switch (map.kind()) {
    case MirrorKind::kEuclidean: return {set.project(x), ProjectionMethod::kClosedForm, 0};
    case MirrorKind::kMahalanobis: {
      const Matrix& qinv = map.norm().q_inverse();
      if (set.kind() == SetKind::kHyperplane || set.kind() == SetKind::kHalfspace) {
        const Vector& a = set.normal();
        const double excess = a.dot(x) - set.offset();
        if (set.kind() == SetKind::kHalfspace && excess <= 0.0) {
          return {x, ProjectionMethod::kClosedForm, 0};
        }
        const Vector qa = qinv * a;
        return {x - (excess / a.dot(qa)) * qa, ProjectionMethod::kClosedForm, 0};
      }
      if (set.kind() == SetKind::kBall && set.ball_norm() == map.norm()) {
        const Vector u = x - set.center();
        const double n = map.norm()(u);
        if (n <= set.radius()) return {x, ProjectionMethod::kClosedForm, 0};
        return {set.center() + u * (set.radius() / n), ProjectionMethod::kClosedForm, 0};
      }
      break;
    }
    case MirrorKind::kNegativeEntropy: {
      if ((x.array() <= 0.0).any()) {
        throw DomainError("project_set: entropy projection needs positive coordinates");
      }
      if (set.kind() == SetKind::kBox) return {set.project(x), ProjectionMethod::kClosedForm, 0};
      if (set.kind() == SetKind::kSimplex) {
        return {kl_project_simplex(x, set.delta()), ProjectionMethod::kClosedForm, 0};
      }
      break;
    }
  }
  const Regularized problem(map, nullptr, 0.0, 0.0, x);
  InnerResult r = projected_gradient(problem, set, x, opts.inner_max_iter);
  if (!r.converged) {
    throw ConvergenceError("project_set: projected gradient did not converge for " + map.name() +
                           " map on " + to_string(set.kind()));
  }
  return {r.x, ProjectionMethod::kIterative, r.iterations};
}

Vector solve_regularized(const MirrorMap& map, const CostFunction& f, double eta,
                         const Vector& x_prev, const FeasibleSet& feasible,
                         const ProjectionOptions& opts, const Vector* warm_start) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("solve_regularized: eta must be finite and non-negative");
  }
  require_dimension(x_prev, f.dimension(), "solve_regularized");
  require_dimension(x_prev, feasible.dimension(), "solve_regularized");
  if (f.is_indicator()) throw InvalidArgument("solve_regularized: indicator costs use project_set");
  if (eta == 0.0) return project_set(map, feasible, x_prev, opts).x;

  const std::optional<Equalities> eq = equalities_of(feasible);
  Vector x = warm_start != nullptr ? *warm_start : x_prev;
  if (eq && (eq->a * x - eq->b).lpNorm<Eigen::Infinity>() > 1e-12) x = feasible.project(x);
  if (map.kind() == MirrorKind::kNegativeEntropy && (x.array() <= 0.0).any()) {
    x = feasible.project(x_prev);
  }

  std::vector<double> schedule{0.0};
  if (!f.smooth()) {
    const double scale = std::max(1.0, (x_prev - f.minimizer()).norm());
    schedule = {1e-2 * scale, 1e-4 * scale, 1e-6 * scale, 1e-8 * scale, 1e-10 * scale};
  }
  InnerResult r;
  for (double eps : schedule) {
    const Regularized problem(map, &f, eta, eps, x_prev);
    r = newton(problem, x, eq ? &*eq : nullptr, opts.newton_max_iter);
    x = r.x;
  }
  if (r.converged && feasible.contains(x, 1e-12)) return x;

  const Regularized problem(map, &f, eta, schedule.back(), x_prev);
  r = projected_gradient(problem, feasible, feasible.contains(x, 1e-12) ? x : feasible.project(x),
                         opts.inner_max_iter);
  if (!r.converged) {
    throw ConvergenceError("solve_regularized: inner solver did not converge (eta = " +
                           std::to_string(eta) + ")");
  }
  return r.x;
}

// x - c = U y with y_i = w_i / (1 + 2 eta lambda_i), f = sum lambda_i y_i^2 + offset.
struct SublevelProjector::Spectral {
  Vector center;
  double offset = 0.0;
  Matrix u;
  Vector lambda;
  Vector w;

  double excess(double eta) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double y = w(i) / (1.0 + 2.0 * eta * lambda(i));
      s += lambda(i) * y * y;
    }
    return s;
  }

  Vector point(double eta) const {
    return center + u * (w.array() / (1.0 + 2.0 * eta * lambda.array())).matrix();
  }
};

SublevelProjector::SublevelProjector(MirrorMap map, CostFunction f, Vector x_prev,
                                     FeasibleSet feasible, ProjectionOptions opts)
    : map_(std::move(map)),
      f_(std::move(f)),
      x_prev_(std::move(x_prev)),
      feasible_(std::move(feasible)),
      opts_(opts) {
  require_dimension(x_prev_, f_.dimension(), "project_sublevel");
  require_dimension(x_prev_, feasible_.dimension(), "project_sublevel");
  if (f_.is_indicator()) throw InvalidArgument("project_sublevel: indicator costs use project_set");
  require_feasible_start(feasible_, x_prev_);
  map_.check_domain(x_prev_);
  start_ = x_prev_;
  start_value_ = f_.value(start_);

  const auto* quad = f_.as<QuadraticCost>();
  if (quad != nullptr && map_.kind() != MirrorKind::kNegativeEntropy) {
    auto s = std::make_unique<Spectral>();
    s->center = quad->center();
    s->offset = quad->offset();
    if (map_.kind() == MirrorKind::kEuclidean) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(quad->q());
      s->u = eig.eigenvectors();
      s->lambda = eig.eigenvalues().cwiseMax(0.0);
      s->w = s->u.transpose() * (x_prev_ - s->center);
    } else {
      // Q_f u = lambda P u with U^T P U = I.
      const Matrix& p = map_.norm().q();
      Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(quad->q(), p);
      s->u = eig.eigenvectors();
      s->lambda = eig.eigenvalues().cwiseMax(0.0);
      s->w = s->u.transpose() * (p * (x_prev_ - s->center));
    }
    spectral_ = std::move(s);
  }
}

SublevelProjector::~SublevelProjector() = default;
SublevelProjector::SublevelProjector(SublevelProjector&&) noexcept = default;
SublevelProjector& SublevelProjector::operator=(SublevelProjector&&) noexcept = default;

std::optional<ProjectionResult> SublevelProjector::closed_form(double level) const {
  const auto* nt = f_.as<NormTrackingCost>();
  if (nt == nullptr || map_.kind() != MirrorKind::kEuclidean) return std::nullopt;
  const double w = nt->weight();
  const double rho = std::max(0.0, (level - nt->offset()) / w);
  const Vector& v = nt->minimizer();
  const Vector u = x_prev_ - v;
  const Norm& norm = nt->tracking_norm();
  ProjectionResult r;
  r.method = ProjectionMethod::kClosedForm;
  r.active = true;
  switch (norm.kind()) {
    case NormKind::kL2: {
      const double n = u.norm();
      r.x = v + u * (rho / n);
      r.eta = (n - rho) / w;
      break;
    }
    case NormKind::kL1: {
      const L1BallProjection p = project_l1_ball(u, rho);
      r.x = v + p.point;
      r.eta = p.threshold / w;
      break;
    }
    case NormKind::kLInf: {
      r.x = v + project_linf_ball(u, rho);
      r.eta = (u.cwiseAbs().array() - rho).cwiseMax(0.0).sum() / w;
      break;
    }
    case NormKind::kMahalanobis: {
      if (rho == 0.0) {
        r.x = v;
        r.eta = norm.dual(u) / w;
      } else {
        const EllipsoidProjection p =
            project_ellipsoid(norm.q_eigenvalues(), norm.q_eigenvectors(), rho, u);
        r.x = v + p.point;
        r.eta = p.multiplier * rho / w;
        r.iterations = p.iterations;
      }
      break;
    }
  }
  if (!feasible_.contains(r.x, 1e-12)) return std::nullopt;
  r.residual = std::abs(f_.value(r.x) - level);
  return r;
}

std::optional<ProjectionResult> SublevelProjector::spectral(double level) const {
  if (!spectral_) return std::nullopt;
  const Spectral& s = *spectral_;
  const double target = level - s.offset;
  ProjectionResult r;
  r.method = ProjectionMethod::kSpectral;
  r.active = true;
  if (target <= 0.0) {
    r.x = s.center;
    r.eta = kInf;
  } else {
    double tail = 0.0;
    for (Eigen::Index i = 0; i < s.w.size(); ++i) {
      if (s.lambda(i) > 0.0) tail += s.w(i) * s.w(i) / s.lambda(i);
    }
    double lo = 0.0;
    double hi = std::sqrt(tail / (4.0 * target));
    int it = 0;
    for (; it < opts_.bisection_max_iter && hi - lo > 4.0 * kEps * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (s.excess(mid) > target ? lo : hi) = mid;
    }
    r.x = s.point(hi);
    r.eta = hi;
    r.iterations = it;
  }
  if (!feasible_.contains(r.x, 1e-12)) return std::nullopt;
  r.residual = std::abs(f_.value(r.x) - level);
  return r;
}

ProjectionResult SublevelProjector::dual_bisection(double level) {
  const double scale = std::max(1.0, level);
  ProjectionResult r;
  r.method = ProjectionMethod::kDualBisection;
  r.active = true;
  if (f_.smooth() && level - f_.min_value() <= 4.0 * kEps * scale) {
    r.x = f_.minimizer();
    r.eta = kInf;
    r.residual = std::abs(f_.value(r.x) - level);
    return r;
  }
  auto solve = [&](double eta) {
    Vector x = solve_regularized(map_, f_, eta, x_prev_, feasible_, opts_,
                                 warm_ ? &*warm_ : nullptr);
    warm_ = x;
    return x;
  };
  double lo = 0.0;
  double hi = 1.0;
  Vector x_hi = solve(hi);
  double f_hi = f_.value(x_hi);
  int it = 0;
  while (f_hi > level) {
    lo = hi;
    hi *= 2.0;
    if (hi > opts_.eta_cap) {
      throw ConvergenceError("project_sublevel: eta exceeded the bracket cap");
    }
    x_hi = solve(hi);
    f_hi = f_.value(x_hi);
    ++it;
  }
  for (; it < opts_.bisection_max_iter; ++it) {
    if (level - f_hi <= 1e-3 * opts_.level_tol * scale || hi - lo <= 4.0 * kEps * hi) break;
    const double mid = 0.5 * (lo + hi);
    Vector x_mid = solve(mid);
    const double f_mid = f_.value(x_mid);
    if (f_mid > level) {
      lo = mid;
    } else {
      hi = mid;
      x_hi = std::move(x_mid);
      f_hi = f_mid;
    }
  }
  r.x = x_hi;
  r.eta = hi;
  r.iterations = it;
  r.residual = std::abs(f_hi - level);
  if (r.residual > opts_.level_tol * scale) {
    throw ConvergenceError("project_sublevel: level residual " + std::to_string(r.residual) +
                           " above tolerance");
  }
  return r;
}

ProjectionResult SublevelProjector::project(double level) {
  if (!std::isfinite(level)) throw InvalidArgument("project_sublevel: level must be finite");
  const double scale = std::max(1.0, std::abs(level));
  if (level < f_.min_value() - opts_.level_tol * scale) {
    throw DomainError("project_sublevel: level below the minimum value of f");
  }
  if (start_value_ <= level) {
    ProjectionResult r;
    r.x = start_;
    r.method = ProjectionMethod::kUnchanged;
    return r;
  }
  if (auto r = closed_form(level)) return *r;
  if (auto r = spectral(level)) return *r;
  return dual_bisection(level);
}

ProjectionResult project_sublevel(const MirrorMap& map, const CostFunction& f, double level,
                                  const Vector& x_prev, const FeasibleSet& feasible,
                                  const ProjectionOptions& opts) {
  SublevelProjector projector(map, f, x_prev, feasible, opts);
  return projector.project(level);
}

double stationarity_residual(const MirrorMap& map, const CostFunction& f, const Vector& x,
                             const Vector& x_prev, double eta, const FeasibleSet* feasible) {
  require_same_dimension(x, x_prev, "stationarity_residual");
  const Vector gf = f.gradient(x);
  if (!std::isfinite(eta)) return map.norm().dual(gf);
  const Vector r = grad_raw(map, x) - grad_raw(map, x_prev) + eta * gf;
  if (feasible != nullptr) {
    if (auto eq = equalities_of(*feasible)) {
      return dual_norm_modulo(map.norm(), r, eq->a.row(0).transpose());
    }
  }
  return map.norm().dual(r);
}

}  // namespace obd
