#include "obd/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "obd/log.hpp"

namespace obd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---- constraint helpers

bool has_interior_part(const FeasibleSet& s) {
  switch (s.kind()) {
    case SetKind::kBox:
    case SetKind::kBall:
    case SetKind::kHalfspace:
    case SetKind::kSimplex: return true;
    default: return false;
  }
}

// -log barrier of the inequality part of s; +inf outside the interior.
double barrier_value(const FeasibleSet& s, const Vector& x) {
  auto neglog = [](double q) { return q > 0.0 ? -std::log(q) : kInf; };
  switch (s.kind()) {
    case SetKind::kBox: {
      double v = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        v += neglog(x(i) - s.lo()(i)) + neglog(s.hi()(i) - x(i));
      }
      return v;
    }
    case SetKind::kBall: {
      const Vector u = x - s.center();
      const double r = s.radius();
      switch (s.ball_norm().kind()) {
        case NormKind::kL2: return neglog(r * r - u.squaredNorm());
        case NormKind::kMahalanobis: return neglog(r * r - u.dot(s.ball_norm().q() * u));
        case NormKind::kLInf: {
          double v = 0.0;
          for (Eigen::Index i = 0; i < u.size(); ++i) v += neglog(r - u(i)) + neglog(r + u(i));
          return v;
        }
        case NormKind::kL1: break;
      }
      throw Unsupported("offline solver: l1-ball constraints are not supported");
    }
    case SetKind::kHalfspace: return neglog(s.offset() - s.normal().dot(x));
    case SetKind::kSimplex: {
      double v = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) v += neglog(x(i) - s.delta());
      return v;
    }
    default: return 0.0;
  }
}

void barrier_add(const FeasibleSet& s, const Vector& x, double mu, Vector& g, Matrix& h) {
  const Eigen::Index d = x.size();
  auto separable = [&](const Vector& lower_gap, const Vector& upper_gap) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (lower_gap.size() > 0) {
        g(i) -= mu / lower_gap(i);
        h(i, i) += mu / (lower_gap(i) * lower_gap(i));
      }
      if (upper_gap.size() > 0) {
        g(i) += mu / upper_gap(i);
        h(i, i) += mu / (upper_gap(i) * upper_gap(i));
      }
    }
  };
  switch (s.kind()) {
    case SetKind::kBox: separable(x - s.lo(), s.hi() - x); return;
    case SetKind::kBall: {
      const Vector u = x - s.center();
      const double r = s.radius();
      if (s.ball_norm().kind() == NormKind::kLInf) {
        separable((u.array() + r).matrix(), (r - u.array()).matrix());
        return;
      }
      const Matrix q = s.ball_norm().kind() == NormKind::kMahalanobis ? s.ball_norm().q()
                                                                       : Matrix::Identity(d, d);
      const Vector qu = q * u;
      const double gap = r * r - u.dot(qu);
      g += mu * 2.0 * qu / gap;
      h += mu * (2.0 * q / gap + 4.0 * qu * qu.transpose() / (gap * gap));
      return;
    }
    case SetKind::kHalfspace: {
      const double gap = s.offset() - s.normal().dot(x);
      g += mu * s.normal() / gap;
      h += mu * s.normal() * s.normal().transpose() / (gap * gap);
      return;
    }
    case SetKind::kSimplex: separable((x.array() - s.delta()).matrix(), Vector()); return;
    default: return;
  }
}

// ---- chain problem: x_t = p_t + B_t z_t, t = 1..n

struct Stage {
  std::vector<const CostFunction*> costs;
  std::vector<FeasibleSet> sets;
  std::vector<Vector> anchors;  // minimizers, used for starts and polishing
  Vector p;
  Matrix b;
  bool identity = true;
  bool barrier = false;
};

void build_affine(Stage& st, Eigen::Index d) {
  std::vector<Vector> rows;
  std::vector<double> rhs;
  for (const FeasibleSet& s : st.sets) {
    if (s.kind() == SetKind::kHyperplane) {
      rows.push_back(s.normal());
      rhs.push_back(s.offset());
    } else if (s.kind() == SetKind::kSimplex) {
      rows.push_back(Vector::Ones(d));
      rhs.push_back(1.0);
    }
    if (has_interior_part(s)) st.barrier = true;
  }
  if (rows.empty()) {
    st.p = Vector::Zero(d);
    st.b = Matrix::Identity(d, d);
    st.identity = true;
    return;
  }
  Matrix a(rows.size(), d);
  Vector bv(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a.row(i) = rows[i].transpose();
    bv(i) = rhs[i];
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const Eigen::Index rank = svd.rank();
  st.p = svd.solve(bv);
  if ((a * st.p - bv).norm() > 1e-9 * (1.0 + bv.norm())) {
    throw DomainError("offline solver: equality constraints of a round are inconsistent");
  }
  st.b = svd.matrixV().rightCols(d - rank);
  st.identity = false;
}

bool stage_contains(const Stage& st, const Vector& x, double tol) {
  for (const FeasibleSet& s : st.sets) {
    if (!s.contains(x, tol)) return false;
  }
  return true;
}

Vector to_affine(const Stage& st, const Vector& x) {
  if (st.identity) return x;
  return st.p + st.b * (st.b.transpose() * (x - st.p));
}

bool strictly_inside(const Stage& st, const Vector& x) {
  for (const FeasibleSet& s : st.sets) {
    if (has_interior_part(s) && !std::isfinite(barrier_value(s, x))) return false;
  }
  return true;
}

Vector strict_start(const Stage& st, const Vector& guess) {
  std::vector<Vector> candidates{guess};
  for (const FeasibleSet& s : st.sets) candidates.push_back(s.interior_point());
  const Vector g = to_affine(st, guess);
  for (const Vector& c : candidates) {
    const Vector y = to_affine(st, c);
    if (strictly_inside(st, y)) {
      // Pull towards the guess while staying strictly inside.
      for (double theta : {0.99, 0.9, 0.5, 0.0}) {
        const Vector z = theta * g + (1.0 - theta) * y;
        if (strictly_inside(st, z)) return z;
      }
    }
  }
  throw Unsupported("offline solver: no strictly feasible point found for a round");
}

class Chain {
 public:
  Chain(std::vector<Stage> stages, Vector x0, Norm switching, double weight)
      : stages_(std::move(stages)), x0_(std::move(x0)), switching_(std::move(switching)),
        weight_(weight) {
    offsets_.push_back(0);
    for (const Stage& st : stages_) offsets_.push_back(offsets_.back() + st.b.cols());
  }

  Eigen::Index size() const { return offsets_.back(); }
  std::size_t length() const { return stages_.size(); }
  const Stage& stage(std::size_t t) const { return stages_[t]; }

  Trajectory expand(const Vector& z) const {
    Trajectory x(stages_.size());
    for (std::size_t t = 0; t < stages_.size(); ++t) {
      const Stage& st = stages_[t];
      const auto zt = z.segment(offsets_[t], st.b.cols());
      x[t] = st.identity ? Vector(zt) : Vector(st.p + st.b * zt);
    }
    return x;
  }

  Vector compress(const Trajectory& x) const {
    Vector z(size());
    for (std::size_t t = 0; t < stages_.size(); ++t) {
      const Stage& st = stages_[t];
      z.segment(offsets_[t], st.b.cols()) =
          st.identity ? x[t] : Vector(st.b.transpose() * (x[t] - st.p));
    }
    return z;
  }

  double value(const Trajectory& x, double eps, double mu) const {
    double v = 0.0;
    for (std::size_t t = 0; t < stages_.size(); ++t) {
      const Stage& st = stages_[t];
      for (const CostFunction* c : st.costs) {
        v += c->smooth() ? c->value(x[t]) : c->smoothed(x[t], eps).value;
      }
      if (mu > 0.0) {
        for (const FeasibleSet& s : st.sets) {
          if (has_interior_part(s)) v += mu * barrier_value(s, x[t]);
        }
      }
      const Vector& prev = t == 0 ? x0_ : x[t - 1];
      v += weight_ * switching_.smoothed(x[t] - prev, eps).value;
      if (!std::isfinite(v)) return kInf;
    }
    return v;
  }

  // Gradient in z and the block-tridiagonal Hessian.
  double derivatives(const Trajectory& x, double eps, double mu, Vector& grad,
                     Eigen::SparseMatrix<double>& hess) const {
    const std::size_t n = stages_.size();
    const Eigen::Index d = x0_.size();
    std::vector<SmoothValue> sw(n);
    for (std::size_t t = 0; t < n; ++t) {
      sw[t] = switching_.smoothed(x[t] - (t == 0 ? x0_ : x[t - 1]), eps);
    }
    grad.setZero(size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(size()) * static_cast<std::size_t>(3 * d));
    double value = 0.0;
    Vector g(d);
    Matrix h(d, d);
    for (std::size_t t = 0; t < n; ++t) {
      const Stage& st = stages_[t];
      g.setZero();
      h.setZero();
      for (const CostFunction* c : st.costs) {
        const SmoothValue s = c->smoothed(x[t], eps);
        value += s.value;
        g += s.gradient;
        h += s.hessian;
      }
      if (mu > 0.0) {
        for (const FeasibleSet& s : st.sets) {
          if (!has_interior_part(s)) continue;
          value += mu * barrier_value(s, x[t]);
          barrier_add(s, x[t], mu, g, h);
        }
      }
      value += weight_ * sw[t].value;
      g += weight_ * sw[t].gradient;
      h += weight_ * sw[t].hessian;
      if (t + 1 < n) {
        g -= weight_ * sw[t + 1].gradient;
        h += weight_ * sw[t + 1].hessian;
      }
      const Eigen::Index k = st.b.cols();
      const Eigen::Index o = offsets_[t];
      if (st.identity) {
        grad.segment(o, k) = g;
        push_block(trip, o, o, h);
      } else {
        grad.segment(o, k) = st.b.transpose() * g;
        push_block(trip, o, o, st.b.transpose() * h * st.b);
      }
      if (t > 0) {
        const Stage& pv = stages_[t - 1];
        Matrix off = -weight_ * sw[t].hessian;
        if (!st.identity) off = st.b.transpose() * off;
        if (!pv.identity) off = off * pv.b;
        push_block(trip, o, offsets_[t - 1], off);
        push_block(trip, offsets_[t - 1], o, off.transpose());
      }
    }
    hess.resize(size(), size());
    hess.setFromTriplets(trip.begin(), trip.end());
    return value;
  }

 private:
  static void push_block(std::vector<Eigen::Triplet<double>>& trip, Eigen::Index r0,
                         Eigen::Index c0, const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        trip.emplace_back(r0 + i, c0 + j, m(i, j));  // explicit zeros keep the pattern fixed
      }
    }
  }

  std::vector<Stage> stages_;
  std::vector<Eigen::Index> offsets_;
  Vector x0_;
  Norm switching_;
  double weight_;
};

struct ChainResult {
  Trajectory x;
  bool converged = false;
  double grad_norm = 0.0;
};

bool newton_level(const Chain& chain, Vector& z, double eps, double mu, int max_iter,
                  double& grad_norm) {
  grad_norm = 0.0;
  if (z.size() == 0) return true;  // every point pinned by equalities
  Vector g;
  Eigen::SparseMatrix<double> h;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  bool pattern_ready = false;
  for (int it = 0; it < max_iter; ++it) {
    const Trajectory x = chain.expand(z);
    const double j = chain.derivatives(x, eps, mu, g, h);
    grad_norm = g.norm();
    if (!std::isfinite(j)) return false;
    double ridge = 0.0;
    Vector dz;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::SparseMatrix<double> hr = h;
      if (ridge > 0.0) {
        for (Eigen::Index i = 0; i < hr.rows(); ++i) hr.coeffRef(i, i) += ridge;
      }
      if (!pattern_ready) {
        solver.analyzePattern(hr);
        pattern_ready = true;
      }
      solver.factorize(hr);
      if (solver.info() == Eigen::Success) {
        dz = solver.solve(-g);
        if (dz.allFinite() && g.dot(dz) < 0.0) break;
      }
      ridge = ridge == 0.0 ? 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff()) : ridge * 100.0;
      dz.resize(0);
    }
    if (dz.size() == 0) return false;
    const double decrement = -g.dot(dz);
    if (decrement <= 1e-22 * (1.0 + std::abs(j))) return true;
    double step = 1.0;
    double j_new = chain.value(chain.expand(z + dz), eps, mu);
    int halvings = 0;
    while (!(j_new <= j - 1e-4 * step * decrement + 8.0 * kEps * std::abs(j)) && halvings < 60) {
      step *= 0.5;
      j_new = chain.value(chain.expand(z + step * dz), eps, mu);
      ++halvings;
    }
    if (halvings == 60) return decrement <= 1e-14 * (1.0 + std::abs(j));
    z += step * dz;
    if (step == 1.0 && dz.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + z.lpNorm<Eigen::Infinity>())) {
      return true;
    }
  }
  return false;
}

ChainResult solve_chain(const Chain& chain, const Trajectory& start, const OfflineOptions& opts,
                        bool use_barrier) {
  Vector z = chain.compress(start);
  ChainResult out;
  out.converged = true;
  bool smooth_all = true;
  for (std::size_t t = 0; t < chain.length(); ++t) {
    for (const CostFunction* c : chain.stage(t).costs) smooth_all = smooth_all && c->smooth();
  }
  (void)smooth_all;
  for (double eps : opts.eps_schedule) {
    const double mu = use_barrier ? opts.barrier_ratio * eps : 0.0;
    double gn = 0.0;
    const bool ok = newton_level(chain, z, eps, mu, opts.newton_max_iter, gn);
    out.grad_norm = gn;
    if (&eps == &opts.eps_schedule.back()) out.converged = ok;
  }
  out.x = chain.expand(z);
  return out;
}

bool all_inside(const Chain& chain, const Trajectory& x, double tol) {
  for (std::size_t t = 0; t < chain.length(); ++t) {
    if (!stage_contains(chain.stage(t), x[t], tol)) return false;
  }
  return true;
}

Trajectory initial_trajectory(const Chain& chain, const Vector& x0, bool strict) {
  Trajectory x(chain.length());
  Vector prev = x0;
  for (std::size_t t = 0; t < chain.length(); ++t) {
    const Stage& st = chain.stage(t);
    Vector guess = st.anchors.empty() ? prev : st.anchors.front();
    for (const FeasibleSet& s : st.sets) guess = s.project(guess);
    x[t] = strict && st.barrier ? strict_start(st, guess) : to_affine(st, guess);
    prev = x[t];
  }
  return x;
}

double stage_local_cost(const Stage& st, const Vector& x) {
  double v = 0.0;
  for (const CostFunction* c : st.costs) v += c->value(x);
  return v;
}

// Snap points onto neighbours or minimizers when the exact objective drops.
void polish(const Chain& chain, const Vector& x0, const Norm& switching, double weight,
            Trajectory& x) {
  const std::size_t n = x.size();
  auto local = [&](std::size_t t, const Vector& y) {
    const Stage& st = chain.stage(t);
    if (!stage_contains(st, y, 1e-10)) return kInf;
    double v = stage_local_cost(st, y) + weight * switching(y - (t == 0 ? x0 : x[t - 1]));
    if (t + 1 < n) v += weight * switching(x[t + 1] - y);
    return v;
  };
  for (int sweep = 0; sweep < 4; ++sweep) {
    bool changed = false;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const std::size_t t = k < n ? k : 2 * n - 1 - k;
      double best = local(t, x[t]);
      std::vector<Vector> candidates{t == 0 ? x0 : x[t - 1]};
      if (t + 1 < n) candidates.push_back(x[t + 1]);
      for (const Vector& a : chain.stage(t).anchors) candidates.push_back(a);
      for (const Vector& c : candidates) {
        const double v = local(t, c);
        if (v < best - 1e-15 * (1.0 + std::abs(best))) {
          best = v;
          x[t] = c;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

std::vector<Stage> dynamic_stages(const std::vector<CostFunction>& fs,
                                  const FeasibleSet& feasible) {
  std::vector<Stage> stages(fs.size());
  for (std::size_t t = 0; t < fs.size(); ++t) {
    Stage& st = stages[t];
    st.sets.push_back(feasible);
    if (const auto* ind = fs[t].as<IndicatorCost>()) {
      st.sets.push_back(ind->set());
    } else {
      st.costs.push_back(&fs[t]);
      st.anchors.push_back(fs[t].minimizer());
    }
    build_affine(st, feasible.dimension());
  }
  return stages;
}

void require_inputs(const std::vector<CostFunction>& fs, const Vector& x0,
                    const FeasibleSet& feasible, const char* what) {
  if (fs.empty()) throw InvalidArgument(std::string(what) + ": T must be >= 1");
  for (const CostFunction& f : fs) require_dimension(x0, f.dimension(), what);
  require_dimension(x0, feasible.dimension(), what);
  if (!x0.allFinite()) throw InvalidArgument(std::string(what) + ": x0 must be finite");
}

OfflineSolution finish(const std::vector<CostFunction>& fs, const Vector& x0,
                       const Norm& switching, Trajectory traj, bool converged, double grad_norm,
                       std::string method) {
  OfflineSolution s;
  s.trajectory = std::move(traj);
  s.objective = trajectory_cost(fs, x0, s.trajectory, switching, &s.total_hit, &s.total_move);
  s.converged = converged;
  s.smoothed_grad_norm = grad_norm;
  s.method = std::move(method);
  return s;
}

// Minimizes sum f + weight * movement.
OfflineSolution solve_weighted(const std::vector<CostFunction>& fs, const Vector& x0,
                               const FeasibleSet& feasible, const Norm& switching,
                               const OfflineOptions& opts, double weight,
                               const Trajectory* warm) {
  const Chain chain(dynamic_stages(fs, feasible), x0, switching, weight);
  bool any_barrier = false;
  for (std::size_t t = 0; t < chain.length(); ++t) any_barrier |= chain.stage(t).barrier;

  ChainResult r;
  bool done = false;
  if (!any_barrier || true) {
    Trajectory start = warm != nullptr ? *warm : initial_trajectory(chain, x0, false);
    r = solve_chain(chain, start, opts, false);
    done = !any_barrier || all_inside(chain, r.x, 1e-10);
  }
  if (!done) {
    Trajectory start = initial_trajectory(chain, x0, true);
    if (warm != nullptr && all_inside(chain, *warm, 0.0)) {
      bool strict = true;
      for (std::size_t t = 0; t < chain.length(); ++t) {
        strict = strict && strictly_inside(chain.stage(t), (*warm)[t]);
      }
      if (strict) start = *warm;
    }
    r = solve_chain(chain, start, opts, true);
    for (std::size_t t = 0; t < chain.length(); ++t) {
      for (const FeasibleSet& s : chain.stage(t).sets) r.x[t] = s.project(r.x[t]);
    }
  }
  if (opts.polish) polish(chain, x0, switching, weight, r.x);
  return finish(fs, x0, switching, std::move(r.x), r.converged, r.grad_norm, "newton_chain");
}

}  // namespace

double trajectory_cost(const std::vector<CostFunction>& fs, const Vector& x0,
                       const Trajectory& traj, const Norm& switching, double* total_hit,
                       double* total_move) {
  if (traj.size() != fs.size()) throw DimensionMismatch("trajectory_cost: length differs from T");
  double hit = 0.0;
  double move = 0.0;
  for (std::size_t t = 0; t < fs.size(); ++t) {
    hit += fs[t].value(traj[t]);
    move += switching(traj[t] - (t == 0 ? x0 : traj[t - 1]));
  }
  if (total_hit != nullptr) *total_hit = hit;
  if (total_move != nullptr) *total_move = move;
  return hit + move;
}

OfflineSolution offline_opt(const std::vector<CostFunction>& fs, const Vector& x0,
                            const FeasibleSet& feasible, const Norm& switching,
                            const OfflineOptions& opts) {
  require_inputs(fs, x0, feasible, "offline_opt");
  return solve_weighted(fs, x0, feasible, switching, opts, 1.0, nullptr);
}

OfflineSolution offline_opt_constrained(const std::vector<CostFunction>& fs, const Vector& x0,
                                        double budget, const FeasibleSet& feasible,
                                        const Norm& switching, const OfflineOptions& opts) {
  require_inputs(fs, x0, feasible, "offline_opt_constrained");
  if (!(budget >= 0.0) || std::isnan(budget)) {
    throw InvalidArgument("offline_opt_constrained: budget L must be non-negative");
  }
  OfflineSolution free = offline_opt(fs, x0, feasible, switching, opts);
  if (free.total_move <= budget) {
    free.method = "unconstrained";
    return free;
  }
  if (budget == 0.0) {
    Trajectory stay(fs.size(), x0);
    OfflineSolution s = finish(fs, x0, switching, stay, true, 0.0, "stay");
    if (!std::isfinite(s.objective)) {
      throw DomainError("offline_opt_constrained: x0 violates a round's constraints with L = 0");
    }
    s.lambda = kInf;
    return s;
  }

  OfflineOptions inner = opts;
  inner.polish = false;
  const double lower = budget * (1.0 - opts.budget_rel_tol);
  auto in_band = [&](const OfflineSolution& s) {
    return s.total_move <= budget && s.total_move >= lower;
  };

  OfflineSolution lo_sol = free;  // movement > budget
  double lo = 0.0;
  double hi = 1.0;
  OfflineSolution hi_sol = solve_weighted(fs, x0, feasible, switching, inner, 1.0 + hi,
                                          &lo_sol.trajectory);
  int it = 0;
  while (hi_sol.total_move > budget && it < opts.lambda_max_iter) {
    lo = hi;
    lo_sol = hi_sol;
    hi *= 2.0;
    hi_sol = solve_weighted(fs, x0, feasible, switching, inner, 1.0 + hi, &lo_sol.trajectory);
    ++it;
  }
  if (hi_sol.total_move > budget) {
    Trajectory stay(fs.size(), x0);
    hi_sol = finish(fs, x0, switching, stay, true, 0.0, "stay");
  }
  OfflineSolution best = hi_sol;
  double best_lambda = hi;
  for (; it < opts.lambda_max_iter && !in_band(best); ++it) {
    const double mid = 0.5 * (lo + hi);
    OfflineSolution s =
        solve_weighted(fs, x0, feasible, switching, inner, 1.0 + mid, &hi_sol.trajectory);
    if (s.total_move > budget) {
      lo = mid;
      lo_sol = std::move(s);
    } else {
      hi = mid;
      hi_sol = std::move(s);
      best = hi_sol;
      best_lambda = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  if (!in_band(best)) {
    // Movement jumps across the band: both ends minimise the same Lagrangian, so the convex
    // combination hitting the budget is optimal for the constrained problem.
    auto mix = [&](double theta) {
      Trajectory x(fs.size());
      for (std::size_t t = 0; t < fs.size(); ++t) {
        x[t] = theta * lo_sol.trajectory[t] + (1.0 - theta) * hi_sol.trajectory[t];
      }
      return x;
    };
    double a = 0.0;
    double b = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double theta = 0.5 * (a + b);
      OfflineSolution s = finish(fs, x0, switching, mix(theta), hi_sol.converged, 0.0, "");
      if (s.total_move > budget) {
        b = theta;
      } else {
        a = theta;
        best = std::move(s);
        if (in_band(best)) break;
      }
    }
    best.method = "lagrangian_interpolated";
  } else {
    best.method = "lagrangian";
  }
  best.lambda = best_lambda;
  best.converged = best.converged && in_band(best);
  return best;
}

OfflineSolution static_opt(const std::vector<CostFunction>& fs, const Vector& x0,
                           const FeasibleSet& feasible, const Norm& switching,
                           const OfflineOptions& opts) {
  require_inputs(fs, x0, feasible, "static_opt");
  Stage st;
  st.sets.push_back(feasible);
  for (const CostFunction& f : fs) {
    if (const auto* ind = f.as<IndicatorCost>()) {
      st.sets.push_back(ind->set());
    } else {
      st.costs.push_back(&f);
      st.anchors.push_back(f.minimizer());
    }
  }
  st.anchors.push_back(x0);
  build_affine(st, x0.size());
  const Chain chain({st}, x0, switching, 1.0);

  Trajectory start = initial_trajectory(chain, x0, false);
  ChainResult r = solve_chain(chain, start, opts, false);
  if (chain.stage(0).barrier && !all_inside(chain, r.x, 1e-10)) {
    r = solve_chain(chain, initial_trajectory(chain, x0, true), opts, true);
    for (const FeasibleSet& s : chain.stage(0).sets) r.x[0] = s.project(r.x[0]);
  }
  if (opts.polish) polish(chain, x0, switching, 1.0, r.x);
  Trajectory traj(fs.size(), r.x[0]);
  return finish(fs, x0, switching, std::move(traj), r.converged, r.grad_norm, "newton_static");
}

// ---- grid oracle

namespace {

struct GridRun {
  Trajectory x;
  double weighted = kInf;  // sum f + weight * movement
};

bool feasible_at(const std::vector<CostFunction>& fs, std::size_t t, const FeasibleSet& feasible,
                 const Vector& y) {
  return feasible.contains(y, 1e-10) && std::isfinite(fs[t].value(y));
}

GridRun dp_pass(const std::vector<CostFunction>& fs, const Vector& x0,
                const std::vector<std::vector<Vector>>& states, const Norm& switching,
                double weight) {
  const std::size_t n = fs.size();
  std::vector<std::vector<double>> value(n);
  std::vector<std::vector<std::size_t>> next(n);
  std::vector<std::vector<double>> hit(n);
  for (std::size_t t = 0; t < n; ++t) {
    hit[t].resize(states[t].size());
    for (std::size_t i = 0; i < states[t].size(); ++i) hit[t][i] = fs[t].value(states[t][i]);
  }
  value[n - 1] = hit[n - 1];
  next[n - 1].assign(states[n - 1].size(), 0);
  for (std::size_t t = n - 1; t-- > 0;) {
    const auto& here = states[t];
    const auto& there = states[t + 1];
    value[t].assign(here.size(), kInf);
    next[t].assign(here.size(), 0);
    for (std::size_t i = 0; i < here.size(); ++i) {
      double best = kInf;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < there.size(); ++j) {
        const double c = weight * switching(there[j] - here[i]) + value[t + 1][j];
        if (c < best) {
          best = c;
          arg = j;
        }
      }
      value[t][i] = hit[t][i] + best;
      next[t][i] = arg;
    }
  }
  GridRun run;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < states[0].size(); ++i) {
    const double c = weight * switching(states[0][i] - x0) + value[0][i];
    if (c < run.weighted) {
      run.weighted = c;
      arg = i;
    }
  }
  if (!std::isfinite(run.weighted)) throw DomainError("grid_dp_oracle: no feasible grid path");
  run.x.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    run.x[t] = states[t][arg];
    if (t + 1 < n) arg = next[t][arg];
  }
  return run;
}

std::vector<Vector> lattice(const Vector& lo, const Vector& hi, int points) {
  const Eigen::Index d = lo.size();
  std::vector<Vector> out;
  std::vector<int> idx(d, 0);
  while (true) {
    Vector p(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      p(k) = points == 1 ? 0.5 * (lo(k) + hi(k))
                         : lo(k) + (hi(k) - lo(k)) * idx[k] / static_cast<double>(points - 1);
    }
    out.push_back(p);
    Eigen::Index k = 0;
    while (k < d && ++idx[k] == points) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

}  // namespace

OfflineSolution grid_dp_oracle(const std::vector<CostFunction>& fs, const Vector& x0,
                               const Grid& grid, const FeasibleSet& feasible,
                               const Norm& switching, double switching_weight) {
  require_inputs(fs, x0, feasible, "grid_dp_oracle");
  const Eigen::Index d = x0.size();
  if (d > 2) throw InvalidArgument("grid_dp_oracle: d must be <= 2");
  if (fs.size() > 8) throw InvalidArgument("grid_dp_oracle: T must be <= 8");
  require_dimension(grid.lo, d, "grid_dp_oracle");
  require_dimension(grid.hi, d, "grid_dp_oracle");
  if (grid.points_per_axis < 2 || grid.zoom_passes < 0 || !(grid.zoom_factor > 1.0)) {
    throw InvalidArgument("grid_dp_oracle: need points_per_axis >= 2, zoom_passes >= 0, zoom_factor > 1");
  }
  const double per_step = std::pow(static_cast<double>(grid.points_per_axis), static_cast<double>(d));
  if (per_step + 2.0 * static_cast<double>(fs.size()) + 1.0 > static_cast<double>(grid.max_states)) {
    throw InvalidArgument("grid_dp_oracle: state-space size cap exceeded");
  }
  const std::size_t n = fs.size();

  std::vector<Vector> lo(n, grid.lo);
  std::vector<Vector> hi(n, grid.hi);
  GridRun best;
  double cell = 0.0;
  for (int pass = 0; pass <= grid.zoom_passes; ++pass) {
    std::vector<std::vector<Vector>> states(n);
    cell = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<Vector> extra{x0};
      for (const CostFunction& f : fs) {
        if (!f.is_indicator()) extra.push_back(f.minimizer());
      }
      for (const Vector& p : best.x) extra.push_back(p);
      std::vector<Vector> pts = lattice(lo[t], hi[t], grid.points_per_axis);
      pts.insert(pts.end(), extra.begin(), extra.end());
      const auto* ind = fs[t].as<IndicatorCost>();
      for (Vector& p : pts) {
        if (ind != nullptr) p = ind->set().project(p);
        if (feasible_at(fs, t, feasible, p)) states[t].push_back(p);
      }
      cell = std::max(cell, ((hi[t] - lo[t]) / (grid.points_per_axis - 1)).norm());
    }
    GridRun run = dp_pass(fs, x0, states, switching, switching_weight);
    if (run.weighted <= best.weighted) best = std::move(run);
    for (std::size_t t = 0; t < n; ++t) {
      const Vector half = (hi[t] - lo[t]) / (2.0 * grid.zoom_factor);
      lo[t] = best.x[t] - half;
      hi[t] = best.x[t] + half;
    }
  }
  OfflineSolution s = finish(fs, x0, switching, best.x, true, 0.0, "grid_dp");
  s.uncertainty = cell;
  return s;
}

OfflineSolution grid_dp_oracle_constrained(const std::vector<CostFunction>& fs, const Vector& x0,
                                           double budget, const Grid& grid,
                                           const FeasibleSet& feasible, const Norm& switching) {
  if (!(budget >= 0.0)) throw InvalidArgument("grid_dp_oracle_constrained: budget must be >= 0");
  auto dual = [&](double lambda, OfflineSolution* out) {
    OfflineSolution s = grid_dp_oracle(fs, x0, grid, feasible, switching, 1.0 + lambda);
    const double g = s.total_hit + (1.0 + lambda) * s.total_move - lambda * budget;
    if (out != nullptr) *out = std::move(s);
    return g;
  };
  OfflineSolution at_zero;
  dual(0.0, &at_zero);
  if (at_zero.total_move <= budget) return at_zero;

  double hi = 1.0;
  OfflineSolution probe;
  for (int k = 0; k < 40; ++k) {
    dual(hi, &probe);
    if (probe.total_move <= budget) break;
    hi *= 2.0;
  }
  // Golden-section search on the concave dual function.
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0;
  double b = hi;
  double c = b - r * (b - a);
  double e = a + r * (b - a);
  double gc = dual(c, nullptr);
  double ge = dual(e, nullptr);
  for (int k = 0; k < 60 && b - a > 1e-9 * (1.0 + hi); ++k) {
    if (gc < ge) {
      a = c;
      c = e;
      gc = ge;
      e = a + r * (b - a);
      ge = dual(e, nullptr);
    } else {
      b = e;
      e = c;
      ge = gc;
      c = b - r * (b - a);
      gc = dual(c, nullptr);
    }
  }
  const double lambda = gc > ge ? c : e;
  OfflineSolution s;
  const double value = dual(lambda, &s);
  s.objective = std::max(value, std::max(gc, ge));
  s.lambda = lambda;
  s.method = "grid_dp_dual";
  return s;
}

}  // namespace obd
