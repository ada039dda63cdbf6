#include "obd/algorithms.hpp"

#include <cmath>
#include <limits>

namespace obd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

FeasibleSet resolve(const std::optional<FeasibleSet>& feasible, Eigen::Index d) {
  if (!feasible) return FeasibleSet::whole_space(d);
  require_dimension(Vector::Zero(d), feasible->dimension(), "feasible set");
  return *feasible;
}

}  // namespace

std::string to_string(StepBranch branch) {
  switch (branch) {
    case StepBranch::kMoveToMinimizer: return "move_to_minimizer";
    case StepBranch::kBalanced: return "balanced";
    case StepBranch::kSetProjection: return "set_projection";
  }
  return "unknown";
}

StepBranch step_branch_from_string(const std::string& name) {
  if (name == "move_to_minimizer") return StepBranch::kMoveToMinimizer;
  if (name == "balanced") return StepBranch::kBalanced;
  if (name == "set_projection") return StepBranch::kSetProjection;
  throw InvalidArgument("unknown step branch '" + name + "'");
}

void validate(const PrimalConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw InvalidArgument("beta: must lie in (0, 1)");
  if (!(cfg.level_tol > 0.0)) throw InvalidArgument("level_tol: must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter: must be >= 1");
}

void validate(const DualConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) throw InvalidArgument("eta: must be positive");
  if (!(cfg.level_tol > 0.0)) throw InvalidArgument("level_tol: must be positive");
  if (!(cfg.grad_floor > 0.0)) throw InvalidArgument("grad_floor: must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter: must be >= 1");
}

StepRecord set_projection_step(const Vector& x_prev, const CostFunction& f, const MirrorMap& map,
                               const Norm& switching, int t) {
  const auto* ind = f.as<IndicatorCost>();
  if (ind == nullptr) throw InvalidArgument("set_projection_step: cost is not an indicator");
  StepRecord rec;
  rec.t = t;
  rec.x = project_set(map, ind->set(), x_prev).x;
  rec.hit = f.value(rec.x);
  rec.move = switching(rec.x - x_prev);
  rec.branch = StepBranch::kSetProjection;
  return rec;
}

StepRecord primal_obd_step(const Vector& x_prev, const CostFunction& f, const PrimalConfig& cfg,
                           int t) {
  validate(cfg);
  require_dimension(x_prev, f.dimension(), "primal_obd_step");
  if (f.is_indicator()) return set_projection_step(x_prev, f, cfg.map, cfg.switching, t);
  const FeasibleSet feasible = resolve(cfg.feasible, x_prev.size());

  StepRecord rec;
  rec.t = t;
  const Vector& v = f.minimizer();
  const double fv = f.min_value();
  if (cfg.switching(x_prev - v) < cfg.beta * fv) {
    rec.x = v;
    rec.hit = f.value(v);
    rec.move = cfg.switching(v - x_prev);
    rec.level = fv;
    rec.branch = StepBranch::kMoveToMinimizer;
    return rec;
  }

  SublevelProjector projector(cfg.map, f, x_prev, feasible, cfg.projection);
  rec.branch = StepBranch::kBalanced;
  double lo = fv;
  double hi = projector.start_value();
  if (!(hi > lo)) {
    rec.x = x_prev;
    rec.hit = hi;
    rec.level = hi;
    return rec;
  }

  // g(l) = ||x(l) - x_prev|| - beta l decreases from g(f(v)) >= 0 to g(f(x_prev)) < 0.
  struct Probe {
    double level;
    ProjectionResult proj;
    double move;
    double gap;
  };
  auto probe = [&](double l) {
    Probe p{l, projector.project(l), 0.0, 0.0};
    p.move = cfg.switching(p.proj.x - x_prev);
    p.gap = p.move - cfg.beta * l;
    return p;
  };
  Probe best = probe(lo);
  if (best.gap < 0.0) {
    throw ConvergenceError("primal_obd_step: level bracket has the wrong sign at f(v_t)");
  }
  int it = 0;
  while (std::abs(best.gap) > cfg.target_tol * std::max(1.0, best.level) && it < cfg.max_iter &&
         hi - lo > 2.0 * kEps * hi) {
    const Probe mid = probe(0.5 * (lo + hi));
    ++it;
    (mid.gap > 0.0 ? lo : hi) = mid.level;
    if (std::abs(mid.gap) < std::abs(best.gap)) best = mid;
  }

  rec.x = best.proj.x;
  rec.hit = f.value(rec.x);
  rec.move = best.move;
  rec.level = best.level;
  rec.eta_t = best.proj.eta;
  rec.iterations = it;
  rec.balance_residual = std::abs(best.gap);
  rec.warning = rec.balance_residual > cfg.level_tol * std::max(1.0, rec.level);
  return rec;
}

StepRecord dual_obd_step(const Vector& x_prev, const CostFunction& f, const DualConfig& cfg,
                         int t) {
  validate(cfg);
  require_dimension(x_prev, f.dimension(), "dual_obd_step");
  if (f.is_indicator()) return set_projection_step(x_prev, f, cfg.map, cfg.switching, t);
  if (!f.smooth()) {
    throw InvalidArgument("dual_obd_step: the dual balance rule needs a differentiable cost");
  }
  const FeasibleSet feasible = resolve(cfg.feasible, x_prev.size());

  StepRecord rec;
  rec.t = t;
  rec.branch = StepBranch::kBalanced;
  SublevelProjector projector(cfg.map, f, x_prev, feasible, cfg.projection);
  const double fv = f.min_value();
  const double fp = projector.start_value();
  const double gap = fp - fv;
  if (!(gap > 4.0 * kEps * std::max(1.0, std::abs(fp)))) {
    rec.x = x_prev;
    rec.hit = fp;
    rec.level = fp;
    return rec;
  }

  const Vector grad_prev = cfg.map.grad(x_prev);
  struct Probe {
    double level;
    ProjectionResult proj;
    double left;   // ||grad Phi(x) - grad Phi(x_prev)||_*
    double right;  // eta ||grad f(x)||_*
    double psi() const { return left - right; }
    double relative() const {
      const double s = std::max(left, right);
      return s > 0.0 ? std::abs(left - right) / s : 0.0;
    }
  };
  auto probe = [&](double l) {
    Probe p{l, projector.project(l), 0.0, 0.0};
    p.left = cfg.map.norm().dual(cfg.map.grad(p.proj.x) - grad_prev);
    p.right = cfg.eta * cfg.map.norm().dual(f.gradient(p.proj.x));
    return p;
  };

  double offset = std::min(std::max(cfg.level_tol, 1e-12 * gap), 0.5 * gap);
  Probe low = probe(fv + offset);
  for (int k = 0; k < 60 && low.psi() <= 0.0; ++k) {
    offset *= 0.5;
    low = probe(fv + offset);
  }
  double lo = low.level;
  double hi = fp;
  Probe best = probe(hi);
  if (low.psi() <= 0.0) {
    // Gradient vanishes throughout the bracket: no crossing is resolvable.
    best = low;
    rec.warning = true;
  } else {
    if (low.relative() < best.relative()) best = low;
    int it = 0;
    while (best.relative() > 1e-3 * cfg.level_tol && it < cfg.max_iter &&
           hi - lo > 2.0 * kEps * hi) {
      const Probe mid = probe(0.5 * (lo + hi));
      ++it;
      (mid.psi() > 0.0 ? lo : hi) = mid.level;
      if (mid.relative() < best.relative()) best = mid;
    }
    rec.iterations = it;
    rec.warning = best.relative() > cfg.level_tol &&
                  std::max(best.left, best.right) > cfg.grad_floor;
  }
  rec.x = best.proj.x;
  rec.hit = f.value(rec.x);
  rec.move = cfg.switching(rec.x - x_prev);
  rec.level = best.level;
  rec.eta_t = best.proj.eta;
  rec.balance_residual = best.relative();
  return rec;
}

BetaChoice choose_beta(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("choose_beta: alpha must be positive");
  BetaChoice c;
  c.beta = 0.5 + 1.0 / (alpha + 2.0);
  c.predicted_c = 3.0 + 8.0 / alpha;
  c.gamma = balance_gamma(alpha, c.beta);
  return c;
}

double balance_gamma(double alpha, double beta, double kappa) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(kappa >= 1.0)) {
    throw InvalidArgument("balance_gamma: need alpha > 0, beta > 0, kappa >= 1");
  }
  const double r = 2.0 / (alpha * beta);
  return std::sqrt(1.0 + r * r) / std::sqrt(kappa) - r;
}

double competitive_bound(double alpha, double beta, double kappa) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("competitive_bound: beta must lie in (0, 1)");
  const double gamma = balance_gamma(alpha, beta, kappa);
  if (!(gamma > 0.0)) return kInf;
  return std::max((1.0 + beta) / (1.0 - beta), (1.0 + beta) / (beta * gamma));
}

double choose_beta_general(double alpha, double kappa) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("choose_beta_general: kappa must be >= 1");
  }
  if (!(alpha > 0.0)) throw InvalidArgument("choose_beta_general: alpha must be positive");
  const double threshold = 2.0 * std::sqrt(kappa - 1.0);
  if (!(alpha > threshold)) {
    throw InvalidArgument("choose_beta_general: alpha must exceed 2 sqrt(kappa - 1)");
  }
  const double lower = std::max(threshold / alpha, 0.0);
  return 0.5 * (lower + 1.0);
}

EtaChoice choose_eta(double g, double l, double m, int t) {
  if (!(g > 0.0) || !(l > 0.0) || !(m > 0.0) || t < 1 || !std::isfinite(g * l * m)) {
    throw InvalidArgument("choose_eta: G, L, m and T must be positive");
  }
  const double td = static_cast<double>(t);
  return {std::sqrt(2.0 * g * l * m / td), std::sqrt(2.0 * g * l * td / m)};
}

double regret_bound(double g, double l, double m, double eta, int t) {
  if (!(g >= 0.0) || !(l >= 0.0) || !(m > 0.0) || !(eta > 0.0) || t < 1) {
    throw InvalidArgument("regret_bound: need G, L >= 0 and m, eta, T > 0");
  }
  const double first = (g == 0.0 || l == 0.0) ? 0.0 : g * l / eta;
  return first + static_cast<double>(t) * eta / (2.0 * m);
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kOgd: return "ogd";
    case BaselineKind::kOmd: return "omd";
    case BaselineKind::kGreedy: return "greedy";
    case BaselineKind::kStatic: return "static";
  }
  return "unknown";
}

Vector baseline_step(const BaselineConfig& cfg, BaselineState& state, const CostFunction& f) {
  require_dimension(state.x, f.dimension(), "baseline_step");
  const FeasibleSet feasible = resolve(cfg.feasible, state.x.size());
  ++state.t;
  Vector next = state.x;
  if (f.is_indicator()) {
    next = project_set(cfg.map, f.as<IndicatorCost>()->set(), state.x).x;
  } else {
    switch (cfg.kind) {
      case BaselineKind::kOgd:
      case BaselineKind::kOmd:
        if (state.f_prev) {
          const double eta = cfg.step_scale / std::sqrt(static_cast<double>(state.t));
          const Vector g = state.f_prev->gradient(state.x);
          if (cfg.kind == BaselineKind::kOgd) {
            next = feasible.project(state.x - eta * g);
          } else {
            const Vector z = cfg.map.inv_grad(cfg.map.grad(state.x) - eta * g);
            next = project_set(cfg.map, feasible, z).x;
          }
        }
        break;
      case BaselineKind::kGreedy: next = feasible.project(f.minimizer()); break;
      case BaselineKind::kStatic:
        if (!state.anchor) state.anchor = feasible.project(f.minimizer());
        next = *state.anchor;
        break;
    }
  }
  state.f_prev = f;
  state.x = next;
  return next;
}

}  // namespace obd
