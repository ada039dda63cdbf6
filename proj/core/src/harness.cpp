#include "obd/harness.hpp"

#include <cmath>
#include <limits>

#include "obd/log.hpp"
#include "obd/serialization.hpp"

namespace obd {

bool AuditResult::passed() const {
  for (const AuditCheck& c : checks) {
    if (c.applicable && !c.passed) return false;
  }
  return true;
}

double AuditResult::worst_residual() const {
  double w = -std::numeric_limits<double>::infinity();
  for (const AuditCheck& c : checks) {
    if (c.applicable && c.checked > 0) w = std::max(w, c.worst_residual);
  }
  return w;
}

Trajectory RunReport::trajectory() const {
  Trajectory x;
  x.reserve(steps.size());
  for (const StepRecord& r : steps) x.push_back(r.x);
  return x;
}

double comparator_cost(const Comparator& c) {
  return c.available ? c.solution.objective : std::numeric_limits<double>::quiet_NaN();
}

RunReport run(OnlineAlgorithm& algorithm, Environment& env, const Vector& x0,
              const Norm& switching, const FeasibleSet& feasible,
              const ComparatorRequest& request, std::string spec_hash) {
  require_dimension(x0, env.dimension(), "run: x0");
  RunReport rep;
  rep.algorithm = algorithm.name();
  rep.spec_hash = std::move(spec_hash);
  rep.x0 = x0;
  rep.switching = switching;
  rep.feasible = feasible;
  algorithm.reset(x0);
  Vector prev = x0;
  for (int t = 1; t <= env.horizon(); ++t) {
    CostFunction f = env.reveal(t, prev);
    StepRecord rec = algorithm.step(t, f);
    rec.t = t;
    rec.hit = f.value(rec.x);
    rec.move = switching(rec.x - prev);
    rep.total_hit += rec.hit;
    rep.total_move += rec.move;
    prev = rec.x;
    rep.costs.push_back(std::move(f));
    rep.steps.push_back(std::move(rec));
  }
  rep.total_cost = rep.total_hit + rep.total_move;
  log_debug("run " + rep.algorithm + ": total cost " + std::to_string(rep.total_cost));
  attach_comparators(rep, request);
  return rep;
}

RunReport run(OnlineAlgorithm& algorithm, const InstanceSpec& spec,
              const ComparatorRequest& request) {
  validate(spec);
  auto env = make_environment(spec);
  return run(algorithm, *env, start_point(spec), switching_norm(spec), feasible_set(spec),
             request, spec_hash(spec));
}

namespace {

template <typename Solve>
Comparator solve_comparator(const char* what, Solve&& solve) {
  Comparator c;
  c.requested = true;
  try {
    c.solution = solve();
    c.available = std::isfinite(c.solution.objective);
    if (!c.available) c.error = "non-finite objective";
  } catch (const Error& e) {
    c.error = e.what();
  }
  if (!c.available) log_info(std::string(what) + " comparator unavailable: " + c.error);
  return c;
}

}  // namespace

void attach_comparators(RunReport& rep, const ComparatorRequest& request) {
  const auto& fs = rep.costs;
  if (fs.empty()) return;
  const bool need_static = request.static_play || request.opt;
  if (need_static) {
    rep.static_play = solve_comparator("static", [&] {
      return static_opt(fs, rep.x0, rep.feasible, rep.switching, request.offline);
    });
    rep.static_play.requested = request.static_play;
  }
  if (request.opt) {
    rep.opt = solve_comparator("OPT", [&] {
      return offline_opt(fs, rep.x0, rep.feasible, rep.switching, request.offline);
    });
    if (rep.static_play.available &&
        (!rep.opt.available || rep.static_play.solution.objective < rep.opt.solution.objective)) {
      rep.opt.available = true;
      rep.opt.error.clear();
      rep.opt.solution = rep.static_play.solution;
      rep.opt.solution.method = "static_play";
    }
  }
  if (request.budget) {
    rep.budget = *request.budget;
    rep.opt_budget = solve_comparator("OPT(L)", [&] {
      return offline_opt_constrained(fs, rep.x0, *request.budget, rep.feasible, rep.switching,
                                     request.offline);
    });
  }

  rep.cr.reset();
  rep.dynamic_regret.reset();
  rep.static_regret.reset();
  if (rep.opt.available) {
    const double opt = rep.opt.solution.objective;
    if (opt > 1e-12 * std::max(1.0, rep.total_cost)) rep.cr = rep.total_cost / opt;
  }
  if (rep.opt_budget.available) rep.dynamic_regret = rep.total_cost - rep.opt_budget.solution.objective;
  if (rep.static_play.available) rep.static_regret = rep.total_cost - rep.static_play.solution.objective;
}

}  // namespace obd
