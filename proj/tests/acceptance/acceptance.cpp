// One PASS/FAIL line per acceptance criterion. Exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "obd/adversary.hpp"
#include "obd/algorithms.hpp"
#include "obd/audit.hpp"
#include "obd/environment.hpp"
#include "obd/errors.hpp"
#include "obd/experiments.hpp"
#include "obd/harness.hpp"
#include "obd/instance.hpp"
#include "obd/offline.hpp"
#include "obd/online.hpp"
#include "obd/projection.hpp"
#include "oracles.hpp"

using namespace obd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, const std::string& summary) {
  std::printf("criterion %d %s: %s  %s%s%s\n", id, title.c_str(), v.ok ? "PASS" : "FAIL", summary.c_str(),
              v.ok ? "" : "  first violation: ", v.ok ? "" : v.detail.c_str());
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

Grid oracle_grid(int d, double half_width) {
  Grid g;
  g.lo = Vector::Constant(d, -half_width);
  g.hi = Vector::Constant(d, half_width);
  g.points_per_axis = 21;
  g.zoom_passes = 4;
  return g;
}

// ---------------------------------------------------------------- 1
void lower_bound() {
  const auto t0 = Clock::now();
  Verdict v;
  double worst = 0.0;
  for (int d : {4, 9, 16, 25}) {
    HyperplaneAdversary env(d);
    PrimalObd alg(PrimalConfig{});
    const RunReport r = run(alg, env, Vector::Zero(d), Norm::l2(), FeasibleSet::whole_space(d));
    const double opt = comparator_cost(r.opt);
    const double root = std::sqrt(static_cast<double>(d));
    const double e = std::max({std::abs(r.total_cost - d), std::abs(opt - root), std::abs(*r.cr - root)});
    worst = std::max(worst, e);
    v.require(e <= 1e-9, "d=" + std::to_string(d) + " deviation " + fmt("%.3g", e));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 1.0, "runtime " + fmt("%.3f", secs) + " s");
  report(1, "lower bound", v, "max deviation " + fmt("%.2e", worst) + ", runtime " + fmt("%.3f", secs) + " s");
}

// ---------------------------------------------------------------- 2 and 3
struct SuiteInstance {
  InstanceSpec spec;
  double alpha = 1.0;
  BetaChoice beta;
  RunReport report;
};

std::vector<SuiteInstance> polyhedral_suite() {
  const double alphas[] = {0.5, 1.0, 2.0, 4.0};
  const int dims[] = {2, 5, 10};
  const NormKind tracking[] = {NormKind::kL2, NormKind::kL1, NormKind::kLInf};
  std::vector<SuiteInstance> suite(50);
  parallel_for(suite.size(), 1, [&](std::size_t i) {
    SuiteInstance& s = suite[i];
    s.alpha = alphas[i % 4];
    s.spec.d = dims[(i / 4) % 3];
    s.spec.T = 50;
    s.spec.family = CostFamily::kNormTracking;
    s.spec.tracking_norm = tracking[(i / 12) % 3];
    s.spec.switching_norm = NormKind::kL2;
    s.spec.alpha = s.alpha;
    s.spec.offset_max = i % 2 == 0 ? 0.0 : 2.0;
    s.spec.seed = 5000 + i;
    s.beta = choose_beta(s.alpha);
    PrimalConfig cfg;
    cfg.beta = s.beta.beta;
    PrimalObd alg(cfg);
    s.report = run(alg, s.spec);
  });
  return suite;
}

void competitive_bound_suite(const std::vector<SuiteInstance>& suite, double suite_secs) {
  const auto t0 = Clock::now();
  Verdict v;
  double worst_margin = -1e300;
  for (const SuiteInstance& s : suite) {
    const double bound = s.beta.predicted_c;
    v.require(s.report.cr.has_value(), "seed " + std::to_string(s.spec.seed) + ": cr undefined");
    if (!s.report.cr) continue;
    worst_margin = std::max(worst_margin, *s.report.cr - bound);
    v.require(*s.report.cr <= bound + 1e-3,
              "seed " + std::to_string(s.spec.seed) + " cr " + fmt("%.6f", *s.report.cr) + " > " + fmt("%.6f", bound));
  }
  // OPT cross-validation on the d <= 2 members, truncated to T = 6.
  double worst_gap = 0.0;
  int checked = 0;
  for (const SuiteInstance& s : suite) {
    if (s.spec.d > 2) continue;
    const std::vector<CostFunction> fs(s.report.costs.begin(), s.report.costs.begin() + 6);
    const Vector x0 = s.report.x0;
    const OfflineSolution a = offline_opt(fs, x0, s.report.feasible);
    const OfflineSolution g = grid_dp_oracle(fs, x0, oracle_grid(s.spec.d, 6.0), s.report.feasible);
    const double gap = rel_gap(a.objective, g.objective);
    worst_gap = std::max(worst_gap, gap);
    ++checked;
    v.require(gap <= 1e-3, "seed " + std::to_string(s.spec.seed) + " offline vs grid gap " + fmt("%.3g", gap));
  }
  const double secs = suite_secs + seconds_since(t0);
  v.require(secs < 120.0, "runtime " + fmt("%.1f", secs) + " s");
  report(2, "competitive bound", v,
         std::to_string(suite.size()) + " instances, max(cr - (3 + 8/alpha)) " + fmt("%.4f", worst_margin) +
             ", OPT vs grid on " + std::to_string(checked) + " truncated instances max rel gap " +
             fmt("%.2e", worst_gap) + ", runtime " + fmt("%.1f", secs) + " s");
}

void per_step_audits(const std::vector<SuiteInstance>& suite) {
  Verdict v;
  double worst_potential = -1e300;
  double worst_decrease = -1e300;
  int potential_steps = 0;
  int decrease_steps = 0;
  for (const SuiteInstance& s : suite) {
    CompetitiveAuditInput in;
    in.alpha = s.alpha;
    in.beta = s.beta.beta;
    in.step_slack = 1e-6;
    for (const AuditCheck& c : audit_competitive(s.report, in).checks) {
      if (c.name == "potential_step") {
        worst_potential = std::max(worst_potential, c.worst_residual);
        potential_steps += c.checked;
        v.require(c.applicable && c.worst_residual <= 1e-6,
                  "seed " + std::to_string(s.spec.seed) + " potential residual " + fmt("%.3g", c.worst_residual));
      } else if (c.name == "balanced_decrease") {
        if (c.checked > 0) worst_decrease = std::max(worst_decrease, c.worst_residual);
        decrease_steps += c.checked;
        v.require(!c.applicable || c.worst_residual <= 1e-6,
                  "seed " + std::to_string(s.spec.seed) + " decrease residual " + fmt("%.3g", c.worst_residual));
      }
    }
  }
  v.require(potential_steps > 0 && decrease_steps > 0, "no steps audited");
  report(3, "per-step audits", v,
         std::to_string(potential_steps) + " potential steps worst " + fmt("%.2e", worst_potential) + ", " +
             std::to_string(decrease_steps) + " balanced decrease steps worst " + fmt("%.2e", worst_decrease));
}

// ---------------------------------------------------------------- 4
struct DualSample {
  double lhs = 0.0;
  double rhs = 0.0;
};
std::vector<DualSample> dual_samples;

void regret_bound_suite() {
  const auto t0 = Clock::now();
  Verdict v;
  const double radius = 5.0;
  const double g = radius;  // ||grad Phi(x)||_2 = ||x||_2 on the ball
  const double diameter = 2.0 * radius;
  const double m = 1.0;
  double worst_ratio[3] = {-1e300, -1e300, -1e300};
  for (int i = 0; i < 30; ++i) {
    InstanceSpec spec;
    spec.d = i % 2 == 0 ? 2 : 5;
    spec.T = 100;
    spec.family = CostFamily::kQuadratic;
    spec.diameter = diameter;
    spec.feasible = FeasibleSet::ball(Vector::Zero(spec.d), radius);
    spec.seed = 9000 + static_cast<std::uint64_t>(i);
    const std::string tag = "seed " + std::to_string(spec.seed);

    auto run_with = [&](double eta, double budget) {
      DualConfig cfg;
      cfg.eta = eta;
      cfg.feasible = spec.feasible;
      DualObd alg(cfg);
      ComparatorRequest req;
      req.budget = budget;
      RunReport r = run(alg, spec, req);
      for (std::size_t t = 0; t < r.steps.size(); ++t) {
        const Vector& prev = t == 0 ? r.x0 : r.steps[t - 1].x;
        const CostFunction& f = r.costs[t];
        dual_samples.push_back({(r.steps[t].x - prev).norm(), eta * f.gradient(r.steps[t].x).norm()});
      }
      return r;
    };

    // L = D with the tuned eta; the same run gives the L = 0 comparator (stay at the origin),
    // for which the two-term bound reduces to T eta / (2 m).
    const EtaChoice at_d = choose_eta(g, diameter, m, spec.T);
    RunReport r = run_with(at_d.eta, diameter);
    const double rho_d = *r.dynamic_regret;
    worst_ratio[1] = std::max(worst_ratio[1], rho_d / at_d.regret_bound);
    v.require(rho_d <= at_d.regret_bound * (1 + 1e-4), tag + " L=D regret " + fmt("%.6g", rho_d));

    ComparatorRequest zero;
    zero.opt = false;
    zero.budget = 0.0;
    attach_comparators(r, zero);
    const double rho_0 = *r.dynamic_regret;
    const double b0 = regret_bound(g, 0.0, m, at_d.eta, spec.T);
    worst_ratio[0] = std::max(worst_ratio[0], rho_0 / b0);
    v.require(rho_0 <= b0 * (1 + 1e-4), tag + " L=0 regret " + fmt("%.6g", rho_0) + " > " + fmt("%.6g", b0));

    // L = movement of OPT, eta tuned for that L.
    const double mv = r.opt.solution.total_move;
    if (mv > 0.0) {
      const EtaChoice at_mv = choose_eta(g, mv, m, spec.T);
      const RunReport r2 = run_with(at_mv.eta, mv);
      const double rho = *r2.dynamic_regret;
      worst_ratio[2] = std::max(worst_ratio[2], rho / at_mv.regret_bound);
      v.require(rho <= at_mv.regret_bound * (1 + 1e-4), tag + " L=OPT movement regret " + fmt("%.6g", rho));
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < 120.0, "runtime " + fmt("%.1f", secs) + " s");
  report(4, "regret bound", v,
         "30 instances, max regret/bound at L=0 " + fmt("%.3f", worst_ratio[0]) + ", L=D " +
             fmt("%.3f", worst_ratio[1]) + ", L=OPT movement " + fmt("%.3f", worst_ratio[2]) + ", runtime " +
             fmt("%.1f", secs) + " s");
}

// ---------------------------------------------------------------- 5
struct ProjectionCase {
  MirrorMap map;
  CostFunction f;
  FeasibleSet feasible;
  Vector x_prev;
  double level = 0.0;
};

ProjectionCase random_case(std::mt19937_64& rng, int i) {
  const int d = 2 + i % 3;
  ProjectionCase c;
  const int kind = i % 5;
  if (kind == 4) {
    const double delta = 0.01;
    c.map = MirrorMap::negative_entropy(delta);
    c.feasible = FeasibleSet::simplex(d, delta);
    c.f = make_quadratic_form(oracle::random_spd(rng, d), oracle::simplex_point(rng, d, 0.05));
    c.x_prev = oracle::simplex_point(rng, d, delta);
  } else {
    c.map = kind == 3 ? MirrorMap::mahalanobis(oracle::random_spd(rng, d)) : MirrorMap::euclidean();
    c.feasible = i % 7 == 0 ? FeasibleSet::ball(Vector::Zero(d), 3.0) : FeasibleSet::whole_space(d);
    const Vector v = c.feasible.project(oracle::gaussian(rng, d));
    const Norm norms[] = {Norm::l2(), Norm::l1(), Norm::linf()};
    c.f = kind == 0 ? make_norm_tracking(v, norms[(i / 5) % 3], Norm::l2(), 1.0, 0.2)
                    : make_quadratic_form(oracle::random_spd(rng, d), v, 0.1);
    c.x_prev = c.feasible.project(v + oracle::gaussian(rng, d, 3.0));
  }
  std::uniform_real_distribution<double> u(0.1, 0.9);
  c.level = c.f.min_value() + u(rng) * (c.f(c.x_prev) - c.f.min_value());
  return c;
}

// A point of {f <= level} within the feasible set, or nothing after a few attempts.
std::optional<Vector> sample_sublevel(std::mt19937_64& rng, const ProjectionCase& c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Index d = c.x_prev.size();
  for (int attempt = 0; attempt < 200; ++attempt) {
    Vector y;
    if (c.map.kind() == MirrorKind::kNegativeEntropy) {
      const double w = u(rng);
      y = w * c.f.minimizer() + (1 - w) * oracle::simplex_point(rng, d, c.feasible.delta());
    } else {
      // f is increasing along rays from the minimizer: find the boundary then draw inside.
      const Vector dir = oracle::gaussian(rng, d);
      double hi = 1.0;
      while (c.f(c.f.minimizer() + hi * dir) <= c.level) hi *= 2.0;
      const double s = oracle::golden_section(
          [&](double z) { return std::abs(c.f(c.f.minimizer() + z * dir) - c.level); }, 0.0, hi, 1e-13);
      y = c.f.minimizer() + u(rng) * s * dir;
    }
    if (c.f(y) <= c.level && c.feasible.contains(y, 0.0)) return y;
  }
  return std::nullopt;
}

void projection_engine() {
  Verdict v;
  std::mt19937_64 rng(20240501);
  int samples = 0;
  double worst_pyth = -1e300;
  double worst_stat = 0.0;
  double worst_comp = 0.0;
  int kkt_checked = 0;
  for (int i = 0; samples < 10000; ++i) {
    const ProjectionCase c = random_case(rng, i);
    const ProjectionResult r = project_sublevel(c.map, c.f, c.level, c.x_prev, c.feasible);
    const double comp = r.eta * std::abs(c.f(r.x) - c.level);
    worst_comp = std::max(worst_comp, comp);
    v.require(comp <= 1e-6, "case " + std::to_string(i) + " complementarity " + fmt("%.3g", comp));
    const bool interior = c.map.kind() != MirrorKind::kNegativeEntropy || r.x.minCoeff() > c.feasible.delta() + 1e-9;
    const bool ball_free = c.feasible.kind() != SetKind::kBall || c.feasible.contains(r.x, -1e-9);
    if (c.f.smooth() && interior && ball_free) {
      const double st = stationarity_residual(c.map, c.f, r.x, c.x_prev, r.eta, &c.feasible);
      worst_stat = std::max(worst_stat, st);
      ++kkt_checked;
      v.require(st <= 1e-6, "case " + std::to_string(i) + " stationarity " + fmt("%.3g", st));
    }
    const double base = bregman_divergence(c.map, r.x, c.x_prev);
    for (int k = 0; k < 20 && samples < 10000; ++k) {
      const std::optional<Vector> y = sample_sublevel(rng, c);
      if (!y) continue;
      const double gap = base + bregman_divergence(c.map, *y, r.x) - bregman_divergence(c.map, *y, c.x_prev);
      worst_pyth = std::max(worst_pyth, gap);
      v.require(gap <= 1e-7, "case " + std::to_string(i) + " pythagorean gap " + fmt("%.3g", gap));
      ++samples;
    }
  }

  // Update forms of the three mirror maps, 100 interior steps each.
  double worst_form[3] = {0.0, 0.0, 0.0};
  std::mt19937_64 frng(77);
  for (int which = 0; which < 3; ++which) {
    int done = 0;
    for (int attempt = 0; done < 100 && attempt < 1000; ++attempt) {
      const int d = 2 + attempt % 4;
      Vector x_prev;
      Vector form;
      if (which < 2) {
        const Matrix q = oracle::random_spd(frng, d);
        const MirrorMap map = which == 0 ? MirrorMap::euclidean() : MirrorMap::mahalanobis(q);
        const CostFunction f = make_quadratic_form(oracle::random_spd(frng, d), oracle::gaussian(frng, d));
        x_prev = oracle::gaussian(frng, d, 3.0);
        const ProjectionResult r = project_sublevel(map, f, f.min_value() + 0.4 * (f(x_prev) - f.min_value()), x_prev,
                                                    FeasibleSet::whole_space(d));
        const Vector g = f.gradient(r.x);
        form = x_prev - r.eta * (which == 0 ? g : Vector(q.ldlt().solve(g)));
        worst_form[which] = std::max(worst_form[which], (r.x - form).lpNorm<Eigen::Infinity>());
      } else {
        const double delta = 1e-3;
        const CostFunction f = make_quadratic_form(oracle::random_spd(frng, d), oracle::simplex_point(frng, d, 0.1));
        x_prev = oracle::simplex_point(frng, d, 0.02);
        const ProjectionResult r =
            project_sublevel(MirrorMap::negative_entropy(delta), f, f.min_value() + 0.4 * (f(x_prev) - f.min_value()),
                             x_prev, FeasibleSet::simplex(d, delta));
        if (r.x.minCoeff() <= delta + 1e-9) continue;  // lower bounds active: the multiplicative form needs interior
        Vector y = x_prev.array() * (-r.eta * f.gradient(r.x)).array().exp();
        y /= y.sum();
        worst_form[which] = std::max(worst_form[which], (r.x - y).lpNorm<Eigen::Infinity>());
      }
      ++done;
    }
    v.require(done == 100, "only " + std::to_string(done) + " update-form steps for map " + std::to_string(which));
    v.require(worst_form[which] <= 1e-6, "update form " + std::to_string(which) + " error " + fmt("%.3g", worst_form[which]));
  }
  report(5, "projection engine", v,
         std::to_string(samples) + " Pythagorean samples worst " + fmt("%.2e", worst_pyth) + ", KKT on " +
             std::to_string(kkt_checked) + " projections stationarity " + fmt("%.2e", worst_stat) +
             " complementarity " + fmt("%.2e", worst_comp) + ", update forms " + fmt("%.1e", worst_form[0]) + "/" +
             fmt("%.1e", worst_form[1]) + "/" + fmt("%.1e", worst_form[2]));
}

// ---------------------------------------------------------------- 6
void balance_residuals(const std::vector<SuiteInstance>& suite) {
  Verdict v;
  double worst_primal = 0.0;
  int primal_steps = 0;
  for (const SuiteInstance& s : suite) {
    for (const StepRecord& r : s.report.steps) {
      if (r.branch != StepBranch::kBalanced) continue;
      const double e = std::abs(r.move - s.beta.beta * r.level) / std::max(1.0, r.level);
      worst_primal = std::max(worst_primal, e);
      ++primal_steps;
      v.require(e <= 1e-8, "primal balance " + fmt("%.3g", e));
    }
  }
  double worst_dual = 0.0;
  for (const DualSample& s : dual_samples) {
    const double e = std::abs(s.lhs - s.rhs) / std::max({s.lhs, s.rhs, 1e-300});
    if (s.lhs == 0.0 && s.rhs == 0.0) continue;
    worst_dual = std::max(worst_dual, e);
    v.require(e <= 1e-6, "dual balance " + fmt("%.3g", e));
  }

  // 100-point level sweeps around the bisection results.
  std::mt19937_64 rng(31337);
  int sweeps = 0;
  int missed = 0;
  for (int i = 0; i < 40; ++i) {
    const int d = 2 + i % 3;
    const bool primal = i % 2 == 0;
    const Vector v0 = oracle::gaussian(rng, d);
    const CostFunction f = primal && i % 4 == 0 ? make_norm_tracking(v0, Norm::l2(), Norm::l2(), 1.5, 0.0)
                                                : make_quadratic_form(oracle::random_spd(rng, d), v0, 0.0);
    const Vector x_prev = v0 + oracle::gaussian(rng, d, 4.0);
    const double beta = 0.5;
    const double eta = 0.7;
    double l_star = 0.0;
    if (primal) {
      PrimalConfig cfg;
      cfg.beta = beta;
      const StepRecord r = primal_obd_step(x_prev, f, cfg);
      if (r.branch != StepBranch::kBalanced) continue;
      l_star = r.level;
    } else {
      DualConfig cfg;
      cfg.eta = eta;
      l_star = dual_obd_step(x_prev, f, cfg).level;
    }
    SublevelProjector proj(MirrorMap::euclidean(), f, x_prev, FeasibleSet::whole_space(d));
    const double lo = f.min_value();
    const double hi = f(x_prev);
    std::vector<double> ls;
    std::vector<double> h;
    std::vector<double> dist;
    for (int k = 0; k < 100; ++k) {
      const double l = lo + (hi - lo) * (k + 0.5) / 100.0;
      const Vector x = proj.project(l).x;
      ls.push_back(l);
      dist.push_back((x - x_prev).norm());
      h.push_back(primal ? dist.back() - beta * l : dist.back() - eta * f.gradient(x).norm());
    }
    for (int k = 1; k < 100; ++k) {
      v.require(dist[k] <= dist[k - 1] + 1e-9, "distance to x_prev not monotone in the level");
    }
    int changes = 0;
    bool located = false;
    for (int k = 1; k < 100; ++k) {
      if ((h[k - 1] > 0) != (h[k] > 0)) {
        ++changes;
        if (l_star >= ls[k - 1] - 1e-9 && l_star <= ls[k] + 1e-9) located = true;
      }
    }
    if (changes == 0) {
      // crossing below the first or above the last sample
      located = (h[0] <= 0 && l_star <= ls[0] + 1e-9) || (h[99] > 0 && l_star >= ls[99] - 1e-9);
    }
    if (primal) v.require(changes <= 1, "primal balance function crossed zero " + std::to_string(changes) + " times");
    if (!located) ++missed;
    v.require(located, "bisection level outside every sweep sign change (case " + std::to_string(i) + ")");
    ++sweeps;
  }
  report(6, "balance residuals", v,
         std::to_string(primal_steps) + " primal balanced steps worst " + fmt("%.2e", worst_primal) + ", " +
             std::to_string(dual_samples.size()) + " dual steps worst " + fmt("%.2e", worst_dual) + ", " +
             std::to_string(sweeps) + " level sweeps, " + std::to_string(missed) + " missed crossings");
}

// ---------------------------------------------------------------- 7
void offline_solvers() {
  Verdict v;
  double worst_free = 0.0;
  double worst_budget = 0.0;
  int instances = 0;
  int binding = 0;
  for (CostFamily fam : {CostFamily::kQuadratic, CostFamily::kNormTracking, CostFamily::kComposite}) {
    for (int d = 1; d <= 2; ++d) {
      for (int T = 1; T <= 6; ++T) {
        InstanceSpec spec;
        spec.d = d;
        spec.T = T;
        spec.family = fam;
        spec.diameter = 4.0;
        spec.offset_max = 0.5;
        spec.seed = 700 + static_cast<std::uint64_t>(fam) * 100 + d * 10 + T;
        const auto fs = generate_instance(spec);
        const Vector x0 = Vector::Zero(d);
        const FeasibleSet ws = FeasibleSet::whole_space(d);
        const std::string tag = to_string(fam) + " d=" + std::to_string(d) + " T=" + std::to_string(T);
        const OfflineSolution a = offline_opt(fs, x0, ws);
        const OfflineSolution g = grid_dp_oracle(fs, x0, oracle_grid(d, 4.0), ws);
        const double gap = rel_gap(a.objective, g.objective);
        worst_free = std::max(worst_free, gap);
        v.require(gap <= 1e-3, tag + " offline_opt gap " + fmt("%.3g", gap));
        ++instances;
        if (a.total_move <= 0.0) continue;
        const double budget = 0.5 * a.total_move;
        const OfflineSolution c = offline_opt_constrained(fs, x0, budget, ws);
        const OfflineSolution gc = grid_dp_oracle_constrained(fs, x0, budget, oracle_grid(d, 4.0), ws);
        const double cgap = rel_gap(c.objective, gc.objective);
        worst_budget = std::max(worst_budget, cgap);
        v.require(cgap <= 1e-3, tag + " OPT(L) gap " + fmt("%.3g", cgap));
        v.require(c.total_move <= budget && c.total_move >= budget * (1 - 1e-4),
                  tag + " OPT(L) movement " + fmt("%.9g", c.total_move) + " vs L " + fmt("%.9g", budget));
        ++binding;
      }
    }
  }
  report(7, "offline solvers", v,
         std::to_string(instances) + " instances max rel gap " + fmt("%.2e", worst_free) + ", " +
             std::to_string(binding) + " binding budgets max rel gap " + fmt("%.2e", worst_budget));
}

// ---------------------------------------------------------------- 8
void parameter_formulas() {
  Verdict v;
  const BetaChoice b = choose_beta(2.0);
  v.require(b.beta == 0.75 && b.predicted_c == 7.0, "choose_beta(2)");
  const EtaChoice e = choose_eta(1, 1, 1, 8);
  v.require(e.eta == 0.5 && e.regret_bound == 4.0, "choose_eta(1,1,1,8)");
  auto rejects = [](double alpha, double kappa) {
    try {
      choose_beta_general(alpha, kappa);
      return false;
    } catch (const InvalidArgument&) {
      return true;
    }
  };
  v.require(rejects(1.0, 2.0), "choose_beta_general(1, 2) accepted");
  v.require(rejects(2.0, 2.0), "choose_beta_general(2, 2) accepted (boundary)");
  v.require(rejects(0.5, 1.25), "choose_beta_general(0.5, 1.25) accepted");
  v.require(!rejects(2.0 + 1e-9, 2.0), "choose_beta_general just above the threshold rejected");
  report(8, "parameter formulas", v,
         "choose_beta(2) = (" + fmt("%g", b.beta) + ", " + fmt("%g", b.predicted_c) + "), choose_eta(1,1,1,8) = (" +
             fmt("%g", e.eta) + ", " + fmt("%g", e.regret_bound) + ")");
}

// ---------------------------------------------------------------- 9
void experiment_reproduction() {
  const auto t0 = Clock::now();
  Verdict v;
  const std::vector<int> dims = {2, 4, 8, 16, 32};
  InstanceSpec base;
  base.cond = 10.0;
  base.diameter = 10.0;
  std::string trend;
  for (CostFamily fam : {CostFamily::kQuadratic, CostFamily::kNormTracking}) {
    const ExperimentOutput a = experiment_cr_vs_dim(fam, dims, 10, base, 0.5, 1);
    v.require(a.table.rows.size() == dims.size() * 10, to_string(fam) + " table has " +
                                                           std::to_string(a.table.rows.size()) + " rows");
    v.require(a.skipped.empty(), to_string(fam) + " skipped trials");
    const ExperimentOutput b = experiment_cr_vs_dim(fam, dims, 10, base, 0.5, 1);
    v.require(a.table.to_csv() == b.table.to_csv(), to_string(fam) + " CSV differs between runs");
    if (fam == CostFamily::kQuadratic) {
      for (const auto& row : a.plot) trend += " d=" + fmt("%g", row[0]) + ":" + fmt("%.4f", row[1]);
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < 300.0, "runtime " + fmt("%.1f", secs) + " s");
  report(9, "experiment reproduction", v,
         "deterministic CSV for both families, runtime " + fmt("%.1f", secs) + " s (two runs each); quadratic mean cr" +
             trend);
}

}  // namespace

int main() {
  lower_bound();
  const auto t0 = Clock::now();
  const std::vector<SuiteInstance> suite = polyhedral_suite();
  const double suite_secs = seconds_since(t0);
  competitive_bound_suite(suite, suite_secs);
  per_step_audits(suite);
  regret_bound_suite();
  projection_engine();
  balance_residuals(suite);
  offline_solvers();
  parameter_formulas();
  experiment_reproduction();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
