#include "obd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "obd/log.hpp"

namespace obd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCrVsDim: return "cr_vs_dim";
    case ExperimentKind::kRegretSweep: return "regret_sweep";
    case ExperimentKind::kLowerBound: return "lower_bound";
    case ExperimentKind::kAuditSuite: return "audit_suite";
    case ExperimentKind::kSingleRun: return "single_run";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::kCrVsDim, ExperimentKind::kRegretSweep, ExperimentKind::kLowerBound,
                 ExperimentKind::kAuditSuite, ExperimentKind::kSingleRun}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("experiment: unknown experiment '" + name + "'");
}

std::string to_string(ParamMode mode) {
  switch (mode) {
    case ParamMode::kBeta: return "beta";
    case ParamMode::kEta: return "eta";
    case ParamMode::kAutoAlpha: return "auto_alpha";
    case ParamMode::kAutoTuned: return "auto_tuned";
  }
  return "?";
}

ParamMode param_mode_from_string(const std::string& name) {
  for (auto m : {ParamMode::kBeta, ParamMode::kEta, ParamMode::kAutoAlpha, ParamMode::kAutoTuned}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("algorithm.mode: unknown mode '" + name + "'");
}

// ---- config

namespace {

const std::vector<std::string> kAlgorithms{"primal_obd", "dual_obd", "ogd", "omd", "greedy", "static"};

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw InvalidArgument(where + it.key() + ": unknown key");
  }
}

double get_real(const Json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw InvalidArgument(where + key + ": expected a number");
  return j.at(key).get<double>();
}

std::string get_string(const Json& j, const char* key, const std::string& fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw InvalidArgument(where + key + ": expected a string");
  return j.at(key).get<std::string>();
}

}  // namespace

void validate(const Config& cfg) {
  if (cfg.dims.empty()) throw InvalidArgument("dims: must not be empty");
  for (int d : cfg.dims) {
    if (d < 1) throw InvalidArgument("dims: entries must be >= 1");
  }
  if (cfg.trials < 1) throw InvalidArgument("trials: must be >= 1");
  if (cfg.jobs < 1) throw InvalidArgument("jobs: must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") throw InvalidArgument("format: must be csv or json");
  if (cfg.out.empty()) throw InvalidArgument("out: must not be empty");
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), cfg.algorithm.name) == kAlgorithms.end()) {
    throw InvalidArgument("algorithm.name: unknown algorithm '" + cfg.algorithm.name + "'");
  }
  if (!(cfg.algorithm.beta > 0.0 && cfg.algorithm.beta < 1.0)) {
    throw InvalidArgument("algorithm.beta: must lie in (0, 1)");
  }
  if (!(cfg.algorithm.eta > 0.0) || !std::isfinite(cfg.algorithm.eta)) {
    throw InvalidArgument("algorithm.eta: must be positive");
  }
  if (!(cfg.algorithm.step_scale > 0.0)) throw InvalidArgument("algorithm.step_scale: must be positive");
  const Tolerances& t = cfg.tolerances;
  if (!(t.ratio_slack >= 0.0) || !(t.step_slack >= 0.0) || !(t.regret_rel_slack >= 0.0)) {
    throw InvalidArgument("tolerances: slacks must be non-negative");
  }
  if (cfg.experiment == ExperimentKind::kSingleRun) validate(cfg.spec);
}

Json to_json(const Config& cfg) {
  return Json{{"experiment", to_string(cfg.experiment)},
              {"spec", to_json(cfg.spec)},
              {"dims", cfg.dims},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"algorithm",
               {{"name", cfg.algorithm.name},
                {"mode", to_string(cfg.algorithm.mode)},
                {"beta", cfg.algorithm.beta},
                {"eta", cfg.algorithm.eta},
                {"step_scale", cfg.algorithm.step_scale}}},
              {"out", cfg.out},
              {"format", cfg.format},
              {"jobs", cfg.jobs},
              {"tolerances",
               {{"ratio_slack", cfg.tolerances.ratio_slack},
                {"step_slack", cfg.tolerances.step_slack},
                {"regret_rel_slack", cfg.tolerances.regret_rel_slack}}}};
}

Config config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
  reject_unknown(j, {"experiment", "spec", "dims", "trials", "seed", "algorithm", "out", "format",
                     "jobs", "tolerances"},
                 "");
  Config c;
  c.experiment = experiment_kind_from_string(get_string(j, "experiment", to_string(c.experiment), ""));
  if (j.contains("spec")) c.spec = instance_spec_from_json(j.at("spec"));
  if (j.contains("dims")) {
    const Json& d = j.at("dims");
    if (!d.is_array()) throw InvalidArgument("dims: expected an array of integers");
    c.dims.clear();
    for (const Json& v : d) {
      if (!v.is_number_integer()) throw InvalidArgument("dims: expected an array of integers");
      c.dims.push_back(v.get<int>());
    }
  }
  if (j.contains("trials")) {
    if (!j.at("trials").is_number_integer()) throw InvalidArgument("trials: expected an integer");
    c.trials = j.at("trials").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InvalidArgument("seed: expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("jobs")) {
    if (!j.at("jobs").is_number_integer()) throw InvalidArgument("jobs: expected an integer");
    c.jobs = j.at("jobs").get<int>();
  }
  c.out = get_string(j, "out", c.out, "");
  c.format = get_string(j, "format", c.format, "");
  if (j.contains("algorithm")) {
    const Json& a = j.at("algorithm");
    if (!a.is_object()) throw InvalidArgument("algorithm: expected an object");
    reject_unknown(a, {"name", "mode", "beta", "eta", "step_scale"}, "algorithm.");
    c.algorithm.name = get_string(a, "name", c.algorithm.name, "algorithm.");
    c.algorithm.mode = param_mode_from_string(get_string(a, "mode", to_string(c.algorithm.mode), "algorithm."));
    c.algorithm.beta = get_real(a, "beta", c.algorithm.beta, "algorithm.");
    c.algorithm.eta = get_real(a, "eta", c.algorithm.eta, "algorithm.");
    c.algorithm.step_scale = get_real(a, "step_scale", c.algorithm.step_scale, "algorithm.");
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) throw InvalidArgument("tolerances: expected an object");
    reject_unknown(t, {"ratio_slack", "step_slack", "regret_rel_slack"}, "tolerances.");
    c.tolerances.ratio_slack = get_real(t, "ratio_slack", c.tolerances.ratio_slack, "tolerances.");
    c.tolerances.step_slack = get_real(t, "step_slack", c.tolerances.step_slack, "tolerances.");
    c.tolerances.regret_rel_slack =
        get_real(t, "regret_rel_slack", c.tolerances.regret_rel_slack, "tolerances.");
  }
  validate(c);
  return c;
}

// ---- tables

const char* ResultTable::header() {
  return "family,d,trial,seed,algo,total_cost,opt_cost,cr,regret_L,bound,audit_worst_residual";
}

std::string ResultTable::to_csv() const {
  auto num = [](double v) {
    if (std::isnan(v)) return std::string();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = std::string(header()) + "\n";
  for (const ResultRow& r : rows) {
    out += r.family + "," + std::to_string(r.d) + "," + std::to_string(r.trial) + "," +
           std::to_string(r.seed) + "," + r.algo + "," + num(r.total_cost) + "," + num(r.opt_cost) +
           "," + num(r.cr) + "," + num(r.regret_l) + "," + num(r.bound) + "," +
           num(r.audit_worst_residual) + "\n";
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t base, int d, int trial) {
  // splitmix64 finalizer over a mixed key
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(d) * 1000003ULL +
                                                    static_cast<std::uint64_t>(trial) + 1ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- experiments

namespace {

struct TrialOutcome {
  bool ok = false;
  std::string reason;
  std::vector<ResultRow> rows;
  std::vector<Trace> traces;
  bool audits_passed = true;
};

std::string trace_name(const std::string& hash, const std::string& algo) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(hash + "/" + algo)));
  return std::string("run_") + buf;
}

Json report_totals(const RunReport& rep) {
  Json t{{"hit", real_to_json(rep.total_hit)},
         {"move", real_to_json(rep.total_move)},
         {"cost", real_to_json(rep.total_cost)},
         {"opt", real_to_json(comparator_cost(rep.opt))},
         {"cr", rep.cr ? real_to_json(*rep.cr) : Json(nullptr)}};
  if (rep.opt_budget.requested) {
    t["budget"] = real_to_json(rep.budget);
    t["opt_budget"] = real_to_json(comparator_cost(rep.opt_budget));
    t["dynamic_regret"] = rep.dynamic_regret ? real_to_json(*rep.dynamic_regret) : Json(nullptr);
  }
  if (rep.static_regret) t["static_regret"] = real_to_json(*rep.static_regret);
  Json audits = Json::array();
  for (const AuditCheck& c : rep.audits) {
    audits.push_back(Json{{"name", c.name},
                          {"applicable", c.applicable},
                          {"passed", c.passed},
                          {"worst_residual", real_to_json(c.worst_residual)},
                          {"checked", c.checked},
                          {"detail", c.detail}});
  }
  t["audits"] = audits;
  return t;
}

void add_traces(const InstanceSpec& spec, const RunReport& rep, std::vector<Trace>& out) {
  const Json sj = to_json(spec);
  out.push_back({trace_name(rep.spec_hash, rep.algorithm),
                 trajectory_json(sj, rep.algorithm, rep.steps, report_totals(rep))});
  if (rep.opt.available) {
    out.push_back({trace_name(rep.spec_hash, "offline_opt"),
                   trajectory_json(sj, "offline_opt", rep.costs, rep.x0, rep.opt.solution,
                                   rep.switching)});
  }
}

AuditCheck opt_sanity(const RunReport& rep) {
  AuditCheck c;
  c.name = "opt_lower_bound";
  c.slack = 1e-6;
  if (rep.cr) {
    c.checked = 1;
    c.worst_residual = 1.0 - *rep.cr;
    c.passed = c.worst_residual <= c.slack;
  } else {
    c.applicable = false;
  }
  return c;
}

double worst(const std::vector<AuditCheck>& checks) {
  AuditResult r{checks};
  const double w = r.worst_residual();
  return std::isfinite(w) ? w : kNaN;
}

bool all_passed(const std::vector<AuditCheck>& checks) { return AuditResult{checks}.passed(); }

double ball_gradient_bound(const FeasibleSet& x) {
  if (x.kind() == SetKind::kBall && x.ball_norm().kind() == NormKind::kL2) {
    return x.center().norm() + x.radius();
  }
  if (x.kind() == SetKind::kBox) {
    return x.lo().cwiseAbs().cwiseMax(x.hi().cwiseAbs()).norm();
  }
  throw InvalidArgument("feasible: the tuned eta needs an l2 ball or a box");
}

ExperimentOutput collect(std::vector<TrialOutcome>& outcomes) {
  ExperimentOutput out;
  for (TrialOutcome& o : outcomes) {
    if (!o.ok) {
      out.skipped.push_back(o.reason);
      log_info("skipped trial: " + o.reason);
      continue;
    }
    out.audits_passed = out.audits_passed && o.audits_passed;
    for (ResultRow& r : o.rows) out.table.rows.push_back(std::move(r));
    for (Trace& t : o.traces) out.traces.push_back(std::move(t));
  }
  return out;
}

// plot rows (x, mean y, min y, max y) grouped by d over one column
void summarize(ExperimentOutput& out, const std::string& family, double ResultRow::*column) {
  std::vector<int> ds;
  for (const ResultRow& r : out.table.rows) {
    if (r.family == family && std::find(ds.begin(), ds.end(), r.d) == ds.end()) ds.push_back(r.d);
  }
  for (int d : ds) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int n = 0;
    for (const ResultRow& r : out.table.rows) {
      const double v = r.*column;
      if (r.family != family || r.d != d || std::isnan(v)) continue;
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++n;
    }
    if (n > 0) out.plot.push_back({static_cast<double>(d), sum / n, lo, hi});
  }
}

}  // namespace

ExperimentOutput experiment_cr_vs_dim(CostFamily family, const std::vector<int>& dims, int trials,
                                      const InstanceSpec& base, double beta, int jobs,
                                      const Tolerances& tol) {
  if (family != CostFamily::kQuadratic && family != CostFamily::kNormTracking) {
    throw InvalidArgument("family: cr_vs_dim runs quadratic or norm_tracking");
  }
  if (trials < 1) throw InvalidArgument("trials: must be >= 1");
  std::vector<std::pair<int, int>> tasks;
  for (int d : dims) {
    for (int k = 0; k < trials; ++k) tasks.emplace_back(d, k);
  }
  std::vector<TrialOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const auto [d, k] = tasks[i];
    TrialOutcome& o = outcomes[i];
    InstanceSpec spec = base;
    spec.d = d;
    spec.family = family;
    spec.seed = trial_seed(base.seed, d, k);
    spec.x0.reset();
    if (spec.feasible && spec.feasible->dimension() != d) spec.feasible.reset();
    try {
      PrimalConfig pc;
      pc.beta = beta;
      pc.switching = switching_norm(spec);
      pc.feasible = spec.feasible;
      PrimalObd alg(pc);
      RunReport rep = run(alg, spec);
      if (!rep.opt.available) throw ConvergenceError("OPT unavailable: " + rep.opt.error);
      rep.audits.push_back(opt_sanity(rep));
      double bound = kNaN;
      if (family == CostFamily::kNormTracking && rep.switching.kind() == NormKind::kL2) {
        const double alpha = *rep.costs.front().alpha();
        CompetitiveAuditInput in{alpha, beta, tol.ratio_slack, tol.step_slack};
        AuditResult a = audit_competitive(rep, in);
        rep.audits.insert(rep.audits.end(), a.checks.begin(), a.checks.end());
        bound = competitive_bound(alpha, beta);
      }
      ResultRow row{to_string(family), d, k, spec.seed, rep.algorithm, rep.total_cost,
                    comparator_cost(rep.opt), rep.cr ? *rep.cr : kNaN, kNaN, bound,
                    worst(rep.audits), all_passed(rep.audits)};
      o.rows.push_back(row);
      o.audits_passed = row.audit_passed;
      add_traces(spec, rep, o.traces);
      o.ok = true;
    } catch (const Error& e) {
      o.reason = to_string(family) + " d=" + std::to_string(d) + " trial=" + std::to_string(k) +
                 ": " + e.what();
    }
  });
  ExperimentOutput out = collect(outcomes);
  out.plot_header = "# d mean_cr min_cr max_cr";
  summarize(out, to_string(family), &ResultRow::cr);
  return out;
}

ExperimentOutput experiment_regret_sweep(const std::vector<int>& dims, int trials,
                                         const InstanceSpec& base, int jobs,
                                         const Tolerances& tol) {
  if (trials < 1) throw InvalidArgument("trials: must be >= 1");
  std::vector<std::pair<int, int>> tasks;
  for (int d : dims) {
    for (int k = 0; k < trials; ++k) tasks.emplace_back(d, k);
  }
  std::vector<TrialOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const auto [d, k] = tasks[i];
    TrialOutcome& o = outcomes[i];
    InstanceSpec spec = base;
    spec.d = d;
    spec.family = CostFamily::kQuadratic;
    spec.seed = trial_seed(base.seed, d, k);
    spec.x0.reset();
    const double radius = base.diameter;
    spec.feasible = FeasibleSet::ball(Vector::Zero(d), radius);
    try {
      const double g = radius;
      const double diam = 2.0 * radius;
      const EtaChoice eta = choose_eta(g, diam, 1.0, spec.T);
      DualConfig dc;
      dc.eta = eta.eta;
      dc.switching = switching_norm(spec);
      dc.feasible = spec.feasible;
      DualObd alg(dc);
      ComparatorRequest req;
      req.budget = diam;
      req.static_play = true;
      RunReport rep = run(alg, spec, req);
      RegretAuditInput in{g, diam, 1.0, eta.eta, diam, tol.regret_rel_slack};
      AuditResult a = audit_regret(rep, in);
      rep.audits = a.checks;
      rep.audits.push_back(opt_sanity(rep));
      if (rep.opt.available && rep.opt.solution.total_move < diam) {
        // Same run against OPT(L) at the optimum's own movement.
        RunReport at_opt = rep;
        ComparatorRequest r2;
        r2.opt = false;
        r2.budget = rep.opt.solution.total_move;
        attach_comparators(at_opt, r2);
        RegretAuditInput in2{g, *r2.budget, 1.0, eta.eta, std::nullopt, tol.regret_rel_slack};
        for (AuditCheck c : audit_regret(at_opt, in2).checks) {
          c.name += "_opt_movement";
          rep.audits.push_back(c);
        }
      }
      ResultRow row{"quadratic", d, k, spec.seed, rep.algorithm, rep.total_cost,
                    comparator_cost(rep.opt), rep.cr ? *rep.cr : kNaN,
                    rep.dynamic_regret ? *rep.dynamic_regret : kNaN, eta.regret_bound,
                    worst(rep.audits), all_passed(rep.audits)};
      o.rows.push_back(row);
      o.audits_passed = row.audit_passed;
      add_traces(spec, rep, o.traces);
      o.ok = true;
    } catch (const Error& e) {
      o.reason = "regret d=" + std::to_string(d) + " trial=" + std::to_string(k) + ": " + e.what();
    }
  });
  ExperimentOutput out = collect(outcomes);
  out.plot_header = "# d mean_regret min_regret max_regret";
  summarize(out, "quadratic", &ResultRow::regret_l);
  return out;
}

ExperimentOutput experiment_lower_bound(const std::vector<int>& dims) {
  ExperimentOutput out;
  out.plot_header = "# d online_cost offline_cost ratio";
  for (int d : dims) {
    InstanceSpec spec;
    spec.d = d;
    spec.T = d;
    spec.family = CostFamily::kHyperplaneChase;
    PrimalConfig pc;  // indicator rounds are answered by Euclidean set projection
    PrimalObd alg(pc);
    RunReport rep = run(alg, spec);
    rep.audits.push_back(opt_sanity(rep));
    const double ratio = rep.cr ? *rep.cr : kNaN;
    ResultRow row{"hyperplane_chase", d, 0, 0, rep.algorithm, rep.total_cost,
                  comparator_cost(rep.opt), ratio, kNaN, std::sqrt(static_cast<double>(d)),
                  worst(rep.audits), all_passed(rep.audits)};
    out.audits_passed = out.audits_passed && row.audit_passed;
    out.table.rows.push_back(row);
    out.plot.push_back({static_cast<double>(d), rep.total_cost, comparator_cost(rep.opt), ratio});
    add_traces(spec, rep, out.traces);
  }
  return out;
}

ExperimentOutput experiment_audit_suite(const std::vector<int>& dims, int trials,
                                        const InstanceSpec& base, int jobs,
                                        const Tolerances& tol) {
  ExperimentOutput out;
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    InstanceSpec spec = base;
    spec.alpha = alpha;
    spec.switching_norm = NormKind::kL2;
    spec.tracking_norm = NormKind::kL2;
    spec.seed = trial_seed(base.seed, static_cast<int>(alpha * 8.0), 0);
    ExperimentOutput part = experiment_cr_vs_dim(CostFamily::kNormTracking, dims, trials, spec,
                                                 choose_beta(alpha).beta, jobs, tol);
    out.audits_passed = out.audits_passed && part.audits_passed;
    for (ResultRow& r : part.table.rows) {
      r.family = "norm_tracking_alpha" + std::to_string(alpha).substr(0, 3);
      out.table.rows.push_back(r);
    }
    out.plot.push_back({alpha, kNaN, kNaN, kNaN});
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (const ResultRow& r : part.table.rows) {
      lo = std::min(lo, r.cr);
      hi = std::max(hi, r.cr);
      sum += r.cr;
    }
    out.plot.back() = {alpha, part.table.rows.empty() ? kNaN : sum / part.table.rows.size(), lo, hi};
    for (Trace& t : part.traces) out.traces.push_back(std::move(t));
    for (std::string& s : part.skipped) out.skipped.push_back(std::move(s));
  }
  ExperimentOutput regret = experiment_regret_sweep(dims, trials, base, jobs, tol);
  out.audits_passed = out.audits_passed && regret.audits_passed;
  for (ResultRow& r : regret.table.rows) out.table.rows.push_back(r);
  for (Trace& t : regret.traces) out.traces.push_back(std::move(t));
  for (std::string& s : regret.skipped) out.skipped.push_back(std::move(s));
  out.plot_header = "# alpha mean_cr min_cr max_cr";
  return out;
}

ExperimentOutput experiment_single_run(const Config& cfg) {
  const InstanceSpec& spec = cfg.spec;
  validate(spec);
  const AlgorithmChoice& a = cfg.algorithm;
  const FeasibleSet feasible = feasible_set(spec);
  std::unique_ptr<OnlineAlgorithm> alg;
  std::optional<CompetitiveAuditInput> competitive;
  std::optional<RegretAuditInput> regret;
  ComparatorRequest req;
  req.static_play = true;
  double bound = kNaN;

  if (a.name == "primal_obd") {
    PrimalConfig pc;
    pc.switching = switching_norm(spec);
    pc.feasible = spec.feasible;
    pc.beta = a.beta;
    if (a.mode == ParamMode::kAutoAlpha) {
      if (spec.family != CostFamily::kNormTracking) {
        throw InvalidArgument("algorithm.mode: auto_alpha needs the norm_tracking family");
      }
      pc.beta = choose_beta(spec.alpha).beta;
    } else if (a.mode != ParamMode::kBeta) {
      throw InvalidArgument("algorithm.mode: primal_obd takes beta or auto_alpha");
    }
    if (spec.family == CostFamily::kNormTracking && pc.switching.kind() == NormKind::kL2) {
      competitive = CompetitiveAuditInput{spec.alpha, pc.beta, cfg.tolerances.ratio_slack,
                                          cfg.tolerances.step_slack};
      bound = competitive_bound(spec.alpha, pc.beta);
    }
    alg = std::make_unique<PrimalObd>(pc);
  } else if (a.name == "dual_obd") {
    DualConfig dc;
    dc.switching = switching_norm(spec);
    dc.feasible = spec.feasible;
    dc.eta = a.eta;
    if (a.mode == ParamMode::kAutoTuned) {
      if (!feasible.bounded()) throw InvalidArgument("spec.feasible: auto_tuned needs a bounded set");
      dc.eta = choose_eta(ball_gradient_bound(feasible), feasible.diameter(), 1.0, spec.T).eta;
    } else if (a.mode != ParamMode::kEta) {
      throw InvalidArgument("algorithm.mode: dual_obd takes eta or auto_tuned");
    }
    if (feasible.bounded() && !spec.x0) {
      try {
        const double g = ball_gradient_bound(feasible);
        regret = RegretAuditInput{g, feasible.diameter(), 1.0, dc.eta, feasible.diameter(),
                                  cfg.tolerances.regret_rel_slack};
        req.budget = feasible.diameter();
        bound = regret_bound(g, feasible.diameter(), 1.0, dc.eta, spec.T);
      } catch (const InvalidArgument&) {
        regret.reset();
      }
    }
    alg = std::make_unique<DualObd>(dc);
  } else {
    BaselineConfig bc;
    bc.kind = a.name == "ogd"      ? BaselineKind::kOgd
              : a.name == "omd"    ? BaselineKind::kOmd
              : a.name == "greedy" ? BaselineKind::kGreedy
                                   : BaselineKind::kStatic;
    bc.step_scale = a.step_scale;
    bc.feasible = spec.feasible;
    alg = std::make_unique<Baseline>(bc, switching_norm(spec));
  }

  RunReport rep = run(*alg, spec, req);
  rep.audits.push_back(opt_sanity(rep));
  if (competitive) {
    for (const AuditCheck& c : audit_competitive(rep, *competitive).checks) rep.audits.push_back(c);
  }
  if (regret) {
    for (const AuditCheck& c : audit_regret(rep, *regret).checks) rep.audits.push_back(c);
  }
  ExperimentOutput out;
  ResultRow row{to_string(spec.family), spec.d, 0, spec.seed, rep.algorithm, rep.total_cost,
                comparator_cost(rep.opt), rep.cr ? *rep.cr : kNaN,
                rep.dynamic_regret ? *rep.dynamic_regret : kNaN, bound, worst(rep.audits),
                all_passed(rep.audits)};
  out.audits_passed = row.audit_passed;
  out.table.rows.push_back(row);
  out.plot_header = "# t hit move cumulative_cost";
  double cum = 0.0;
  for (const StepRecord& s : rep.steps) {
    cum += s.hit + s.move;
    out.plot.push_back({static_cast<double>(s.t), s.hit, s.move, cum});
  }
  add_traces(spec, rep, out.traces);
  return out;
}

ExperimentOutput run_experiment(const Config& cfg) {
  validate(cfg);
  InstanceSpec base = cfg.spec;
  base.seed = cfg.seed;
  switch (cfg.experiment) {
    case ExperimentKind::kCrVsDim: {
      const CostFamily family = cfg.spec.family == CostFamily::kNormTracking
                                    ? CostFamily::kNormTracking
                                    : CostFamily::kQuadratic;
      return experiment_cr_vs_dim(family, cfg.dims, cfg.trials, base, cfg.algorithm.beta, cfg.jobs,
                                  cfg.tolerances);
    }
    case ExperimentKind::kRegretSweep:
      return experiment_regret_sweep(cfg.dims, cfg.trials, base, cfg.jobs, cfg.tolerances);
    case ExperimentKind::kLowerBound: return experiment_lower_bound(cfg.dims);
    case ExperimentKind::kAuditSuite:
      return experiment_audit_suite(cfg.dims, cfg.trials, base, cfg.jobs, cfg.tolerances);
    case ExperimentKind::kSingleRun: {
      Config c = cfg;
      c.spec.seed = cfg.seed;
      return experiment_single_run(c);
    }
  }
  throw InvalidArgument("experiment: unsupported");
}

}  // namespace obd
