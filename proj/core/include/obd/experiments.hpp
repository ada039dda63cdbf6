#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "obd/audit.hpp"
#include "obd/instance.hpp"
#include "obd/serialization.hpp"

namespace obd {

enum class ExperimentKind { kCrVsDim, kRegretSweep, kLowerBound, kAuditSuite, kSingleRun };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// How the step parameter is set.
enum class ParamMode { kBeta, kEta, kAutoAlpha, kAutoTuned };

std::string to_string(ParamMode mode);
ParamMode param_mode_from_string(const std::string& name);

struct AlgorithmChoice {
  std::string name = "primal_obd";  // primal_obd, dual_obd, ogd, omd, greedy, static
  ParamMode mode = ParamMode::kBeta;
  double beta = 0.5;
  double eta = 1.0;
  double step_scale = 1.0;  // baselines
};

struct Tolerances {
  double ratio_slack = 1e-3;
  double step_slack = 1e-6;
  double regret_rel_slack = 1e-4;
};

struct Config {
  ExperimentKind experiment = ExperimentKind::kCrVsDim;
  InstanceSpec spec;                  // base spec; d and seed are overridden per trial in sweeps
  std::vector<int> dims{2, 4, 8, 16};
  int trials = 10;
  std::uint64_t seed = 0;
  AlgorithmChoice algorithm;
  std::string out = ".";
  std::string format = "csv";  // csv or json
  int jobs = 1;
  Tolerances tolerances;
};

void validate(const Config& cfg);
Json to_json(const Config& cfg);
// Rejects unknown keys; missing keys keep their defaults.
Config config_from_json(const Json& j);

struct ResultRow {
  std::string family;
  int d = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string algo;
  double total_cost = 0.0;
  double opt_cost = 0.0;
  double cr = 0.0;        // NaN when undefined
  double regret_l = 0.0;  // NaN when not computed
  double bound = 0.0;     // NaN when no bound applies
  double audit_worst_residual = 0.0;
  bool audit_passed = true;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  static const char* header();
  std::string to_csv() const;
};

struct Trace {
  std::string name;  // file stem, run_<hash>
  Json json;
};

struct ExperimentOutput {
  ResultTable table;
  std::string plot_header;
  std::vector<std::array<double, 4>> plot;  // x y min max, or the experiment's own columns
  std::vector<Trace> traces;
  bool audits_passed = true;
  std::vector<std::string> skipped;  // trials dropped with a reason
};

// Seed of trial `trial` at dimension d, derived from the base seed.
std::uint64_t trial_seed(std::uint64_t base, int d, int trial);

// Primal OBD against OPT for each (d, trial); one row per pair, sorted by (d, trial).
ExperimentOutput experiment_cr_vs_dim(CostFamily family, const std::vector<int>& dims, int trials,
                                      const InstanceSpec& base, double beta, int jobs = 1,
                                      const Tolerances& tol = {});

// Dual OBD on smooth quadratics inside a ball, eta tuned for L = D.
ExperimentOutput experiment_regret_sweep(const std::vector<int>& dims, int trials,
                                         const InstanceSpec& base, int jobs = 1,
                                         const Tolerances& tol = {});

// Hyperplane chase with the Euclidean projection responder; plot rows (d, online, offline, ratio).
ExperimentOutput experiment_lower_bound(const std::vector<int>& dims);

// Norm-tracking competitive audits over alpha in {0.5, 1, 2, 4} plus the regret sweep.
ExperimentOutput experiment_audit_suite(const std::vector<int>& dims, int trials,
                                        const InstanceSpec& base, int jobs = 1,
                                        const Tolerances& tol = {});

ExperimentOutput experiment_single_run(const Config& cfg);

ExperimentOutput run_experiment(const Config& cfg);

// Runs tasks[0..n) on at most `jobs` threads; results land in their own slots.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

}  // namespace obd
