#include "run_cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "obd/errors.hpp"
#include "obd/experiments.hpp"
#include "obd/log.hpp"

namespace obd::cli {

namespace {

std::string plot_text(const ExperimentOutput& out) {
  std::string s = out.plot_header + "\n";
  char buf[160];
  for (const auto& r : out.plot) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", r[0], r[1], r[2], r[3]);
    s += buf;
  }
  return s;
}

Json rows_json(const ResultTable& t) {
  Json a = Json::array();
  for (const ResultRow& r : t.rows) {
    a.push_back(Json{{"family", r.family},
                     {"d", r.d},
                     {"trial", r.trial},
                     {"seed", r.seed},
                     {"algo", r.algo},
                     {"total_cost", real_to_json(r.total_cost)},
                     {"opt_cost", real_to_json(r.opt_cost)},
                     {"cr", real_to_json(r.cr)},
                     {"regret_L", real_to_json(r.regret_l)},
                     {"bound", real_to_json(r.bound)},
                     {"audit_worst_residual", real_to_json(r.audit_worst_residual)}});
  }
  return a;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Online balanced descent experiments"};
  app.set_version_flag("--version", std::string("obd_bench ") + OBD_VERSION);

  std::string config_path;
  std::string experiment;
  std::vector<int> dims;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::optional<double> eta;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> jobs;
  std::optional<std::string> algo;
  std::optional<std::string> mode;
  std::optional<std::string> family;
  std::optional<int> horizon;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment,
                 "cr_vs_dim | regret_sweep | lower_bound | audit_suite | single_run");
  app.add_option("--dims", dims, "comma-separated dimensions, e.g. 2,4,8,16")->delimiter(',');
  app.add_option("--trials", trials, "trials per dimension");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--beta", beta, "primal balance parameter");
  app.add_option("--alpha", alpha, "growth modulus of generated norm-tracking costs");
  app.add_option("--eta", eta, "dual balance parameter");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "results table format: csv | json");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--algo", algo, "primal_obd | dual_obd | ogd | omd | greedy | static");
  app.add_option("--mode", mode, "beta | eta | auto_alpha | auto_tuned");
  app.add_option("--family", family, "quadratic | norm_tracking | composite | hyperplane_chase");
  app.add_option("--horizon", horizon, "rounds T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Config cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error("config: cannot read " + config_path);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
      }
      cfg = config_from_json(j);
    }
    if (!experiment.empty()) cfg.experiment = experiment_kind_from_string(experiment);
    if (!dims.empty()) cfg.dims = dims;
    if (trials) cfg.trials = *trials;
    if (seed) cfg.seed = *seed;
    if (beta) {
      cfg.algorithm.beta = *beta;
      cfg.algorithm.mode = ParamMode::kBeta;
    }
    if (alpha) cfg.spec.alpha = *alpha;
    if (eta) {
      cfg.algorithm.eta = *eta;
      cfg.algorithm.mode = ParamMode::kEta;
    }
    if (out) cfg.out = *out;
    if (format) cfg.format = *format;
    if (jobs) cfg.jobs = *jobs;
    if (algo) cfg.algorithm.name = *algo;
    if (mode) cfg.algorithm.mode = param_mode_from_string(*mode);
    if (family) cfg.spec.family = cost_family_from_string(*family);
    if (horizon) cfg.spec.T = *horizon;
    if (!cfg.spec.x0 && cfg.experiment == ExperimentKind::kSingleRun &&
        cfg.spec.family == CostFamily::kHyperplaneChase) {
      cfg.spec.T = cfg.spec.d;
    }
    validate(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  ExperimentOutput result;
  try {
    result = run_experiment(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out);
    const fs::path dir(cfg.out);
    if (cfg.format == "csv") {
      write_file_atomic((dir / "results.csv").string(), result.table.to_csv());
    } else {
      write_file_atomic((dir / "results.json").string(), rows_json(result.table).dump(2) + "\n");
    }
    for (const Trace& t : result.traces) {
      write_file_atomic((dir / (t.name + ".json")).string(), t.json.dump() + "\n");
    }
    write_file_atomic((dir / ("plot_" + to_string(cfg.experiment) + ".dat")).string(),
                      plot_text(result));
  } catch (const std::exception& e) {
    std::cerr << "error: output: " << e.what() << "\n";
    return 1;
  }

  for (const std::string& s : result.skipped) std::cerr << "skipped: " << s << "\n";
  std::cout << to_string(cfg.experiment) << ": " << result.table.rows.size() << " rows, "
            << result.skipped.size() << " skipped, audits "
            << (result.audits_passed ? "passed" : "FAILED") << "\n";
  return result.audits_passed ? 0 : 2;
}

}  // namespace obd::cli
