#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "obd/environment.hpp"
#include "obd/offline.hpp"
#include "obd/online.hpp"

namespace obd {

struct ComparatorRequest {
  bool opt = true;
  std::optional<double> budget;  // OPT(L)
  bool static_play = false;
  OfflineOptions offline;
};

struct Comparator {
  bool requested = false;
  bool available = false;
  OfflineSolution solution;
  std::string error;  // why the solve failed
};

// One named check. residual = worst (lhs - rhs) over the checked items; passed iff <= slack.
struct AuditCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double worst_residual = -std::numeric_limits<double>::infinity();
  double slack = 0.0;
  int checked = 0;
  std::string detail;
};

struct AuditResult {
  std::vector<AuditCheck> checks;
  bool passed() const;
  double worst_residual() const;  // over applicable checks; -inf if none
};

struct RunReport {
  std::string algorithm;
  std::string spec_hash;
  Vector x0;
  Norm switching;
  FeasibleSet feasible;
  std::vector<CostFunction> costs;  // as revealed
  std::vector<StepRecord> steps;
  double total_hit = 0.0;
  double total_move = 0.0;
  double total_cost = 0.0;
  Comparator opt;
  Comparator opt_budget;
  double budget = 0.0;
  Comparator static_play;
  std::optional<double> cr;              // empty when OPT is unavailable or costs 0
  std::optional<double> dynamic_regret;  // total_cost - OPT(L)
  std::optional<double> static_regret;   // total_cost - static optimum
  std::vector<AuditCheck> audits;

  Trajectory trajectory() const;
};

// Plays the algorithm against the environment, f_t revealed before x_t, then solves the
// requested comparators. Costs are accounted in `switching`.
RunReport run(OnlineAlgorithm& algorithm, Environment& env, const Vector& x0,
              const Norm& switching, const FeasibleSet& feasible,
              const ComparatorRequest& request = {}, std::string spec_hash = {});

RunReport run(OnlineAlgorithm& algorithm, const InstanceSpec& spec,
              const ComparatorRequest& request = {});

// Solves (or re-solves) comparators on a finished report and refreshes cr and regrets.
// OPT is the cheaper of the dynamic solve and the static play, both being feasible schedules.
void attach_comparators(RunReport& report, const ComparatorRequest& request);

double comparator_cost(const Comparator& c);  // NaN when unavailable

}  // namespace obd
