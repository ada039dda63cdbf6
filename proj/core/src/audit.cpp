#include "obd/audit.hpp"

#include <cmath>
#include <sstream>

namespace obd {

namespace {

void record(AuditCheck& c, double residual) {
  ++c.checked;
  c.worst_residual = std::max(c.worst_residual, residual);
  c.passed = c.worst_residual <= c.slack;
}

AuditCheck missing(const std::string& name, const std::string& why) {
  AuditCheck c;
  c.name = name;
  c.passed = false;
  c.detail = why;
  return c;
}

}  // namespace

AuditResult audit_competitive(const RunReport& rep, const CompetitiveAuditInput& in) {
  AuditResult out;
  if (!rep.opt.available) {
    out.checks.push_back(missing("competitive_ratio", "OPT comparator unavailable: " + rep.opt.error));
    return out;
  }
  const double c = competitive_bound(in.alpha, in.beta);
  const bool l2 = rep.switching.kind() == NormKind::kL2;

  AuditCheck ratio;
  ratio.name = "competitive_ratio";
  ratio.slack = in.ratio_slack;
  double bound = c;
  if (!l2) {
    const NormEquivalence k = norm_equivalence_constants(rep.switching, rep.x0.size());
    bound *= std::max(k.k2, 1.0) / std::min(k.k1, 1.0);
  }
  if (rep.cr) {
    record(ratio, *rep.cr - bound);
  } else {
    ratio.applicable = false;
    ratio.detail = "cr undefined (OPT cost 0)";
  }
  {
    std::ostringstream os;
    os << "bound " << bound;
    if (!ratio.detail.empty()) os << "; " << ratio.detail;
    ratio.detail = os.str();
  }
  out.checks.push_back(ratio);

  AuditCheck potential;
  potential.name = "potential_step";
  potential.slack = in.step_slack;
  AuditCheck goal;
  goal.name = "potential_goal";
  goal.slack = in.step_slack;
  AuditCheck decrease;
  decrease.name = "balanced_decrease";
  decrease.slack = in.step_slack;
  if (!l2) {
    potential.applicable = goal.applicable = decrease.applicable = false;
    potential.detail = goal.detail = decrease.detail = "per-step checks need l2 switching";
  } else {
    const double gamma = balance_gamma(in.alpha, in.beta);
    const Trajectory& opt = rep.opt.solution.trajectory;
    const Norm& nrm = rep.switching;
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
      const StepRecord& s = rep.steps[i];
      if (s.branch == StepBranch::kSetProjection) continue;
      const Vector& prev = i == 0 ? rep.x0 : rep.steps[i - 1].x;
      const Vector& prev_opt = i == 0 ? rep.x0 : opt[i - 1];
      const double h_opt = rep.costs[i].value(opt[i]);
      const double m_opt = nrm(opt[i] - prev_opt);
      const double lhs = s.hit + s.move + c * nrm(s.x - opt[i]) - c * nrm(prev - prev_opt);
      record(potential, lhs - c * (h_opt + m_opt));
      record(goal, s.hit + s.move + c * (nrm(s.x - opt[i]) - nrm(opt[i] - prev)) - c * h_opt);
      if (s.branch == StepBranch::kBalanced && s.hit > h_opt) {
        record(decrease, nrm(s.x - opt[i]) - nrm(opt[i] - prev) + gamma * s.move);
      }
    }
  }
  out.checks.push_back(potential);
  out.checks.push_back(goal);
  out.checks.push_back(decrease);
  return out;
}

AuditResult audit_regret(const RunReport& rep, const RegretAuditInput& in) {
  AuditResult out;
  const int horizon = static_cast<int>(rep.steps.size());
  if (!rep.dynamic_regret) {
    out.checks.push_back(missing("regret_bound", "OPT(L) comparator unavailable: " + rep.opt_budget.error));
    return out;
  }
  const double rho = *rep.dynamic_regret;

  AuditCheck general;
  general.name = "regret_bound";
  const double b = regret_bound(in.g, in.l, in.m, in.eta, horizon);
  general.slack = in.rel_slack * b;
  record(general, rho - b);
  general.detail = "bound " + std::to_string(b);
  out.checks.push_back(general);

  AuditCheck tuned;
  tuned.name = "tuned_bound";
  if (in.l > 0.0 && in.g > 0.0) {
    const EtaChoice e = choose_eta(in.g, in.l, in.m, horizon);
    if (std::abs(e.eta - in.eta) <= 1e-12 * e.eta) {
      tuned.slack = in.rel_slack * e.regret_bound;
      record(tuned, rho - e.regret_bound);
      tuned.detail = "bound " + std::to_string(e.regret_bound);
    } else {
      tuned.applicable = false;
      tuned.detail = "eta is not the tuned choice for this L";
    }
  } else {
    tuned.applicable = false;
    tuned.detail = "L = 0";
  }
  out.checks.push_back(tuned);

  AuditCheck stat;
  stat.name = "static_regret";
  if (in.diameter && rep.static_regret) {
    const double bs = regret_bound(in.g, *in.diameter, in.m, in.eta, horizon);
    stat.slack = in.rel_slack * bs;
    record(stat, *rep.static_regret - bs);
    stat.detail = "bound " + std::to_string(bs);
  } else {
    stat.applicable = false;
    stat.detail = "no diameter or static comparator";
  }
  out.checks.push_back(stat);
  return out;
}

}  // namespace obd
