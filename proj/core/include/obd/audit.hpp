#pragma once

#include <optional>

#include "obd/harness.hpp"

namespace obd {

struct CompetitiveAuditInput {
  double alpha = 1.0;          // f_t(x) >= alpha ||x - v_t||_2
  double beta = 0.5;
  double ratio_slack = 1e-3;   // on the competitive ratio
  double step_slack = 1e-6;    // on the per-step inequalities
};

// Checks on a primal OBD run with an OPT comparator:
//   competitive_ratio  cr <= C, C = competitive_bound(alpha, beta), scaled by
//                      max(k2, 1)/min(k1, 1) for non-l2 switching norms;
//   potential_step     H_t + M_t + C||x_t - x*_t|| - C||x_{t-1} - x*_{t-1}|| <= C(H*_t + M*_t);
//   potential_goal     H_t + M_t + C(||x_t - x*_t|| - ||x*_t - x_{t-1}||) <= C H*_t;
//   balanced_decrease  ||x_t - x*_t|| - ||x*_t - x_{t-1}|| <= -gamma M_t on balanced steps with
//                      H_t > H*_t.
// The per-step checks are applied for l2 switching only.
AuditResult audit_competitive(const RunReport& report, const CompetitiveAuditInput& in);

struct RegretAuditInput {
  double g = 1.0;    // bound on ||grad Phi|| over the feasible set
  double l = 0.0;    // movement budget of the comparator
  double m = 1.0;    // strong convexity of the mirror map
  double eta = 1.0;
  std::optional<double> diameter;  // enables the static-regret check at L = D
  double rel_slack = 1e-4;
};

// Checks on a dual OBD run with an OPT(L) comparator:
//   regret_bound     rho_L <= G L/eta + T eta/(2m);
//   tuned_bound      rho_L <= sqrt(2 G L T/m) when eta is the tuned choice for (G, L, m, T);
//   static_regret    total - static optimum <= G D/eta + T eta/(2m).
AuditResult audit_regret(const RunReport& report, const RegretAuditInput& in);

}  // namespace obd
