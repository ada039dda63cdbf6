#pragma once

#include <optional>
#include <string>

#include "obd/cost_function.hpp"
#include "obd/feasible_set.hpp"
#include "obd/mirror_map.hpp"
#include "obd/projection.hpp"

namespace obd {

enum class StepBranch { kMoveToMinimizer, kBalanced, kSetProjection };

std::string to_string(StepBranch branch);
StepBranch step_branch_from_string(const std::string& name);

struct StepRecord {
  int t = 0;
  Vector x;
  double hit = 0.0;    // H_t = f_t(x_t)
  double move = 0.0;   // M_t = ||x_t - x_{t-1}|| in the switching norm
  double level = 0.0;  // chosen level l
  double eta_t = 0.0;  // multiplier recovered by the projection
  StepBranch branch = StepBranch::kBalanced;
  double balance_residual = 0.0;  // |M_t - beta l| (primal) or relative dual-balance gap (dual)
  int iterations = 0;             // level bisection iterations
  bool warning = false;           // bisection stopped on its iteration cap
};

struct PrimalConfig {
  double beta = 0.5;
  MirrorMap map;
  Norm switching;                       // norm of the movement cost
  std::optional<FeasibleSet> feasible;  // default: whole space
  double level_tol = 1e-8;              // accepted |M - beta l| / max(1, l)
  double target_tol = 1e-14;            // bisection stops early below this
  int max_iter = 200;
  ProjectionOptions projection;
};

struct DualConfig {
  double eta = 1.0;
  MirrorMap map;
  Norm switching;
  std::optional<FeasibleSet> feasible;
  double level_tol = 1e-9;   // relative dual-balance residual and lower-bracket offset
  double grad_floor = 1e-12; // gradients below this count as vanishing
  int max_iter = 200;
  ProjectionOptions projection;
};

void validate(const PrimalConfig& cfg);
void validate(const DualConfig& cfg);

// One round of the primal balance rule: move to v_t if ||x_prev - v_t|| < beta f(v_t), otherwise
// project onto the level l* with ||x(l*) - x_prev|| = beta l*.
StepRecord primal_obd_step(const Vector& x_prev, const CostFunction& f, const PrimalConfig& cfg,
                           int t = 0);

// One round of the dual balance rule ||grad Phi(x(l)) - grad Phi(x_prev)||_* = eta ||grad f(x(l))||_*.
StepRecord dual_obd_step(const Vector& x_prev, const CostFunction& f, const DualConfig& cfg,
                         int t = 0);

// Indicator rounds: Bregman projection onto the constraint set.
StepRecord set_projection_step(const Vector& x_prev, const CostFunction& f, const MirrorMap& map,
                               const Norm& switching, int t = 0);

struct BetaChoice {
  double beta = 0.0;
  double predicted_c = 0.0;
  double gamma = 0.0;
};

// beta = 1/2 + 1/(alpha + 2), C = 3 + 8/alpha.
BetaChoice choose_beta(double alpha);

// (1/sqrt(kappa)) sqrt(1 + (2/(alpha beta))^2) - 2/(alpha beta).
double balance_gamma(double alpha, double beta, double kappa = 1.0);

// max((1 + beta)/(1 - beta), (1 + beta)/(beta gamma)); infinity when gamma <= 0.
double competitive_bound(double alpha, double beta, double kappa = 1.0);

// Midpoint of (max(2 sqrt(kappa - 1)/alpha, 0), 1); throws when that interval is empty.
double choose_beta_general(double alpha, double kappa);

struct EtaChoice {
  double eta = 0.0;
  double regret_bound = 0.0;
};

// eta = sqrt(2 G L m / T), bound sqrt(2 G L T / m).
EtaChoice choose_eta(double g, double l, double m, int t);

// G L / eta + T eta / (2 m).
double regret_bound(double g, double l, double m, double eta, int t);

enum class BaselineKind { kOgd, kOmd, kGreedy, kStatic };

std::string to_string(BaselineKind kind);

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kOgd;
  double step_scale = 1.0;  // eta_t = step_scale / sqrt(t)
  MirrorMap map;
  std::optional<FeasibleSet> feasible;
};

struct BaselineState {
  Vector x;                           // x_{t-1}
  int t = 0;                          // rounds played
  std::optional<CostFunction> f_prev;
  std::optional<Vector> anchor;       // static play
};

// Next iterate given the state and the revealed f_t. OGD/OMD use grad f_{t-1}(x_{t-1}).
Vector baseline_step(const BaselineConfig& cfg, BaselineState& state, const CostFunction& f);

}  // namespace obd
