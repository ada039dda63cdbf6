#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "obd/cost_function.hpp"
#include "obd/feasible_set.hpp"
#include "obd/norm.hpp"

namespace obd {

struct OfflineOptions {
  // Smoothing levels for nonsmooth terms, solved in order with warm starts.
  std::vector<double> eps_schedule{1e-2, 1e-4, 1e-6};
  // Log-barrier weight for inequality constraints, as a multiple of eps.
  double barrier_ratio = 1e-2;
  int newton_max_iter = 300;  // per smoothing level
  bool polish = true;
  int lambda_max_iter = 100;
  double budget_rel_tol = 1e-4;  // OPT(L): movement within [L(1 - tol), L]
};

struct OfflineSolution {
  Trajectory trajectory;
  double total_hit = 0.0;
  double total_move = 0.0;
  double objective = 0.0;  // total_hit + total_move
  double lambda = 0.0;     // multiplier of the movement budget (OPT(L) only)
  bool converged = false;
  double smoothed_grad_norm = 0.0;  // reduced gradient of the last smoothed problem
  double uncertainty = 0.0;         // grid oracle: cell diagonal of the finest pass
  std::string method;
};

// sum_t f_t(x_t) + ||x_t - x_{t-1}|| over x_1..x_T, with the movement from the fixed x0 counted.
double trajectory_cost(const std::vector<CostFunction>& fs, const Vector& x0,
                       const Trajectory& traj, const Norm& switching, double* total_hit = nullptr,
                       double* total_move = nullptr);

// Dynamic offline optimum.
OfflineSolution offline_opt(const std::vector<CostFunction>& fs, const Vector& x0,
                            const FeasibleSet& feasible, const Norm& switching = Norm::l2(),
                            const OfflineOptions& opts = {});

// Offline optimum with total movement at most budget.
OfflineSolution offline_opt_constrained(const std::vector<CostFunction>& fs, const Vector& x0,
                                        double budget, const FeasibleSet& feasible,
                                        const Norm& switching = Norm::l2(),
                                        const OfflineOptions& opts = {});

// Best fixed point x (x_t = x for all t), paying ||x - x0|| once.
OfflineSolution static_opt(const std::vector<CostFunction>& fs, const Vector& x0,
                           const FeasibleSet& feasible, const Norm& switching = Norm::l2(),
                           const OfflineOptions& opts = {});

struct Grid {
  Vector lo;
  Vector hi;
  int points_per_axis = 21;
  int zoom_passes = 2;
  double zoom_factor = 4.0;
  std::size_t max_states = 200000;  // per time step
};

// Exact dynamic program over a grid (d <= 2, T <= 8), refined around the incumbent. Each time
// step's states also include x0, every minimizer v_s and the incumbent points of the last pass.
OfflineSolution grid_dp_oracle(const std::vector<CostFunction>& fs, const Vector& x0,
                               const Grid& grid, const FeasibleSet& feasible,
                               const Norm& switching = Norm::l2(), double switching_weight = 1.0);

// OPT(budget) on the grid via the Lagrangian dual max_lambda [DP_lambda - lambda budget].
OfflineSolution grid_dp_oracle_constrained(const std::vector<CostFunction>& fs, const Vector& x0,
                                           double budget, const Grid& grid,
                                           const FeasibleSet& feasible,
                                           const Norm& switching = Norm::l2());

}  // namespace obd
