#pragma once

#include <memory>
#include <optional>
#include <string>

#include "obd/cost_function.hpp"
#include "obd/feasible_set.hpp"
#include "obd/mirror_map.hpp"

namespace obd {

struct ProjectionOptions {
  double level_tol = 1e-8;         // |f(x) - l| <= level_tol * max(1, l) on active results
  double stationarity_tol = 1e-6;  // reported by audits; the solvers aim far below it
  int inner_max_iter = 10000;      // projected-gradient iterations per inner solve
  int newton_max_iter = 200;       // Newton iterations per inner solve
  int bisection_max_iter = 200;    // eta bisection
  double eta_cap = 1152921504606846976.0;  // 2^60
};

enum class ProjectionMethod {
  kUnchanged,      // x_prev already inside the sublevel set
  kClosedForm,     // ball of a norm-tracking cost
  kSpectral,       // quadratic cost with a quadratic mirror map
  kDualBisection,  // bisection on eta around solve_regularized
  kSetOnly,        // projection onto the feasible set
  kIterative,      // projected-gradient fallback for project_set
};

std::string to_string(ProjectionMethod method);

struct ProjectionResult {
  Vector x;
  double eta = 0.0;      // multiplier of f(x) <= l; +inf when x is the minimizer of a smooth f
  bool active = false;   // f(x) = l binds
  int iterations = 0;
  double residual = 0.0; // |f(x) - l| when active
  ProjectionMethod method = ProjectionMethod::kUnchanged;
};

struct SetProjection {
  Vector x;
  ProjectionMethod method = ProjectionMethod::kClosedForm;
  int iterations = 0;
};

// argmin_{y in set} D_Phi(y, x). Closed forms: Euclidean map on every set; Mahalanobis map on
// hyperplanes, halfspaces and balls of its own norm; entropy map on boxes and Simplex(delta).
// Other pairs use projected gradient and report ProjectionMethod::kIterative.
SetProjection project_set(const MirrorMap& map, const FeasibleSet& set, const Vector& x,
                          const ProjectionOptions& opts = {});

// argmin_{x in feasible} D_Phi(x, x_prev) + eta f(x). f(result) is non-increasing in eta.
Vector solve_regularized(const MirrorMap& map, const CostFunction& f, double eta,
                         const Vector& x_prev, const FeasibleSet& feasible,
                         const ProjectionOptions& opts = {}, const Vector* warm_start = nullptr);

// Bregman projection of x_prev onto {f <= level} within the feasible set, for a fixed
// (map, f, x_prev, feasible). Factorizations are computed once and reused across levels.
class SublevelProjector {
 public:
  SublevelProjector(MirrorMap map, CostFunction f, Vector x_prev, FeasibleSet feasible,
                    ProjectionOptions opts = {});
  ~SublevelProjector();
  SublevelProjector(SublevelProjector&&) noexcept;
  SublevelProjector& operator=(SublevelProjector&&) noexcept;

  ProjectionResult project(double level);

  // x_prev moved into the feasible set, and f there.
  const Vector& start() const { return start_; }
  double start_value() const { return start_value_; }

 private:
  struct Spectral;
  MirrorMap map_;
  CostFunction f_;
  Vector x_prev_;
  FeasibleSet feasible_;
  ProjectionOptions opts_;
  Vector start_;
  double start_value_ = 0.0;
  std::unique_ptr<Spectral> spectral_;
  std::optional<Vector> warm_;

  std::optional<ProjectionResult> closed_form(double level) const;
  std::optional<ProjectionResult> spectral(double level) const;
  ProjectionResult dual_bisection(double level);
};

ProjectionResult project_sublevel(const MirrorMap& map, const CostFunction& f, double level,
                                  const Vector& x_prev, const FeasibleSet& feasible,
                                  const ProjectionOptions& opts = {});

// ||grad Phi(x) - grad Phi(x_prev) + eta grad f(x)||_* in the map's dual norm, after removing
// the normal directions of the feasible set's affine equalities (hyperplane, simplex sum).
double stationarity_residual(const MirrorMap& map, const CostFunction& f, const Vector& x,
                             const Vector& x_prev, double eta,
                             const FeasibleSet* feasible = nullptr);

}  // namespace obd
