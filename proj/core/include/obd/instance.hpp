#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obd/cost_function.hpp"
#include "obd/feasible_set.hpp"
#include "obd/norm.hpp"

namespace obd {

enum class CostFamily { kQuadratic, kNormTracking, kComposite, kHyperplaneChase };

std::string to_string(CostFamily family);
CostFamily cost_family_from_string(const std::string& name);

// Seeded generator parameters. Identical specs give bitwise-identical instances.
struct InstanceSpec {
  int d = 2;
  int T = 50;
  CostFamily family = CostFamily::kQuadratic;
  NormKind tracking_norm = NormKind::kL2;   // norm-tracking and composite families
  NormKind switching_norm = NormKind::kL2;  // L2, L1 or LInf
  double cond = 10.0;                       // condition number of A_t
  double diameter = 10.0;                   // diameter of the target set (a centered ball)
  double alpha = 1.0;                       // growth modulus in the switching norm
  double offset_max = 0.0;                  // minimum values drawn uniformly from [0, offset_max]
  std::uint64_t seed = 0;
  std::optional<FeasibleSet> feasible;      // default: whole space
  std::optional<Vector> x0;                 // default: origin
};

// Throws InvalidArgument naming the offending field.
void validate(const InstanceSpec& spec);

Norm switching_norm(const InstanceSpec& spec);
FeasibleSet feasible_set(const InstanceSpec& spec);
Vector start_point(const InstanceSpec& spec);

// T cost functions. Every minimizer lies in the feasible set (DomainError otherwise).
// The hyperplane-chase family is adaptive and has no precomputed sequence (InvalidArgument).
std::vector<CostFunction> generate_instance(const InstanceSpec& spec);

// Haar-random orthogonal d x d matrix.
template <typename Rng>
Matrix random_orthogonal(Eigen::Index d, Rng& rng);

// U diag(sigma) V^T with sigma log-spaced in [1, cond].
template <typename Rng>
Matrix random_conditioned_matrix(Eigen::Index d, double cond, Rng& rng);

}  // namespace obd

#include "obd/instance_impl.hpp"
