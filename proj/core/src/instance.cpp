#include "obd/instance.hpp"

#include <cmath>
#include <random>

namespace obd {

namespace {

constexpr int kMaxRejections = 10000;

Vector uniform_in_ball(Eigen::Index d, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector g(d);
  double n = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) g(i) = normal(rng);
    n = g.norm();
  } while (n == 0.0);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
  return g * (r / n);
}

Vector uniform_in_simplex(Eigen::Index d, double delta, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector e(d);
  for (Eigen::Index i = 0; i < d; ++i) e(i) = expo(rng);
  const double free_mass = 1.0 - static_cast<double>(d) * delta;
  return (e / e.sum() * free_mass).array() + delta;
}

Vector sample_target(const InstanceSpec& spec, const FeasibleSet& x, std::mt19937_64& rng) {
  if (x.kind() == SetKind::kSimplex) return uniform_in_simplex(spec.d, x.delta(), rng);
  for (int k = 0; k < kMaxRejections; ++k) {
    Vector v = uniform_in_ball(spec.d, 0.5 * spec.diameter, rng);
    if (x.contains(v)) return v;
  }
  throw DomainError("generate_instance: feasible set misses the target set (minimizers must lie in X)");
}

double draw_offset(const InstanceSpec& spec, std::mt19937_64& rng) {
  if (spec.offset_max <= 0.0) return 0.0;
  std::uniform_real_distribution<double> unit(0.0, spec.offset_max);
  return unit(rng);
}

}  // namespace

std::string to_string(CostFamily family) {
  switch (family) {
    case CostFamily::kQuadratic: return "quadratic";
    case CostFamily::kNormTracking: return "norm_tracking";
    case CostFamily::kComposite: return "composite";
    case CostFamily::kHyperplaneChase: return "hyperplane_chase";
  }
  return "unknown";
}

CostFamily cost_family_from_string(const std::string& name) {
  if (name == "quadratic") return CostFamily::kQuadratic;
  if (name == "norm_tracking" || name == "norm") return CostFamily::kNormTracking;
  if (name == "composite") return CostFamily::kComposite;
  if (name == "hyperplane_chase") return CostFamily::kHyperplaneChase;
  throw InvalidArgument("family: unknown cost family '" + name + "'");
}

void validate(const InstanceSpec& spec) {
  if (spec.d < 1) throw InvalidArgument("d: must be >= 1");
  if (spec.T < 1) throw InvalidArgument("T: must be >= 1");
  if (!(spec.cond >= 1.0) || !std::isfinite(spec.cond)) throw InvalidArgument("cond: must be >= 1");
  if (!(spec.diameter > 0.0) || !std::isfinite(spec.diameter)) {
    throw InvalidArgument("diameter: must be positive");
  }
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) throw InvalidArgument("alpha: must be positive");
  if (!(spec.offset_max >= 0.0) || !std::isfinite(spec.offset_max)) {
    throw InvalidArgument("offset_max: must be non-negative");
  }
  if (spec.switching_norm == NormKind::kMahalanobis || spec.tracking_norm == NormKind::kMahalanobis) {
    throw InvalidArgument("switching_norm/tracking_norm: generated instances use l2, l1 or linf");
  }
  if (spec.feasible && spec.feasible->dimension() != spec.d) {
    throw InvalidArgument("feasible: dimension differs from d");
  }
  if (spec.x0) {
    if (spec.x0->size() != spec.d) throw InvalidArgument("x0: dimension differs from d");
    if (!spec.x0->allFinite()) throw InvalidArgument("x0: non-finite entries");
  }
  if (spec.family == CostFamily::kHyperplaneChase && spec.T != spec.d) {
    throw InvalidArgument("T: the hyperplane chase runs exactly d rounds");
  }
}

Norm switching_norm(const InstanceSpec& spec) {
  switch (spec.switching_norm) {
    case NormKind::kL1: return Norm::l1();
    case NormKind::kLInf: return Norm::linf();
    default: return Norm::l2();
  }
}

FeasibleSet feasible_set(const InstanceSpec& spec) {
  return spec.feasible ? *spec.feasible : FeasibleSet::whole_space(spec.d);
}

Vector start_point(const InstanceSpec& spec) {
  if (spec.x0) return *spec.x0;
  const FeasibleSet x = feasible_set(spec);
  const Vector origin = Vector::Zero(spec.d);
  return x.contains(origin) ? origin : x.interior_point();
}

std::vector<CostFunction> generate_instance(const InstanceSpec& spec) {
  validate(spec);
  if (spec.family == CostFamily::kHyperplaneChase) {
    throw InvalidArgument("family: hyperplane_chase is adaptive; use make_environment");
  }
  const FeasibleSet x = feasible_set(spec);
  const Norm switching = switching_norm(spec);
  const Norm tracking = spec.tracking_norm == NormKind::kL1     ? Norm::l1()
                        : spec.tracking_norm == NormKind::kLInf ? Norm::linf()
                                                                : Norm::l2();
  const double weight = spec.alpha / norm_ratio_lower_bound(tracking, switching, spec.d);

  std::mt19937_64 rng(spec.seed);
  std::vector<CostFunction> costs;
  costs.reserve(spec.T);
  for (int t = 0; t < spec.T; ++t) {
    switch (spec.family) {
      case CostFamily::kQuadratic: {
        const Matrix a = random_conditioned_matrix(spec.d, spec.cond, rng);
        const double offset = draw_offset(spec, rng);
        Vector v;
        Vector y;
        if (x.kind() == SetKind::kSimplex) {
          v = uniform_in_simplex(spec.d, x.delta(), rng);
          y = a * v;
        } else {
          // v = A^{-1} y stays within the target ball because every singular value is >= 1.
          int k = 0;
          for (; k < kMaxRejections; ++k) {
            y = uniform_in_ball(spec.d, 0.5 * spec.diameter, rng);
            v = a.colPivHouseholderQr().solve(y);
            if (x.contains(v)) break;
          }
          if (k == kMaxRejections) {
            throw DomainError("generate_instance: feasible set misses the quadratic minimizers");
          }
        }
        if (offset == 0.0) {
          costs.push_back(make_quadratic(a, y));
        } else {
          costs.push_back(make_quadratic_form(a.transpose() * a, v, offset));
        }
        break;
      }
      case CostFamily::kNormTracking: {
        const Vector v = sample_target(spec, x, rng);
        const double offset = draw_offset(spec, rng);
        costs.push_back(make_norm_tracking(v, tracking, switching, weight, offset));
        break;
      }
      case CostFamily::kComposite: {
        const Matrix a = random_conditioned_matrix(spec.d, spec.cond, rng);
        const Vector v = sample_target(spec, x, rng);
        const double offset = draw_offset(spec, rng);
        const CostFunction g = make_norm_tracking(v, tracking, switching, weight, offset);
        const Matrix q = a.transpose() * a / (spec.cond * spec.cond);
        costs.push_back(make_composite(g, make_quadratic_form(q, v, 0.0)));
        break;
      }
      case CostFamily::kHyperplaneChase: break;
    }
  }
  return costs;
}

}  // namespace obd
