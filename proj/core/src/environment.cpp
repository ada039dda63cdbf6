#include "obd/environment.hpp"

#include <string>

#include "obd/adversary.hpp"

namespace obd {

SequenceEnvironment::SequenceEnvironment(std::vector<CostFunction> costs)
    : costs_(std::move(costs)) {
  if (costs_.empty()) throw InvalidArgument("SequenceEnvironment: empty cost sequence");
  for (const auto& f : costs_) {
    if (f.dimension() != costs_.front().dimension()) {
      throw DimensionMismatch("SequenceEnvironment: cost dimensions differ");
    }
  }
}

Eigen::Index SequenceEnvironment::dimension() const { return costs_.front().dimension(); }

CostFunction SequenceEnvironment::reveal(int t, const Vector& /*x_prev*/) {
  if (t < 1 || t > horizon()) {
    throw InvalidArgument("SequenceEnvironment: round " + std::to_string(t) + " out of range");
  }
  return costs_[t - 1];
}

HyperplaneAdversary::HyperplaneAdversary(int d) : d_(d) {
  if (d < 1) throw InvalidArgument("HyperplaneAdversary: d must be >= 1");
}

CostFunction HyperplaneAdversary::reveal(int t, const Vector& x_prev) {
  return adversary_step(x_prev, t);
}

std::unique_ptr<Environment> make_environment(const InstanceSpec& spec) {
  if (spec.family == CostFamily::kHyperplaneChase) {
    validate(spec);
    return std::make_unique<HyperplaneAdversary>(spec.d);
  }
  return std::make_unique<SequenceEnvironment>(generate_instance(spec));
}

}  // namespace obd
