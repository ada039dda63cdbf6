#include "obd/adversary.hpp"

#include <string>

namespace obd {

CostFunction adversary_step(const Vector& x_prev, int t) {
  const Eigen::Index d = x_prev.size();
  if (t < 1 || t > d) {
    throw InvalidArgument("adversary_step: t = " + std::to_string(t) + " outside [1, " +
                          std::to_string(d) + "]");
  }
  if (!x_prev.allFinite()) throw InvalidArgument("adversary_step: x_prev must be finite");
  const Eigen::Index i = t - 1;
  const double target = x_prev(i) < 0.0 ? 1.0 : -1.0;
  return make_indicator(FeasibleSet::hyperplane(Vector::Unit(d, i), target), x_prev);
}

}  // namespace obd
