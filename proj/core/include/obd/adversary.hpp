#pragma once

#include "obd/cost_function.hpp"

namespace obd {

// Round t (1 <= t <= d) of the adaptive hyperplane chase: the indicator of
// {x : x_t = -1} if coordinate t of x_prev is non-negative, else of {x : x_t = +1}.
CostFunction adversary_step(const Vector& x_prev, int t);

}  // namespace obd
