#pragma once

#include "ksfluid/fluid.hpp"
#include "ksfluid/grid.hpp"

namespace ksfluid {

/// Full simulation state at one time level.
struct SimState {
  double t = 0.0;
  long step_index = 0;
  ScalarField n;
  ScalarField c;
  FluidState fluid;
};

}  // namespace ksfluid
