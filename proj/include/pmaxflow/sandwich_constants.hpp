#pragma once

// Generated by tools/calibrate_sandwich; do not edit by hand.

#include "pmaxflow/weighted_step.hpp"

namespace pmaxflow {

// Indexed by p / 2 - 1 for p = 2, 4, 6.
inline constexpr SandwichConstants kEdgeSandwich[3] = {
    SandwichConstants{0.0, 0.118},
    SandwichConstants{0.0, 0.001},
    SandwichConstants{0.0, 0.001},
};

inline constexpr SandwichConstants kPowerSandwich[3] = {
    SandwichConstants{0.375, 0.625},
    SandwichConstants{0.224, 8.38},
    SandwichConstants{0.0744, 39.2},
};

inline SandwichConstants EdgeSandwichConstants(int p) {
  return kEdgeSandwich[p / 2 - 1];
}

inline SandwichConstants PowerSandwichConstants(int p) {
  return kPowerSandwich[p / 2 - 1];
}

}  // namespace pmaxflow
