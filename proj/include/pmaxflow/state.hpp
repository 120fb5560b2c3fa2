#pragma once

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/graph.hpp"

namespace pmaxflow {

/// Interior-point iterate: flow, vertex duals, barrier weights and the flow
/// value routed so far, together with the target value.
struct IterateState {
  Vec f;
  Vec y;
  Weights w;
  double F = 0.0;
  double F_star = 0.0;
  long iteration = 0;
};

}  // namespace pmaxflow
