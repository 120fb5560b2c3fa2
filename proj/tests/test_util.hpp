#pragma once

#include <vector>

#include "pmaxflow/graph.hpp"

namespace pmaxflow::testing {

// Symmetric unit edge (tail, head).
inline Edge Unit(int tail, int head) { return Edge{tail, head, 1.0, 1.0, false}; }

inline Edge Arc(int tail, int head, double fwd, double bwd = 0.0) {
  return Edge{tail, head, fwd, bwd, false};
}

// s = 0, a = 1, t = 2.
inline Graph PathSAT() { return Graph::Build(3, {Unit(0, 1), Unit(1, 2)}, 0, 2, 1.0); }

// Two parallel s-t edges on vertices {0, 1}.
inline Graph ParallelST() { return Graph::Build(2, {Unit(0, 1), Unit(0, 1)}, 0, 1, 1.0); }

// Two disjoint unit paths s-a-t and s-b-t: s = 0, a = 1, b = 2, t = 3.
inline Graph TwoPaths() {
  return Graph::Build(4, {Unit(0, 1), Unit(1, 3), Unit(0, 2), Unit(2, 3)}, 0, 3, 1.0);
}

}  // namespace pmaxflow::testing
