#pragma once

#include <algorithm>
#include <cmath>

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/graph.hpp"

namespace pmaxflow::verify {

inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng.Next() >> 11) * 0x1.0p-53;
}

inline double UniformReal(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

inline double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(UniformReal(rng, std::log(lo), std::log(hi)));
}

/// A graph with an interior flow and positive weights, for pointwise checks.
struct RandomPoint {
  Graph g;
  Weights w;
  Vec f;
};

/// Unit-random graph with capacities in [1, U], preconditioned when asked,
/// f_e drawn from 80% of each capacity side and weights from [0.2, 3].
RandomPoint MakeRandomPoint(Rng& rng, int n, int m, int U, bool precondition);

/// Per-edge step mixing points inside the quadratic-extension box (ratio
/// below 1) and outside it (up to `outside` times the box radius).
Vec RandomStep(Rng& rng, const Graph& g, std::span<const double> f,
               double outside = 3.0);

}  // namespace pmaxflow::verify
