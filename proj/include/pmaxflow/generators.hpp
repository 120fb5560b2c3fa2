#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "pmaxflow/graph.hpp"

namespace pmaxflow {

enum class Family { kUnitRandom, kParallelPaths, kGrid };

std::string ToString(Family family);
Family ParseFamily(const std::string& text);

/// Deterministic 64-bit generator with a fixed integer-to-range mapping, so
/// instances do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform integer in [lo, hi].
  long Uniform(long lo, long hi);
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Generates a connected instance with symmetric capacities u+ = u- drawn from
/// [1, U] (all 1 when U = 1).
///  - unit-random: random spanning tree plus extra random edges, m edges in
///    total, s = 0, t = n - 1.
///  - parallel-paths: k = m - n + 2 internally disjoint s-t paths whose
///    internal vertices are split at random; k paths of length 1 are direct
///    s-t edges. Requires 1 <= k and enough edges to cover n - 2 internal
///    vertices.
///  - grid: r x c lattice with r the largest divisor of n not above sqrt(n);
///    m is ignored. s = 0 (a corner), t = n - 1 (the opposite corner).
/// Throws kInvalidParams on impossible sizes.
Graph GenerateInstance(Family family, int n, int m, int U, std::uint64_t seed);

}  // namespace pmaxflow
