#include "pmaxflow/generators.hpp"

#include <cmath>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

std::string ToString(Family family) {
  switch (family) {
    case Family::kUnitRandom: return "unit-random";
    case Family::kParallelPaths: return "parallel-paths";
    case Family::kGrid: return "grid";
  }
  return "unknown";
}

Family ParseFamily(const std::string& text) {
  if (text == "unit-random") return Family::kUnitRandom;
  if (text == "parallel-paths") return Family::kParallelPaths;
  if (text == "grid") return Family::kGrid;
  throw Error(ErrorCode::kInvalidParams, "unknown family '" + text + "'");
}

long Rng::Uniform(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling removes the modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<long>(x % span);
}

namespace {

Edge MakeEdge(Rng& rng, int a, int b, int U) {
  const double cap = U == 1 ? 1.0 : static_cast<double>(rng.Uniform(1, U));
  if (rng.Uniform(0, 1) == 1) std::swap(a, b);
  return Edge{a, b, cap, cap, false};
}

}  // namespace

Graph GenerateInstance(Family family, int n, int m, int U, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "n must be >= 2");
  if (U < 1) throw Error(ErrorCode::kInvalidParams, "U must be >= 1");
  Rng rng(seed);
  std::vector<Edge> edges;
  switch (family) {
    case Family::kUnitRandom: {
      if (m < n - 1) {
        throw Error(ErrorCode::kInvalidParams, "unit-random needs m >= n - 1");
      }
      for (int v = 1; v < n; ++v) {
        edges.push_back(MakeEdge(rng, static_cast<int>(rng.Uniform(0, v - 1)), v, U));
      }
      while (static_cast<int>(edges.size()) < m) {
        const int a = static_cast<int>(rng.Uniform(0, n - 1));
        const int b = static_cast<int>(rng.Uniform(0, n - 1));
        if (a != b) edges.push_back(MakeEdge(rng, a, b, U));
      }
      break;
    }
    case Family::kParallelPaths: {
      const int k = m - n + 2;
      if (k < 1) {
        throw Error(ErrorCode::kInvalidParams, "parallel-paths needs m >= n - 1");
      }
      std::vector<int> internal(k, 0);
      for (int i = 0; i < n - 2; ++i) ++internal[rng.Uniform(0, k - 1)];
      int next = 1;
      for (int path = 0; path < k; ++path) {
        int prev = 0;
        for (int i = 0; i < internal[path]; ++i) {
          edges.push_back(Edge{prev, next, 1.0, 1.0, false});
          prev = next++;
        }
        edges.push_back(Edge{prev, n - 1, 1.0, 1.0, false});
      }
      for (Edge& e : edges) {
        if (U > 1) {
          e.cap_fwd = e.cap_bwd = static_cast<double>(rng.Uniform(1, U));
        }
      }
      break;
    }
    case Family::kGrid: {
      int rows = 1;
      for (int r = 1; r * r <= n; ++r) {
        if (n % r == 0) rows = r;
      }
      const int cols = n / rows;
      auto id = [cols](int r, int c) { return r * cols + c; };
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (c + 1 < cols) edges.push_back(MakeEdge(rng, id(r, c), id(r, c + 1), U));
          if (r + 1 < rows) edges.push_back(MakeEdge(rng, id(r, c), id(r + 1, c), U));
        }
      }
      break;
    }
  }
  return Graph::Build(n, std::move(edges), 0, n - 1, static_cast<double>(U));
}

}  // namespace pmaxflow
