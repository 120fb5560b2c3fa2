#include "pmaxflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

namespace {

bool IsConnected(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = n;
  for (const Edge& e : edges) {
    int a = find(e.tail);
    int b = find(e.head);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components <= 1;
}

}  // namespace

Graph Graph::Build(int n, std::vector<Edge> edges, int s, int t, double U,
                   BuildOptions options) {
  if (n < 2) throw Error(ErrorCode::kInvalidGraph, "need at least 2 vertices");
  if (s < 0 || s >= n || t < 0 || t >= n) {
    throw Error(ErrorCode::kInvalidGraph, "source/sink out of range");
  }
  if (s == t) throw Error(ErrorCode::kSourceEqualsSink, "s == t");
  if (!(U > 0.0) || !std::isfinite(U)) {
    throw Error(ErrorCode::kInvalidCapacity, "capacity bound must be positive");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const std::string where = "edge " + std::to_string(i);
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
      throw Error(ErrorCode::kInvalidGraph, where + ": endpoint out of range");
    }
    if (e.tail == e.head) {
      throw Error(ErrorCode::kInvalidGraph, where + ": self-loop");
    }
    if (!(e.cap_fwd >= 0.0) || !(e.cap_bwd >= 0.0) || e.cap_fwd > U ||
        e.cap_bwd > U) {
      throw Error(ErrorCode::kInvalidCapacity, where + ": capacity outside [0, U]");
    }
    if (e.cap_fwd + e.cap_bwd <= 0.0) {
      throw Error(ErrorCode::kInvalidCapacity, where + ": u+ + u- must be positive");
    }
  }
  if (options.require_connected && !IsConnected(n, edges)) {
    throw Error(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
  Graph g;
  g.n_ = n;
  g.s_ = s;
  g.t_ = t;
  g.U_ = U;
  g.edges_ = std::move(edges);
  for (Edge& e : g.edges_) e.precond = false;
  return g;
}

int Graph::num_precond_edges() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                        [](const Edge& e) { return e.precond; }));
}

std::vector<int> Graph::original_edge_ids() const {
  std::vector<int> ids;
  for (int e = 0; e < m(); ++e) {
    if (!edges_[e].precond) ids.push_back(e);
  }
  return ids;
}

Vec Graph::NetInflow(std::span<const double> f) const {
  Vec out(static_cast<std::size_t>(n_), 0.0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out[edges_[e].tail] -= f[e];
    out[edges_[e].head] += f[e];
  }
  return out;
}

Vec Graph::PotentialDrop(std::span<const double> y) const {
  Vec out(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out[e] = y[edges_[e].head] - y[edges_[e].tail];
  }
  return out;
}

Vec Graph::StDemand(double F) const {
  Vec chi(static_cast<std::size_t>(n_), 0.0);
  chi[s_] = -F;
  chi[t_] = F;
  return chi;
}

Graph Precondition(const Graph& g) {
  Graph out = g;
  const int m = g.m();
  const double cap = 2.0 * g.capacity_bound();
  out.edges_.reserve(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < m; ++i) {
    out.edges_.push_back(Edge{g.source(), g.sink(), cap, cap, true});
  }
  return out;
}

ResidualCaps ComputeResidualCaps(const Graph& g, std::span<const double> f) {
  const int m = g.m();
  ResidualCaps rc{Vec(m), Vec(m), Vec(m)};
  for (int e = 0; e < m; ++e) {
    const Edge& edge = g.edge(e);
    rc.fwd[e] = edge.cap_fwd - f[e];
    rc.bwd[e] = edge.cap_bwd + f[e];
    rc.min[e] = std::min(rc.fwd[e], rc.bwd[e]);
    if (!(rc.min[e] > 0.0)) {
      throw Error(ErrorCode::kInfeasibleFlow,
                  "edge " + std::to_string(e) + " has non-positive residual");
    }
  }
  return rc;
}

Congestion ComputeCongestion(std::span<const double> step,
                             const ResidualCaps& rc) {
  const std::size_t m = step.size();
  Congestion c{Vec(m), Vec(m), 0.0};
  for (std::size_t e = 0; e < m; ++e) {
    const double a = std::abs(step[e]);
    c.fwd[e] = a / rc.fwd[e];
    c.bwd[e] = a / rc.bwd[e];
    c.max = std::max({c.max, c.fwd[e], c.bwd[e]});
  }
  return c;
}

Vec ConservationResidual(const Graph& g, std::span<const double> f,
                         std::span<const double> demand) {
  Vec r = g.NetInflow(f);
  for (std::size_t v = 0; v < r.size(); ++v) r[v] -= demand[v];
  return r;
}

double NormInf(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double Norm2(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace pmaxflow
