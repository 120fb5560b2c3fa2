#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmaxflow {

using Vec = std::vector<double>;

// An edge e = (tail, head). Positive flow runs tail -> head and is bounded by
// cap_fwd; negative flow runs head -> tail and is bounded by cap_bwd.
struct Edge {
  int tail = 0;
  int head = 0;
  double cap_fwd = 0.0;
  double cap_bwd = 0.0;
  bool precond = false;
};

struct BuildOptions {
  bool require_connected = true;
};

/// Directed graph with two-sided capacities and a designated source and sink.
///
/// Sign convention used throughout the library: the incidence operator B has
/// row e = (u, v) equal to -1 at u and +1 at v, so (B^T f)_v is inflow minus
/// outflow at v and the unit s-t demand is -1 at s and +1 at t. For potentials
/// y, (B y)_e = y_head - y_tail.
class Graph {
 public:
  /// Validates and builds a graph. Throws Error with kSourceEqualsSink,
  /// kInvalidGraph (bad index, self-loop), kInvalidCapacity or
  /// kDisconnectedGraph.
  static Graph Build(int n, std::vector<Edge> edges, int s, int t, double U,
                     BuildOptions options = {});

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  int source() const { return s_; }
  int sink() const { return t_; }
  double capacity_bound() const { return U_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  int num_precond_edges() const;
  // Edges not flagged as preconditioner edges, in their original order.
  std::vector<int> original_edge_ids() const;

  // B^T f: inflow minus outflow at every vertex.
  Vec NetInflow(std::span<const double> f) const;
  // B y: y_head - y_tail on every edge.
  Vec PotentialDrop(std::span<const double> y) const;
  // F * chi_{s,t}.
  Vec StDemand(double F) const;

 private:
  Graph() = default;
  friend Graph Precondition(const Graph& g);

  int n_ = 0;
  int s_ = 0;
  int t_ = 1;
  double U_ = 1.0;
  std::vector<Edge> edges_;
};

struct Flow {
  Vec values;
  double value = 0.0;
};

struct ResidualCaps {
  Vec fwd;  // u+ - f
  Vec bwd;  // u- + f
  Vec min;
};

struct Congestion {
  Vec fwd;
  Vec bwd;
  double max = 0.0;
};

/// Appends m undirected s-t edges of capacity 2U (both directions), flagged as
/// preconditioner edges.
Graph Precondition(const Graph& g);

/// Throws kInfeasibleFlow unless every residual capacity is strictly positive.
ResidualCaps ComputeResidualCaps(const Graph& g, std::span<const double> f);

Congestion ComputeCongestion(std::span<const double> step,
                             const ResidualCaps& rc);

/// B^T f - demand.
Vec ConservationResidual(const Graph& g, std::span<const double> f,
                         std::span<const double> demand);

double NormInf(std::span<const double> v);
double Norm2(std::span<const double> v);
double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace pmaxflow
