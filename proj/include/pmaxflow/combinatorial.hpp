#pragma once

#include <span>

#include "pmaxflow/graph.hpp"

namespace pmaxflow {

/// Exact max flow by Dinic's algorithm. Edge e contributes an arc
/// tail -> head of capacity u+ and an arc head -> tail of capacity u-.
/// Capacities must be integral.
Flow DinicMaxFlow(const Graph& g);

/// Upper bound on the max-flow value: min(capacity out of s, capacity into t).
double CutBound(const Graph& g);

/// Turns a fractional flow on `ipm_graph` (whose first g.m() edges mirror g)
/// into an integral feasible flow on g: drops the remaining edges, clamps to
/// g's capacities, rounds fractional cycles and s-t paths out of the
/// fractional support, and finally repairs vertex imbalances along residual
/// paths. Deterministic.
Flow RoundToIntegral(const Graph& g, std::span<const double> f_fractional);

/// Augments an integral feasible flow along shortest residual s-t paths until
/// its value reaches `target` or no augmenting path is left.
Flow AugmentToOptimal(const Graph& g, const Flow& flow, double target);

/// True when f respects g's capacities and conserves flow at every vertex
/// other than s and t, all within `tol`; `value` receives the net inflow at t.
bool IsFeasibleFlow(const Graph& g, std::span<const double> f,
                    double* value = nullptr, double tol = 1e-9);

}  // namespace pmaxflow
