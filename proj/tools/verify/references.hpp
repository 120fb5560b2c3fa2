#pragma once

#include <span>

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/graph.hpp"

// Reference implementations used only to cross-check the library. Each one
// takes a different route from the code it checks.
namespace pmaxflow::verify {

/// Max-flow value by Edmonds-Karp on a dense capacity matrix (parallel edges
/// and both capacity sides merged into one matrix).
double EdmondsKarpValue(const Graph& g);

/// Minimum-energy flow for demand chi from the dense KKT system
///   [R  B] [f  ]   [0  ]
///   [B' 0] [phi] = [chi]
/// with the row and column of s removed, solved by full-pivot LU.
Vec DenseElectricalFlow(const Graph& g, std::span<const double> r,
                        std::span<const double> chi);

struct CompositeReference {
  Vec f_hat;
  double value = 0.0;
  int iterations = 0;
};

/// Composite objective minimized over {B^T x = delta chi} by accelerated
/// projected gradient with an exact dense Euclidean projection, adaptive
/// steps, restarts and a feasibility restore after every step, until the
/// projected gradient falls below 1e-13 of its initial norm or 1e-14 of the
/// full gradient, 5000 iterations pass without a relative gain of 1e-13, or
/// the iteration budget runs out.
CompositeReference ReferenceComposite(const Graph& g, const Weights& w,
                                      std::span<const double> f, double delta,
                                      double W, int p, int iterations = 200000);

}  // namespace pmaxflow::verify
