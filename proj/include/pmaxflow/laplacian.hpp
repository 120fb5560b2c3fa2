#pragma once

#include <span>

#include "pmaxflow/graph.hpp"

namespace pmaxflow {

struct LaplacianOptions {
  double tol = 1e-10;           // relative: ||L phi - chi||_2 <= tol ||chi||_2
  int max_iters_per_vertex = 50;
  double max_resistance_ratio = 1e30;
};

struct LaplacianSolve {
  Vec potentials;  // pinned so that phi_s = 0
  int iterations = 0;
  double residual = 0.0;  // ||L phi - chi||_2
};

/// Matrix-free Laplacian solver, L = B^T R^{-1} B, using conjugate gradients
/// with a Jacobi (weighted-degree) preconditioner. Holds scratch buffers, so an
/// instance must not be shared between threads; the graph must outlive it.
class LaplacianSolver {
 public:
  explicit LaplacianSolver(const Graph& g, LaplacianOptions options = {});

  const Graph& graph() const { return *g_; }
  const LaplacianOptions& options() const { return options_; }

  void Apply(std::span<const double> r, std::span<const double> phi,
             std::span<double> out) const;

  /// Solves L phi = chi. Throws kNotBalanced when chi does not sum to zero,
  /// kResistanceRatio when r is out of range and kNoConvergence on the
  /// iteration cap.
  LaplacianSolve Solve(std::span<const double> r, std::span<const double> chi);

  /// r-weighted least-squares projection of f_raw onto {f : B^T f = chi}.
  Vec Project(std::span<const double> r, std::span<const double> f_raw,
              std::span<const double> chi, int* iterations = nullptr);

 private:
  void CheckResistances(std::span<const double> r) const;

  const Graph* g_;
  LaplacianOptions options_;
  Vec diag_, res_, z_, p_, q_;
};

Vec LaplacianApply(const Graph& g, std::span<const double> r,
                   std::span<const double> phi);

LaplacianSolve SolveLaplacian(const Graph& g, std::span<const double> r,
                              std::span<const double> chi,
                              LaplacianOptions options = {});

/// f = R^{-1} B L^+ chi, i.e. f_e = (phi_head - phi_tail) / r_e.
Vec ElectricalFlow(const Graph& g, std::span<const double> r,
                   std::span<const double> chi, LaplacianOptions options = {});

Vec ProjectToDemand(const Graph& g, std::span<const double> r,
                    std::span<const double> f_raw, std::span<const double> chi,
                    LaplacianOptions options = {});

double Energy(std::span<const double> r, std::span<const double> f);

}  // namespace pmaxflow
