#pragma once

#include <functional>
#include <optional>
#include <span>

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/graph.hpp"
#include "pmaxflow/laplacian.hpp"
#include "pmaxflow/state.hpp"

namespace pmaxflow {

/// Writes the gradient into `grad` and returns the value.
using ObjectiveFn =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Affine flow constraint B^T x = demand on `graph`.
struct FlowConstraint {
  const Graph* graph = nullptr;
  Vec demand;
};

struct AgdOptions {
  double kappa = 1.9;
  double tol = 1e-10;  // relative projected-gradient tolerance
  int max_iters = 20000;
  LaplacianOptions laplacian;
};

struct AgdResult {
  Vec x;
  double value = 0.0;
  int iterations = 0;
  int laplacian_iterations = 0;
  double grad_norm = 0.0;          // ||projected D^{-1} grad||_D at x
  double initial_grad_norm = 0.0;  // same at x0
};

/// Accelerated gradient descent for an objective with D <= Hess <= kappa D,
/// D diagonal. Every iterate satisfies the constraint: gradient steps are
/// projected in the D-norm (Laplacian solves with resistances D). Stops when
/// the projected gradient norm drops below tol times its initial value, or
/// below the projection accuracy (100 times the Laplacian tolerance times the
/// unprojected norm).
/// x0 must satisfy the constraint. When `reference` is given the tolerance is
/// taken relative to the projected gradient norm there instead of at x0.
/// Throws kNoConvergence on the cap.
AgdResult AgdMinimize(const ObjectiveFn& objective,
                      const std::optional<FlowConstraint>& constraint,
                      std::span<const double> x0, std::span<const double> D,
                      const AgdOptions& options = {},
                      std::span<const double> reference = {});

struct StepOptions {
  double kappa = 1.9;
  double step_tol = 1e-10;
  int max_iters = 20000;
  double congestion_limit = 0.1;
  double coupling_tol_base = 1e-8;
  LaplacianOptions laplacian;
};

struct StepResult {
  Vec f_hat;
  Vec y_hat;
  Vec rho_fwd;
  Vec rho_bwd;
  double rho_max = 0.0;
  double delta = 0.0;
  double objective = 0.0;
  int solver_iters = 0;
  int laplacian_iters = 0;
  double grad_norm = 0.0;
  double initial_grad_norm = 0.0;
  double dual_fit_residual = 0.0;
};

/// Flow sending `delta` split evenly over the preconditioner edges.
Vec UniformPrecondFlow(const Graph& g, double delta);

/// Minimizes the extended potential decrement over B^T f_hat = delta chi
/// starting from the uniform preconditioner flow (or from `warm_start`
/// projected onto the demand), then recovers y_hat. The stopping tolerance is
/// always relative to the uniform start. Throws kCongestionExceeded when
/// ||rho||_inf exceeds the limit.
StepResult PotentialDecrementStep(const Graph& g, const Weights& w,
                                  std::span<const double> f,
                                  std::span<const double> y, double delta,
                                  const StepOptions& options = {},
                                  std::span<const double> warm_start = {});

struct DualUpdate {
  Vec y_hat;
  double residual = 0.0;  // ||B y_hat - d||_inf
};

/// Least-squares fit of B y_hat to the per-edge change of the coupling
/// quantity between f and f + f_hat. Throws kPoorDualFit when the fit
/// residual exceeds `tol`.
DualUpdate ComputeDualUpdate(const Graph& g, const Weights& w,
                             std::span<const double> f,
                             std::span<const double> f_hat, double tol,
                             const LaplacianOptions& laplacian = {});

/// One Newton correction toward exact coupling at fixed weights and demand:
/// with R the coupling residual and H the barrier Hessian, adds the
/// circulation z = H^{-1} (R + B v) to f and v to y, where
/// B^T H^{-1} B v = -B^T H^{-1} R. The residual drops to second order.
IterateState Recenter(const Graph& g, const IterateState& state,
                      const LaplacianOptions& laplacian = {});

// Advance recenters once the residual passes this fraction of the tolerance.
inline constexpr double kRecenterFraction = 0.1;

/// f += f_hat, y += y_hat, F += delta, recentered when the coupling residual
/// has drifted; throws kCouplingLost when the new triple is not well-coupled.
IterateState Advance(const Graph& g, const IterateState& state,
                     const StepResult& step, double coupling_tol_base = 1e-8);

}  // namespace pmaxflow
