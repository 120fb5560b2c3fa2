#pragma once

#include <span>

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/graph.hpp"
#include "pmaxflow/laplacian.hpp"
#include "pmaxflow/potential_step.hpp"
#include "pmaxflow/state.hpp"

namespace pmaxflow {

// Parameter schedule of the weighted method for a graph with m edges and
// capacity bound U.
double DefaultEta(int m, double U);
double DefaultBudgetW(int m, double eta);  // W = m^{6 eta}
int DefaultP(int m);                       // even integer nearest sqrt(log2 m)
double WeightedDelta(double gap, int m, double eta);  // gap / (5000 m^{1/2-eta})
double WeightedThreshold(int m, double eta);          // m^{1/2-eta}

/// Delta Phi_w(f, x) + W ||g(x)||_p with both parts quadratically extended.
/// The Hessian is hess_diag - rank_one_coef * rank_one rank_one^T.
struct CompositeEval {
  double value = 0.0;
  double decrement = 0.0;
  double pnorm = 0.0;  // ||g||_p
  Vec grad;
  Vec hess_diag;
  Vec rank_one;
  double rank_one_coef = 0.0;
};

CompositeEval CompositeObjective(const Graph& g, const Weights& w,
                                 std::span<const double> f,
                                 std::span<const double> step, double W, int p);

struct CompositeOptions {
  double step_tol = 1e-10;
  int max_iters = 200;
  LaplacianOptions laplacian;
};

struct CompositeSolve {
  Vec f_hat;
  double value = 0.0;
  int iterations = 0;
  int laplacian_iters = 0;
  double grad_norm = 0.0;
  double initial_grad_norm = 0.0;
};

/// Minimizes the composite objective over B^T x = delta chi by iterative
/// refinement: each round solves the second-order residual model around the
/// current point (diagonal plus rank-one Hessian, two Laplacian solves) and
/// takes a backtracking step on the true objective.
/// `warm_start` (optional) is projected onto the demand and used as the
/// starting point; the tolerance stays relative to the uniform start.
CompositeSolve SolveComposite(const Graph& g, const Weights& w,
                              std::span<const double> f, double delta,
                              double W, int p,
                              const CompositeOptions& options = {},
                              std::span<const double> warm_start = {});

/// Mixed l2-lp residual problem
///   min_{B^T d = 0} alpha^T d + sum_e (r_e + x_e^{2p-4}) d_e^2 + d_e^p
/// for even p, solved by projected Newton.
Vec SolveResidualProblem(const Graph& g, std::span<const double> alpha,
                         std::span<const double> r, std::span<const double> x,
                         int p, const CompositeOptions& options = {});

struct WeightChange {
  Vec r_prime;
  Weights added;    // w'
  Weights reduced;  // w''
};

/// r' = W g^{p-1} / ||g||_p^{p-1}; w'+ = r' u_min u+, w'- = r' u_min u-
/// (residual capacities at f). Throws kDegenerateStep when ||g||_p = 0.
WeightChange ExtractWeights(const Graph& g, std::span<const double> f,
                            std::span<const double> f_hat, double W, int p);

/// Smallest non-negative w'' with the same coupling quantity as w' at
/// f + f_hat.
Weights ReduceWeights(const Graph& g, std::span<const double> f,
                      std::span<const double> f_hat, const Weights& added);

struct WeightedStepOptions {
  double eta = 1.0 / 6.0;
  double W = 1.0;
  int p = 2;
  double fhat_bound = 1.0;          // 9 m^{-2 eta}
  double weight_budget_per_iter = 0.0;  // <= 0 disables the check
  double weight_total_limit = 0.0;      // 3m; <= 0 disables the check
  double congestion_limit = 0.1;
  double coupling_tol_base = 1e-8;
  CompositeOptions composite;
};

struct WeightedStepOutcome {
  IterateState next;
  WeightChange change;
  StepResult step;
  double fhat_inf = 0.0;
};

/// One weighted progress step of size delta: composite solve, weight
/// extraction and reduction, dual update and advance under w + w''.
WeightedStepOutcome WeightedProgressStep(const Graph& g,
                                         const IterateState& state,
                                         double delta,
                                         const WeightedStepOptions& options,
                                         std::span<const double> warm_start = {});

// Taylor sandwich of one edge's p-th power objective
//   val(x) = DeltaPhi_e(x) + g_e(x)^p
// around x in the box, for a displacement delta >= 0 that stays in the box.
struct SandwichEdge {
  double w_fwd;
  double w_bwd;
  double res_fwd;
  double res_bwd;
};

struct SandwichConstants {
  double c_lo;
  double c_hi;
};

/// The three values, plus the same comparison with the shared linear part
/// val(x) + delta val'(x) removed. The remainder forms are computed without
/// cancellation and are what the ordering checks should use.
struct SandwichResult {
  double lower = 0.0;
  double upper = 0.0;
  double actual = 0.0;
  double lower_remainder = 0.0;
  double upper_remainder = 0.0;
  double remainder = 0.0;
};

// Quadratic coefficients: half the worst-case ratio of the barrier Hessian
// between two points of the box [-u/10, u/10].
inline constexpr double kSandwichQuadLo = 0.5 * (9.0 / 11.0) * (9.0 / 11.0);
inline constexpr double kSandwichQuadHi = 0.5 * (11.0 / 9.0) * (11.0 / 9.0);

double SandwichVal(const SandwichEdge& edge, double x, int p,
                   double* derivative = nullptr);

SandwichResult SandwichBounds(const SandwichEdge& edge, double x, double delta,
                              int p, const SandwichConstants& c);

/// (f + delta)^p against f^p + p f^{p-1} delta + c (f^{p-2} delta^2 + delta^p)
/// for even p.
SandwichResult PowerSandwichBounds(double f, double delta, int p,
                                   const SandwichConstants& c);

}  // namespace pmaxflow
