#pragma once

#include <cmath>
#include <span>

#include "pmaxflow/graph.hpp"

namespace pmaxflow {

struct Weights {
  Vec fwd;
  Vec bwd;

  double L1() const;
};

/// Value and first two derivatives of a scalar function at a point.
struct ScalarTriple {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Quadratic extension of `base` outside [-ell, ell]: identical inside the
/// box, second-order Taylor continuation from the nearest knot outside. The
/// result is C^2 and inherits the box's curvature bounds globally.
template <class Base>
ScalarTriple QuadExtEval(Base&& base, double ell, double x) {
  if (x >= -ell && x <= ell) return base(x);
  const double knot = x > ell ? ell : -ell;
  const ScalarTriple k = base(knot);
  const double h = x - knot;
  return {k.value + k.d1 * h + 0.5 * k.d2 * h * h, k.d1 + k.d2 * h, k.d2};
}

/// phi_w(f) = -sum_e [w+ log(u+ - f) + w- log(u- + f)]. Terms with zero weight
/// contribute nothing. Throws kInfeasibleFlow.
double BarrierValue(const Graph& g, const Weights& w, std::span<const double> f);

/// Per-edge coupling quantity w+/(u+ - f) - w-/(u- + f), the gradient of the
/// barrier.
Vec BarrierGradient(const Graph& g, const Weights& w, std::span<const double> f);

struct PotentialState {
  Vec f;
  Vec y;
  Vec slack;   // barrier gradient w+/(u+-f) - w-/(u-+f) per edge
  double gap = 0.0;  // f^T slack
};

PotentialState MakePotentialState(const Graph& g, const Weights& w,
                                  std::span<const double> f,
                                  std::span<const double> y);

/// Phi_w = m log(1 + gap/m) + phi_w(f). Throws kInfeasibleFlow when the
/// gap is below -tol.
double PotentialValue(const PotentialState& ps, const Weights& w,
                      const Graph& g, double tol = 1e-9);

/// -log(1 - z) - z for z < 1, accurate for small |z| (series below 0.05).
double LogRemainder(double z);

/// One edge's share of the potential decrement at residual capacities
/// (res_fwd, res_bwd):
///   -[w+ log(1 - x/res_fwd) + w- log(1 + x/res_bwd) - x (w+/res_fwd - w-/res_bwd)]
struct EdgeDecrement {
  double w_fwd;
  double w_bwd;
  double res_fwd;
  double res_bwd;

  ScalarTriple operator()(double x) const;
  double box() const { return 0.1 * std::min(res_fwd, res_bwd); }
};

/// The g_e term of the composite objective. The edge is oriented so that
/// `small` is the smaller residual; x is the step along that orientation.
///   g(x) = -[small^2 log(1 - x/small) + small*large log(1 + x/large)] >= 0
struct EdgeGTerm {
  double small;
  double large;

  ScalarTriple operator()(double x) const;
};

struct QuadExtSpec {
  Vec ell;             // per-edge box radius; empty means residual min / 10
  bool extend = true;  // false evaluates the raw functions (no extension)
};

struct DecrementEval {
  double value = 0.0;
  Vec grad;
  Vec hess_diag;
};

/// Quadratically extended potential decrement Delta Phi_w(f, step).
DecrementEval DecrementValue(const Graph& g, const Weights& w,
                             std::span<const double> f,
                             std::span<const double> step,
                             const QuadExtSpec& spec = {});

/// Per-edge orientation: +1 when u+ - f <= u- + f, -1 otherwise.
Vec GTermOrientation(const ResidualCaps& rc);

struct GTermsEval {
  Vec value;
  Vec d1;  // derivative w.r.t. the edge's step in its stored orientation
  Vec d2;
};

/// g_e(step_e) per edge with the box radius ell_e = residual min / 10.
GTermsEval GTerms(const Graph& g, std::span<const double> f,
                  std::span<const double> step, bool extend = true);

/// (y_head - y_tail) - [w+/(u+ - f) - w-/(u- + f)] per edge.
Vec CouplingResidual(const Graph& g, const Weights& w, std::span<const double> f,
                     std::span<const double> y);

/// Default well-coupling tolerance 1e-8 (1 + ||w||_1 / m).
double CouplingTolerance(const Weights& w, int m, double base = 1e-8);

}  // namespace pmaxflow
