#include "pmaxflow/weighted_step.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

double DefaultEta(int m, double U) {
  double eta = 1.0 / 6.0;
  if (U > 1.0 && m > 1) eta -= std::log(U) / (3.0 * std::log(m));
  return eta;
}

double DefaultBudgetW(int m, double eta) {
  return std::pow(static_cast<double>(m), 6.0 * eta);
}

int DefaultP(int m) {
  const double root = std::sqrt(std::log2(std::max(m, 2)));
  const int p = 2 * static_cast<int>(std::lround(root / 2.0));
  return std::max(p, 2);
}

double WeightedDelta(double gap, int m, double eta) {
  return gap / (5000.0 * WeightedThreshold(m, eta));
}

double WeightedThreshold(int m, double eta) {
  return std::pow(static_cast<double>(m), 0.5 - eta);
}

namespace {

// Scale-safe (sum g^p)^{1/p} for non-negative g.
double PNorm(std::span<const double> g, int p) {
  double top = 0.0;
  for (double v : g) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double v : g) s += std::pow(std::abs(v) / top, p);
  return top * std::pow(s, 1.0 / p);
}

double DNorm(std::span<const double> D, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += D[i] * v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

CompositeEval CompositeObjective(const Graph& g, const Weights& w,
                                 std::span<const double> f,
                                 std::span<const double> step, double W,
                                 int p) {
  const int m = g.m();
  const DecrementEval dec = DecrementValue(g, w, f, step);
  const GTermsEval gt = GTerms(g, f, step, true);
  CompositeEval out;
  out.decrement = dec.value;
  out.grad = dec.grad;
  out.hess_diag = dec.hess_diag;
  out.rank_one.assign(m, 0.0);
  // The extension keeps g >= 0 only inside the box; clamp tiny negatives
  // introduced by rounding.
  Vec gv(m);
  for (int e = 0; e < m; ++e) gv[e] = std::max(gt.value[e], 0.0);
  const double N = PNorm(gv, p);
  out.pnorm = N;
  out.value = dec.value + W * N;
  if (N == 0.0 || W == 0.0) return out;
  for (int e = 0; e < m; ++e) {
    const double ratio = gv[e] / N;
    const double s = std::pow(ratio, p - 1);
    const double v = s * gt.d1[e];
    out.grad[e] += W * v;
    out.hess_diag[e] += W * (s * gt.d2[e] + (p - 1) * std::pow(ratio, p - 2) *
                                                gt.d1[e] * gt.d1[e] / N);
    out.rank_one[e] = v;
  }
  out.rank_one_coef = W * (p - 1) / N;
  return out;
}

CompositeSolve SolveComposite(const Graph& g, const Weights& w,
                              std::span<const double> f, double delta,
                              double W, int p,
                              const CompositeOptions& options,
                              std::span<const double> warm_start) {
  if (!(W >= 0.0) || p < 2) {
    throw Error(ErrorCode::kInvalidParams, "composite needs W >= 0 and p >= 2");
  }
  const int m = g.m();
  CompositeSolve out;
  out.f_hat.assign(m, 0.0);
  if (delta == 0.0) return out;

  LaplacianSolver solver(g, options.laplacian);
  const Vec demand = g.StDemand(delta);
  const Vec ones(m, 1.0);
  Vec x = g.num_precond_edges() > 0 ? UniformPrecondFlow(g, delta)
                                    : solver.Project(ones, Vec(m, 0.0), demand);
  CompositeEval ev = CompositeObjective(g, w, f, x, W, p);
  Vec z(m), d(m), trial(m);
  // Diagonal Newton residual: minimizer of the diagonal model on
  // {B^T d = demand - B^T x}.
  auto diagonal_step = [&](const CompositeEval& at, std::span<const double> pt) {
    Vec b = g.NetInflow(pt);
    for (int v = 0; v < g.n(); ++v) b[v] = demand[v] - b[v];
    for (int e = 0; e < m; ++e) z[e] = -at.grad[e] / at.hess_diag[e];
    return solver.Project(at.hess_diag, z, b, &out.laplacian_iters);
  };
  Vec d0 = diagonal_step(ev, x);
  out.initial_grad_norm = DNorm(ev.hess_diag, d0);
  const double target = options.step_tol * out.initial_grad_norm;
  if (!warm_start.empty()) {
    x = solver.Project(ones, warm_start, demand, &out.laplacian_iters);
    ev = CompositeObjective(g, w, f, x, W, p);
    d0 = diagonal_step(ev, x);
  }
  double previous_norm = 0.0;
  for (int it = 0;; ++it) {
    // Newton direction for diag(h) - a v v^T on {B^T d = b} via two
    // projections and Sherman-Morrison.
    const Vec& h = ev.hess_diag;
    if (it > 0) d0 = diagonal_step(ev, x);
    const double norm = DNorm(h, d0);
    out.grad_norm = norm;
    out.iterations = it;
    if (norm <= target || norm == 0.0) break;
    // The projection cancels most of -grad/h, so its accuracy is limited to
    // about laplacian tol times the unprojected norm. A stalled Newton step
    // at that floor is converged.
    const double floor = 1e2 * options.laplacian.tol * DNorm(h, z);
    if (it > 0 && norm <= floor && norm > 0.5 * previous_norm) break;
    previous_norm = norm;
    if (it >= options.max_iters) {
      throw Error(ErrorCode::kNoConvergence,
                  "composite solve hit iteration cap, residual " +
                      FormatNumber(norm));
    }
    d = d0;
    if (ev.rank_one_coef > 0.0) {
      for (int e = 0; e < m; ++e) z[e] = ev.rank_one[e] / h[e];
      const Vec zero(static_cast<std::size_t>(g.n()), 0.0);
      const Vec dv = solver.Project(h, z, zero, &out.laplacian_iters);
      const double a = ev.rank_one_coef;
      const double denom = 1.0 - a * Dot(ev.rank_one, dv);
      if (denom > 0.0) {
        const double tau = Dot(ev.rank_one, d0) / denom;
        for (int e = 0; e < m; ++e) d[e] += a * tau * dv[e];
      }
    }
    const double slope = Dot(ev.grad, d);
    double t = 1.0;
    CompositeEval next;
    if (-slope <= 1e-12 * (std::abs(ev.value) + 1e-300)) {
      // The predicted decrease is within round-off of the objective, so a
      // value test is meaningless; take the full Newton step.
      for (int e = 0; e < m; ++e) trial[e] = x[e] + d[e];
      next = CompositeObjective(g, w, f, trial, W, p);
    } else {
      for (int ls = 0;; ++ls) {
        for (int e = 0; e < m; ++e) trial[e] = x[e] + t * d[e];
        next = CompositeObjective(g, w, f, trial, W, p);
        if (next.value <= ev.value + 1e-4 * t * slope) break;
        if (ls >= 60) {
          throw Error(ErrorCode::kNoConvergence,
                      "composite line search failed");
        }
        t *= 0.5;
      }
    }
    x.swap(trial);
    ev = std::move(next);
  }
  // Remove constraint drift from inexact projections.
  x = solver.Project(ones, x, demand, &out.laplacian_iters);
  out.f_hat = std::move(x);
  out.value = CompositeObjective(g, w, f, out.f_hat, W, p).value;
  return out;
}

Vec SolveResidualProblem(const Graph& g, std::span<const double> alpha,
                         std::span<const double> r, std::span<const double> x,
                         int p, const CompositeOptions& options) {
  if (p < 2 || p % 2 != 0) {
    throw Error(ErrorCode::kInvalidParams, "residual problem needs even p >= 2");
  }
  const int m = g.m();
  Vec quad(m);
  for (int e = 0; e < m; ++e) quad[e] = r[e] + std::pow(x[e], 2 * p - 4);
  auto value = [&](std::span<const double> d) {
    double s = 0.0;
    for (int e = 0; e < m; ++e) {
      s += alpha[e] * d[e] + quad[e] * d[e] * d[e] + std::pow(d[e], p);
    }
    return s;
  };
  LaplacianSolver solver(g, options.laplacian);
  const Vec zero(static_cast<std::size_t>(g.n()), 0.0);
  Vec d(m, 0.0), grad(m), hess(m), z(m), trial(m);
  double target = 0.0;
  double current = 0.0;
  for (int it = 0;; ++it) {
    for (int e = 0; e < m; ++e) {
      grad[e] = alpha[e] + 2.0 * quad[e] * d[e] + p * std::pow(d[e], p - 1);
      hess[e] = 2.0 * quad[e] + p * (p - 1) * std::pow(d[e], p - 2);
      if (hess[e] <= 0.0) hess[e] = 1e-300;
      z[e] = -grad[e] / hess[e];
    }
    const Vec b = g.NetInflow(d);
    Vec rhs(b.size());
    for (std::size_t v = 0; v < b.size(); ++v) rhs[v] = -b[v];
    const Vec step = solver.Project(hess, z, rhs);
    const double norm = DNorm(hess, step);
    if (it == 0) target = options.step_tol * norm;
    if (norm <= target || norm == 0.0) break;
    if (it >= options.max_iters) {
      throw Error(ErrorCode::kNoConvergence, "residual problem did not converge");
    }
    const double slope = Dot(grad, step);
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      for (int e = 0; e < m; ++e) trial[e] = d[e] + t * step[e];
      if (value(trial) <= current + 1e-4 * t * slope ||
          -slope <= 1e-12 * (std::abs(current) + 1e-300)) {
        break;
      }
      t *= 0.5;
    }
    d.swap(trial);
    current = value(d);
  }
  return d;
}

WeightChange ExtractWeights(const Graph& g, std::span<const double> f,
                            std::span<const double> f_hat, double W, int p) {
  const int m = g.m();
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  const GTermsEval gt = GTerms(g, f, f_hat, true);
  Vec gv(m);
  for (int e = 0; e < m; ++e) gv[e] = std::max(gt.value[e], 0.0);
  WeightChange out;
  out.r_prime.assign(m, 0.0);
  out.added = {Vec(m, 0.0), Vec(m, 0.0)};
  out.reduced = out.added;
  const double N = PNorm(gv, p);
  if (N == 0.0) {
    throw Error(ErrorCode::kDegenerateStep, "||g||_p = 0");
  }
  for (int e = 0; e < m; ++e) {
    const double rp = W * std::pow(gv[e] / N, p - 1);
    out.r_prime[e] = rp;
    out.added.fwd[e] = rp * rc.min[e] * rc.fwd[e];
    out.added.bwd[e] = rp * rc.min[e] * rc.bwd[e];
  }
  out.reduced = ReduceWeights(g, f, f_hat, out.added);
  return out;
}

Weights ReduceWeights(const Graph& g, std::span<const double> f,
                      std::span<const double> f_hat, const Weights& added) {
  const int m = g.m();
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  Weights out{Vec(m, 0.0), Vec(m, 0.0)};
  for (int e = 0; e < m; ++e) {
    const double fwd = rc.fwd[e] - f_hat[e];
    const double bwd = rc.bwd[e] + f_hat[e];
    if (!(fwd > 0.0 && bwd > 0.0)) {
      throw Error(ErrorCode::kInfeasibleFlow,
                  "f + f_hat leaves the capacity box on edge " +
                      std::to_string(e));
    }
    const double d = added.fwd[e] / fwd - added.bwd[e] / bwd;
    if (d >= 0.0) {
      out.fwd[e] = d * fwd;
    } else {
      out.bwd[e] = -d * bwd;
    }
  }
  return out;
}

WeightedStepOutcome WeightedProgressStep(const Graph& g,
                                         const IterateState& state,
                                         double delta,
                                         const WeightedStepOptions& options,
                                         std::span<const double> warm_start) {
  const int m = g.m();
  WeightedStepOutcome out;
  StepResult& step = out.step;
  step.delta = delta;

  const CompositeSolve sol = SolveComposite(g, state.w, state.f, delta,
                                            options.W, options.p,
                                            options.composite, warm_start);
  step.f_hat = sol.f_hat;
  step.objective = sol.value;
  step.solver_iters = sol.iterations;
  step.laplacian_iters = sol.laplacian_iters;
  step.grad_norm = sol.grad_norm;
  step.initial_grad_norm = sol.initial_grad_norm;

  const ResidualCaps rc = ComputeResidualCaps(g, state.f);
  const Congestion cong = ComputeCongestion(step.f_hat, rc);
  step.rho_fwd = cong.fwd;
  step.rho_bwd = cong.bwd;
  step.rho_max = cong.max;
  out.fhat_inf = NormInf(step.f_hat);
  if (cong.max > options.congestion_limit) {
    throw Error(ErrorCode::kCongestionExceeded,
                "||rho||_inf = " + FormatNumber(cong.max));
  }
  if (out.fhat_inf > options.fhat_bound) {
    throw Error(ErrorCode::kCongestionExceeded,
                "||f_hat||_inf = " + FormatNumber(out.fhat_inf) + " > " +
                    FormatNumber(options.fhat_bound));
  }

  if (delta == 0.0) {
    out.change.r_prime.assign(m, 0.0);
    out.change.added = {Vec(m, 0.0), Vec(m, 0.0)};
    out.change.reduced = out.change.added;
  } else {
    out.change = ExtractWeights(g, state.f, step.f_hat, options.W, options.p);
  }
  const double added_l1 = out.change.reduced.L1();
  if (options.weight_budget_per_iter > 0.0 &&
      added_l1 > options.weight_budget_per_iter) {
    throw Error(ErrorCode::kWeightBudgetExceeded,
                "||w''||_1 = " + FormatNumber(added_l1) + " > " +
                    FormatNumber(options.weight_budget_per_iter));
  }
  Weights next_w = state.w;
  Weights pre_w = state.w;
  for (int e = 0; e < m; ++e) {
    next_w.fwd[e] += out.change.reduced.fwd[e];
    next_w.bwd[e] += out.change.reduced.bwd[e];
    pre_w.fwd[e] += out.change.added.fwd[e];
    pre_w.bwd[e] += out.change.added.bwd[e];
  }
  if (options.weight_total_limit > 0.0 &&
      next_w.L1() > options.weight_total_limit) {
    throw Error(ErrorCode::kWeightBudgetExceeded,
                "||w||_1 = " + FormatNumber(next_w.L1()) + " > " +
                    FormatNumber(options.weight_total_limit));
  }

  // w' leaves the coupling quantity at f unchanged, so the target change
  // under w + w' equals the one under the post-reduction weights.
  const DualUpdate dual = ComputeDualUpdate(
      g, pre_w, state.f, step.f_hat,
      CouplingTolerance(next_w, m, options.coupling_tol_base),
      options.composite.laplacian);
  step.y_hat = dual.y_hat;
  step.dual_fit_residual = dual.residual;

  IterateState with_weights = state;
  with_weights.w = std::move(next_w);
  out.next = Advance(g, with_weights, step, options.coupling_tol_base);
  return out;
}

namespace {

struct OrientedEdge {
  EdgeDecrement dec;
  EdgeGTerm gterm;
  double sigma;
};

OrientedEdge Orient(const SandwichEdge& edge) {
  const bool fwd_small = edge.res_fwd <= edge.res_bwd;
  return {EdgeDecrement{edge.w_fwd, edge.w_bwd, edge.res_fwd, edge.res_bwd},
          EdgeGTerm{fwd_small ? edge.res_fwd : edge.res_bwd,
                    fwd_small ? edge.res_bwd : edge.res_fwd},
          fwd_small ? 1.0 : -1.0};
}

// Second derivative of g(sigma x)^p.
double GPowerCurvature(const OrientedEdge& oe, double x, int p) {
  const ScalarTriple t = oe.gterm(oe.sigma * x);
  const double g = std::max(t.value, 0.0);
  return p * std::pow(g, p - 1) * t.d2 +
         p * (p - 1) * std::pow(g, p - 2) * t.d1 * t.d1;
}

}  // namespace

double SandwichVal(const SandwichEdge& edge, double x, int p,
                   double* derivative) {
  const OrientedEdge oe = Orient(edge);
  const ScalarTriple d = oe.dec(x);
  const ScalarTriple gt = oe.gterm(oe.sigma * x);
  const double gval = std::max(gt.value, 0.0);
  if (derivative) {
    *derivative = d.d1 + p * std::pow(gval, p - 1) * oe.sigma * gt.d1;
  }
  return d.value + std::pow(gval, p);
}

SandwichResult SandwichBounds(const SandwichEdge& edge, double x, double delta,
                              int p, const SandwichConstants& c) {
  const OrientedEdge oe = Orient(edge);
  double slope = 0.0;
  const double base = SandwichVal(edge, x, p, &slope);
  const double a = edge.res_fwd - x;
  const double b = edge.res_bwd + x;
  const double curv = edge.w_fwd / (a * a) + edge.w_bwd / (b * b);
  const double basis =
      std::pow(std::abs(x), 2 * p - 4) * delta * delta + std::pow(delta, p);

  // Barrier remainder in closed form; g^p remainder as
  // delta^2 int_0^1 (1 - s) G''(x + s delta) ds by 8-point Gauss-Legendre.
  double rem = edge.w_fwd * LogRemainder(delta / a) +
               edge.w_bwd * LogRemainder(-delta / b);
  static constexpr double kNodes[4] = {0.1834346424956498, 0.5255324099163290,
                                       0.7966664774136267, 0.9602898564975363};
  static constexpr double kWeights[4] = {0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
  double integral = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (double sign : {-1.0, 1.0}) {
      const double s = 0.5 * (1.0 + sign * kNodes[i]);
      integral += 0.5 * kWeights[i] * (1.0 - s) *
                  GPowerCurvature(oe, x + s * delta, p);
    }
  }
  rem += delta * delta * integral;

  SandwichResult out;
  out.lower_remainder = kSandwichQuadLo * curv * delta * delta + c.c_lo * basis;
  out.upper_remainder = kSandwichQuadHi * curv * delta * delta + c.c_hi * basis;
  out.remainder = rem;
  const double linear = base + delta * slope;
  out.lower = linear + out.lower_remainder;
  out.upper = linear + out.upper_remainder;
  out.actual = SandwichVal(edge, x + delta, p);
  return out;
}

SandwichResult PowerSandwichBounds(double f, double delta, int p,
                                   const SandwichConstants& c) {
  const double linear = std::pow(f, p) + p * std::pow(f, p - 1) * delta;
  const double basis =
      std::pow(f, p - 2) * delta * delta + std::pow(delta, p);
  // Binomial tail sum_{k >= 2} C(p, k) f^{p-k} delta^k.
  double rem = 0.0;
  double binom = p * (p - 1) / 2.0;
  for (int k = 2; k <= p; ++k) {
    rem += binom * std::pow(f, p - k) * std::pow(delta, k);
    binom = binom * (p - k) / (k + 1);
  }
  SandwichResult out;
  out.lower_remainder = c.c_lo * basis;
  out.upper_remainder = c.c_hi * basis;
  out.remainder = rem;
  out.lower = linear + out.lower_remainder;
  out.upper = linear + out.upper_remainder;
  out.actual = std::pow(f + delta, p);
  return out;
}

}  // namespace pmaxflow
