#include "pmaxflow/potential_step.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

namespace {

double DNorm(std::span<const double> D, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += D[i] * v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

AgdResult AgdMinimize(const ObjectiveFn& objective,
                      const std::optional<FlowConstraint>& constraint,
                      std::span<const double> x0, std::span<const double> D,
                      const AgdOptions& options,
                      std::span<const double> reference) {
  if (!(options.kappa >= 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "kappa must be >= 1");
  }
  const std::size_t dim = x0.size();
  std::optional<LaplacianSolver> solver;
  if (constraint) solver.emplace(*constraint->graph, options.laplacian);
  const Vec zero_demand =
      constraint ? Vec(constraint->demand.size(), 0.0) : Vec{};

  AgdResult out;
  // Projected, D-scaled gradient at `point`; returns the objective value.
  Vec grad(dim);
  Vec dir(dim);
  double raw_norm = 0.0;
  auto projected_gradient = [&](std::span<const double> point) {
    const double value = objective(point, grad);
    for (std::size_t i = 0; i < dim; ++i) dir[i] = grad[i] / D[i];
    raw_norm = DNorm(D, dir);
    if (solver) {
      dir = solver->Project(D, dir, zero_demand, &out.laplacian_iterations);
    }
    return value;
  };

  const double sqrt_kappa = std::sqrt(options.kappa);
  const double beta = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);
  const double step = 1.0 / options.kappa;

  Vec x(x0.begin(), x0.end());
  Vec y = x;
  Vec x_next(dim);
  if (!reference.empty()) {
    projected_gradient(reference);
    out.initial_grad_norm = DNorm(D, dir);
  }
  double value = projected_gradient(y);
  double norm = DNorm(D, dir);
  if (reference.empty()) out.initial_grad_norm = norm;
  const double target = options.tol * out.initial_grad_norm;
  // Inexact projections leave a residual of about the Laplacian tolerance
  // times the unprojected gradient; below that the norm only stagnates.
  auto floor = [&] {
    return solver ? 1e2 * options.laplacian.tol * raw_norm : 0.0;
  };
  int it = 0;
  while (norm > target && norm > floor() && norm > 0.0) {
    if (it >= options.max_iters) {
      throw Error(ErrorCode::kNoConvergence,
                  "AGD hit iteration cap with gradient norm " +
                      FormatNumber(norm));
    }
    for (std::size_t i = 0; i < dim; ++i) x_next[i] = y[i] - step * dir[i];
    for (std::size_t i = 0; i < dim; ++i) {
      y[i] = x_next[i] + beta * (x_next[i] - x[i]);
    }
    std::swap(x, x_next);
    ++it;
    value = projected_gradient(y);
    norm = DNorm(D, dir);
  }
  if (solver && it > 0) {
    // Remove constraint drift accumulated by inexact projections.
    y = solver->Project(D, y, constraint->demand, &out.laplacian_iterations);
    value = projected_gradient(y);
    norm = DNorm(D, dir);
  }
  out.x = std::move(y);
  out.value = value;
  out.iterations = it;
  out.grad_norm = norm;
  return out;
}

Vec UniformPrecondFlow(const Graph& g, double delta) {
  const int count = g.num_precond_edges();
  if (count == 0) {
    throw Error(ErrorCode::kInvalidParams, "graph has no preconditioner edges");
  }
  Vec f(static_cast<std::size_t>(g.m()), 0.0);
  for (int e = 0; e < g.m(); ++e) {
    if (g.edge(e).precond) f[e] = delta / count;
  }
  return f;
}

StepResult PotentialDecrementStep(const Graph& g, const Weights& w,
                                  std::span<const double> f,
                                  std::span<const double> y, double delta,
                                  const StepOptions& options,
                                  std::span<const double> warm_start) {
  (void)y;
  const int m = g.m();
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  StepResult out;
  out.delta = delta;
  out.f_hat.assign(m, 0.0);
  out.rho_fwd.assign(m, 0.0);
  out.rho_bwd.assign(m, 0.0);
  out.y_hat.assign(static_cast<std::size_t>(g.n()), 0.0);
  if (delta == 0.0) return out;

  std::vector<EdgeDecrement> terms;
  terms.reserve(m);
  Vec D(m);
  for (int e = 0; e < m; ++e) {
    terms.push_back({w.fwd[e], w.bwd[e], rc.fwd[e], rc.bwd[e]});
    // Inside the box the Hessian stays within [1/1.21, 1/0.81] of its value
    // at zero; D is the lower end of that envelope.
    D[e] = terms[e](0.0).d2 / 1.21;
  }
  ObjectiveFn objective = [&terms](std::span<const double> x,
                                   std::span<double> grad) {
    double value = 0.0;
    for (std::size_t e = 0; e < terms.size(); ++e) {
      const ScalarTriple t = QuadExtEval(terms[e], terms[e].box(), x[e]);
      value += t.value;
      grad[e] = t.d1;
    }
    return value;
  };

  const Vec demand = g.StDemand(delta);
  const Vec x0 = g.num_precond_edges() > 0
                     ? UniformPrecondFlow(g, delta)
                     : ProjectToDemand(g, D, Vec(m, 0.0), demand, options.laplacian);
  AgdOptions agd{options.kappa, options.step_tol, options.max_iters,
                 options.laplacian};
  AgdResult res;
  if (warm_start.empty()) {
    res = AgdMinimize(objective, FlowConstraint{&g, demand}, x0, D, agd);
  } else {
    const Vec start = ProjectToDemand(g, D, warm_start, demand, options.laplacian);
    res = AgdMinimize(objective, FlowConstraint{&g, demand}, start, D, agd, x0);
  }

  out.f_hat = res.x;
  out.objective = res.value;
  out.solver_iters = res.iterations;
  out.laplacian_iters = res.laplacian_iterations;
  out.grad_norm = res.grad_norm;
  out.initial_grad_norm = res.initial_grad_norm;

  const Congestion cong = ComputeCongestion(out.f_hat, rc);
  out.rho_fwd = cong.fwd;
  out.rho_bwd = cong.bwd;
  out.rho_max = cong.max;
  if (cong.max > options.congestion_limit) {
    throw Error(ErrorCode::kCongestionExceeded,
                "||rho||_inf = " + FormatNumber(cong.max));
  }
  const DualUpdate dual =
      ComputeDualUpdate(g, w, f, out.f_hat,
                        CouplingTolerance(w, m, options.coupling_tol_base),
                        options.laplacian);
  out.y_hat = dual.y_hat;
  out.dual_fit_residual = dual.residual;
  return out;
}

DualUpdate ComputeDualUpdate(const Graph& g, const Weights& w,
                             std::span<const double> f,
                             std::span<const double> f_hat, double tol,
                             const LaplacianOptions& laplacian) {
  const int m = g.m();
  Vec d(m);
  Vec f_next(f.begin(), f.end());
  for (int e = 0; e < m; ++e) f_next[e] += f_hat[e];
  const Vec before = BarrierGradient(g, w, f);
  const Vec after = BarrierGradient(g, w, f_next);
  for (int e = 0; e < m; ++e) d[e] = after[e] - before[e];

  DualUpdate out;
  const Vec ones(m, 1.0);
  out.y_hat = SolveLaplacian(g, ones, g.NetInflow(d), laplacian).potentials;
  const Vec fit = g.PotentialDrop(out.y_hat);
  for (int e = 0; e < m; ++e) {
    out.residual = std::max(out.residual, std::abs(fit[e] - d[e]));
  }
  if (out.residual > tol) {
    throw Error(ErrorCode::kPoorDualFit,
                "dual fit residual " + FormatNumber(out.residual));
  }
  return out;
}

IterateState Recenter(const Graph& g, const IterateState& state,
                      const LaplacianOptions& laplacian) {
  const int m = g.m();
  const ResidualCaps rc = ComputeResidualCaps(g, state.f);
  const Vec res = CouplingResidual(g, state.w, state.f, state.y);
  Vec h(m), scaled(m);
  for (int e = 0; e < m; ++e) {
    h[e] = state.w.fwd[e] / (rc.fwd[e] * rc.fwd[e]) +
           state.w.bwd[e] / (rc.bwd[e] * rc.bwd[e]);
    scaled[e] = res[e] / h[e];
  }
  // B^T H^{-1} B v = -B^T H^{-1} R, then z = H^{-1} (R + B v).
  Vec chi = g.NetInflow(scaled);
  for (double& x : chi) x = -x;
  const Vec v = SolveLaplacian(g, h, chi, laplacian).potentials;
  const Vec drop = g.PotentialDrop(v);
  IterateState out = state;
  for (int e = 0; e < m; ++e) out.f[e] += (res[e] + drop[e]) / h[e];
  for (std::size_t i = 0; i < v.size(); ++i) out.y[i] += v[i];
  ComputeResidualCaps(g, out.f);
  return out;
}

IterateState Advance(const Graph& g, const IterateState& state,
                     const StepResult& step, double coupling_tol_base) {
  IterateState next = state;
  for (std::size_t e = 0; e < next.f.size(); ++e) next.f[e] += step.f_hat[e];
  for (std::size_t v = 0; v < next.y.size(); ++v) next.y[v] += step.y_hat[v];
  next.F += step.delta;
  ++next.iteration;
  const double tol = CouplingTolerance(next.w, g.m(), coupling_tol_base);
  double worst = NormInf(CouplingResidual(g, next.w, next.f, next.y));
  if (worst > kRecenterFraction * tol) {
    try {
      next = Recenter(g, next);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleFlow) throw;
      throw Error(ErrorCode::kCouplingLost,
                  "recentering left the feasible region: " + std::string(e.what()));
    }
    worst = NormInf(CouplingResidual(g, next.w, next.f, next.y));
  }
  if (worst > tol) {
    throw Error(ErrorCode::kCouplingLost,
                "coupling residual " + FormatNumber(worst) + " > " +
                    FormatNumber(tol));
  }
  return next;
}

}  // namespace pmaxflow
