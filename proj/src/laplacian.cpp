#include "pmaxflow/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

LaplacianSolver::LaplacianSolver(const Graph& g, LaplacianOptions options)
    : g_(&g), options_(options) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  diag_.resize(n);
  res_.resize(n);
  z_.resize(n);
  p_.resize(n);
  q_.resize(n);
}

void LaplacianSolver::CheckResistances(std::span<const double> r) const {
  if (static_cast<int>(r.size()) != g_->m()) {
    throw Error(ErrorCode::kInvalidParams, "resistance vector has wrong size");
  }
  if (r.empty()) return;
  double lo = r[0];
  double hi = r[0];
  for (double x : r) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidParams, "resistances must be positive");
    }
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi / lo > options_.max_resistance_ratio) {
    throw Error(ErrorCode::kResistanceRatio,
                "max/min resistance ratio " + FormatNumber(hi / lo));
  }
}

void LaplacianSolver::Apply(std::span<const double> r,
                            std::span<const double> phi,
                            std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& edges = g_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double current = (phi[edges[e].head] - phi[edges[e].tail]) / r[e];
    out[edges[e].tail] -= current;
    out[edges[e].head] += current;
  }
}

LaplacianSolve LaplacianSolver::Solve(std::span<const double> r,
                                      std::span<const double> chi_in) {
  CheckResistances(r);
  const int n = g_->n();
  LaplacianSolve out;
  out.potentials.assign(static_cast<std::size_t>(n), 0.0);

  double sum = 0.0;
  double abs_sum = 0.0;
  for (double x : chi_in) {
    sum += x;
    abs_sum += std::abs(x);
  }
  if (std::abs(sum) > options_.tol * std::max(1.0, abs_sum)) {
    throw Error(ErrorCode::kNotBalanced,
                "demand sums to " + FormatNumber(sum));
  }
  // Re-center so the right-hand side lies exactly in range(L).
  const double shift = sum / n;
  for (int v = 0; v < n; ++v) res_[v] = chi_in[v] - shift;
  const double rhs_norm = Norm2(res_);
  if (rhs_norm == 0.0) return out;

  std::fill(diag_.begin(), diag_.end(), 0.0);
  const auto& edges = g_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    diag_[edges[e].tail] += 1.0 / r[e];
    diag_[edges[e].head] += 1.0 / r[e];
  }
  for (double& d : diag_) d = d > 0.0 ? 1.0 / d : 1.0;

  Vec& x = out.potentials;
  for (int v = 0; v < n; ++v) z_[v] = diag_[v] * res_[v];
  p_ = z_;
  double rz = Dot(res_, z_);
  const double target = options_.tol * rhs_norm;
  const int cap = std::max(10, options_.max_iters_per_vertex * n);
  double res_norm = rhs_norm;
  int it = 0;
  while (res_norm > target) {
    if (it >= cap) {
      throw Error(ErrorCode::kNoConvergence,
                  "CG hit iteration cap, residual " + FormatNumber(res_norm));
    }
    Apply(r, p_, q_);
    const double pq = Dot(p_, q_);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (int v = 0; v < n; ++v) {
      x[v] += alpha * p_[v];
      res_[v] -= alpha * q_[v];
    }
    ++it;
    // Periodically recompute the true residual to avoid drift.
    if (it % 50 == 0) {
      Apply(r, x, q_);
      for (int v = 0; v < n; ++v) res_[v] = chi_in[v] - shift - q_[v];
    }
    res_norm = Norm2(res_);
    for (int v = 0; v < n; ++v) z_[v] = diag_[v] * res_[v];
    const double rz_next = Dot(res_, z_);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int v = 0; v < n; ++v) p_[v] = z_[v] + beta * p_[v];
  }
  const double pin = x[g_->source()];
  for (double& v : x) v -= pin;
  out.iterations = it;
  out.residual = res_norm;
  return out;
}

Vec LaplacianSolver::Project(std::span<const double> r,
                             std::span<const double> f_raw,
                             std::span<const double> chi, int* iterations) {
  Vec rhs = g_->NetInflow(f_raw);
  for (std::size_t v = 0; v < rhs.size(); ++v) rhs[v] -= chi[v];
  LaplacianSolve sol = Solve(r, rhs);
  if (iterations) *iterations += sol.iterations;
  Vec out(f_raw.begin(), f_raw.end());
  const auto& edges = g_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out[e] -= (sol.potentials[edges[e].head] - sol.potentials[edges[e].tail]) / r[e];
  }
  return out;
}

Vec LaplacianApply(const Graph& g, std::span<const double> r,
                   std::span<const double> phi) {
  LaplacianSolver solver(g);
  Vec out(static_cast<std::size_t>(g.n()));
  solver.Apply(r, phi, out);
  return out;
}

LaplacianSolve SolveLaplacian(const Graph& g, std::span<const double> r,
                              std::span<const double> chi,
                              LaplacianOptions options) {
  LaplacianSolver solver(g, options);
  return solver.Solve(r, chi);
}

Vec ElectricalFlow(const Graph& g, std::span<const double> r,
                   std::span<const double> chi, LaplacianOptions options) {
  LaplacianSolve sol = SolveLaplacian(g, r, chi, options);
  Vec f(static_cast<std::size_t>(g.m()));
  for (int e = 0; e < g.m(); ++e) {
    const Edge& edge = g.edge(e);
    f[e] = (sol.potentials[edge.head] - sol.potentials[edge.tail]) / r[e];
  }
  return f;
}

Vec ProjectToDemand(const Graph& g, std::span<const double> r,
                    std::span<const double> f_raw, std::span<const double> chi,
                    LaplacianOptions options) {
  LaplacianSolver solver(g, options);
  return solver.Project(r, f_raw, chi);
}

double Energy(std::span<const double> r, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t e = 0; e < f.size(); ++e) s += r[e] * f[e] * f[e];
  return s;
}

}  // namespace pmaxflow
