#include "references.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "pmaxflow/weighted_step.hpp"

namespace pmaxflow::verify {

double EdmondsKarpValue(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    cap[e.tail][e.head] += e.cap_fwd;
    cap[e.head][e.tail] += e.cap_bwd;
  }
  const int s = g.source(), t = g.sink();
  double total = 0.0;
  while (true) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[t] < 0) {
      const int v = q.front();
      q.pop();
      for (int u = 0; u < n; ++u) {
        if (prev[u] < 0 && cap[v][u] > 1e-12) {
          prev[u] = v;
          q.push(u);
        }
      }
    }
    if (prev[t] < 0) break;
    double amt = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = prev[v]) amt = std::min(amt, cap[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= amt;
      cap[v][prev[v]] += amt;
    }
    total += amt;
  }
  return total;
}

Vec DenseElectricalFlow(const Graph& g, std::span<const double> r,
                        std::span<const double> chi) {
  const int n = g.n();
  const int m = g.m();
  const int s = g.source();
  // Unknowns: f (m), then phi for every vertex except s.
  auto col = [s](int v) { return v < s ? v : v - 1; };
  const int dim = m + n - 1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    K(e, e) = r[e];
    // R f = B phi: f_e r_e = phi_head - phi_tail.
    if (ed.head != s) K(e, m + col(ed.head)) = -1.0;
    if (ed.tail != s) K(e, m + col(ed.tail)) = 1.0;
    // B^T f = chi: +f_e at head, -f_e at tail.
    if (ed.head != s) K(m + col(ed.head), e) = 1.0;
    if (ed.tail != s) K(m + col(ed.tail), e) = -1.0;
  }
  for (int v = 0; v < n; ++v) {
    if (v != s) rhs(m + col(v)) = chi[v];
  }
  const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
  return Vec(sol.data(), sol.data() + m);
}

CompositeReference ReferenceComposite(const Graph& g, const Weights& w,
                                      std::span<const double> f, double delta,
                                      double W, int p, int iterations) {
  const int n = g.n();
  const int m = g.m();
  // Euclidean projector onto ker(B^T): P = I - B (B^T B)^+ B^T.
  Eigen::MatrixXd Bt = Eigen::MatrixXd::Zero(n, m);
  for (int e = 0; e < m; ++e) {
    Bt(g.edge(e).head, e) = 1.0;
    Bt(g.edge(e).tail, e) = -1.0;
  }
  const Eigen::MatrixXd L = Bt * Bt.transpose();
  const Eigen::MatrixXd Lpinv =
      L.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(m, m) - Bt.transpose() * Lpinv * Bt;

  // Feasible start: minimum-norm solution of B^T x = delta chi.
  const Vec chi = g.StDemand(delta);
  const Eigen::Map<const Eigen::VectorXd> chi_v(chi.data(), n);
  Eigen::VectorXd x = Bt.transpose() * (Lpinv * chi_v);
  // Projected steps drift off the constraint through round-off; undo it.
  auto restore = [&](Eigen::VectorXd& pt) {
    pt -= Bt.transpose() * (Lpinv * (Bt * pt - chi_v));
  };

  auto eval = [&](const Eigen::VectorXd& pt, Eigen::VectorXd* grad) {
    const Vec xv(pt.data(), pt.data() + m);
    const CompositeEval ev = CompositeObjective(g, w, f, xv, W, p);
    if (grad) *grad = Eigen::Map<const Eigen::VectorXd>(ev.grad.data(), m);
    return ev.value;
  };

  Eigen::VectorXd grad(m), grad_y(m);
  double value = eval(x, &grad);
  Eigen::VectorXd y = x;
  double step = 1.0;
  double t_k = 1.0;
  double best = value;
  int last_gain = 0;  // iteration of the last relative gain above 1e-13
  double pg0 = -1.0;
  int it = 0;
  for (; it < iterations; ++it) {
    if (value < best - 1e-13 * std::abs(best)) {
      best = value;
      last_gain = it;
    }
    if (it - last_gain > 5000) break;
    const double fy = eval(y, &grad_y);
    const Eigen::VectorXd pg = P * grad_y;
    if (pg0 < 0.0) pg0 = pg.norm();
    if (pg.norm() <= 1e-13 * pg0 || pg.norm() <= 1e-14 * grad_y.norm()) break;
    // Backtracking on the projected-gradient step from y.
    Eigen::VectorXd x_next;
    double f_next;
    while (true) {
      x_next = y - step * pg;
      restore(x_next);
      f_next = eval(x_next, nullptr);
      if (f_next <= fy - 0.5 * step * pg.squaredNorm() || step < 1e-300) break;
      step *= 0.5;
    }
    // Restart momentum when the objective goes up.
    if (f_next > value) {
      t_k = 1.0;
      y = x;
      step *= 2.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    y = x_next + ((t_k - 1.0) / t_next) * (x_next - x);
    x = x_next;
    value = f_next;
    t_k = t_next;
    step *= 1.25;
  }
  CompositeReference out;
  out.f_hat.assign(x.data(), x.data() + m);
  out.value = value;
  out.iterations = it;
  return out;
}

}  // namespace pmaxflow::verify
