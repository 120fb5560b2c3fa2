#include "pmaxflow/barrier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

double Weights::L1() const {
  return std::accumulate(fwd.begin(), fwd.end(), 0.0) +
         std::accumulate(bwd.begin(), bwd.end(), 0.0);
}

namespace {

void RequireInterior(double res, int e) {
  if (!(res > 0.0)) {
    throw Error(ErrorCode::kInfeasibleFlow,
                "edge " + std::to_string(e) + " is not strictly feasible");
  }
}

}  // namespace

double BarrierValue(const Graph& g, const Weights& w, std::span<const double> f) {
  double value = 0.0;
  for (int e = 0; e < g.m(); ++e) {
    const Edge& edge = g.edge(e);
    if (w.fwd[e] != 0.0) {
      RequireInterior(edge.cap_fwd - f[e], e);
      value -= w.fwd[e] * std::log(edge.cap_fwd - f[e]);
    }
    if (w.bwd[e] != 0.0) {
      RequireInterior(edge.cap_bwd + f[e], e);
      value -= w.bwd[e] * std::log(edge.cap_bwd + f[e]);
    }
  }
  return value;
}

Vec BarrierGradient(const Graph& g, const Weights& w, std::span<const double> f) {
  Vec out(static_cast<std::size_t>(g.m()));
  for (int e = 0; e < g.m(); ++e) {
    const Edge& edge = g.edge(e);
    const double rf = edge.cap_fwd - f[e];
    const double rb = edge.cap_bwd + f[e];
    RequireInterior(rf, e);
    RequireInterior(rb, e);
    out[e] = w.fwd[e] / rf - w.bwd[e] / rb;
  }
  return out;
}

PotentialState MakePotentialState(const Graph& g, const Weights& w,
                                  std::span<const double> f,
                                  std::span<const double> y) {
  PotentialState ps;
  ps.f.assign(f.begin(), f.end());
  ps.y.assign(y.begin(), y.end());
  ps.slack = BarrierGradient(g, w, f);
  ps.gap = Dot(ps.f, ps.slack);
  return ps;
}

double PotentialValue(const PotentialState& ps, const Weights& w,
                      const Graph& g, double tol) {
  if (ps.gap < -tol) {
    throw Error(ErrorCode::kInfeasibleFlow,
                "negative duality gap " + FormatNumber(ps.gap));
  }
  const double m = g.m();
  return m * std::log1p(std::max(ps.gap, 0.0) / m) + BarrierValue(g, w, ps.f);
}

double LogRemainder(double z) {
  if (std::abs(z) >= 0.05) return -std::log1p(-z) - z;
  // z^2 (1/2 + z/3 + ... + z^12/14) in Horner form; 0.05^12 is below
  // double precision relative to the leading term.
  static constexpr double kInv[13] = {1.0 / 2,  1.0 / 3,  1.0 / 4,  1.0 / 5,
                                      1.0 / 6,  1.0 / 7,  1.0 / 8,  1.0 / 9,
                                      1.0 / 10, 1.0 / 11, 1.0 / 12, 1.0 / 13,
                                      1.0 / 14};
  double acc = kInv[12];
  for (int k = 11; k >= 0; --k) acc = kInv[k] + z * acc;
  return z * z * acc;
}

// The linear parts cancel analytically, so both values below are written
// through LogRemainder and stay accurate for small steps.
ScalarTriple EdgeDecrement::operator()(double x) const {
  const double a = res_fwd - x;
  const double b = res_bwd + x;
  return {w_fwd * LogRemainder(x / res_fwd) + w_bwd * LogRemainder(-x / res_bwd),
          w_fwd * x / (res_fwd * a) + w_bwd * x / (res_bwd * b),
          w_fwd / (a * a) + w_bwd / (b * b)};
}

ScalarTriple EdgeGTerm::operator()(double x) const {
  const double a = small - x;
  const double b = large + x;
  return {small * small * LogRemainder(x / small) +
              small * large * LogRemainder(-x / large),
          small * x / a + small * x / b,
          small * small / (a * a) + small * large / (b * b)};
}

DecrementEval DecrementValue(const Graph& g, const Weights& w,
                             std::span<const double> f,
                             std::span<const double> step,
                             const QuadExtSpec& spec) {
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  const int m = g.m();
  DecrementEval out{0.0, Vec(m), Vec(m)};
  for (int e = 0; e < m; ++e) {
    const EdgeDecrement term{w.fwd[e], w.bwd[e], rc.fwd[e], rc.bwd[e]};
    const double ell = spec.ell.empty() ? term.box() : spec.ell[e];
    const ScalarTriple t =
        spec.extend ? QuadExtEval(term, ell, step[e]) : term(step[e]);
    out.value += t.value;
    out.grad[e] = t.d1;
    out.hess_diag[e] = t.d2;
  }
  return out;
}

Vec GTermOrientation(const ResidualCaps& rc) {
  Vec sigma(rc.fwd.size());
  for (std::size_t e = 0; e < sigma.size(); ++e) {
    sigma[e] = rc.fwd[e] <= rc.bwd[e] ? 1.0 : -1.0;
  }
  return sigma;
}

GTermsEval GTerms(const Graph& g, std::span<const double> f,
                  std::span<const double> step, bool extend) {
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  const Vec sigma = GTermOrientation(rc);
  const int m = g.m();
  GTermsEval out{Vec(m), Vec(m), Vec(m)};
  for (int e = 0; e < m; ++e) {
    const bool fwd_small = sigma[e] > 0.0;
    const EdgeGTerm term{fwd_small ? rc.fwd[e] : rc.bwd[e],
                         fwd_small ? rc.bwd[e] : rc.fwd[e]};
    const double x = sigma[e] * step[e];
    const ScalarTriple t =
        extend ? QuadExtEval(term, 0.1 * term.small, x) : term(x);
    out.value[e] = t.value;
    out.d1[e] = sigma[e] * t.d1;
    out.d2[e] = t.d2;
  }
  return out;
}

Vec CouplingResidual(const Graph& g, const Weights& w, std::span<const double> f,
                     std::span<const double> y) {
  Vec out = g.PotentialDrop(y);
  const Vec grad = BarrierGradient(g, w, f);
  for (std::size_t e = 0; e < out.size(); ++e) out[e] -= grad[e];
  return out;
}

double CouplingTolerance(const Weights& w, int m, double base) {
  return base * (1.0 + (m > 0 ? w.L1() / m : 0.0));
}

}  // namespace pmaxflow
