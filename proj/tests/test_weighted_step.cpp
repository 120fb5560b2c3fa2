#include <cmath>

#include "doctest.h"
#include "pmaxflow/error.hpp"
#include "pmaxflow/potential_step.hpp"
#include "pmaxflow/sandwich_constants.hpp"
#include "pmaxflow/solver.hpp"
#include "pmaxflow/weighted_step.hpp"
#include "verify/sampling.hpp"
#include "verify/suites.hpp"
#include "test_util.hpp"

using namespace pmaxflow;
using namespace pmaxflow::testing;
using doctest::Approx;

namespace {

Weights Ones(int m) { return Weights{Vec(m, 1.0), Vec(m, 1.0)}; }

// k parallel symmetric unit s-t edges.
Graph Parallel(int k) {
  std::vector<Edge> edges(k, Unit(0, 1));
  return Graph::Build(2, edges, 0, 1, 1.0);
}

double QNorm(const Vec& v, int p) {
  const double q = static_cast<double>(p) / (p - 1);
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

TEST_CASE("schedule formulas") {
  CHECK(WeightedDelta(100.0, 10000, 1.0 / 6.0) == Approx(9.283e-4).epsilon(1e-3));
  CHECK(WeightedDelta(100.0, 10000, 1.0 / 6.0) ==
        Approx(100.0 / (5000.0 * std::pow(10000.0, 1.0 / 3.0))));
  CHECK(DefaultBudgetW(64, 1.0 / 6.0) == Approx(64.0));
  CHECK(WeightedThreshold(64, 1.0 / 6.0) == Approx(4.0));
  CHECK(DefaultEta(64, 1.0) == Approx(1.0 / 6.0));
  CHECK(DefaultEta(64, 8.0) == Approx(1.0 / 6.0 - (1.0 / 3.0) * 0.5));
  CHECK(DefaultP(64) == 2);      // sqrt(6) = 2.45
  CHECK(DefaultP(1 << 12) == 4); // sqrt(12) = 3.46
  CHECK(DefaultP(1 << 25) == 6); // sqrt(25) = 5
}

TEST_CASE("composite objective example") {
  const Graph g = Graph::Build(2, {Unit(0, 1)}, 0, 1, 1.0);
  const CompositeEval zero = CompositeObjective(g, Ones(1), Vec{0.0}, Vec{0.0}, 1.0, 2);
  CHECK(zero.value == 0.0);
  const CompositeEval ev = CompositeObjective(g, Ones(1), Vec{0.0}, Vec{0.1}, 1.0, 2);
  CHECK(ev.decrement == Approx(-std::log(1.0 - 0.01)).epsilon(1e-12));
  CHECK(ev.pnorm == Approx(0.0100503).epsilon(1e-5));
  CHECK(ev.value == Approx(0.0201007).epsilon(1e-5));
}

TEST_CASE("property: composite derivatives match finite differences") {
  const verify::CheckResult r = verify::CheckCalculus(60, 4242);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("zero budget reduces to the warm-up step") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  const double delta = 0.002;
  StepOptions so;
  so.step_tol = 1e-12;
  const StepResult warm = PotentialDecrementStep(pre, s.w, s.f, s.y, delta, so);
  const CompositeSolve comp = SolveComposite(pre, s.w, s.f, delta, 0.0, 2);
  CHECK(comp.value == Approx(warm.objective).epsilon(1e-8));
  for (int e = 0; e < pre.m(); ++e) {
    CHECK(comp.f_hat[e] == Approx(warm.f_hat[e]).epsilon(1e-6).scale(delta));
  }
}

TEST_CASE("residual problem with zero gradient has zero solution") {
  const Graph pre = Precondition(TwoPaths());
  const int m = pre.m();
  const Vec d = SolveResidualProblem(pre, Vec(m, 0.0), Vec(m, 1.0), Vec(m, 0.1), 4);
  CHECK(NormInf(d) == 0.0);
}

TEST_CASE("residual problem optimality") {
  // With alpha a potential drop plus a circulation component, the solution is
  // a circulation whose optimality condition holds up to a potential drop.
  const Graph tri = Graph::Build(3, {Unit(0, 1), Unit(1, 2), Unit(2, 0)}, 0, 2, 1.0);
  const Vec alpha{-1.0, -1.0, -1.0};
  const Vec r{1.0, 2.0, 0.5};
  const Vec x{0.1, 0.0, 0.2};
  const int p = 4;
  const Vec d = SolveResidualProblem(tri, alpha, r, x, p);
  CHECK(NormInf(tri.NetInflow(d)) < 1e-10);
  // On a single cycle d = c (1, 1, 1); the directional derivative vanishes.
  double slope = 0.0;
  for (int e = 0; e < 3; ++e) {
    const double coef = r[e] + std::pow(x[e], 2 * p - 4);
    slope += alpha[e] + 2.0 * coef * d[e] + p * std::pow(d[e], p - 1);
  }
  CHECK(std::abs(slope) < 1e-8);
  CHECK(d[0] > 0.0);
}

TEST_CASE("composite solve against the reference optimizer") {
  const verify::CheckResult r = verify::CheckComposite(3, 77);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("extracted weights") {
  const int k = 5;
  const Graph g = Parallel(k);
  const double W = 7.0;
  for (int p : {2, 4, 6}) {
    const double q = static_cast<double>(p) / (p - 1);
    const WeightChange uniform = ExtractWeights(g, Vec(k, 0.0), Vec(k, 0.02), W, p);
    for (double x : uniform.r_prime) CHECK(x == Approx(W * std::pow(k, -1.0 / q)));
    CHECK(QNorm(uniform.r_prime, p) == Approx(W).epsilon(1e-12));

    Vec single(k, 0.0);
    single[2] = 0.03;
    const WeightChange one = ExtractWeights(g, Vec(k, 0.0), single, W, p);
    CHECK(one.r_prime[2] == Approx(W));
    CHECK(one.r_prime[0] == 0.0);
  }
  CHECK_THROWS_AS(ExtractWeights(g, Vec(k, 0.0), Vec(k, 0.0), W, 2), Error);
}

TEST_CASE("property: weight identities") {
  const verify::CheckResult r = verify::CheckWeightIdentities(300, 8);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("weight reduction examples") {
  // Residuals at f + f_hat: u+ - f = 0.5, u- + f = 2. With w' = (1, 1) the
  // coupling terms are 2 and 0.5, so d = 1.5 and w''+ = 1.5 * 0.5 = 0.75.
  const Graph g = Graph::Build(2, {Arc(0, 1, 1.0, 1.5)}, 0, 1, 1.5);
  const Weights added{{1.0}, {1.0}};
  const Weights red = ReduceWeights(g, Vec{0.0}, Vec{0.5}, added);
  CHECK(red.fwd[0] == Approx(0.75));
  CHECK(red.bwd[0] == 0.0);
  CHECK(red.fwd[0] / 0.5 - red.bwd[0] / 2.0 == Approx(1.5));

  // Balanced: 0.25 / 0.5 == 1 / 2.
  const Weights balanced = ReduceWeights(g, Vec{0.0}, Vec{0.5}, Weights{{0.25}, {1.0}});
  CHECK(balanced.fwd[0] == Approx(0.0).scale(1.0));
  CHECK(balanced.bwd[0] == Approx(0.0).scale(1.0));

  const Weights none = ReduceWeights(g, Vec{0.0}, Vec{0.5}, Weights{{0.0}, {0.0}});
  CHECK(none.fwd[0] == 0.0);
  CHECK(none.bwd[0] == 0.0);
}

TEST_CASE("weighted progress step keeps coupling") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  const int m = pre.m();
  WeightedStepOptions o;
  o.eta = DefaultEta(m, 1.0);
  o.W = DefaultBudgetW(m, o.eta);
  o.p = DefaultP(m);
  o.fhat_bound = 9.0 * std::pow(m, -2.0 * o.eta);
  const double delta = WeightedDelta(10.0, m, o.eta);
  const WeightedStepOutcome out = WeightedProgressStep(pre, s, delta, o);
  const IterateState& next = out.next;
  CHECK(NormInf(CouplingResidual(pre, next.w, next.f, next.y)) <=
        CouplingTolerance(next.w, m));
  CHECK(next.F == Approx(delta));
  CHECK(out.fhat_inf <= o.fhat_bound);
  CHECK(QNorm(out.change.r_prime, o.p) == Approx(o.W).epsilon(1e-10));
  // Weights only grow, by exactly w''.
  for (int e = 0; e < m; ++e) {
    CHECK(next.w.fwd[e] == Approx(s.w.fwd[e] + out.change.reduced.fwd[e]));
    CHECK(next.w.bwd[e] == Approx(s.w.bwd[e] + out.change.reduced.bwd[e]));
  }
}

TEST_CASE("weighted step rejects congestion") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  WeightedStepOptions o;
  o.W = 8.0;
  o.p = 2;
  o.fhat_bound = 100.0;
  try {
    WeightedProgressStep(pre, s, 5.0, o);
    FAIL("expected CongestionExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCongestionExceeded);
  }
}

TEST_CASE("sandwich bounds") {
  const SandwichEdge unit{1.0, 1.0, 1.0, 1.0};
  const SandwichResult zero = SandwichBounds(unit, 0.03, 0.0, 4, EdgeSandwichConstants(4));
  CHECK(zero.lower == Approx(zero.actual));
  CHECK(zero.upper == Approx(zero.actual));
  CHECK(zero.actual == Approx(SandwichVal(unit, 0.03, 4)));

  const SandwichResult r = SandwichBounds(unit, 0.0, 0.05, 4, EdgeSandwichConstants(4));
  CHECK(r.lower <= r.actual);
  CHECK(r.actual <= r.upper);
  CHECK(r.lower_remainder <= r.remainder);
  CHECK(r.remainder <= r.upper_remainder);

  const verify::CheckResult sweep = verify::CheckSandwich(3400, 31);
  INFO(sweep.detail);
  CHECK(sweep.pass);
}

TEST_CASE("power sandwich") {
  for (int p : {2, 4, 6}) {
    const SandwichConstants c = PowerSandwichConstants(p);
    for (double f : {-1.0, 0.0, 0.3, 2.0}) {
      for (double d : {-3.0, -0.1, 1e-4, 0.5, 10.0}) {
        const SandwichResult r = PowerSandwichBounds(f, d, p, c);
        CHECK(r.actual == Approx(std::pow(f + d, p)));
        CHECK(r.lower_remainder <= r.remainder);
        CHECK(r.remainder <= r.upper_remainder);
      }
    }
  }
}
