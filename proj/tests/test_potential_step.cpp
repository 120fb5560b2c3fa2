#include <cmath>

#include "doctest.h"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/potential_step.hpp"
#include "pmaxflow/solver.hpp"
#include "verify/sampling.hpp"
#include "test_util.hpp"

using namespace pmaxflow;
using namespace pmaxflow::testing;
using doctest::Approx;

namespace {

AgdOptions WithKappa(double kappa) {
  AgdOptions o;
  o.kappa = kappa;
  return o;
}

// 0.5 sum_i a_i x_i^2.
ObjectiveFn DiagonalQuadratic(Vec a) {
  return [a](std::span<const double> x, std::span<double> grad) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v += 0.5 * a[i] * x[i] * x[i];
      grad[i] = a[i] * x[i];
    }
    return v;
  };
}

}  // namespace

TEST_CASE("agd on constrained quadratics") {
  const Graph par = ParallelST();  // x1 + x2 = F on two parallel edges
  const FlowConstraint unit{&par, par.StDemand(1.0)};

  const AgdResult sym = AgdMinimize(DiagonalQuadratic({1.0, 1.0}), unit, Vec{1.0, 0.0},
                                    Vec{1.0, 1.0}, WithKappa(1.0));
  CHECK(sym.x[0] == Approx(0.5));
  CHECK(sym.x[1] == Approx(0.5));

  const AgdResult free = AgdMinimize(DiagonalQuadratic({1.0, 1.0}), std::nullopt,
                                     Vec{3.0, -7.0}, Vec{1.0, 1.0}, WithKappa(1.0));
  CHECK(std::abs(free.x[0]) < 1e-9);
  CHECK(std::abs(free.x[1]) < 1e-9);

  // min x1^2/2 + 2 x2^2 s.t. x1 + x2 = 1: x1 = 4 x2, so (0.8, 0.2).
  AgdOptions opts;
  opts.kappa = 4.0;
  opts.tol = 1e-12;
  opts.laplacian.tol = 1e-14;
  const AgdResult kkt =
      AgdMinimize(DiagonalQuadratic({1.0, 4.0}), unit, Vec{0.5, 0.5}, Vec{1.0, 1.0}, opts);
  INFO("x = (", kkt.x[0], ", ", kkt.x[1], ") iters ", kkt.iterations);
  CHECK(std::abs(kkt.x[0] - 0.8) < 1e-9);
  CHECK(std::abs(kkt.x[1] - 0.2) < 1e-9);

  CHECK_THROWS_AS(AgdMinimize(DiagonalQuadratic({1.0, 1.0}), unit, Vec{1.0, 0.0},
                              Vec{1.0, 1.0}, WithKappa(0.5)),
                  Error);
}

TEST_CASE("agd reports the cap") {
  AgdOptions opts;
  opts.kappa = 1.0;
  opts.max_iters = 0;
  try {
    AgdMinimize(DiagonalQuadratic({1.0}), std::nullopt, Vec{1.0}, Vec{1.0}, opts);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoConvergence);
  }
}

TEST_CASE("zero step") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  const StepResult r = PotentialDecrementStep(pre, s.w, s.f, s.y, 0.0);
  CHECK(NormInf(r.f_hat) == 0.0);
  CHECK(NormInf(r.y_hat) == 0.0);
  CHECK(r.objective == 0.0);
  const IterateState same = Advance(pre, s, r);
  CHECK(same.f == s.f);
  CHECK(same.y == s.y);
  CHECK(same.F == s.F);
}

TEST_CASE("uniform preconditioner flow bounds the step objective") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  const double delta = 0.01;
  const StepResult r = PotentialDecrementStep(pre, s.w, s.f, s.y, delta);
  CHECK(NormInf(ConservationResidual(pre, r.f_hat, pre.StDemand(delta))) < 1e-10);
  const Vec uniform = UniformPrecondFlow(pre, delta);
  const double bound = DecrementValue(pre, s.w, s.f, uniform).value;
  CHECK(r.objective <= bound * (1.0 + 1e-12));
  CHECK(r.rho_max <= 0.1);
}

TEST_CASE("one warm-up step keeps the triple well-coupled") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 10.0);
  const StepResult r = PotentialDecrementStep(pre, s.w, s.f, s.y, 10.0 / (1000.0 * std::sqrt(8.0)));
  const IterateState next = Advance(pre, s, r);
  CHECK(NormInf(CouplingResidual(pre, next.w, next.f, next.y)) <= 1e-8);
  CHECK(next.F == Approx(r.delta));
  CHECK(next.iteration == 1);

  // A small corruption is repaired by recentering.
  StepResult nudged = r;
  nudged.f_hat[0] += 1e-6;
  const IterateState repaired = Advance(pre, s, nudged);
  CHECK(NormInf(CouplingResidual(pre, repaired.w, repaired.f, repaired.y)) <= 1e-8);

  // A large one is not.
  StepResult bad = r;
  // Pushing one edge 90% of the way to its capacity is beyond one Newton step.
  const ResidualCaps rc = ComputeResidualCaps(pre, s.f);
  bad.f_hat[0] = 0.9 * rc.fwd[0];
  try {
    Advance(pre, s, bad);
    FAIL("expected CouplingLost");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCouplingLost);
  }
}

TEST_CASE("dual update") {
  const Graph path = PathSAT();
  const Weights w{{1.0, 2.0}, {0.5, 1.0}};
  const Vec f{0.1, -0.2};
  const DualUpdate none = ComputeDualUpdate(path, w, f, Vec{0.0, 0.0}, 1e-8);
  CHECK(NormInf(none.y_hat) == 0.0);
  CHECK(none.residual == 0.0);

  // On a tree every edge vector is a potential drop, so any step fits.
  const DualUpdate tree = ComputeDualUpdate(path, w, f, Vec{0.05, 0.02}, 1e-8);
  CHECK(tree.residual <= 1e-8);
  const Vec before = BarrierGradient(path, w, f);
  const Vec after = BarrierGradient(path, w, Vec{0.15, -0.18});
  const Vec drop = path.PotentialDrop(tree.y_hat);
  for (int e = 0; e < 2; ++e) CHECK(drop[e] == Approx(after[e] - before[e]));

  // A circulation around a triangle is not a gradient step: the fit leaves a
  // residual that measures the optimality violation.
  const Graph tri = Graph::Build(3, {Unit(0, 1), Unit(1, 2), Unit(2, 0)}, 0, 2, 1.0);
  const Weights ones{Vec(3, 1.0), Vec(3, 1.0)};
  try {
    ComputeDualUpdate(tri, ones, Vec(3, 0.0), Vec{0.05, 0.05, 0.05}, 1e-8);
    FAIL("expected PoorDualFit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPoorDualFit);
  }
  // The coupling change is odd in the step on a symmetric edge.
  const Vec plus = BarrierGradient(tri, ones, Vec{0.05, 0.05, 0.05});
  const Vec minus = BarrierGradient(tri, ones, Vec{-0.05, -0.05, -0.05});
  for (int e = 0; e < 3; ++e) CHECK(plus[e] == Approx(-minus[e]));
}

TEST_CASE("recentering removes a coupling residual") {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const Graph g = GenerateInstance(Family::kUnitRandom, 6, 9, 2, rng.Next());
    const Graph pre = Precondition(LiftZeroSides(g, 0.25));
    IterateState s = Initialize(pre, 1.0);
    const Vec step = verify::RandomStep(rng, pre, s.f, 1.0);
    for (int e = 0; e < pre.m(); ++e) s.f[e] += 1e-4 * step[e];
    for (int v = 0; v < pre.n(); ++v) s.y[v] += 1e-6 * verify::UniformReal(rng, -1, 1);
    const double before = NormInf(CouplingResidual(pre, s.w, s.f, s.y));
    const Vec demand = pre.NetInflow(s.f);
    const IterateState out = Recenter(pre, s);
    const double after = NormInf(CouplingResidual(pre, out.w, out.f, out.y));
    CHECK(after <= 1e-3 * before);
    CHECK(NormInf(ConservationResidual(pre, out.f, demand)) < 1e-12);
  }
}

TEST_CASE("recentering converges quadratically near a coupled point") {
  const Graph pre = Precondition(TwoPaths());
  IterateState s = Initialize(pre, 10.0);
  s.y[1] += 1e-5;
  const double r0 = NormInf(CouplingResidual(pre, s.w, s.f, s.y));
  const IterateState r1 = Recenter(pre, s);
  const double e1 = NormInf(CouplingResidual(pre, r1.w, r1.f, r1.y));
  CHECK(r0 == Approx(1e-5));
  CHECK(e1 < 1e-8);
}
