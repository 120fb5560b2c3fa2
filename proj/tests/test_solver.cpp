#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pmaxflow/combinatorial.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/solver.hpp"
#include "pmaxflow/weighted_step.hpp"
#include "verify/references.hpp"
#include "verify/suites.hpp"
#include "test_util.hpp"

using namespace pmaxflow;
using namespace pmaxflow::testing;
using doctest::Approx;

TEST_CASE("dinic oracle") {
  CHECK(DinicMaxFlow(TwoPaths()).value == 2.0);
  const Graph five = Graph::Build(2, {Arc(0, 1, 5)}, 0, 1, 5.0);
  const Flow f = DinicMaxFlow(five);
  CHECK(f.value == 5.0);
  CHECK(f.values[0] == 5.0);
  // Only t -> s capacity: nothing can be sent.
  const Graph back = Graph::Build(2, {Arc(1, 0, 1)}, 0, 1, 1.0);
  CHECK(DinicMaxFlow(back).value == 0.0);
  // The backward side of a two-sided edge carries flow.
  const Graph rev = Graph::Build(2, {Arc(1, 0, 0, 3)}, 0, 1, 3.0);
  CHECK(DinicMaxFlow(rev).value == 3.0);
  CHECK(DinicMaxFlow(rev).values[0] == -3.0);
}

TEST_CASE("property: dinic agrees with edmonds-karp and returns a feasible flow") {
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    const auto fam = static_cast<Family>(i % 3);
    const int n = static_cast<int>(rng.Uniform(4, 30));
    const int m = fam == Family::kParallelPaths ? n - 2 + static_cast<int>(rng.Uniform(1, 6))
                                                : static_cast<int>(rng.Uniform(n - 1, 3 * n));
    const int U = static_cast<int>(rng.Uniform(1, 4));
    const Graph g = GenerateInstance(fam, n, m, U, rng.Next());
    const Flow f = DinicMaxFlow(g);
    CHECK(f.value == verify::EdmondsKarpValue(g));
    double value = 0.0;
    CHECK(verify::CheckIntegralFlow(g, f, &value));
    CHECK(value == f.value);
    CHECK(f.value <= CutBound(g));
  }
}

TEST_CASE("grid 4x4 against the second oracle") {
  const Graph g = GenerateInstance(Family::kGrid, 16, 0, 1, 1);
  CHECK(DinicMaxFlow(g).value == verify::EdmondsKarpValue(g));
}

TEST_CASE("rounding") {
  const Graph par = ParallelST();
  const Flow r = RoundToIntegral(par, Vec{0.5, 0.5});
  CHECK(r.value == 1.0);
  CHECK(((r.values[0] == 1.0 && r.values[1] == 0.0) ||
         (r.values[0] == 0.0 && r.values[1] == 1.0)));

  const Graph tp = TwoPaths();
  const Flow same = RoundToIntegral(tp, Vec{1.0, 1.0, 0.0, 0.0});
  CHECK(same.values == Vec{1.0, 1.0, 0.0, 0.0});

  const Graph pre = Precondition(tp);
  Vec only_pre(pre.m(), 0.0);
  for (int e = tp.m(); e < pre.m(); ++e) only_pre[e] = 0.7;
  const Flow dropped = RoundToIntegral(tp, only_pre);
  CHECK(NormInf(dropped.values) == 0.0);
  CHECK(dropped.value == 0.0);
}

TEST_CASE("property: rounding keeps most of a fractional flow") {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const Graph g = GenerateInstance(Family::kUnitRandom, 8, 14, 2, rng.Next());
    const Flow opt = DinicMaxFlow(g);
    // Average the optimum with zero: value F / 2, fractional.
    Vec half(opt.values);
    for (double& x : half) x *= 0.5;
    const Flow r = RoundToIntegral(g, half);
    double value = 0.0;
    CHECK(verify::CheckIntegralFlow(g, r, &value));
    CHECK(value >= std::floor(0.5 * opt.value) - 1.0);
  }
}

TEST_CASE("augmenting paths") {
  const Graph tp = TwoPaths();
  Flow one;
  one.values = {1.0, 1.0, 0.0, 0.0};
  one.value = 1.0;
  const Flow more = AugmentToOptimal(tp, one, 2.0);
  CHECK(more.value == 2.0);
  Flow full;
  full.values = {1.0, 1.0, 1.0, 1.0};
  full.value = 2.0;
  CHECK(AugmentToOptimal(tp, full, 3.0).values == full.values);

  const Graph g = GenerateInstance(Family::kUnitRandom, 12, 25, 1, 6);
  Flow zero;
  zero.values.assign(g.m(), 0.0);
  CHECK(AugmentToOptimal(g, zero, 1e9).value == DinicMaxFlow(g).value);
}

TEST_CASE("initialization") {
  const Graph pre = Precondition(TwoPaths());
  const IterateState s = Initialize(pre, 5.0);
  // Original edges have capacity 1 and preconditioner edges 2, so c = 2m/12.
  CHECK(s.w.L1() == Approx(2.0 * pre.m()));
  CHECK(NormInf(CouplingResidual(pre, s.w, s.f, s.y)) == 0.0);

  const Graph unit = Graph::Build(3, {Unit(0, 1), Unit(1, 2)}, 0, 2, 1.0);
  const IterateState u = Initialize(unit, 1.0);
  for (int e = 0; e < 2; ++e) {
    CHECK(u.w.fwd[e] == 1.0);
    CHECK(u.w.bwd[e] == 1.0);
  }

  const Graph asym = Graph::Build(2, {Arc(0, 1, 1.0, 2.0)}, 0, 1, 2.0);
  const IterateState a = Initialize(asym, 1.0);
  CHECK(a.w.bwd[0] == Approx(2.0 * a.w.fwd[0]));
  CHECK(a.w.L1() == Approx(2.0));
  CHECK(CouplingResidual(asym, a.w, a.f, a.y)[0] == 0.0);
}

TEST_CASE("lifting zero capacity sides") {
  const Graph g = Graph::Build(3, {Arc(0, 1, 1), Arc(1, 2, 1)}, 0, 2, 1.0);
  const Graph lifted = LiftZeroSides(g, 0.25);
  CHECK(lifted.edge(0).cap_fwd == 1.0);
  CHECK(lifted.edge(0).cap_bwd == Approx(0.125));
}

TEST_CASE("binary search") {
  std::vector<std::pair<long, bool>> transcript;
  const long F = BinarySearchFlow([](long x) { return x <= 7; }, 20, &transcript);
  CHECK(F == 7);
  for (const auto& [x, ok] : transcript) CHECK(ok == (x <= 7));
  CHECK(BinarySearchFlow([](long x) { return x <= 0; }, 5) == 0);
  CHECK(BinarySearchFlow([](long) { return true; }, 5) == 5);
}

TEST_CASE("schedules") {
  SolverConfig c;
  c.mode = Mode::kWeighted;
  const Schedule s = ComputeSchedule(64, 1.0, c);
  CHECK(s.threshold == Approx(4.0));
  CHECK(s.W == Approx(64.0));
  c.mode = Mode::kWarmup;
  CHECK(ComputeSchedule(100, 1.0, c).threshold == Approx(10.0));
  c.round_threshold = 3.0;
  CHECK(ComputeSchedule(100, 1.0, c).threshold == 3.0);
}

TEST_CASE("warm-up deltas follow the schedule") {
  const Graph g = TwoPaths();
  SolverConfig c;
  c.oracle_check = true;
  std::vector<TraceRecord> recs;
  Solve(g, c, [&](const TraceRecord& r) { recs.push_back(r); });
  REQUIRE(recs.size() > 2);
  const int m = 2 * g.m();
  const double F_pre = 2.0 + 2.0 * g.m();
  CHECK(recs[0].delta == Approx(F_pre / (1000.0 * std::sqrt(m))));
  for (std::size_t i = 1; i < recs.size(); ++i) {
    CHECK(recs[i].gap == Approx(recs[i - 1].gap * (1.0 - 1.0 / (1000.0 * std::sqrt(m)))));
  }
  CHECK(recs.back().gap <= std::sqrt(m) * (1.0 + 1.0 / 1000.0));
  // m = 100 and gap 100 gives delta 0.01 and then gap 99.99.
  CHECK(100.0 - 100.0 / (1000.0 * std::sqrt(100.0)) == Approx(99.99));
}

TEST_CASE("solve matches the oracle in both modes") {
  const Graph g = GenerateInstance(Family::kUnitRandom, 6, 9, 1, 12);
  const double oracle = DinicMaxFlow(g).value;
  for (Mode mode : {Mode::kWarmup, Mode::kWeighted}) {
    SolverConfig c;
    c.mode = mode;
    c.oracle_check = true;
    const SolveReport rep = Solve(g, c);
    CHECK(rep.value == oracle);
    CHECK(rep.oracle_agrees);
    CHECK_FALSE(rep.fault_detected);
    CHECK(verify::CheckIntegralFlow(g, rep.flow, nullptr));
    CHECK(rep.stats.congestion_violations == 0);
    CHECK(rep.stats.coupling_violations == 0);
    CHECK(rep.stats.precond_slack_violations == 0);
    if (mode == Mode::kWeighted) {
      CHECK(rep.stats.fhat_violations == 0);
      CHECK(rep.stats.rq_violations == 0);
      CHECK(rep.stats.weight_step_violations == 0);
      CHECK(rep.weighted_iterations > 0);
    }
  }
}

TEST_CASE("solve by binary search") {
  const Graph g = GenerateInstance(Family::kParallelPaths, 5, 6, 1, 2);
  SolverConfig c;
  const SolveReport rep = Solve(g, c);
  CHECK(rep.value == 3.0);
  CHECK(rep.F_star == 3);
  CHECK(rep.search_probes > 0);
}

TEST_CASE("zero max flow") {
  const Graph back = Graph::Build(3, {Arc(1, 0, 1), Arc(2, 1, 1)}, 0, 2, 1.0);
  SolverConfig c;
  c.oracle_check = true;
  const SolveReport rep = Solve(back, c);
  CHECK(rep.value == 0.0);
  CHECK(rep.oracle_agrees);
}

TEST_CASE("fault injection: a wrong F* is detected and corrected") {
  const Graph g = GenerateInstance(Family::kUnitRandom, 6, 9, 1, 3);
  const double oracle = DinicMaxFlow(g).value;
  for (int offset : {1, -1}) {
    SolverConfig c;
    c.oracle_check = true;
    c.fstar_offset = offset;
    const SolveReport rep = Solve(g, c);
    CHECK(rep.fault_detected);
    CHECK(rep.search_probes > 0);
    CHECK(rep.value == oracle);
    CHECK(rep.F_star == static_cast<long>(oracle));
  }
}

TEST_CASE("iteration accounting helpers") {
  CHECK(verify::WarmupIterationBound(16, 2.0) == 0.0);
  CHECK(verify::WarmupIterationBound(16, 4.0 * std::exp(1.0)) == Approx(1.1 * 4000.0));
  const double eta = 1.0 / 6.0;
  const long n = verify::WeightedScheduleLength(64, eta, 100.0);
  // gap shrinks by 1 - 1/(5000 * 4) per step from 100 to 4.
  CHECK(n == doctest::Approx(std::log(25.0) * 20000.0).epsilon(1e-3));
}

// ||w||_1 <= 3m does not hold at this scale: the added weight is about
// 4 m^{1/p} F* with F* >= m on the preconditioned graph. Kept visible as a
// known failure; the acceptance suite reports the same measurement.
TEST_CASE("full weighted run keeps ||w||_1 <= 3m" * doctest::may_fail()) {
  const Graph g = GenerateInstance(Family::kUnitRandom, 5, 7, 1, 1);
  SolverConfig c;
  c.mode = Mode::kWeighted;
  c.oracle_check = true;
  const SolveReport rep = Solve(g, c);
  CHECK(rep.final_w_l1 <= 3.0 * 2 * g.m());
}
