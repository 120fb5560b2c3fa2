#include <sstream>

#include "doctest.h"
#include "pmaxflow/combinatorial.hpp"
#include "pmaxflow/dimacs.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/graph.hpp"
#include "test_util.hpp"

using namespace pmaxflow;
using namespace pmaxflow::testing;

namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("build validates its input") {
  const Graph g = Graph::Build(3, {Arc(0, 1, 1), Arc(1, 2, 1)}, 0, 2, 1.0);
  CHECK(g.m() == 2);
  CHECK(g.n() == 3);
  CHECK(CodeOf([] { Graph::Build(2, {Arc(0, 1, 0, 0)}, 0, 1, 1.0); }) ==
        ErrorCode::kInvalidCapacity);
  CHECK(CodeOf([] { Graph::Build(3, {Arc(0, 1, 1)}, 0, 1, 1.0); }) ==
        ErrorCode::kDisconnectedGraph);
  CHECK(CodeOf([] { Graph::Build(2, {Arc(0, 1, 1)}, 0, 0, 1.0); }) ==
        ErrorCode::kSourceEqualsSink);
  CHECK(CodeOf([] { Graph::Build(2, {Arc(0, 0, 1)}, 0, 1, 1.0); }) ==
        ErrorCode::kInvalidGraph);
  CHECK(CodeOf([] { Graph::Build(2, {Arc(0, 5, 1)}, 0, 1, 1.0); }) ==
        ErrorCode::kInvalidGraph);
  CHECK(CodeOf([] { Graph::Build(2, {Arc(0, 1, -1)}, 0, 1, 1.0); }) ==
        ErrorCode::kInvalidCapacity);
}

TEST_CASE("precondition appends m undirected s-t edges of capacity 2U") {
  const Graph g = Graph::Build(4, {Unit(0, 1), Unit(1, 2), Unit(2, 3)}, 0, 3, 1.0);
  const Graph pre = Precondition(g);
  CHECK(pre.m() == 6);
  CHECK(pre.num_precond_edges() == 3);
  for (int e = 3; e < 6; ++e) {
    CHECK(pre.edge(e).cap_fwd == 2.0);
    CHECK(pre.edge(e).cap_bwd == 2.0);
    CHECK(pre.edge(e).precond);
  }
  CHECK(pre.original_edge_ids() == std::vector<int>{0, 1, 2});
}

TEST_CASE("preconditioning raises the max flow by at most 2mU") {
  const Graph g = Graph::Build(2, {Unit(0, 1)}, 0, 1, 1.0);
  const double before = DinicMaxFlow(g).value;
  const double after = DinicMaxFlow(Precondition(g)).value;
  CHECK(after >= before);
  CHECK(after <= before + 2.0);
}

TEST_CASE("residual capacities and congestion") {
  const Graph g = Graph::Build(2, {Unit(0, 1)}, 0, 1, 1.0);
  const Vec f{0.3};
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  CHECK(rc.fwd[0] == doctest::Approx(0.7));
  CHECK(rc.bwd[0] == doctest::Approx(1.3));
  CHECK(rc.min[0] == doctest::Approx(0.7));

  const ResidualCaps zero = ComputeResidualCaps(g, Vec{0.0});
  CHECK(zero.fwd[0] == 1.0);
  CHECK(zero.bwd[0] == 1.0);
  CHECK(CodeOf([&] { ComputeResidualCaps(g, Vec{1.0}); }) == ErrorCode::kInfeasibleFlow);

  const Congestion c = ComputeCongestion(Vec{0.07}, rc);
  CHECK(c.fwd[0] == doctest::Approx(0.1));
  CHECK(c.bwd[0] == doctest::Approx(0.07 / 1.3));
  CHECK(ComputeCongestion(Vec{0.0}, rc).max == 0.0);
  CHECK(ComputeCongestion(Vec{-0.07}, rc).fwd[0] == doctest::Approx(0.1));
}

TEST_CASE("conservation residual") {
  const Graph g = PathSAT();
  const Vec chi = g.StDemand(1.0);
  CHECK(chi == Vec{-1.0, 0.0, 1.0});
  CHECK(NormInf(ConservationResidual(g, Vec{1.0, 1.0}, chi)) == 0.0);
  const Vec broken = ConservationResidual(g, Vec{1.0, 0.0}, chi);
  CHECK(broken[0] == 0.0);
  CHECK(broken[1] != 0.0);
  CHECK(broken[2] != 0.0);

  const Graph r = GenerateInstance(Family::kUnitRandom, 8, 14, 1, 5);
  Vec f(r.m());
  for (int e = 0; e < r.m(); ++e) f[e] = 0.1 * (e % 7) - 0.3;
  CHECK(NormInf(ConservationResidual(r, f, r.NetInflow(f))) == 0.0);
}

TEST_CASE("potential drop is the transpose of net inflow") {
  const Graph g = GenerateInstance(Family::kUnitRandom, 7, 12, 1, 9);
  Vec f(g.m()), y(g.n());
  for (int e = 0; e < g.m(); ++e) f[e] = std::sin(1.0 + e);
  for (int v = 0; v < g.n(); ++v) y[v] = std::cos(2.0 * v);
  CHECK(Dot(g.NetInflow(f), y) == doctest::Approx(Dot(f, g.PotentialDrop(y))));
}

TEST_CASE("dimacs round trip keeps both capacity sides") {
  const Graph g = Graph::Build(3, {Arc(0, 1, 3, 1), Arc(1, 2, 2)}, 0, 2, 3.0);
  std::stringstream ss;
  WriteDimacs(ss, g);
  const Graph h = ReadDimacs(ss);
  REQUIRE(h.m() == 2);
  CHECK(h.source() == 0);
  CHECK(h.sink() == 2);
  CHECK(h.edge(0).cap_fwd == 3.0);
  CHECK(h.edge(0).cap_bwd == 1.0);
  CHECK(h.edge(1).cap_bwd == 0.0);
}

TEST_CASE("dimacs parse errors") {
  std::istringstream missing_p("n 1 s\nn 2 t\na 1 2 1\n");
  CHECK(CodeOf([&] { ReadDimacs(missing_p); }) == ErrorCode::kParse);
  std::istringstream bad_arc("p max 2 1\nn 1 s\nn 2 t\na 1 x 1\n");
  CHECK(CodeOf([&] { ReadDimacs(bad_arc); }) == ErrorCode::kParse);
  CHECK(CodeOf([] { ReadDimacsFile("/nonexistent/file.dimacs"); }) == ErrorCode::kIo);
}

TEST_CASE("generators are deterministic and sized") {
  auto text = [](Family f, int n, int m, std::uint64_t seed) {
    std::ostringstream os;
    WriteDimacs(os, GenerateInstance(f, n, m, 1, seed));
    return os.str();
  };
  CHECK(text(Family::kUnitRandom, 10, 20, 4) == text(Family::kUnitRandom, 10, 20, 4));
  CHECK(text(Family::kUnitRandom, 10, 20, 4) != text(Family::kUnitRandom, 10, 20, 5));
  CHECK(text(Family::kParallelPaths, 10, 20, 1) == text(Family::kParallelPaths, 10, 20, 1));

  const Graph u = GenerateInstance(Family::kUnitRandom, 10, 20, 1, 4);
  CHECK(u.m() == 20);
  CHECK(DinicMaxFlow(u).value >= 1.0);

  // k = 3 paths of length 2: n = 5, m = 6.
  const Graph pp = GenerateInstance(Family::kParallelPaths, 5, 6, 1, 2);
  CHECK(DinicMaxFlow(pp).value == 3.0);

  const Graph grid = GenerateInstance(Family::kGrid, 16, 0, 1, 3);
  CHECK(grid.m() == 24);
  CHECK(DinicMaxFlow(grid).value == 2.0);

  CHECK(CodeOf([] { GenerateInstance(Family::kUnitRandom, 10, 3, 1, 1); }) ==
        ErrorCode::kInvalidParams);
  CHECK(CodeOf([] { ParseFamily("tree"); }) == ErrorCode::kInvalidParams);
}

TEST_CASE("rng maps into the requested range") {
  Rng rng(11);
  long lo = 100, hi = -100;
  for (int i = 0; i < 10000; ++i) {
    const long x = rng.Uniform(-3, 3);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo == -3);
  CHECK(hi == 3);
}
