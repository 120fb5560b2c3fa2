#include "sampling.hpp"

namespace pmaxflow::verify {

RandomPoint MakeRandomPoint(Rng& rng, int n, int m, int U, bool precondition) {
  Graph base = GenerateInstance(Family::kUnitRandom, n, m, U, rng.Next());
  Graph g = precondition ? Precondition(base) : base;
  RandomPoint pt{g, {}, {}};
  const int me = g.m();
  pt.f.resize(me);
  pt.w.fwd.resize(me);
  pt.w.bwd.resize(me);
  for (int e = 0; e < me; ++e) {
    const Edge& ed = g.edge(e);
    pt.f[e] = UniformReal(rng, -0.8 * ed.cap_bwd, 0.8 * ed.cap_fwd);
    pt.w.fwd[e] = LogUniform(rng, 0.2, 3.0);
    pt.w.bwd[e] = LogUniform(rng, 0.2, 3.0);
  }
  return pt;
}

Vec RandomStep(Rng& rng, const Graph& g, std::span<const double> f,
               double outside) {
  const ResidualCaps rc = ComputeResidualCaps(g, f);
  Vec step(g.m());
  for (int e = 0; e < g.m(); ++e) {
    const double box = 0.1 * rc.min[e];
    const double scale = rng.Uniform(0, 1) == 0 ? 1.0 : outside;
    step[e] = box * UniformReal(rng, -scale, scale);
  }
  return step;
}

}  // namespace pmaxflow::verify
