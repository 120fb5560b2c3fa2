// Brute-force sweep for the constants of the two sandwich bounds.
//
// Edge sandwich: val(x + d) against val(x) + d val'(x) + q H(x) d^2
// + c (|x|^{2p-4} d^2 + d^p) with q = kSandwichQuadLo / kSandwichQuadHi, over
// residuals in [1e-3, 2], weights in [0.1, 3], x and x + d in the box
// [-min/10, min/10], d >= 0. Both remainders are non-negative on the lower
// side (the barrier part by the Hessian ratio, g^p by convexity), so c_lo is
// frozen at 0; c_hi is the sweep maximum with a margin.
//
// Power sandwich: by homogeneity (f + d)^p / |f|^p depends only on t = d/f,
// so the sweep runs over t on a two-sided log grid plus f = 0.
//
// Prints the measured extremes and a header with the frozen values. With
// --check it instead exits nonzero when a measured extreme falls outside the
// frozen constants.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/sandwich_constants.hpp"
#include "pmaxflow/weighted_step.hpp"

using namespace pmaxflow;

namespace {

double Uniform01(Rng& rng) {
  return static_cast<double>(rng.Next() >> 11) * 0x1.0p-53;
}

double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * Uniform01(rng));
}

struct Extremes {
  double lo = 1e300;
  double hi = -1e300;
};

Extremes SweepEdge(int p, long samples, Rng& rng) {
  Extremes ex;
  const SandwichConstants zero{0.0, 0.0};
  for (long i = 0; i < samples; ++i) {
    SandwichEdge edge{LogUniform(rng, 0.1, 3.0), LogUniform(rng, 0.1, 3.0),
                      LogUniform(rng, 1e-3, 2.0), LogUniform(rng, 1e-3, 2.0)};
    const double box = 0.1 * std::min(edge.res_fwd, edge.res_bwd);
    const double x = box * (2.0 * Uniform01(rng) - 1.0);
    // Mix uniform and log-scale displacements so tiny steps are covered.
    const double room = box - x;
    const double d = (i % 2 == 0) ? room * Uniform01(rng)
                                  : room * LogUniform(rng, 1e-8, 1.0);
    if (d <= 0.0) continue;
    const SandwichResult r = SandwichBounds(edge, x, d, p, zero);
    const double basis =
        std::pow(std::abs(x), 2 * p - 4) * d * d + std::pow(d, p);
    if (basis <= 0.0) continue;
    ex.lo = std::min(ex.lo, (r.remainder - r.lower_remainder) / basis);
    ex.hi = std::max(ex.hi, (r.remainder - r.upper_remainder) / basis);
  }
  return ex;
}

Extremes SweepPower(int p, long points) {
  Extremes ex;
  const SandwichConstants zero{0.0, 0.0};
  auto visit = [&](double f, double d) {
    const SandwichResult r = PowerSandwichBounds(f, d, p, zero);
    const double basis = std::pow(f, p - 2) * d * d + std::pow(d, p);
    if (basis <= 0.0) return;
    const double ratio = r.remainder / basis;
    ex.lo = std::min(ex.lo, ratio);
    ex.hi = std::max(ex.hi, ratio);
  };
  visit(0.0, 1.0);
  for (long i = 0; i <= points; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / points);
    visit(1.0, t);
    visit(1.0, -t);
  }
  return ex;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweep for the sandwich-bound constants"};
  long samples = 2'000'000;
  long points = 200'000;
  std::uint64_t seed = 7;
  std::string out_path;
  app.add_option("--samples", samples, "random edge samples per p");
  app.add_option("--points", points, "grid points for the power sweep");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--write", out_path, "write the frozen-constant header here");
  bool check = false;
  app.add_flag("--check", check, "compare against the frozen constants");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  std::string header =
      "#pragma once\n\n"
      "// Generated by tools/calibrate_sandwich; do not edit by hand.\n\n"
      "#include \"pmaxflow/weighted_step.hpp\"\n\n"
      "namespace pmaxflow {\n\n"
      "// Indexed by p / 2 - 1 for p = 2, 4, 6.\n";
  std::string edge_rows, power_rows;
  int outside = 0;
  for (int p = 2; p <= 6; p += 2) {
    const Extremes e = SweepEdge(p, samples, rng);
    const Extremes w = SweepPower(p, points);
    std::printf("p=%d edge: min lower slack %.6g, max upper excess %.6g\n", p,
                e.lo, e.hi);
    std::printf("p=%d power: ratio range [%.6g, %.6g]\n", p, w.lo, w.hi);
    const SandwichConstants ce = EdgeSandwichConstants(p);
    const SandwichConstants cp = PowerSandwichConstants(p);
    if (e.lo < ce.c_lo || e.hi > ce.c_hi || w.lo < cp.c_lo || w.hi > cp.c_hi) {
      std::printf("p=%d: outside the frozen constants\n", p);
      ++outside;
    }
    char buf[256];
    // 25% margins, rounded outward.
    std::snprintf(buf, sizeof buf, "    SandwichConstants{0.0, %.3g},\n",
                  std::max(e.hi, 0.0) * 1.25 + 1e-3);
    edge_rows += buf;
    std::snprintf(buf, sizeof buf, "    SandwichConstants{%.3g, %.3g},\n",
                  w.lo * 0.75, w.hi * 1.25);
    power_rows += buf;
  }
  header += "inline constexpr SandwichConstants kEdgeSandwich[3] = {\n" +
            edge_rows + "};\n\n";
  header += "inline constexpr SandwichConstants kPowerSandwich[3] = {\n" +
            power_rows + "};\n\n";
  header +=
      "inline SandwichConstants EdgeSandwichConstants(int p) {\n"
      "  return kEdgeSandwich[p / 2 - 1];\n"
      "}\n\n"
      "inline SandwichConstants PowerSandwichConstants(int p) {\n"
      "  return kPowerSandwich[p / 2 - 1];\n"
      "}\n\n"
      "}  // namespace pmaxflow\n";
  if (check) return outside == 0 ? 0 : 1;
  if (!out_path.empty()) {
    std::ofstream(out_path) << header;
  } else {
    std::printf("\n%s", header.c_str());
  }
  return 0;
}
