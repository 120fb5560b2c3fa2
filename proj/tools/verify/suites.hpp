#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pmaxflow/generators.hpp"
#include "pmaxflow/solver.hpp"

namespace pmaxflow::verify {

struct CheckResult {
  int id = 0;  // acceptance criterion number, 0 for other checks
  std::string name;
  bool pass = false;
  std::string detail;
};

/// "PASS  3 coupling  <detail>" style line.
std::string FormatCheck(const CheckResult& r);

// ---- building blocks, also used directly by the unit tests ----

struct InstanceSpec {
  Family family = Family::kUnitRandom;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
};

/// The instance list of the exactness runs: `per_family` small instances of
/// each family with sizes cycling through a fixed range.
std::vector<InstanceSpec> ExactnessInstances(int per_family, std::uint64_t seed);

/// Integral, within capacities, conserving at every vertex but s and t;
/// `value` receives the net inflow at t. Independent of the library check.
bool CheckIntegralFlow(const Graph& g, const Flow& flow, double* value);

struct ExactnessRun {
  InstanceSpec spec;
  Mode mode = Mode::kWarmup;
  int m_ipm = 0;
  double F_star_ipm = 0.0;  // target of the IPM on the preconditioned graph
  double dinic = 0.0;
  double edmonds_karp = 0.0;
  double value = 0.0;
  bool feasible = false;
  long accepted = 0;
  double rounded_gap = 0.0;  // F* minus the value before augmenting paths
  std::string error;
};

struct ExactnessSummary {
  std::vector<ExactnessRun> runs;
  InvariantStats warmup;
  InvariantStats weighted;
  double seconds = 0.0;
};

ExactnessSummary RunExactness(const std::vector<InstanceSpec>& instances,
                              const SolverConfig& base, std::ostream* log);

/// Warm-up bound 1.1 * 1000 sqrt(m) ln(F*/sqrt(m)) (zero when F* <= sqrt m).
double WarmupIterationBound(int m, double F_star);

/// Accepted iterations of the delta schedule with no halvings, from F = 0 to
/// the threshold: delta = gap / (5000 m^{1/2-eta}) while gap >= m^{1/2-eta}.
long WeightedScheduleLength(int m, double eta, double F_star);

CheckResult CheckElectricalFlow(int graphs, std::uint64_t seed);
CheckResult CheckCalculus(int samples, std::uint64_t seed);
CheckResult CheckSandwich(int samples, std::uint64_t seed);
CheckResult CheckComposite(int instances, std::uint64_t seed);
CheckResult CheckWeightIdentities(int samples, std::uint64_t seed);

struct SuiteOptions {
  int per_family = 50;
  std::uint64_t seed = 20240;
  // Largest IPM edge count for which criterion 10 runs the weighted method;
  // bigger sizes only report the schedule length.
  int scaling_run_max_m = 128;
  int electrical_graphs = 100;
  int calculus_samples = 1000;
  int sandwich_samples = 10000;
  int composite_instances = 20;
  std::ostream* log = nullptr;
};

/// The ten acceptance criteria, in order.
std::vector<CheckResult> RunAcceptanceSuite(const SuiteOptions& options);

/// Module invariants on a smaller sample: asserted step invariants,
/// monotone progress, weight identities, determinism, oracles.
std::vector<CheckResult> RunInvariantSuite(const SuiteOptions& options);

}  // namespace pmaxflow::verify
