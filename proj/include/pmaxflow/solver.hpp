#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmaxflow/barrier.hpp"
#include "pmaxflow/config.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/graph.hpp"
#include "pmaxflow/state.hpp"
#include "pmaxflow/trace.hpp"

namespace pmaxflow {

/// Counters and extremes of the invariants monitored during IPM phases. A
/// "violation" is any observation outside the asserted bound, including steps
/// that had to be retried with a halved delta.
struct InvariantStats {
  long accepted = 0;
  long halvings = 0;
  long congestion_violations = 0;  // rho > 0.1 (retried steps)
  long fhat_violations = 0;        // |f_hat| > 9 m^{-2 eta} (retried steps)
  long weight_step_violations = 0; // ||w''||_1 over the per-step budget
  long weight_total_violations = 0;
  long coupling_violations = 0;
  long rq_violations = 0;
  long precond_slack_violations = 0;
  double max_rho = 0.0;
  double max_fhat_ratio = 0.0;     // ||f_hat||_inf / (9 m^{-2 eta})
  double max_coupling_ratio = 0.0; // residual / tolerance
  double max_w_l1_ratio = 0.0;     // ||w||_1 / (3m)
  double max_w_added_ratio = 0.0;  // ||w''||_1 / (m^{4 eta} U)
  double max_rq_error = 0.0;
  double min_precond_slack = 1e300;

  long total_violations() const;
  void Merge(const InvariantStats& other);
};

/// Parameters of a run on a preconditioned graph with m edges.
struct Schedule {
  Mode mode = Mode::kWarmup;
  double eta = 1.0 / 6.0;
  double W = 0.0;
  int p = 2;
  double threshold = 0.0;  // loop runs while F* - F exceeds it
};

Schedule ComputeSchedule(int m, double U, const SolverConfig& config);

using TraceSink = std::function<void(const TraceRecord&)>;

/// Raises zero capacity sides of g to lift / m so that f = 0 is interior.
Graph LiftZeroSides(const Graph& g, double lift);

/// f = 0, y = 0, w = c u with c = 2m / sum(u+ + u-).
IterateState Initialize(const Graph& pre, double F_star);

IterateState RunWarmup(const Graph& pre, IterateState state,
                       const SolverConfig& config, InvariantStats* stats,
                       const TraceSink& sink = {});

IterateState RunWeighted(const Graph& pre, IterateState state,
                         const SolverConfig& config, InvariantStats* stats,
                         const TraceSink& sink = {});

/// Largest integer F in [0, hi] with feasible(F), assuming feasible(0) and
/// monotonicity. Every probe is appended to `transcript` when given.
long BinarySearchFlow(const std::function<bool(long)>& feasible, long hi,
                      std::vector<std::pair<long, bool>>* transcript = nullptr);

struct PipelineResult {
  bool success = false;
  Flow flow;                  // integral, on the original graph
  double rounded_value = 0.0; // before augmenting paths
  IterateState state;
  Schedule schedule;
  InvariantStats stats;
  std::optional<ErrorCode> failure;
  std::string failure_message;
};

/// IPM on the lifted, preconditioned graph targeting F_target + 2 m U, then
/// rounding and augmenting paths up to F_target. Succeeds when the final
/// value reaches F_target. IPM errors are caught and reported as failure.
PipelineResult RunPipeline(const Graph& g, long F_target,
                           const SolverConfig& config,
                           const TraceSink& sink = {});

struct SolveReport {
  Flow flow;
  double value = 0.0;
  long F_star = 0;
  std::optional<double> oracle_value;
  bool oracle_agrees = false;
  bool fault_detected = false;
  int search_probes = 0;
  long warmup_iterations = 0;
  long weighted_iterations = 0;
  double rounded_value = 0.0;
  double final_w_l1 = 0.0;
  Schedule schedule;
  InvariantStats stats;
};

/// Full pipeline. F* comes from the Dinic oracle (plus config.fstar_offset)
/// when oracle_check is set, otherwise from binary search; a guess that does
/// not reproduce the oracle triggers the binary search. `on_start` is called
/// with the header data before the traced run.
SolveReport Solve(const Graph& g, const SolverConfig& config,
                  const TraceSink& sink = {},
                  const std::function<void(const TraceHeader&)>& on_start = {});

}  // namespace pmaxflow
