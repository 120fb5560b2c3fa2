#include "pmaxflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "pmaxflow/combinatorial.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/potential_step.hpp"
#include "pmaxflow/weighted_step.hpp"

namespace pmaxflow {

long InvariantStats::total_violations() const {
  return congestion_violations + fhat_violations + weight_step_violations +
         weight_total_violations + coupling_violations + rq_violations +
         precond_slack_violations;
}

void InvariantStats::Merge(const InvariantStats& o) {
  accepted += o.accepted;
  halvings += o.halvings;
  congestion_violations += o.congestion_violations;
  fhat_violations += o.fhat_violations;
  weight_step_violations += o.weight_step_violations;
  weight_total_violations += o.weight_total_violations;
  coupling_violations += o.coupling_violations;
  rq_violations += o.rq_violations;
  precond_slack_violations += o.precond_slack_violations;
  max_rho = std::max(max_rho, o.max_rho);
  max_fhat_ratio = std::max(max_fhat_ratio, o.max_fhat_ratio);
  max_coupling_ratio = std::max(max_coupling_ratio, o.max_coupling_ratio);
  max_w_l1_ratio = std::max(max_w_l1_ratio, o.max_w_l1_ratio);
  max_w_added_ratio = std::max(max_w_added_ratio, o.max_w_added_ratio);
  max_rq_error = std::max(max_rq_error, o.max_rq_error);
  min_precond_slack = std::min(min_precond_slack, o.min_precond_slack);
}

Schedule ComputeSchedule(int m, double U, const SolverConfig& config) {
  Schedule s;
  s.mode = config.mode;
  s.eta = config.eta.value_or(DefaultEta(m, U));
  s.W = config.W.value_or(DefaultBudgetW(m, s.eta));
  s.p = config.p.value_or(DefaultP(m));
  if (config.round_threshold) {
    s.threshold = *config.round_threshold;
  } else if (config.mode == Mode::kWarmup) {
    s.threshold = std::sqrt(static_cast<double>(m));
  } else {
    s.threshold = WeightedThreshold(m, s.eta);
  }
  return s;
}

Graph LiftZeroSides(const Graph& g, double lift) {
  std::vector<Edge> edges = g.edges();
  const double floor_cap = lift / std::max(g.m(), 1);
  for (Edge& e : edges) {
    if (e.cap_fwd == 0.0) e.cap_fwd = floor_cap;
    if (e.cap_bwd == 0.0) e.cap_bwd = floor_cap;
  }
  return Graph::Build(g.n(), std::move(edges), g.source(), g.sink(),
                      g.capacity_bound(), BuildOptions{false});
}

IterateState Initialize(const Graph& pre, double F_star) {
  const int m = pre.m();
  double total = 0.0;
  for (const Edge& e : pre.edges()) total += e.cap_fwd + e.cap_bwd;
  const double c = 2.0 * m / total;
  IterateState s;
  s.f.assign(m, 0.0);
  s.y.assign(static_cast<std::size_t>(pre.n()), 0.0);
  s.w.fwd.resize(m);
  s.w.bwd.resize(m);
  for (int e = 0; e < m; ++e) {
    s.w.fwd[e] = c * pre.edge(e).cap_fwd;
    s.w.bwd[e] = c * pre.edge(e).cap_bwd;
  }
  s.F = 0.0;
  s.F_star = F_star;
  s.iteration = 0;
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

bool IsFhatBoundError(const Error& e) {
  return std::string(e.what()).find("f_hat") != std::string::npos;
}

// Metrics shared by both phases, computed on the accepted iterate.
void RecordIterate(const Graph& pre, const IterateState& next,
                   const SolverConfig& config, TraceRecord& rec,
                   InvariantStats* stats) {
  const int m = pre.m();
  const double gap = next.F_star - next.F;
  rec.iteration = next.iteration;
  rec.F = next.F;
  rec.gap = gap;
  rec.w_l1 = next.w.L1();
  rec.coupling_residual = NormInf(CouplingResidual(pre, next.w, next.f, next.y));
  const PotentialState ps = MakePotentialState(pre, next.w, next.f, next.y);
  rec.potential = PotentialValue(ps, next.w, pre);

  const double tol = CouplingTolerance(next.w, m, config.coupling_tol);
  stats->max_coupling_ratio =
      std::max(stats->max_coupling_ratio, rec.coupling_residual / tol);
  if (rec.coupling_residual > tol) ++stats->coupling_violations;
  stats->max_rho = std::max(stats->max_rho, rec.rho_max);
  if (rec.rho_max > 0.1) ++stats->congestion_violations;

  const double w_ratio = rec.w_l1 / (3.0 * m);
  stats->max_w_l1_ratio = std::max(stats->max_w_l1_ratio, w_ratio);
  if (w_ratio > 1.0) ++stats->weight_total_violations;

  // Slack of preconditioner edges against (F* - F) / (21 m).
  rec.precond_slack = 1e300;
  if (gap > 0.0) {
    const ResidualCaps rc = ComputeResidualCaps(pre, next.f);
    const double need = gap / (21.0 * m);
    for (int e = 0; e < m; ++e) {
      if (pre.edge(e).precond) {
        rec.precond_slack = std::min(rec.precond_slack, rc.min[e] / need);
      }
    }
  }
  stats->min_precond_slack = std::min(stats->min_precond_slack, rec.precond_slack);
  if (rec.precond_slack < 1.0) ++stats->precond_slack_violations;
  ++stats->accepted;
}

}  // namespace

IterateState RunWarmup(const Graph& pre, IterateState state,
                       const SolverConfig& config, InvariantStats* stats,
                       const TraceSink& sink) {
  InvariantStats local;
  if (stats == nullptr) stats = &local;
  const int m = pre.m();
  const Schedule sched = ComputeSchedule(m, pre.capacity_bound(), config);
  StepOptions opts;
  opts.step_tol = config.step_tol;
  opts.max_iters = config.inner_max_iters;
  opts.coupling_tol_base = config.coupling_tol;
  opts.laplacian.tol = config.laplacian_tol;
  const double root_m = std::sqrt(static_cast<double>(m));
  const auto start = Clock::now();
  Vec previous;
  double previous_delta = 0.0;
  long taken = 0;
  while (state.F_star - state.F > sched.threshold) {
    if (taken >= config.max_iterations) {
      throw Error(ErrorCode::kIterationCapExceeded,
                  "warm-up reached " + std::to_string(taken) + " iterations");
    }
    double delta = (state.F_star - state.F) / (1000.0 * root_m);
    StepResult step;
    int halvings = 0;
    while (true) {
      Vec warm;
      if (!previous.empty()) {
        warm = previous;
        for (double& v : warm) v *= delta / previous_delta;
      }
      try {
        step = PotentialDecrementStep(pre, state.w, state.f, state.y, delta,
                                      opts, warm);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kCongestionExceeded) throw;
        ++stats->congestion_violations;
        if (halvings >= config.max_halvings) throw;
        ++halvings;
        ++stats->halvings;
        delta *= 0.5;
      }
    }
    IterateState next = Advance(pre, state, step, config.coupling_tol);
    TraceRecord rec;
    rec.mode = Mode::kWarmup;
    rec.delta = delta;
    rec.rho_max = step.rho_max;
    rec.fhat_inf = NormInf(step.f_hat);
    rec.halvings = halvings;
    rec.solver_iters = step.solver_iters;
    rec.laplacian_iters = step.laplacian_iters;
    RecordIterate(pre, next, config, rec, stats);
    if (config.record_wall_time) {
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    if (sink) sink(rec);
    previous = std::move(step.f_hat);
    previous_delta = delta;
    state = std::move(next);
    ++taken;
  }
  return state;
}

IterateState RunWeighted(const Graph& pre, IterateState state,
                         const SolverConfig& config, InvariantStats* stats,
                         const TraceSink& sink) {
  InvariantStats local;
  if (stats == nullptr) stats = &local;
  const int m = pre.m();
  const double U = pre.capacity_bound();
  const Schedule sched = ComputeSchedule(m, U, config);
  WeightedStepOptions opts;
  opts.eta = sched.eta;
  opts.W = sched.W;
  opts.p = sched.p;
  opts.fhat_bound = 9.0 * std::pow(static_cast<double>(m), -2.0 * sched.eta);
  const double added_scale = std::pow(static_cast<double>(m), 4.0 * sched.eta) * U;
  opts.weight_budget_per_iter =
      config.weight_budget_c > 0.0 ? config.weight_budget_c * added_scale : 0.0;
  opts.weight_total_limit = config.enforce_weight_total ? 3.0 * m : 0.0;
  opts.coupling_tol_base = config.coupling_tol;
  opts.composite.step_tol = config.step_tol;
  opts.composite.laplacian.tol = config.laplacian_tol;
  const double q = sched.p / (sched.p - 1.0);
  const auto start = Clock::now();
  Vec previous;
  double previous_delta = 0.0;
  long taken = 0;
  while (state.F_star - state.F >= sched.threshold) {
    if (taken >= config.max_iterations) {
      throw Error(ErrorCode::kIterationCapExceeded,
                  "weighted phase reached " + std::to_string(taken) +
                      " iterations");
    }
    double delta = WeightedDelta(state.F_star - state.F, m, sched.eta);
    WeightedStepOutcome out;
    int halvings = 0;
    while (true) {
      Vec warm;
      if (!previous.empty()) {
        warm = previous;
        for (double& v : warm) v *= delta / previous_delta;
      }
      try {
        out = WeightedProgressStep(pre, state, delta, opts, warm);
        break;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kCongestionExceeded) {
          if (IsFhatBoundError(e)) {
            ++stats->fhat_violations;
          } else {
            ++stats->congestion_violations;
          }
        } else if (e.code() == ErrorCode::kWeightBudgetExceeded) {
          ++stats->weight_step_violations;
        } else {
          throw;
        }
        if (halvings >= config.max_halvings) throw;
        ++halvings;
        ++stats->halvings;
        delta *= 0.5;
      }
    }
    TraceRecord rec;
    rec.mode = Mode::kWeighted;
    rec.delta = delta;
    rec.rho_max = out.step.rho_max;
    rec.fhat_inf = out.fhat_inf;
    rec.halvings = halvings;
    rec.solver_iters = out.step.solver_iters;
    rec.laplacian_iters = out.step.laplacian_iters;
    rec.w_added_l1 = out.change.reduced.L1();
    double rq = 0.0;
    for (double r : out.change.r_prime) rq += std::pow(r, q);
    rec.rq_error = sched.W > 0.0 ? std::abs(std::pow(rq, 1.0 / q) - sched.W) / sched.W
                                 : 0.0;
    stats->max_rq_error = std::max(stats->max_rq_error, rec.rq_error);
    if (rec.rq_error > 1e-10) ++stats->rq_violations;
    stats->max_fhat_ratio =
        std::max(stats->max_fhat_ratio, out.fhat_inf / opts.fhat_bound);
    stats->max_w_added_ratio =
        std::max(stats->max_w_added_ratio, rec.w_added_l1 / added_scale);
    RecordIterate(pre, out.next, config, rec, stats);
    if (config.record_wall_time) {
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    if (sink) sink(rec);
    previous = std::move(out.step.f_hat);
    previous_delta = delta;
    state = std::move(out.next);
    ++taken;
  }
  return state;
}

long BinarySearchFlow(const std::function<bool(long)>& feasible, long hi,
                      std::vector<std::pair<long, bool>>* transcript) {
  long lo = 0;
  while (lo < hi) {
    const long mid = lo + (hi - lo + 1) / 2;
    const bool ok = feasible(mid);
    if (transcript) transcript->emplace_back(mid, ok);
    if (ok) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

PipelineResult RunPipeline(const Graph& g, long F_target,
                           const SolverConfig& config, const TraceSink& sink) {
  PipelineResult out;
  const Graph pre = Precondition(LiftZeroSides(g, config.lift));
  const double F_pre =
      static_cast<double>(F_target) + 2.0 * g.m() * g.capacity_bound();
  out.schedule = ComputeSchedule(pre.m(), pre.capacity_bound(), config);
  try {
    IterateState state = Initialize(pre, F_pre);
    if (config.mode == Mode::kWarmup) {
      state = RunWarmup(pre, std::move(state), config, &out.stats, sink);
    } else {
      state = RunWeighted(pre, std::move(state), config, &out.stats, sink);
    }
    const Flow rounded = RoundToIntegral(g, state.f);
    out.rounded_value = rounded.value;
    out.flow = AugmentToOptimal(g, rounded, static_cast<double>(F_target));
    out.state = std::move(state);
    out.success = out.flow.value >= static_cast<double>(F_target) - 0.5;
  } catch (const Error& e) {
    out.failure = e.code();
    out.failure_message = e.what();
    out.success = false;
  }
  return out;
}

SolveReport Solve(const Graph& g, const SolverConfig& config,
                  const TraceSink& sink,
                  const std::function<void(const TraceHeader&)>& on_start) {
  SolveReport report;
  std::optional<long> guess;
  if (config.oracle_check) {
    const Flow oracle = DinicMaxFlow(g);
    report.oracle_value = oracle.value;
    guess = std::max<long>(0, std::lround(oracle.value) + config.fstar_offset);
  }

  auto traced_run = [&](long F) {
    const Graph pre = Precondition(LiftZeroSides(g, config.lift));
    if (on_start) {
      const Schedule sched = ComputeSchedule(pre.m(), pre.capacity_bound(), config);
      TraceHeader h;
      h.config = config;
      h.n = pre.n();
      h.m = pre.m();
      h.F_star = static_cast<double>(F) + 2.0 * g.m() * g.capacity_bound();
      h.eta = sched.eta;
      h.W = sched.W;
      h.p = sched.p;
      on_start(h);
    }
    return RunPipeline(g, F, config, sink);
  };

  PipelineResult result;
  bool need_search = true;
  if (guess) {
    result = traced_run(*guess);
    need_search = !result.success ||
                  std::abs(result.flow.value - *report.oracle_value) > 0.5;
    report.fault_detected = need_search;
    report.stats.Merge(result.stats);
  }
  if (need_search) {
    auto feasible = [&](long F) {
      ++report.search_probes;
      return RunPipeline(g, F, config).success;
    };
    const long hi = std::lround(std::floor(CutBound(g) + 1e-9));
    const long F = BinarySearchFlow(feasible, hi);
    result = traced_run(F);
    report.stats.Merge(result.stats);
    if (!result.success) {
      throw Error(result.failure.value_or(ErrorCode::kNoConvergence),
                  "pipeline failed at the searched value " + std::to_string(F) +
                      ": " + result.failure_message);
    }
    report.F_star = F;
  } else {
    report.F_star = *guess;
  }
  report.flow = result.flow;
  report.value = result.flow.value;
  report.rounded_value = result.rounded_value;
  report.schedule = result.schedule;
  report.final_w_l1 = result.state.w.L1();
  if (config.mode == Mode::kWarmup) {
    report.warmup_iterations = result.state.iteration;
  } else {
    report.weighted_iterations = result.state.iteration;
  }
  if (report.oracle_value) {
    report.oracle_agrees = std::abs(report.value - *report.oracle_value) <= 0.5;
  }
  return report;
}

}  // namespace pmaxflow
