// Command-line front end: solve, generate and verify.
//
// Exit codes: 0 success, 1 usage or runtime error, 2 oracle mismatch,
// 3 invariant violations (suppressed by --allow-violations), 4 failed checks
// in `verify`.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pmaxflow/config.hpp"
#include "pmaxflow/dimacs.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/solver.hpp"
#include "pmaxflow/trace.hpp"
#include "verify/suites.hpp"

using namespace pmaxflow;

namespace {

constexpr int kExitError = 1;
constexpr int kExitOracleMismatch = 2;
constexpr int kExitViolations = 3;
constexpr int kExitChecksFailed = 4;

struct SolveArgs {
  std::string input;
  std::string mode;
  std::optional<double> eta;
  std::optional<int> p;
  std::optional<double> W;
  std::optional<double> tol;
  std::string trace;
  std::string config;
  bool oracle_check = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> fstar_offset;
  bool wall_time = false;
  bool allow_violations = false;
};

void PrintStats(const InvariantStats& s, Mode mode) {
  std::printf("accepted steps      %ld (halvings %ld)\n", s.accepted, s.halvings);
  std::printf("max rho             %.3e\n", s.max_rho);
  std::printf("max coupling ratio  %.3e\n", s.max_coupling_ratio);
  std::printf("min precond slack   %.3f\n", s.min_precond_slack);
  if (mode == Mode::kWeighted) {
    std::printf("max f_hat ratio     %.3e\n", s.max_fhat_ratio);
    std::printf("max ||w''||_1 ratio %.3e\n", s.max_w_added_ratio);
    std::printf("max ||w||_1 / 3m    %.3f\n", s.max_w_l1_ratio);
    std::printf("max r' norm error   %.1e\n", s.max_rq_error);
  }
}

// Violations of the invariants the solver asserts. The ||w||_1 <= 3m total is
// only monitored unless the config enforces it (then the solver fails).
long AssertedViolations(const InvariantStats& s) {
  return s.congestion_violations + s.fhat_violations + s.weight_step_violations +
         s.coupling_violations + s.rq_violations + s.precond_slack_violations;
}

int RunSolve(const SolveArgs& a) {
  SolverConfig config = a.config.empty() ? DefaultConfig() : LoadConfig(a.config);
  if (!a.mode.empty()) config.mode = ParseMode(a.mode);
  if (a.eta) config.eta = *a.eta;
  if (a.p) config.p = *a.p;
  if (a.W) config.W = *a.W;
  if (a.tol) config.step_tol = *a.tol;
  if (a.seed) config.seed = *a.seed;
  if (a.fstar_offset) config.fstar_offset = *a.fstar_offset;
  if (a.oracle_check) config.oracle_check = true;
  if (a.wall_time) config.record_wall_time = true;

  const Graph g = ReadDimacsFile(a.input);
  std::ofstream trace_file;
  std::optional<TraceWriter> writer;
  if (!a.trace.empty()) {
    trace_file.open(a.trace);
    if (!trace_file) throw Error(ErrorCode::kIo, "cannot open " + a.trace);
    writer.emplace(trace_file);
  }
  TraceSink sink;
  std::function<void(const TraceHeader&)> on_start;
  if (writer) {
    sink = [&](const TraceRecord& r) { writer->Write(r); };
    on_start = [&](const TraceHeader& h) {
      TraceHeader named = h;
      named.instance = a.input;
      writer->WriteHeader(named);
    };
  }

  const SolveReport rep = Solve(g, config, sink, on_start);
  const long accepted = config.mode == Mode::kWarmup ? rep.warmup_iterations
                                                     : rep.weighted_iterations;
  std::printf("instance            %s (n=%d, m=%d)\n", a.input.c_str(), g.n(), g.m());
  std::printf("mode                %s\n", ToString(config.mode).c_str());
  std::printf("value               %.0f\n", rep.value);
  std::printf("F* used             %ld\n", rep.F_star);
  if (rep.oracle_value) {
    std::printf("oracle value        %.0f (%s)\n", *rep.oracle_value,
                rep.oracle_agrees ? "agrees" : "MISMATCH");
  }
  if (rep.fault_detected) {
    std::printf("fault detected      yes, recovered by search (%d probes)\n",
                rep.search_probes);
  }
  std::printf("IPM iterations      %ld\n", accepted);
  std::printf("value before paths  %.0f\n", rep.rounded_value);
  std::printf("schedule            eta=%.6g W=%.6g p=%d threshold=%.6g\n",
              rep.schedule.eta, rep.schedule.W, rep.schedule.p, rep.schedule.threshold);
  PrintStats(rep.stats, config.mode);

  if (rep.oracle_value && !rep.oracle_agrees) {
    std::fprintf(stderr, "error: value %.0f differs from the oracle %.0f\n", rep.value,
                 *rep.oracle_value);
    return kExitOracleMismatch;
  }
  if (rep.stats.weight_total_violations > 0) {
    std::fprintf(stderr,
                 "warning: ||w||_1 exceeded 3m on %ld iterates (max ratio %.2f)\n",
                 rep.stats.weight_total_violations, rep.stats.max_w_l1_ratio);
  }
  const long violations = AssertedViolations(rep.stats);
  if (violations > 0) {
    std::fprintf(stderr, "%s: %ld invariant violations\n",
                 a.allow_violations ? "warning" : "error", violations);
    if (!a.allow_violations) return kExitViolations;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior-point max flow solver"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve a DIMACS max-flow instance");
  solve->add_option("--input", sa.input, "DIMACS file")->required();
  solve->add_option("--mode", sa.mode, "warmup or weighted")
      ->check(CLI::IsMember({"warmup", "weighted"}));
  solve->add_option("--eta", sa.eta, "weighted-mode eta");
  solve->add_option("--p", sa.p, "even p-norm exponent");
  solve->add_option("--W", sa.W, "weight budget W");
  solve->add_option("--tol", sa.tol, "inner step tolerance");
  solve->add_option("--trace", sa.trace, "write a line-delimited JSON trace");
  solve->add_option("--config", sa.config, "JSON config file");
  solve->add_flag("--oracle-check", sa.oracle_check, "take F* from the Dinic oracle");
  solve->add_option("--seed", sa.seed, "random seed");
  solve->add_option("--fstar-offset", sa.fstar_offset, "perturb the oracle F*");
  solve->add_flag("--wall-time", sa.wall_time, "record wall time in the trace");
  solve->add_flag("--allow-violations", sa.allow_violations,
                  "exit 0 despite invariant violations");

  std::string family, out;
  int n = 0, m = 0, U = 1;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("generate", "write a generated instance");
  gen->add_option("--family", family, "unit-random, parallel-paths or grid")
      ->required()
      ->check(CLI::IsMember({"unit-random", "parallel-paths", "grid"}));
  gen->add_option("--n", n, "vertices")->required();
  gen->add_option("--m", m, "edges (ignored for grid)");
  gen->add_option("--U", U, "capacity bound");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", out, "output path (stdout when omitted)");

  std::string suite;
  verify::SuiteOptions vo;
  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", suite, "invariants or acceptance")
      ->required()
      ->check(CLI::IsMember({"invariants", "acceptance"}));
  ver->add_option("--per-family", vo.per_family, "instances per family");
  ver->add_option("--seed", vo.seed, "suite seed");
  bool verbose = false;
  ver->add_flag("--verbose", verbose, "log every run to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return RunSolve(sa);
    if (*gen) {
      const Graph g = GenerateInstance(ParseFamily(family), n, m, U, gen_seed);
      if (out.empty()) {
        WriteDimacs(std::cout, g);
      } else {
        WriteDimacsFile(out, g);
      }
      return 0;
    }
    if (*ver) {
      if (verbose) vo.log = &std::cerr;
      if (suite == "invariants" && !ver->count("--per-family")) vo.per_family = 3;
      const auto results = suite == "acceptance" ? verify::RunAcceptanceSuite(vo)
                                                 : verify::RunInvariantSuite(vo);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%s\n", verify::FormatCheck(r).c_str());
        ok = ok && r.pass;
      }
      return ok ? 0 : kExitChecksFailed;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
