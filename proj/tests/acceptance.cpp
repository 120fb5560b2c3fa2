// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exits nonzero when any criterion fails.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "verify/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  pmaxflow::verify::SuiteOptions o;
  bool verbose = false;
  app.add_option("--per-family", o.per_family, "exactness instances per family");
  app.add_option("--seed", o.seed, "suite seed");
  app.add_option("--scaling-run-max-m", o.scaling_run_max_m,
                 "largest m run in the weighted iteration report");
  app.add_flag("--verbose", verbose, "log every run to stderr");
  CLI11_PARSE(app, argc, argv);
  if (verbose) o.log = &std::cerr;

  bool ok = true;
  for (const auto& r : pmaxflow::verify::RunAcceptanceSuite(o)) {
    std::printf("%s\n", pmaxflow::verify::FormatCheck(r).c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
