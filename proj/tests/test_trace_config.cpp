#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pmaxflow/config.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/solver.hpp"
#include "pmaxflow/trace.hpp"

using namespace pmaxflow;

namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string TracedSolve(const Graph& g, const SolverConfig& c, long* accepted = nullptr) {
  std::ostringstream os;
  TraceWriter w(os);
  const SolveReport rep = Solve(
      g, c, [&](const TraceRecord& r) { w.Write(r); },
      [&](const TraceHeader& h) { w.WriteHeader(h); });
  if (accepted) {
    *accepted = c.mode == Mode::kWarmup ? rep.warmup_iterations : rep.weighted_iterations;
  }
  return os.str();
}

}  // namespace

TEST_CASE("config json round trip") {
  SolverConfig c;
  c.mode = Mode::kWeighted;
  c.eta = 0.15;
  c.p = 4;
  c.seed = 99;
  c.fstar_offset = -2;
  const SolverConfig back = ConfigFromJson(ConfigToJson(c));
  CHECK(ConfigToJson(back) == ConfigToJson(c));
  CHECK(back.mode == Mode::kWeighted);
  CHECK(back.eta == 0.15);
  CHECK(back.p == 4);
  CHECK_FALSE(back.W.has_value());
  CHECK(back.seed == 99);

  const SolverConfig partial = ConfigFromJson(R"({"mode": "weighted"})");
  CHECK(partial.mode == Mode::kWeighted);
  CHECK(partial.laplacian_tol == SolverConfig{}.laplacian_tol);
}

TEST_CASE("config validation") {
  auto code = [](const std::string& text) {
    try {
      ConfigFromJson(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code("{not json") == ErrorCode::kParse);
  CHECK(code(R"({"mode": "fast"})") == ErrorCode::kInvalidParams);
  CHECK(code(R"({"p": 3})") == ErrorCode::kInvalidParams);
  CHECK(code(R"({"laplacian_tol": -1})") == ErrorCode::kInvalidParams);
  CHECK(code(R"({"eta": 0.9})") == ErrorCode::kInvalidParams);
}

TEST_CASE("default config comes from the environment") {
  const std::string path = "pmaxflow_test_config.json";
  std::ofstream(path) << R"({"mode": "weighted", "seed": 5})";
  setenv("PMAXFLOW_CONFIG", path.c_str(), 1);
  const SolverConfig c = DefaultConfig();
  unsetenv("PMAXFLOW_CONFIG");
  std::remove(path.c_str());
  CHECK(c.mode == Mode::kWeighted);
  CHECK(c.seed == 5);
  CHECK(DefaultConfig().mode == Mode::kWarmup);
}

TEST_CASE("trace writer line counts") {
  std::ostringstream os;
  TraceWriter w(os);
  TraceHeader h;
  h.n = 3;
  h.m = 4;
  w.WriteHeader(h);
  CHECK(Lines(os.str()).size() == 1);
  for (int i = 1; i <= 3; ++i) {
    TraceRecord r;
    r.iteration = i;
    w.Write(r);
  }
  const auto lines = Lines(os.str());
  CHECK(lines.size() == 4);
  CHECK(w.records() == 3);
  const auto header = nlohmann::json::parse(lines[0]);
  CHECK(header["type"] == "header");
  CHECK(header.contains("config"));
  const auto rec = nlohmann::json::parse(lines[3]);
  CHECK(rec["type"] == "iter");
  CHECK(rec["iteration"] == 3);
  CHECK_FALSE(rec.contains("wall_ms"));
}

TEST_CASE("one record per accepted iteration, byte-identical reruns") {
  const Graph g = GenerateInstance(Family::kParallelPaths, 5, 6, 1, 4);
  for (Mode mode : {Mode::kWarmup, Mode::kWeighted}) {
    SolverConfig c;
    c.mode = mode;
    c.oracle_check = true;
    long accepted = 0;
    const std::string a = TracedSolve(g, c, &accepted);
    const std::string b = TracedSolve(g, c);
    CHECK(a == b);
    const auto lines = Lines(a);
    CHECK(static_cast<long>(lines.size()) == accepted + 1);
    const auto header = nlohmann::json::parse(lines.front());
    CHECK(header["config"]["mode"] == ToString(mode));
    long prev = 0;
    bool ok = true;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto rec = nlohmann::json::parse(lines[i]);
      ok = ok && rec["iteration"].get<long>() == prev + 1 && rec["rho_max"].get<double>() <= 0.1;
      prev = rec["iteration"].get<long>();
    }
    CHECK(ok);
  }
}
