#include "pmaxflow/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pmaxflow/error.hpp"

namespace pmaxflow {

using ordered_json = nlohmann::ordered_json;

std::string ToString(Mode mode) {
  return mode == Mode::kWarmup ? "warmup" : "weighted";
}

Mode ParseMode(const std::string& text) {
  if (text == "warmup") return Mode::kWarmup;
  if (text == "weighted") return Mode::kWeighted;
  throw Error(ErrorCode::kInvalidParams, "unknown mode '" + text + "'");
}

namespace {

template <class T>
ordered_json Optional(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
void ReadOptional(const ordered_json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    out.reset();
  } else {
    out = j[key].get<T>();
  }
}

template <class T>
void Read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j[key].get<T>();
}

}  // namespace

std::string ConfigToJson(const SolverConfig& c) {
  ordered_json j;
  j["mode"] = ToString(c.mode);
  j["eta"] = Optional(c.eta);
  j["W"] = Optional(c.W);
  j["p"] = Optional(c.p);
  j["laplacian_tol"] = c.laplacian_tol;
  j["step_tol"] = c.step_tol;
  j["coupling_tol"] = c.coupling_tol;
  j["round_threshold"] = Optional(c.round_threshold);
  j["max_iterations"] = c.max_iterations;
  j["max_halvings"] = c.max_halvings;
  j["inner_max_iters"] = c.inner_max_iters;
  j["seed"] = c.seed;
  j["oracle_check"] = c.oracle_check;
  j["fstar_offset"] = c.fstar_offset;
  j["weight_budget_c"] = c.weight_budget_c;
  j["enforce_weight_total"] = c.enforce_weight_total;
  j["lift"] = c.lift;
  j["record_wall_time"] = c.record_wall_time;
  return j.dump();
}

SolverConfig ConfigFromJson(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be an object");
  SolverConfig c;
  try {
    if (j.contains("mode")) c.mode = ParseMode(j["mode"].get<std::string>());
    ReadOptional(j, "eta", c.eta);
    ReadOptional(j, "W", c.W);
    ReadOptional(j, "p", c.p);
    Read(j, "laplacian_tol", c.laplacian_tol);
    Read(j, "step_tol", c.step_tol);
    Read(j, "coupling_tol", c.coupling_tol);
    ReadOptional(j, "round_threshold", c.round_threshold);
    Read(j, "max_iterations", c.max_iterations);
    Read(j, "max_halvings", c.max_halvings);
    Read(j, "inner_max_iters", c.inner_max_iters);
    Read(j, "seed", c.seed);
    Read(j, "oracle_check", c.oracle_check);
    Read(j, "fstar_offset", c.fstar_offset);
    Read(j, "weight_budget_c", c.weight_budget_c);
    Read(j, "enforce_weight_total", c.enforce_weight_total);
    Read(j, "lift", c.lift);
    Read(j, "record_wall_time", c.record_wall_time);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (c.p && (*c.p < 2 || *c.p % 2 != 0)) {
    throw Error(ErrorCode::kInvalidParams, "p must be an even integer >= 2");
  }
  if (c.eta && !(*c.eta > 0.0 && *c.eta < 0.5)) {
    throw Error(ErrorCode::kInvalidParams, "eta must lie in (0, 1/2)");
  }
  if (c.W && !(*c.W >= 0.0)) throw Error(ErrorCode::kInvalidParams, "W must be >= 0");
  if (!(c.laplacian_tol > 0.0) || !(c.step_tol > 0.0) || !(c.coupling_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "tolerances must be positive");
  }
  if (c.max_halvings < 0 || c.max_iterations < 0 || c.inner_max_iters <= 0) {
    throw Error(ErrorCode::kInvalidParams, "caps must be non-negative");
  }
  if (!(c.lift > 0.0)) throw Error(ErrorCode::kInvalidParams, "lift must be positive");
  return c;
}

SolverConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ConfigFromJson(ss.str());
}

SolverConfig DefaultConfig() {
  const char* path = std::getenv("PMAXFLOW_CONFIG");
  if (path == nullptr || *path == '\0') return SolverConfig{};
  return LoadConfig(path);
}

}  // namespace pmaxflow
