#include "pmaxflow/trace.hpp"

#include "json.hpp"
#include "pmaxflow/error.hpp"

namespace pmaxflow {

using ordered_json = nlohmann::ordered_json;

std::string FormatTraceHeader(const TraceHeader& header) {
  ordered_json j;
  j["type"] = "header";
  j["instance"] = header.instance;
  j["n"] = header.n;
  j["m"] = header.m;
  j["F_star"] = header.F_star;
  j["eta"] = header.eta;
  j["W"] = header.W;
  j["p"] = header.p;
  j["seed"] = header.config.seed;
  j["config"] = ordered_json::parse(ConfigToJson(header.config));
  return j.dump();
}

std::string FormatTraceRecord(const TraceRecord& r) {
  ordered_json j;
  j["type"] = "iter";
  j["iteration"] = r.iteration;
  j["mode"] = ToString(r.mode);
  j["F"] = r.F;
  j["gap"] = r.gap;
  j["delta"] = r.delta;
  j["potential"] = r.potential;
  j["rho_max"] = r.rho_max;
  j["fhat_inf"] = r.fhat_inf;
  j["w_l1"] = r.w_l1;
  if (r.mode == Mode::kWeighted) {
    j["w_added_l1"] = r.w_added_l1;
    j["rq_error"] = r.rq_error;
  }
  j["coupling_residual"] = r.coupling_residual;
  j["precond_slack"] = r.precond_slack;
  j["halvings"] = r.halvings;
  j["solver_iters"] = r.solver_iters;
  j["laplacian_iters"] = r.laplacian_iters;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j.dump();
}

void TraceWriter::WriteHeader(const TraceHeader& header) {
  *out_ << FormatTraceHeader(header) << '\n';
  if (!*out_) throw Error(ErrorCode::kIo, "trace write failed");
}

void TraceWriter::Write(const TraceRecord& record) {
  *out_ << FormatTraceRecord(record) << '\n';
  if (!*out_) throw Error(ErrorCode::kIo, "trace write failed");
  ++records_;
}

}  // namespace pmaxflow
