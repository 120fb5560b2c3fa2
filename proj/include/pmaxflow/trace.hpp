#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "pmaxflow/config.hpp"

namespace pmaxflow {

/// Metrics of one accepted IPM iteration.
struct TraceRecord {
  long iteration = 0;
  Mode mode = Mode::kWarmup;
  double F = 0.0;
  double gap = 0.0;  // F* - F after the step
  double delta = 0.0;
  double potential = 0.0;
  double rho_max = 0.0;
  double fhat_inf = 0.0;
  double w_l1 = 0.0;
  double w_added_l1 = 0.0;    // ||w''||_1, weighted mode
  double rq_error = 0.0;      // | ||r'||_q - W | / W, weighted mode
  double coupling_residual = 0.0;
  double precond_slack = 0.0;  // min over preconditioner edges of u_hat / ((F*-F)/(21m))
  int halvings = 0;
  int solver_iters = 0;
  int laplacian_iters = 0;
  std::optional<double> wall_ms;
};

struct TraceHeader {
  SolverConfig config;
  std::string instance;
  int n = 0;
  int m = 0;
  double F_star = 0.0;
  double eta = 0.0;
  double W = 0.0;
  int p = 0;
};

std::string FormatTraceHeader(const TraceHeader& header);
std::string FormatTraceRecord(const TraceRecord& record);

/// Line-delimited JSON trace: a header line followed by one line per record.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(&out) {}

  void WriteHeader(const TraceHeader& header);
  void Write(const TraceRecord& record);
  long records() const { return records_; }

 private:
  std::ostream* out_;
  long records_ = 0;
};

}  // namespace pmaxflow
