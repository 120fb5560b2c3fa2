#include "pmaxflow/dimacs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

namespace {

[[noreturn]] void ParseFail(int line_no, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + msg);
}

void WriteNumber(std::ostream& out, double x) {
  if (x == std::floor(x) && std::abs(x) < 9e15) {
    out << static_cast<long long>(x);
  } else {
    out << x;
  }
}

}  // namespace

Graph ReadDimacs(std::istream& in) {
  int n = -1;
  long long declared_m = -1;
  int s = -1;
  int t = -1;
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (!(ls >> kind >> n >> declared_m) || kind != "max" || n < 2) {
        ParseFail(line_no, "malformed problem line");
      }
    } else if (tag == "n") {
      int id = 0;
      std::string role;
      if (!(ls >> id >> role)) ParseFail(line_no, "malformed node line");
      if (role == "s") {
        s = id - 1;
      } else if (role == "t") {
        t = id - 1;
      } else {
        ParseFail(line_no, "node role must be s or t");
      }
    } else if (tag == "a") {
      if (n < 0) ParseFail(line_no, "arc before problem line");
      int u = 0;
      int v = 0;
      double cap = 0.0;
      if (!(ls >> u >> v >> cap)) ParseFail(line_no, "malformed arc line");
      double cap_bwd = 0.0;
      if (!(ls >> cap_bwd)) cap_bwd = 0.0;
      edges.push_back(Edge{u - 1, v - 1, cap, cap_bwd, false});
    } else {
      ParseFail(line_no, "unknown line tag '" + tag + "'");
    }
  }
  if (n < 0) throw Error(ErrorCode::kParse, "missing problem line");
  if (s < 0 || t < 0) throw Error(ErrorCode::kParse, "missing source or sink");
  if (declared_m != static_cast<long long>(edges.size())) {
    throw Error(ErrorCode::kParse, "arc count does not match problem line");
  }
  double U = 1.0;
  for (const Edge& e : edges) U = std::max({U, e.cap_fwd, e.cap_bwd});
  return Graph::Build(n, std::move(edges), s, t, U);
}

Graph ReadDimacsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ReadDimacs(in);
}

void WriteDimacs(std::ostream& out, const Graph& g) {
  out << "p max " << g.n() << ' ' << g.m() << '\n';
  out << "n " << g.source() + 1 << " s\n";
  out << "n " << g.sink() + 1 << " t\n";
  for (const Edge& e : g.edges()) {
    out << "a " << e.tail + 1 << ' ' << e.head + 1 << ' ';
    WriteNumber(out, e.cap_fwd);
    if (e.cap_bwd > 0.0) {
      out << ' ';
      WriteNumber(out, e.cap_bwd);
    }
    out << '\n';
  }
}

void WriteDimacsFile(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  WriteDimacs(out, g);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace pmaxflow
