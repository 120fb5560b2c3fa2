#pragma once

#include <iosfwd>
#include <string>

#include "pmaxflow/graph.hpp"

namespace pmaxflow {

// DIMACS max-flow format:
//   p max <n> <m>
//   n <id> s|t
//   a <u> <v> <cap> [<cap_bwd>]
// Vertex ids are 1-based. A plain 4-field arc is one-sided (u+ = cap, u- = 0).
// The optional fifth field is an extension carrying the backward capacity of
// a two-sided edge; WriteDimacs emits it only when u- > 0.
Graph ReadDimacs(std::istream& in);
Graph ReadDimacsFile(const std::string& path);

void WriteDimacs(std::ostream& out, const Graph& g);
void WriteDimacsFile(const std::string& path, const Graph& g);

}  // namespace pmaxflow
