#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "scsg/graph.hpp"

namespace scsg {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text edge list: "n m", then m lines "u v" with 1-based vertices. Repeated
// lines are parallel edges; text after '#' is ignored.
inline MultiGraph read_edge_list(std::istream& in) {
  std::string line;
  size_t lineno = 0;
  auto next = [&](std::istringstream& ss) {
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ss = std::istringstream(line);
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) { return parse_error("line " + std::to_string(lineno) + ": " + what); };
  std::istringstream ss;
  if (!next(ss)) throw parse_error("missing header line");
  long long n = -1, m = -1;
  std::string extra;
  if (!(ss >> n >> m) || (ss >> extra) || n < 0 || m < 0) throw fail("header must be \"n m\"");
  MultiGraph g(static_cast<size_t>(n));
  for (long long i = 0; i < m; ++i) {
    if (!next(ss)) throw parse_error("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    long long u = 0, v = 0;
    if (!(ss >> u >> v) || (ss >> extra)) throw fail("edge must be \"u v\"");
    if (u < 1 || v < 1 || u > n || v > n) throw fail("vertex out of range");
    if (u == v) throw fail("self-loop");
    g.add_edge(static_cast<vertex_t>(u - 1), static_cast<vertex_t>(v - 1));
  }
  std::istringstream rest;
  if (next(rest)) throw fail("more edge lines than the header declares");
  return g;
}

inline void write_edge_list(std::ostream& out, const MultiGraph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (auto [u, v] : g.edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

}  // namespace scsg
