// Edge-list text format.
//
//   n=<int>        optional header; declares vertices 0..n-1
//   u v [w]        one edge per line
//   v              a lone vertex (used by save for isolated vertices
//                  whose IDs are not covered by the header)
//   # ...          comment, also allowed after the fields
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spanner/graph.hpp"

namespace spanner {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what);
  int line;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Graph read_edge_list(std::istream& in);
Graph parse_edge_list(const std::string& text);
void write_edge_list(std::ostream& out, const Graph& g);
std::string format_edge_list(const Graph& g);

Graph load(const std::string& path);
void save(const Graph& g, const std::string& path);

// Shortest round-trip decimal form of a weight.
std::string format_weight(double w);

}  // namespace spanner
