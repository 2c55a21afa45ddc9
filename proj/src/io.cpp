#include "spanner/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace spanner {

ParseError::ParseError(int ln, const std::string& what)
    : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}

namespace {

bool parse_u64(const std::string& s, VertexId& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_weight(const std::string& s, double& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  GraphBuilder b;
  std::string line;
  int ln = 0;
  bool seen_content = false;
  int weighted = -1;  // unknown until the first edge
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() == 1 && tok[0].rfind("n=", 0) == 0) {
      if (seen_content) throw ParseError(ln, "header must come before edges");
      VertexId n = 0;
      if (!parse_u64(tok[0].substr(2), n) || n > 100'000'000)
        throw ParseError(ln, "bad vertex count in header");
      for (VertexId v = 0; v < n; ++v) b.add_vertex(v);
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (tok.size() > 3) throw ParseError(ln, "expected 'u v [w]'");
    VertexId u = 0, v = 0;
    if (!parse_u64(tok[0], u)) throw ParseError(ln, "bad vertex id '" + tok[0] + "'");
    if (tok.size() == 1) {
      b.add_vertex(u);
      continue;
    }
    if (!parse_u64(tok[1], v)) throw ParseError(ln, "bad vertex id '" + tok[1] + "'");
    int has_w = tok.size() == 3 ? 1 : 0;
    if (weighted >= 0 && weighted != has_w)
      throw ParseError(ln, "mix of weighted and unweighted edges");
    weighted = has_w;
    try {
      if (has_w) {
        double w = 0;
        if (!parse_weight(tok[2], w)) throw ParseError(ln, "bad weight '" + tok[2] + "'");
        b.add_edge(u, v, w);
      } else {
        b.add_edge(u, v);
      }
    } catch (const GraphError& e) {
      throw ParseError(ln, e.what());
    }
  }
  return b.build();
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

std::string format_weight(double w) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, r.ptr);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  // IDs 0..n-1 are covered by the header; anything else that is isolated
  // gets its own line so the round trip is exact.
  bool dense = g.n() == 0 || g.max_id() == static_cast<VertexId>(g.n() - 1);
  if (dense) out << "n=" << g.n() << "\n";
  else
    for (Vertex v = 0; v < g.n(); ++v)
      if (g.degree(v) == 0) out << g.id(v) << "\n";
  for (const Edge& e : g.edges()) {
    out << g.id(e.u) << ' ' << g.id(e.v);
    if (g.weighted()) out << ' ' << format_weight(e.w);
    out << '\n';
  }
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

Graph load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_edge_list(in);
}

void save(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_edge_list(out, g);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace spanner
