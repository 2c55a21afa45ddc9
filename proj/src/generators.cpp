#include "spanner/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace spanner {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** seeded through splitmix64.
Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) {
    s = mix64(x);
    x += 0x9e3779b97f4a7c15ULL;
  }
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t Rng::next() {
  std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return r;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t k) {
  if (k == 0) throw ParameterError("below(0)");
  // rejection sampling to stay unbiased
  std::uint64_t lim = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
  std::uint64_t x;
  do x = next(); while (x >= lim);
  return x % k;
}

static void need(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

static void check_p(double p) {
  need(p >= 0.0 && p <= 1.0, "probability p must lie in [0,1]");
}

Graph path_graph(int n) {
  need(n >= 0, "path: n must be >= 0");
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i);
  for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1);
  return b.build();
}

Graph cycle_graph(int n) {
  need(n >= 3, "cycle: n must be >= 3");
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
  return b.build();
}

Graph grid_graph(int rows, int cols) {
  need(rows >= 1 && cols >= 1, "grid: rows and cols must be >= 1");
  GraphBuilder b;
  auto id = [cols](int r, int c) { return static_cast<VertexId>(r * cols + c); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      b.add_vertex(id(r, c));
      if (c + 1 < cols) b.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) b.add_edge(id(r, c), id(r + 1, c));
    }
  return b.build();
}

Graph complete_graph(int n) {
  need(n >= 0, "complete: n must be >= 0");
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) b.add_edge(i, j);
  return b.build();
}

Graph complete_bipartite(int a, int b) {
  need(a >= 0 && b >= 0, "complete-bipartite: sides must be >= 0");
  GraphBuilder gb;
  for (int i = 0; i < a + b; ++i) gb.add_vertex(i);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) gb.add_edge(i, a + j);
  return gb.build();
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  need(n >= 0, "erdos-renyi: n must be >= 0");
  check_p(p);
  Rng rng(seed);
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) b.add_edge(i, j);
  return b.build();
}

Graph random_bipartite(int a, int b, double p, std::uint64_t seed) {
  need(a >= 0 && b >= 0, "random-bipartite: sides must be >= 0");
  check_p(p);
  Rng rng(seed);
  GraphBuilder gb;
  for (int i = 0; i < a + b; ++i) gb.add_vertex(i);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      if (rng.uniform() < p) gb.add_edge(i, a + j);
  return gb.build();
}

Graph hypercube(int d) {
  need(d >= 0 && d <= 20, "hypercube: d must be in [0,20]");
  GraphBuilder b;
  int n = 1 << d;
  for (int i = 0; i < n; ++i) {
    b.add_vertex(i);
    for (int bit = 0; bit < d; ++bit) {
      int j = i ^ (1 << bit);
      if (i < j) b.add_edge(i, j);
    }
  }
  return b.build();
}

Graph bounded_id(int n, double p, std::uint64_t seed) {
  need(n >= 0, "bounded-id: n must be >= 0");
  check_p(p);
  Rng rng(seed);
  // partial Fisher-Yates over 1..2n
  std::vector<VertexId> pool(2 * static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), VertexId{1});
  for (int i = 0; i < n; ++i) {
    auto j = i + static_cast<int>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  GraphBuilder b;
  for (VertexId id : pool) b.add_vertex(id);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) b.add_edge(pool[i], pool[j]);
  return b.build();
}

Graph with_random_weights(const Graph& g, std::uint64_t seed, int lo, int hi) {
  need(lo >= 1 && hi >= lo, "weights: need 1 <= lo <= hi");
  Rng rng(mix64(seed ^ 0x5eedULL));
  GraphBuilder b;
  for (VertexId id : g.ids()) b.add_vertex(id);
  for (const Edge& e : g.edges()) {
    double w = lo + static_cast<double>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    b.add_edge(g.id(e.u), g.id(e.v), w);
  }
  return b.build();
}

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {
      {"path", "path"},
      {"cycle", "cycle"},
      {"grid", "grid"},
      {"complete", "complete"},
      {"kn", "complete"},
      {"complete-bipartite", "complete-bipartite"},
      {"kab", "complete-bipartite"},
      {"erdos-renyi", "erdos-renyi"},
      {"er", "erdos-renyi"},
      {"gnp", "erdos-renyi"},
      {"random-bipartite", "random-bipartite"},
      {"bip", "random-bipartite"},
      {"hypercube", "hypercube"},
      {"bounded-id", "bounded-id"},
      {"bid", "bounded-id"},
  };
  return a;
}

long long get_int(const GenSpec& s, const std::string& key, std::optional<long long> dflt = {}) {
  auto it = s.params.find(key);
  if (it == s.params.end()) {
    if (dflt) return *dflt;
    throw ParameterError(s.kind + ": missing parameter '" + key + "'");
  }
  long long v = 0;
  const auto& str = it->second;
  auto r = std::from_chars(str.data(), str.data() + str.size(), v);
  if (r.ec != std::errc() || r.ptr != str.data() + str.size())
    throw ParameterError(s.kind + ": parameter '" + key + "' is not an integer");
  if (v < 0 || v > 1'000'000) throw ParameterError(s.kind + ": parameter '" + key + "' out of range");
  return v;
}

double get_real(const GenSpec& s, const std::string& key, std::optional<double> dflt = {}) {
  auto it = s.params.find(key);
  if (it == s.params.end()) {
    if (dflt) return *dflt;
    throw ParameterError(s.kind + ": missing parameter '" + key + "'");
  }
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParameterError(s.kind + ": parameter '" + key + "' is not a number");
  }
}

void allow_only(const GenSpec& s, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : s.params) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw ParameterError(s.kind + ": unknown parameter '" + k + "'");
  }
}

}  // namespace

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec s;
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  auto it = aliases().find(kind);
  if (it == aliases().end()) throw ParameterError("unknown generator kind '" + kind + "'");
  s.kind = it->second;
  if (colon == std::string::npos) return s;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParameterError("malformed generator parameter '" + item + "'");
    s.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return s;
}

Graph generate(const GenSpec& s, std::uint64_t seed, bool weighted) {
  Graph g;
  const std::string& k = s.kind;
  if (k == "path") {
    allow_only(s, {"n"});
    g = path_graph(static_cast<int>(get_int(s, "n")));
  } else if (k == "cycle") {
    allow_only(s, {"n"});
    g = cycle_graph(static_cast<int>(get_int(s, "n")));
  } else if (k == "grid") {
    allow_only(s, {"rows", "cols"});
    g = grid_graph(static_cast<int>(get_int(s, "rows")), static_cast<int>(get_int(s, "cols")));
  } else if (k == "complete") {
    allow_only(s, {"n"});
    g = complete_graph(static_cast<int>(get_int(s, "n")));
  } else if (k == "complete-bipartite") {
    allow_only(s, {"a", "b"});
    g = complete_bipartite(static_cast<int>(get_int(s, "a")), static_cast<int>(get_int(s, "b")));
  } else if (k == "erdos-renyi") {
    allow_only(s, {"n", "p"});
    g = erdos_renyi(static_cast<int>(get_int(s, "n")), get_real(s, "p"), seed);
  } else if (k == "random-bipartite") {
    allow_only(s, {"a", "b", "p"});
    g = random_bipartite(static_cast<int>(get_int(s, "a")), static_cast<int>(get_int(s, "b")),
                         get_real(s, "p"), seed);
  } else if (k == "hypercube") {
    allow_only(s, {"d"});
    g = hypercube(static_cast<int>(get_int(s, "d")));
  } else if (k == "bounded-id") {
    allow_only(s, {"n", "p"});
    g = bounded_id(static_cast<int>(get_int(s, "n")), get_real(s, "p", 0.1), seed);
  } else {
    throw ParameterError("unknown generator kind '" + k + "'");
  }
  if (weighted) g = with_random_weights(g, seed);
  return g;
}

std::string gen_spec_help() {
  return "generator spec: kind:key=val,...\n"
         "  path:n=N  cycle:n=N  grid:rows=R,cols=C  complete:n=N\n"
         "  complete-bipartite:a=A,b=B  erdos-renyi:n=N,p=P (alias er)\n"
         "  random-bipartite:a=A,b=B,p=P (alias bip)  hypercube:d=D\n"
         "  bounded-id:n=N[,p=P] (alias bid; ids drawn from [1,2n])\n";
}

}  // namespace spanner
