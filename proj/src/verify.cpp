#include "spanner/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <queue>
#include <set>

namespace spanner {

namespace {

// H re-indexed onto g's vertices, with g's weights.
struct HostAdj {
  std::vector<std::vector<std::pair<Vertex, double>>> adj;
};

HostAdj embed(const Graph& g, const Graph& h) {
  HostAdj a;
  a.adj.resize(g.n());
  for (const Edge& e : h.edges()) {
    auto u = g.find(h.id(e.u)), v = g.find(h.id(e.v));
    if (!u || !v) throw VerifyError("spanner vertex not in graph");
    int ge = g.edge_index(*u, *v);
    if (ge < 0)
      throw VerifyError("spanner edge {" + std::to_string(h.id(e.u)) + "," +
                        std::to_string(h.id(e.v)) + "} is not an edge of the graph");
    double w = g.weighted() ? g.weight(ge) : 1.0;
    a.adj[*u].push_back({*v, w});
    a.adj[*v].push_back({*u, w});
  }
  return a;
}

// Shortest distances from s; stops expanding past `cap` (kInf = no cap).
std::vector<double> search(const HostAdj& h, Vertex s, bool weighted, double cap) {
  std::vector<double> d(h.adj.size(), kInf);
  d[s] = 0;
  if (!weighted) {
    std::deque<Vertex> q{s};
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      if (d[x] + 1 > cap) continue;
      for (auto [y, w] : h.adj[x])
        if (d[y] == kInf) d[y] = d[x] + 1, q.push_back(y);
    }
    return d;
  }
  using QE = std::pair<double, Vertex>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [dx, x] = pq.top();
    pq.pop();
    if (dx > d[x]) continue;
    for (auto [y, w] : h.adj[x]) {
      double nd = dx + w;
      if (nd <= cap && nd < d[y]) d[y] = nd, pq.push({nd, y});
    }
  }
  return d;
}

void record(StretchReport& r, const Graph& g, int e, double s) {
  ++r.edges_checked;
  bool inf = s >= kInf / 2;
  int key = inf ? -1 : static_cast<int>(std::ceil(s - kStretchTol));
  ++r.histogram[key];
  double val = inf ? std::numeric_limits<double>::infinity() : s;
  if (r.worst_edge < 0 || val > r.max_stretch) {
    r.max_stretch = val;
    r.worst_edge = e;
    r.worst_u = g.id(g.edge(e).u);
    r.worst_v = g.id(g.edge(e).v);
  }
  if (inf || s > r.t + kStretchTol) {
    ++r.failures;
    r.pass = false;
  }
}

void fnv(std::uint64_t& h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
}

std::uint64_t double_bits(double w) {
  std::uint64_t b;
  std::memcpy(&b, &w, sizeof b);
  return b;
}

int tree_diameter(const RootedTree& t) {
  std::map<Vertex, std::vector<Vertex>> adj;
  for (int j = 0; j < t.size(); ++j) {
    adj[t.nodes[j]];
    if (t.parent[j] != kNoVertex) {
      adj[t.nodes[j]].push_back(t.parent[j]);
      adj[t.parent[j]].push_back(t.nodes[j]);
    }
  }
  auto far = [&](Vertex s) {
    std::map<Vertex, int> d{{s, 0}};
    std::deque<Vertex> q{s};
    std::pair<int, Vertex> best{0, s};
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      best = std::max(best, {d[x], x});
      for (Vertex y : adj[x])
        if (!d.count(y)) d[y] = d[x] + 1, q.push_back(y);
    }
    return best;
  };
  return t.nodes.empty() ? 0 : far(far(t.root).second).first;
}

}  // namespace

nlohmann::json StretchReport::to_json() const {
  nlohmann::json j;
  j["t"] = t;
  j["weighted"] = weighted;
  j["edges_checked"] = edges_checked;
  if (std::isinf(max_stretch)) j["max_stretch"] = "inf";
  else j["max_stretch"] = max_stretch;
  if (worst_edge >= 0) j["worst_edge"] = {worst_u, worst_v};
  else j["worst_edge"] = nullptr;
  j["failures"] = failures;
  nlohmann::json hist = nlohmann::json::object();
  for (auto [k, c] : histogram) hist[k < 0 ? "disconnected" : std::to_string(k)] = c;
  j["histogram"] = hist;
  j["pass"] = pass;
  return j;
}

StretchReport verify_stretch(const Graph& g, const Graph& h, double t) {
  HostAdj a = embed(g, h);
  StretchReport r;
  r.t = t;
  r.weighted = g.weighted();
  for (Vertex u = 0; u < g.n(); ++u) {
    auto nb = g.nbrs(u);
    auto es = g.eids(u);
    double wmax = 0;
    bool any = false;
    for (size_t i = 0; i < nb.size(); ++i)
      if (nb[i] > u) any = true, wmax = std::max(wmax, r.weighted ? g.weight(es[i]) : 1.0);
    if (!any) continue;
    double cap = r.weighted ? t * wmax * (1 + kStretchTol) : std::floor(t + kStretchTol);
    std::vector<double> d = search(a, u, r.weighted, cap);
    std::vector<double> full;
    for (size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] < u) continue;
      double w = r.weighted ? g.weight(es[i]) : 1.0;
      double dv = d[nb[i]];
      if (dv >= kInf / 2) {
        // beyond the cap: get the exact value for the report
        if (full.empty()) full = search(a, u, r.weighted, kInf);
        dv = full[nb[i]];
      }
      record(r, g, es[i], dv >= kInf / 2 ? kInf : dv / w);
    }
  }
  return r;
}

StretchReport verify_stretch(const Spanner& h, double t) { return verify_stretch(h.base(), h.as_graph(), t); }

std::vector<std::vector<double>> floyd_warshall(const Graph& g) {
  if (g.n() > kAllPairsMaxN) throw VerifyError("all-pairs mode is limited to n <= 120");
  const int n = g.n();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    double w = g.weighted() ? ed.w : 1.0;
    d[ed.u][ed.v] = d[ed.v][ed.u] = std::min(d[ed.u][ed.v], w);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (d[i][k] >= kInf) continue;
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    }
  return d;
}

AllPairsReport verify_stretch_all_pairs(const Graph& g, const Graph& h, double t) {
  HostAdj a = embed(g, h);
  // rebuild H on g's indexing so both matrices line up
  GraphBuilder b;
  for (VertexId id : g.ids()) b.add_vertex(id);
  for (Vertex u = 0; u < g.n(); ++u)
    for (auto [v, w] : a.adj[u])
      if (u < v) {
        if (g.weighted()) b.add_edge(g.id(u), g.id(v), w);
        else b.add_edge(g.id(u), g.id(v));
      }
  Graph hh = b.build();
  auto dg = floyd_warshall(g);
  auto dh = floyd_warshall(hh);

  AllPairsReport out;
  out.per_edge.t = t;
  out.per_edge.weighted = g.weighted();
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) {
      if (dg[i][j] >= kInf) continue;
      double s = dh[i][j] >= kInf ? std::numeric_limits<double>::infinity() : dh[i][j] / dg[i][j];
      out.max_pair_stretch = std::max(out.max_pair_stretch, s);
    }
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    double w = g.weighted() ? ed.w : 1.0;
    double dv = dh[ed.u][ed.v];
    record(out.per_edge, g, e, dv >= kInf ? kInf : dv / w);
  }
  return out;
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv(h, static_cast<std::uint64_t>(g.n()));
  for (VertexId id : g.ids()) fnv(h, id);
  for (const Edge& e : g.edges()) {
    fnv(h, g.id(e.u));
    fnv(h, g.id(e.v));
    fnv(h, double_bits(e.w));
  }
  return h;
}

std::uint64_t spanner_hash(const Spanner& s) {
  std::uint64_t h = graph_hash(s.base());
  for (int e : s.edge_list()) {
    fnv(h, static_cast<std::uint64_t>(e));
    for (char c : s.tag(e)) fnv(h, static_cast<unsigned char>(c));
  }
  return h;
}

nlohmann::json AuditReport::to_json() const {
  return {{"pass", pass()}, {"violations", violations}};
}

AuditReport audit_ruling_set(const Graph& g, const std::vector<Vertex>& candidates,
                             const std::vector<Vertex>& rulers, int alpha, int beta) {
  AuditReport r;
  std::vector<char> cand(g.n(), 0), rul(g.n(), 0);
  for (Vertex v : candidates) cand.at(v) = 1;
  for (Vertex v : rulers) {
    if (!cand.at(v)) r.add("ruler " + std::to_string(g.id(v)) + " is not a candidate");
    if (rul[v]) r.add("ruler " + std::to_string(g.id(v)) + " listed twice");
    rul[v] = 1;
  }
  for (Vertex v : rulers) {
    auto d = bfs_dist(g, v, alpha - 1);
    for (Vertex u = 0; u < g.n(); ++u)
      if (u > v && rul[u] && d[u] >= 0)
        r.add("rulers " + std::to_string(g.id(v)) + " and " + std::to_string(g.id(u)) + " at distance " +
              std::to_string(d[u]) + " < " + std::to_string(alpha));
  }
  // multi-source BFS from all rulers
  std::vector<int> d(g.n(), -1);
  std::deque<Vertex> q;
  for (Vertex v : rulers) d[v] = 0, q.push_back(v);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    if (d[x] >= beta) continue;
    for (Vertex y : g.nbrs(x))
      if (d[y] < 0) d[y] = d[x] + 1, q.push_back(y);
  }
  for (Vertex v : candidates)
    if (d[v] < 0) r.add("candidate " + std::to_string(g.id(v)) + " farther than " + std::to_string(beta) + " from every ruler");
  return r;
}

AuditReport audit_superclustering(const Graph& g, const Superclustering& sc) {
  AuditReport r;
  std::string cc = check_clustering(g, sc.clustering);
  if (!cc.empty()) {
    r.add("clustering: " + cc);
    return r;
  }
  const NiceBounds b = nice_bounds(sc.n, sc.k, sc.level);
  auto cs = sc.clustering.centers();
  auto mem = sc.clustering.members();
  std::map<Vertex, int> csize, owner;
  for (size_t t = 0; t < cs.size(); ++t) csize[cs[t]] = static_cast<int>(mem[t].size());
  std::map<int, size_t> edge_owner;
  for (size_t q = 0; q < sc.scs.size(); ++q) {
    const Supercluster& s = sc.scs[q];
    const std::string who = "supercluster " + std::to_string(s.id);
    if (s.centers.empty()) {
      r.add(who + ": no clusters");
      continue;
    }
    long nv = 0;
    VertexId top = 0;
    for (Vertex z : s.centers) {
      auto it = csize.find(z);
      if (it == csize.end()) {
        r.add(who + ": " + std::to_string(g.id(z)) + " is not a cluster center");
        continue;
      }
      if (!owner.emplace(z, static_cast<int>(q)).second)
        r.add(who + ": cluster " + std::to_string(g.id(z)) + " already belongs to another supercluster");
      nv += it->second;
    }
    for (size_t t = 0; t < cs.size(); ++t)
      if (std::find(s.centers.begin(), s.centers.end(), cs[t]) != s.centers.end())
        for (Vertex x : mem[t]) top = std::max(top, g.id(x));
    const long nc = static_cast<long>(s.centers.size());
    if (s.singleton != (nc == 1)) r.add(who + ": singleton flag disagrees with " + std::to_string(nc) + " clusters");
    if (s.id != top) r.add(who + ": ID is not the maximum member ID " + std::to_string(top));
    if (nc > 1) {
      if (nv > 2 * b.vertex_bound)
        r.add("N2: " + who + " has " + std::to_string(nv) + " vertices > " + std::to_string(2 * b.vertex_bound));
      if (nc > 2 * b.cluster_bound)
        r.add("N1: " + who + " has " + std::to_string(nc) + " clusters > " + std::to_string(2 * b.cluster_bound));
    }
    std::string tc = check_tree(g, s.tree);
    if (!tc.empty()) {
      r.add("N3: " + who + ": " + tc);
      continue;
    }
    std::set<Vertex> nodes(s.tree.nodes.begin(), s.tree.nodes.end());
    for (Vertex z : s.centers)
      if (!nodes.count(z)) r.add("N3: " + who + ": tree misses center " + std::to_string(g.id(z)));
    if (s.tree.height() > b.depth_bound)
      r.add("N3: " + who + ": tree height " + std::to_string(s.tree.height()) + " above bound");
    for (int e : s.tree.edge_ids(g)) {
      auto [it, fresh] = edge_owner.emplace(e, q);
      if (!fresh) {
        const Edge& ed = g.edge(e);
        r.add("N3: tree edge (" + std::to_string(g.id(ed.u)) + "," + std::to_string(g.id(ed.v)) +
              ") shared by superclusters " + std::to_string(sc.scs[it->second].id) + " and " +
              std::to_string(s.id));
      }
    }
  }
  for (Vertex z : cs)
    if (!owner.count(z)) r.add("cluster " + std::to_string(g.id(z)) + " is in no supercluster");
  return r;
}

AuditReport audit_tree_partition(const Graph& g, const WeightedTree& wt, const TreePartition& tp) {
  AuditReport r;
  const std::int64_t B = wt.bound;
  std::map<Vertex, std::int64_t> w;
  std::set<int> tree_edges;
  for (int j = 0; j < wt.tree.size(); ++j) {
    w[wt.tree.nodes[j]] = wt.weight[j];
    if (wt.tree.parent[j] != kNoVertex) tree_edges.insert(g.edge_index(wt.tree.nodes[j], wt.tree.parent[j]));
  }
  if (tp.leftover < 0 || tp.leftover >= static_cast<int>(tp.parts.size())) {
    r.add("no leftover part");
    return r;
  }
  const int diam = tree_diameter(wt.tree);
  std::set<Vertex> seen;
  std::set<int> used_edges;
  for (size_t i = 0; i < tp.parts.size(); ++i) {
    const TreePart& p = tp.parts[i];
    const std::string who = "part (" + std::to_string(p.creator) + "," + std::to_string(p.index) + ")";
    std::int64_t W = 0;
    for (Vertex x : p.owned) {
      if (!w.count(x)) {
        r.add(who + " owns a vertex outside the tree");
        continue;
      }
      if (!seen.insert(x).second) r.add("D1: vertex " + std::to_string(g.id(x)) + " owned twice");
      W += w[x];
    }
    if (W != p.weight) r.add(who + " reports weight " + std::to_string(p.weight) + ", actual " + std::to_string(W));
    if (static_cast<int>(i) == tp.leftover) {
      if (W > 2 * B) r.add("D2: leftover weighs " + std::to_string(W) + " > 2B");
      if (p.root != wt.tree.root) r.add("D5: leftover not rooted at the tree root");
    } else if (W < B || W > 2 * B) {
      r.add("D2: " + who + " weighs " + std::to_string(W) + ", outside [B,2B]");
    }
    if (auto bad = check_tree(g, p.tree); !bad.empty()) {
      r.add(who + " tree invalid: " + bad);
      continue;
    }
    if (p.tree.root != p.root) r.add(who + " tree root mismatch");
    std::set<Vertex> vt(p.tree.nodes.begin(), p.tree.nodes.end());
    std::set<Vertex> expect(p.owned.begin(), p.owned.end());
    expect.insert(p.root);
    if (vt != expect) r.add("D3: " + who + " tree vertices differ from owned plus root");
    for (int e : p.tree.edge_ids(g)) {
      if (!tree_edges.count(e)) r.add("D4: " + who + " uses an edge outside T");
      if (!used_edges.insert(e).second) r.add("D4: " + who + " shares an edge with another part");
    }
    if (tree_diameter(p.tree) > diam) r.add("D4: " + who + " diameter exceeds diam(T)");
  }
  if (static_cast<int>(seen.size()) != wt.tree.size()) r.add("D1: some tree vertex is unowned");
  return r;
}

nlohmann::json BoundFit::to_json() const {
  return {{"form", form}, {"a", a}, {"max_ratio", max_ratio}, {"points", points}};
}

BoundFit fit_bounds(const std::vector<std::pair<double, double>>& xy, const std::string& form,
                    int min_points) {
  if (static_cast<int>(xy.size()) < min_points)
    throw VerifyError("bound fit needs at least " + std::to_string(min_points) + " points");
  double sxx = 0, sxy = 0;
  BoundFit f;
  f.form = form;
  for (auto [x, y] : xy) {
    if (!(x > 0) || !std::isfinite(x) || !std::isfinite(y)) throw VerifyError("degenerate point in bound fit");
    sxx += x * x;
    sxy += x * y;
    f.max_ratio = std::max(f.max_ratio, y / x);
  }
  if (sxx <= 0) throw VerifyError("degenerate corpus");
  f.a = sxy / sxx;
  f.points = static_cast<int>(xy.size());
  return f;
}

LogLogFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) throw VerifyError("log-log fit needs at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    if (!(x > 0) || !(y > 0)) throw VerifyError("log-log fit needs positive values");
    double lx = std::log(x), ly = std::log(y);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  double n = static_cast<double>(xy.size());
  double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-12) throw VerifyError("log-log fit needs two distinct x values");
  LogLogFit f;
  f.exponent = (n * sxy - sx * sy) / den;
  f.coefficient = std::exp((sy - f.exponent * sx) / n);
  return f;
}

}  // namespace spanner
