#include "spanner/graph.hpp"

#include <algorithm>
#include <deque>

namespace spanner {

std::optional<Vertex> Graph::find(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vertex Graph::at(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw GraphError("unknown vertex id " + std::to_string(id));
  return it->second;
}

int Graph::edge_index(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n() || v >= n()) return -1;
  const auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) return -1;
  return adj_eid_[u][it - a.begin()];
}

Graph Graph::induced(const std::vector<Vertex>& keep,
                     std::vector<Vertex>* to_parent) const {
  return filtered(keep, [](const Edge&) { return true; }, to_parent);
}

bool Graph::operator==(const Graph& o) const {
  if (ids_ != o.ids_ || weighted_ != o.weighted_ || edges_.size() != o.edges_.size())
    return false;
  for (size_t i = 0; i < edges_.size(); ++i) {
    const Edge& a = edges_[i];
    const Edge& b = o.edges_[i];
    if (a.u != b.u || a.v != b.v) return false;
    if (weighted_ && a.w != b.w) return false;
  }
  return true;
}

void GraphBuilder::add_vertex(VertexId id) { vertices_.emplace(id, 0); }

void GraphBuilder::add_edge(VertexId a, VertexId b) {
  any_unweighted_ = true;
  put(a, b, 1.0);
}

void GraphBuilder::add_edge(VertexId a, VertexId b, double w) {
  if (!(w > 0.0)) throw GraphError("edge weight must be positive");
  any_weight_ = true;
  put(a, b, w);
}

void GraphBuilder::put(VertexId a, VertexId b, double w) {
  if (a == b) throw GraphError("self-loop at vertex " + std::to_string(a));
  if (a > b) std::swap(a, b);
  if (!edges_.emplace(std::make_pair(a, b), w).second)
    throw GraphError("parallel edge " + std::to_string(a) + " " + std::to_string(b));
  vertices_.emplace(a, 0);
  vertices_.emplace(b, 0);
}

Graph GraphBuilder::build() const {
  if (any_weight_ && any_unweighted_)
    throw GraphError("mix of weighted and unweighted edges");
  Graph g;
  g.weighted_ = any_weight_;
  g.ids_.reserve(vertices_.size());
  for (const auto& [id, _] : vertices_) {
    g.index_.emplace(id, static_cast<Vertex>(g.ids_.size()));
    g.ids_.push_back(id);
  }
  g.adj_.assign(g.ids_.size(), {});
  g.adj_eid_.assign(g.ids_.size(), {});
  // Map order is (u,v) by ID, so every adjacency list comes out sorted:
  // edges (y,x) with y < x are all visited before any (x,z).
  for (const auto& [key, w] : edges_) {
    Vertex u = g.index_.at(key.first);
    Vertex v = g.index_.at(key.second);
    int e = static_cast<int>(g.edges_.size());
    g.edges_.push_back({u, v, w});
    g.adj_[u].push_back(v);
    g.adj_eid_[u].push_back(e);
    g.adj_[v].push_back(u);
    g.adj_eid_[v].push_back(e);
  }
  return g;
}

std::string validate(const Graph& g) {
  for (Vertex v = 0; v < g.n(); ++v) {
    if (v > 0 && g.id(v - 1) >= g.id(v)) return "vertex ids not strictly increasing";
    auto nb = g.nbrs(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      Vertex u = nb[i];
      if (u == v) return "self-loop at " + std::to_string(g.id(v));
      if (i > 0 && nb[i - 1] >= u) return "adjacency of " + std::to_string(g.id(v)) + " not sorted or repeated";
      if (!g.has_edge(u, v)) return "asymmetric adjacency";
      const Edge& e = g.edge(g.eids(v)[i]);
      if (!((e.u == v && e.v == u) || (e.u == u && e.v == v))) return "edge index mismatch";
    }
  }
  size_t half = 0;
  for (Vertex v = 0; v < g.n(); ++v) half += g.nbrs(v).size();
  if (half != 2 * static_cast<size_t>(g.m())) return "degree sum does not match edge count";
  for (const Edge& e : g.edges()) {
    if (e.u >= e.v) return "edge endpoints not canonical";
    if (!(e.w > 0.0)) return "non-positive weight";
  }
  return {};
}

std::vector<int> bfs_dist(const Graph& g, Vertex src, std::optional<int> hop_cap) {
  if (src < 0 || src >= g.n()) throw GraphError("bfs source not in graph");
  std::vector<int> dist(g.n(), -1);
  std::deque<Vertex> q;
  dist[src] = 0;
  q.push_back(src);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    if (hop_cap && dist[x] >= *hop_cap) continue;
    for (Vertex y : g.nbrs(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  return dist;
}

std::map<VertexId, int> bfs_dist_by_id(const Graph& g, VertexId src,
                                       std::optional<int> hop_cap) {
  auto d = bfs_dist(g, g.at(src), hop_cap);
  std::map<VertexId, int> out;
  for (Vertex v = 0; v < g.n(); ++v) out[g.id(v)] = d[v];
  return out;
}

Spanner::Spanner(const Graph& base)
    : base_(&base), in_(base.m(), 0), tag_of_(base.m(), -1) {}

bool Spanner::add_edge(int e, const std::string& tag) {
  if (e < 0 || e >= base_->m()) throw GraphError("spanner edge outside base graph");
  if (in_[e]) return false;
  int t = -1;
  for (size_t i = 0; i < tags_.size(); ++i)
    if (tags_[i] == tag) t = static_cast<int>(i);
  if (t < 0) {
    t = static_cast<int>(tags_.size());
    tags_.push_back(tag);
  }
  in_[e] = 1;
  tag_of_[e] = t;
  ++count_;
  return true;
}

bool Spanner::add(Vertex u, Vertex v, const std::string& tag) {
  int e = base_->edge_index(u, v);
  if (e < 0) throw GraphError("spanner edge not in base graph");
  return add_edge(e, tag);
}

bool Spanner::add_by_id(VertexId a, VertexId b, const std::string& tag) {
  return add(base_->at(a), base_->at(b), tag);
}

bool Spanner::contains(Vertex u, Vertex v) const {
  int e = base_->edge_index(u, v);
  return e >= 0 && in_[e];
}

std::vector<int> Spanner::edge_list() const {
  std::vector<int> out;
  out.reserve(count_);
  for (int e = 0; e < base_->m(); ++e)
    if (in_[e]) out.push_back(e);
  return out;
}

const std::string& Spanner::tag(int e) const {
  static const std::string none;
  if (e < 0 || e >= base_->m() || tag_of_[e] < 0) return none;
  return tags_[tag_of_[e]];
}

std::map<std::string, int> Spanner::tag_histogram() const {
  std::map<std::string, int> h;
  for (int e = 0; e < base_->m(); ++e)
    if (in_[e]) ++h[tags_[tag_of_[e]]];
  return h;
}

void Spanner::merge(const Spanner& other) {
  if (other.base_ != base_) throw GraphError("merging spanners of different graphs");
  for (int e = 0; e < base_->m(); ++e)
    if (other.in_[e]) add_edge(e, other.tag(e));
}

Graph Spanner::as_graph() const {
  GraphBuilder b;
  for (VertexId id : base_->ids()) b.add_vertex(id);
  for (int e = 0; e < base_->m(); ++e) {
    if (!in_[e]) continue;
    const Edge& ed = base_->edge(e);
    if (base_->weighted()) b.add_edge(base_->id(ed.u), base_->id(ed.v), ed.w);
    else b.add_edge(base_->id(ed.u), base_->id(ed.v));
  }
  return b.build();
}

}  // namespace spanner
