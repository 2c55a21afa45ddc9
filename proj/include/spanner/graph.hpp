// Undirected graph with stable vertex IDs, optional edge weights, and the
// spanner edge-subset type built on top of it.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spanner {

using VertexId = std::uint64_t;

// Internal vertex handle: position of the vertex in ID order.
using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  Vertex u;  // u < v, so also ID(u) < ID(v)
  Vertex v;
  double w;
};

class Graph {
 public:
  Graph() = default;

  int n() const { return static_cast<int>(ids_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }
  bool weighted() const { return weighted_; }

  VertexId id(Vertex v) const { return ids_[v]; }
  const std::vector<VertexId>& ids() const { return ids_; }
  std::optional<Vertex> find(VertexId id) const;
  Vertex at(VertexId id) const;  // throws GraphError when absent

  // Neighbors sorted by ID; eids() is the parallel array of edge indices.
  std::span<const Vertex> nbrs(Vertex v) const { return adj_[v]; }
  std::span<const int> eids(Vertex v) const { return adj_eid_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  double weight(int e) const { return edges_[e].w; }
  // Edge index of {u,v}, or -1.
  int edge_index(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const { return edge_index(u, v) >= 0; }

  VertexId max_id() const { return ids_.empty() ? 0 : ids_.back(); }

  // Subgraph induced by `keep` (any order, duplicates rejected).
  // `to_parent` receives the parent vertex for every sub-vertex.
  Graph induced(const std::vector<Vertex>& keep,
                std::vector<Vertex>* to_parent = nullptr) const;

  // Subgraph on `keep` retaining only the edges accepted by `pred`.
  template <class Pred>
  Graph filtered(const std::vector<Vertex>& keep, Pred pred,
                 std::vector<Vertex>* to_parent = nullptr) const;

  bool operator==(const Graph& o) const;

 private:
  friend class GraphBuilder;
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, Vertex> index_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::vector<int>> adj_eid_;
  std::vector<Edge> edges_;
  bool weighted_ = false;
};

class GraphBuilder {
 public:
  void add_vertex(VertexId id);
  // Adds both endpoints if missing. Self-loops and repeated edges throw.
  void add_edge(VertexId a, VertexId b);
  void add_edge(VertexId a, VertexId b, double w);
  bool has_vertex(VertexId id) const { return vertices_.count(id) > 0; }
  Graph build() const;

 private:
  void put(VertexId a, VertexId b, double w);
  std::map<VertexId, int> vertices_;
  std::map<std::pair<VertexId, VertexId>, double> edges_;
  bool any_weight_ = false;
  bool any_unweighted_ = false;
};

// Checks symmetry, sortedness, no self-loops or duplicates, positive weights.
// Returns an empty string when the graph is well formed.
std::string validate(const Graph& g);

// Hop distances from src; -1 = unreachable or beyond hop_cap.
std::vector<int> bfs_dist(const Graph& g, Vertex src,
                          std::optional<int> hop_cap = std::nullopt);
std::map<VertexId, int> bfs_dist_by_id(const Graph& g, VertexId src,
                                       std::optional<int> hop_cap = std::nullopt);

// Edge subset of a base graph with a step tag per edge.
class Spanner {
 public:
  explicit Spanner(const Graph& base);

  const Graph& base() const { return *base_; }
  // Adds {u,v}; throws GraphError if it is not an edge of the base graph.
  // Returns false if the edge was already present.
  bool add(Vertex u, Vertex v, const std::string& tag);
  bool add_edge(int e, const std::string& tag);
  bool add_by_id(VertexId a, VertexId b, const std::string& tag);
  bool contains(int e) const { return in_[e]; }
  bool contains(Vertex u, Vertex v) const;
  int size() const { return count_; }
  // Edge indices in increasing (u,v) order.
  std::vector<int> edge_list() const;
  const std::string& tag(int e) const;
  // Number of edges added per tag.
  std::map<std::string, int> tag_histogram() const;
  // Adds every edge of `other` (same base) keeping the first tag seen.
  void merge(const Spanner& other);
  // Graph on all base vertices containing exactly the spanner edges.
  Graph as_graph() const;

 private:
  const Graph* base_;
  std::vector<char> in_;
  std::vector<int> tag_of_;
  std::vector<std::string> tags_;
  int count_ = 0;
};

template <class Pred>
Graph Graph::filtered(const std::vector<Vertex>& keep, Pred pred,
                      std::vector<Vertex>* to_parent) const {
  GraphBuilder b;
  std::vector<char> in(n(), 0);
  for (Vertex v : keep) {
    if (in[v]) throw GraphError("duplicate vertex in subgraph selection");
    in[v] = 1;
    b.add_vertex(ids_[v]);
  }
  for (const Edge& e : edges_) {
    if (in[e.u] && in[e.v] && pred(e)) {
      if (weighted_) b.add_edge(ids_[e.u], ids_[e.v], e.w);
      else b.add_edge(ids_[e.u], ids_[e.v]);
    }
  }
  Graph sub = b.build();
  sub.weighted_ = weighted_;
  if (to_parent) {
    to_parent->assign(sub.n(), kNoVertex);
    for (Vertex s = 0; s < sub.n(); ++s) (*to_parent)[s] = at(sub.id(s));
  }
  return sub;
}

}  // namespace spanner
