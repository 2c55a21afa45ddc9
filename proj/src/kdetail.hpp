// Shared machinery of the k-spanner algorithms. Not installed.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spanner/spanner_k.hpp"

namespace spanner::detail {

inline constexpr VertexId kNoCluster = ~VertexId{0};

// One synchronous round: send(v, out) at every vertex, then recv(v, inbox)
// at every vertex (also on an empty inbox).
void exchange(const Graph& g, const SimConfig& cfg, RoundLedger& led, const std::string& name,
              const std::function<void(Vertex, Outbox&)>& send,
              const std::function<void(Vertex, Inbox)>& recv);

// ID lists to chosen neighbors, ids_per_message IDs per message per round.
// received[v] collects (sender, id) in arrival order.
using ListOut = std::vector<std::vector<std::pair<Vertex, std::vector<VertexId>>>>;
void send_lists(const Graph& g, const SimConfig& cfg, RoundLedger& led, const std::string& name,
                const ListOut& out, std::vector<std::vector<std::pair<Vertex, VertexId>>>& received);

// Groups of vertices that talk through trees: clusters (one tree each), or
// superclusters (cluster trees below, supercluster trees on top).
class GroupNet {
 public:
  GroupNet(const Graph& g, const SimConfig& cfg, const Clustering& c);
  GroupNet(const Graph& g, const SimConfig& cfg, const Superclustering& sc);

  int size() const { return static_cast<int>(gid_.size()); }
  int group_of(Vertex v) const { return of_[v]; }
  VertexId gid(int q) const { return gid_[q]; }
  // cluster centers of group q
  const std::vector<Vertex>& centers(int q) const { return centers_[q]; }
  const std::vector<Vertex>& members(int q) const { return members_[q]; }

  // Per-group total of per-vertex values (held by the group's root).
  std::vector<std::int64_t> sum(const std::vector<std::int64_t>& per_vertex, RoundLedger& led) const;
  // Per-group maximum of per-vertex values.
  std::vector<std::int64_t> max(const std::vector<std::int64_t>& per_vertex, RoundLedger& led) const;
  // Every member learns its group's value; 0 outside groups.
  std::vector<std::int64_t> bcast(const std::vector<std::int64_t>& per_group, RoundLedger& led) const;

  void set_gid(int q, VertexId id) { gid_[q] = id; }

 private:
  std::vector<std::int64_t> reduce(const std::vector<std::int64_t>& per_vertex, const AggSpec& spec,
                                   RoundLedger& led) const;
  const Graph& g_;
  SimConfig cfg_;
  std::vector<RootedTree> ctrees_;      // cluster trees
  std::vector<int> cgroup_;             // cluster -> group
  std::vector<RootedTree> strees_;      // supercluster trees, empty for plain clusters
  std::vector<int> of_;
  std::vector<VertexId> gid_;
  std::vector<std::vector<Vertex>> centers_;
  std::vector<std::vector<Vertex>> members_;
  bool has_sc_ = false;
};

struct ElectionInput {
  int level = 0;
  bool closed = false;  // unmarked degree over Gamma+(group) instead of Gamma(group)
  long threshold = 0;
  int cap = 0;
};

// Iterations of the local-maximum election (step SI). Updates `marked`
// (per vertex) and `remaining` (per group); groups that joined are exactly
// those with remaining[q] turned 0.
PhaseRecord elect(const Graph& g, const SimConfig& cfg, const GroupNet& net, const ElectionInput& in,
                  std::vector<char>& marked, std::vector<char>& remaining, RoundLedger& led);

// Sub-instances running side by side. When an edge is shared by two
// bipartite instances the slowest bipartite run is charged once more.
void absorb_instances(RoundLedger& led, const std::vector<RoundLedger>& bip,
                      const std::vector<RoundLedger>& rec, int max_share, const std::string& label);

// Instance count per edge for a family of bipartite instances (A_j, B_j).
int max_instances_per_edge(const Graph& g, const std::vector<Bipartition>& inst);

void add_tree_edges(Spanner& h, const Clustering& c, const std::string& tag);

// Depths recomputed from parent pointers.
void fill_depths(Clustering& c);

// Vertex lists, tree check and IDs of a superclustering; IDs by a max
// convergecast over the two-level trees.
void finalize_superclustering(const Graph& g, const SimConfig& cfg, Superclustering& sc,
                              RoundLedger& led);

// Maps a spanner of a sub-graph back to the parent graph.
void merge_mapped(Spanner& h, const Spanner& sub, const std::vector<Vertex>& to_parent);

}  // namespace spanner::detail
