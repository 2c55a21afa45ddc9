// Distributed building blocks: BFS cluster growth, tree aggregation,
// ruling sets and the balanced tree partition.
//
// Every host wrapper runs one or more NodePrograms under the simulator and,
// when `led` is non-null, appends their round ledgers to it.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spanner/congest.hpp"
#include "spanner/errors.hpp"
#include "spanner/graph.hpp"

namespace spanner {

// A tree inside G given by parent pointers. nodes[0] is the root.
struct RootedTree {
  Vertex root = kNoVertex;
  std::vector<Vertex> nodes;
  std::vector<Vertex> parent;  // parallel to nodes, kNoVertex at the root

  int size() const { return static_cast<int>(nodes.size()); }
  // Height in edges, computed from the parent pointers.
  int height() const;
  // Edge indices of g used by the tree.
  std::vector<int> edge_ids(const Graph& g) const;
};

// Empty string if the tree is well formed inside g (edges exist, acyclic,
// connected through the root).
std::string check_tree(const Graph& g, const RootedTree& t);

struct Clustering {
  int level = 0;
  int depth_bound = 0;
  std::vector<Vertex> center;  // per vertex, kNoVertex if unclustered
  std::vector<Vertex> parent;  // tree parent, kNoVertex at centers
  std::vector<int> depth;      // hops to the center, -1 if unclustered

  static Clustering empty(int n, int level = 0);
  // Every vertex of `vs` is its own center.
  static Clustering singletons(int n, const std::vector<Vertex>& vs, int level = 0);

  bool clustered(Vertex v) const { return center[v] != kNoVertex; }
  std::vector<Vertex> centers() const;
  int num_clusters() const { return static_cast<int>(centers().size()); }
  // Members per center, in the order of centers(); members sorted.
  std::vector<std::vector<Vertex>> members() const;
  std::vector<RootedTree> trees() const;
  int max_depth() const;
};

std::string check_clustering(const Graph& g, const Clustering& c);

// Tuple aggregates carried by the tree kernels: up to two fields.
struct AggValue {
  std::array<std::int64_t, 2> v{0, 0};
  bool operator==(const AggValue& o) const { return v == o.v; }
};
enum class AggOp { Sum, LexMax };
struct AggSpec {
  AggOp op = AggOp::Sum;
  int arity = 1;
  std::array<Field, 2> kinds{Field::Count, Field::Count};
  AggValue combine(const AggValue& a, const AggValue& b) const;
};

// Convergecast over edge-disjoint trees. values[t][j] belongs to
// trees[t].nodes[j]. Returns one aggregate per tree (held by its root).
std::vector<AggValue> forest_aggregate(const Graph& g, const std::vector<RootedTree>& trees,
                                       const std::vector<std::vector<AggValue>>& values,
                                       const AggSpec& spec, const SimConfig& cfg,
                                       RoundLedger* led = nullptr,
                                       const std::string& label = "aggregate");

// Root-to-leaves broadcast; returns the value seen by every node, parallel
// to trees[t].nodes.
std::vector<std::vector<AggValue>> forest_broadcast(const Graph& g,
                                                    const std::vector<RootedTree>& trees,
                                                    const std::vector<AggValue>& root_values,
                                                    const AggSpec& spec, const SimConfig& cfg,
                                                    RoundLedger* led = nullptr,
                                                    const std::string& label = "broadcast");

// Every vertex within `depth` hops of a center (through `allowed` vertices
// only, if given) joins its nearest center; ties go to the larger center ID.
Clustering grow_bfs_clusters(const Graph& g, const std::vector<Vertex>& centers, int depth,
                             const SimConfig& cfg, RoundLedger* led = nullptr,
                             const std::vector<char>* allowed = nullptr);

// Per-center aggregate of per-vertex values over the cluster trees.
// Result is indexed by vertex and meaningful at centers only.
std::vector<AggValue> cluster_aggregate(const Graph& g, const Clustering& c,
                                        const std::vector<AggValue>& values, const AggSpec& spec,
                                        const SimConfig& cfg, RoundLedger* led = nullptr);

// Vertices within `d` hops of a source (sources included).
std::vector<char> hop_flood(const Graph& g, const std::vector<char>& sources, int d,
                            const SimConfig& cfg, RoundLedger* led = nullptr,
                            const std::string& label = "hop-flood");

struct RulingStats {
  int id_bits = 0;       // bit steps of the log ruling set
  int reach = 0;         // power version: MIS radius 3t-1
  int threshold = 0;     // power version: candidate cutoff g(n)
  int heavy = 0;         // power version: candidates with >= g(n) candidates nearby
  int iterations = 0;    // power version: local-maximum rounds of the MIS
  long rounds = 0;
};

// (4, 3*id_bits)-ruling set of `candidates` in G.
std::vector<Vertex> ruling_set_log(const Graph& g, const std::vector<Vertex>& candidates,
                                   const SimConfig& cfg, RoundLedger* led = nullptr,
                                   RulingStats* stats = nullptr);

// (3t, 4t)-ruling set of `candidates` in G (pairwise >= 3t, dominating
// within 3t-1 <= 4t hops).
std::vector<Vertex> ruling_set_power(const Graph& g, const std::vector<Vertex>& candidates, int t,
                                     const SimConfig& cfg, RoundLedger* led = nullptr,
                                     RulingStats* stats = nullptr);

// ceil(2^sqrt(log2 n)), the candidate cutoff used by ruling_set_power.
int power_threshold(int n);
// Pinned cap c * t * 2^(c' * ceil(sqrt(log2 n))) on ruling_set_power rounds.
long ruling_power_round_cap(int n, int t);

struct WeightedTree {
  RootedTree tree;
  std::vector<std::int64_t> weight;  // parallel to tree.nodes
  std::int64_t bound = 1;
  std::int64_t total() const;
};

struct TreePart {
  VertexId creator = 0;  // ID of the vertex that closed the part
  int index = 0;         // 0 for the part a vertex owns itself
  Vertex root = kNoVertex;
  std::vector<Vertex> owned;
  RootedTree tree;
  std::int64_t weight = 0;
};

struct TreePartition {
  std::vector<TreePart> parts;  // sorted by (creator, index)
  int leftover = -1;            // the part rooted at the input root
};

TreePartition partition_tree(const Graph& g, const WeightedTree& t, const SimConfig& cfg,
                             RoundLedger* led = nullptr);
// Several edge-disjoint trees partitioned in one parallel run.
std::vector<TreePartition> partition_forest(const Graph& g, const std::vector<WeightedTree>& ts,
                                            const SimConfig& cfg, RoundLedger* led = nullptr);

}  // namespace spanner
