// 3-spanners: the two-round bipartite construction, the partition-based
// general construction, and the small-ID variant. Weighted inputs are
// supported throughout ("closest" means smallest weight, then smallest ID).
#pragma once

#include <functional>
#include <vector>

#include "spanner/congest.hpp"
#include "spanner/graph.hpp"

namespace spanner {

struct Bipartition {
  std::vector<Vertex> A;
  std::vector<Vertex> B;
};

// Only A x B edges are considered; edges inside A or inside B are ignored.
Spanner bipartite_3_spanner(const Graph& g, const Bipartition& part, const SimConfig& cfg,
                            RoundLedger* led = nullptr);

struct HighDegreePartition {
  int threshold = 0;                     // ceil(sqrt n)
  std::vector<Vertex> high;              // deg >= threshold
  std::vector<Vertex> rulers;            // the (4, O(log n)) ruling set
  std::vector<std::vector<Vertex>> parts;
  std::vector<std::pair<VertexId, int>> labels;  // (creator, index) per part
};

HighDegreePartition partition_high_degree(const Graph& g, const SimConfig& cfg,
                                          RoundLedger* led = nullptr);

struct ThreeSpannerStats {
  int parts = 0;
  int largest_part = 0;
  int max_instances_per_edge = 0;  // bipartite sub-instances sharing one edge
  long announce_rounds = 0;        // 0 when parts are derived from IDs
};

// Part labels of neighbors either travel in one announcement round or, when
// `part_of_id` is given, are computed locally from neighbor IDs.
Spanner three_spanner_given_partition(const Graph& g, const std::vector<std::vector<Vertex>>& parts,
                                      const SimConfig& cfg, RoundLedger* led = nullptr,
                                      std::function<long(VertexId)> part_of_id = {},
                                      ThreeSpannerStats* stats = nullptr);

struct Improved3Stats {
  HighDegreePartition partition;
  ThreeSpannerStats given;
};

Spanner improved_3_spanner(const Graph& g, const SimConfig& cfg, RoundLedger* led = nullptr,
                           Improved3Stats* stats = nullptr);

// IDs must not exceed kSmallIdFactor * n.
inline constexpr int kSmallIdFactor = 4;
// Part of an ID for an n-vertex graph: (ID-1) >> ceil(ceil(log2 n)/2), with ID 0 in part 0.
long small_id_part(VertexId id, int n);
Spanner small_id_3_spanner(const Graph& g, const SimConfig& cfg, RoundLedger* led = nullptr,
                           ThreeSpannerStats* stats = nullptr);

}  // namespace spanner
