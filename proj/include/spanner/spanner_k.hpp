// (2k-1)-spanners for general k: the cluster-growing NaiveSpanner, the
// star-graph bipartite construction, the supercluster-based ImprovedSpanner
// with its 0th superclustering, and a randomized Baswana-Sen comparator.
//
// Unweighted only for k > 2; weighted inputs raise ParameterError (k <= 2
// paths delegate to the 3-spanner code, which handles weights).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanner/congest.hpp"
#include "spanner/graph.hpp"
#include "spanner/primitives.hpp"
#include "spanner/spanner3.hpp"

namespace spanner {

// ceil(n^x), robust against pow() landing a hair above an exact integer.
long ceil_pow(double n, double x);

// One level of an election-based phase (naive, improved SI, star-graph SI).
struct PhaseRecord {
  int level = 0;
  int groups = 0;            // clusters or superclusters entering the phase
  long threshold = 0;
  int iteration_cap = 0;
  int iterations_run = 0;    // simulated; the rest of the cap is charged idle
  long idle_rounds = 0;
  bool fixed_point = false;  // an iteration ended with no join
  int joined = 0;            // groups whose centers joined Z_i
  int centers = 0;           // |Z_i|
  long center_bound = 0;     // ceil(n^{1-i/k}) or the phase's analogue
  int overlap_violations = 0;  // successful groups with intersecting unmarked neighborhoods
  int high_after = 0;        // remaining groups still at or above threshold after the loop
  int max_depth = 0;         // deepest cluster tree produced by the phase
  long rounds = 0;
  nlohmann::json to_json() const;
};

struct NaiveStats {
  std::vector<PhaseRecord> phases;
  nlohmann::json to_json() const;
};

struct BipartiteStats {
  int k_prime = 0;
  int stars = 0;
  std::vector<PhaseRecord> phases;
  // phase-1 approximate star degree over the exact one, over all recorded
  // iterations and clusters with nonzero degree
  double min_ratio = 0, max_ratio = 0;
  long ratio_samples = 0;
  int max_cluster_depth = 0;
  nlohmann::json to_json() const;
};

struct Supercluster {
  VertexId id = 0;             // maximum member-vertex ID
  bool singleton = false;      // exactly one cluster
  std::vector<Vertex> centers; // cluster centers, sorted
  std::vector<Vertex> vertices;
  RootedTree tree;             // connects the centers; may pass through other vertices
};

struct Superclustering {
  int n = 0;
  int k = 0;
  int level = 0;
  Clustering clustering;
  std::vector<Supercluster> scs;
};

// Bounds of a nice superclustering at a level. Non-singletons must satisfy
// N_V <= 2 * vertex_bound and N_C <= 2 * cluster_bound; singletons may be
// arbitrarily large; tree heights stay within depth_bound.
struct NiceBounds {
  long vertex_bound = 0;   // ceil(sqrt n)
  long cluster_bound = 0;  // ceil(n^{1/2 - i/k})
  long depth_bound = 0;    // 2^{4k}
};
NiceBounds nice_bounds(int n, int k, int level);

struct ZeroLevel {
  int level = 0;
  int clusters_in = 0;
  int high = 0;
  int t = 0;          // power of the ruling set
  int rulers = 0;
  long count_bound = 0;
  int radius = 0;     // BFS depth used to grow the level
  int max_depth = 0;
  int low_instances = 0;
  nlohmann::json to_json() const;
};

struct ZeroStats {
  std::string mode;   // "cons" or "bfs"
  std::vector<ZeroLevel> levels;
  int covered = 0;    // vertices inside the output superclustering
  int max_instances_per_edge = 0;
  nlohmann::json to_json() const;
};

struct ZeroResult {
  Superclustering sc;
  Spanner h;  // takes care of every edge incident to a vertex outside sc
};

enum class ZeroMode { Cons, Bfs };

struct ImprovedOptions {
  ZeroMode zero = ZeroMode::Cons;
  int n_min = 64;
  double si_cap_factor = 4.0;
};

struct ImprovedStats {
  std::string path;  // "improved", "naive-base" or "imp3"
  int k = 0;
  int last_level = 0;  // k/2 for even k, (k-1)/2 for odd
  ZeroStats zero;
  std::vector<Superclustering> levels;  // SC_0 .. SC_last
  std::vector<PhaseRecord> phases;
  int bip_instances = 0;
  int recursions = 0;
  int max_instances_per_edge = 0;
  NaiveStats tail;
  nlohmann::json to_json() const;
};

// Phases 1..k-1 of cluster growing plus the final phase.
Spanner naive_spanner(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led = nullptr,
                      NaiveStats* stats = nullptr);
// Resumes at phase `start_level` from `prev`, the clustering C_{start_level-1}.
Spanner naive_spanner_from(const Graph& g, int k, int start_level, const Clustering& prev,
                           const SimConfig& cfg, RoundLedger* led = nullptr,
                           NaiveStats* stats = nullptr);

// A x B edges only. k < 3 delegates to bipartite_3_spanner.
Spanner sparser_bipartite_spanner(const Graph& g, const Bipartition& part, int k,
                                  const SimConfig& cfg, RoundLedger* led = nullptr,
                                  BipartiteStats* stats = nullptr);

Spanner improved_spanner(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led = nullptr,
                         ImprovedStats* stats = nullptr, const ImprovedOptions& opt = {});

ZeroResult cons_zero_superclustering(const Graph& g, int k, const SimConfig& cfg,
                                     RoundLedger* led = nullptr, ZeroStats* stats = nullptr,
                                     const ImprovedOptions& opt = {});
// Partition of a BFS tree per component, rooted at the component's maximum ID.
Superclustering bfs_zero_superclustering(const Graph& g, int k, const SimConfig& cfg,
                                         RoundLedger* led = nullptr);

// Centralized randomized comparator.
Spanner baswana_sen_baseline(const Graph& g, int k, std::uint64_t seed);

nlohmann::json superclustering_json(const Graph& g, const Superclustering& sc);

}  // namespace spanner
