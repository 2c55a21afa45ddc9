// Centralized oracles: stretch checks, all-pairs reference, structural audits
// and bound fitting. Nothing here looks at algorithm internals.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanner/graph.hpp"
#include "spanner/primitives.hpp"
#include "spanner/spanner_k.hpp"

namespace spanner {

struct VerifyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kStretchTol = 1e-9;

struct StretchReport {
  double t = 0;
  bool weighted = false;
  int edges_checked = 0;
  double max_stretch = 0;  // 0 on edgeless graphs, +inf if some edge is disconnected in H
  int worst_edge = -1;     // edge index in G
  VertexId worst_u = 0, worst_v = 0;
  int failures = 0;
  // ceil(stretch) -> number of edges; disconnected edges under key -1.
  std::map<int, int> histogram;
  bool pass = true;

  nlohmann::json to_json() const;
};

// Per-edge check: every edge {u,v} of g needs dist_H(u,v) <= t * w(u,v).
// H must be a subgraph of g (matched by vertex IDs).
StretchReport verify_stretch(const Graph& g, const Graph& h, double t);
StretchReport verify_stretch(const Spanner& h, double t);

inline constexpr int kAllPairsMaxN = 120;
inline constexpr double kInf = 1e300;

// Dense all-pairs distances (hops or weights), kInf when unreachable.
std::vector<std::vector<double>> floyd_warshall(const Graph& g);

// All-pairs mode, n <= kAllPairsMaxN. Checks every connected pair of g, and
// also fills the per-edge fields from the dense matrices.
struct AllPairsReport {
  double max_pair_stretch = 0;
  StretchReport per_edge;
};
AllPairsReport verify_stretch_all_pairs(const Graph& g, const Graph& h, double t);

// FNV-1a over IDs, edges and weights; used to show audits are read-only.
std::uint64_t graph_hash(const Graph& g);
std::uint64_t spanner_hash(const Spanner& h);

struct AuditReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
  void add(std::string s) { violations.push_back(std::move(s)); }
  nlohmann::json to_json() const;
};

// Pairwise distance >= alpha within `rulers` and every candidate within
// beta hops of some ruler. Exhaustive BFS.
AuditReport audit_ruling_set(const Graph& g, const std::vector<Vertex>& candidates,
                             const std::vector<Vertex>& rulers, int alpha, int beta);

// Partition of one weighted tree: parts cover the tree, are disjoint and
// connected, weigh at most 2B, at most one part (the leftover) weighs < B,
// and their trees are subtrees of the input.
AuditReport audit_tree_partition(const Graph& g, const WeightedTree& t, const TreePartition& p);

// Nice-superclustering audit against nice_bounds(sc.n, sc.k, sc.level):
// every cluster in exactly one supercluster, N1 and N2 for non-singletons
// (singletons may be large, which is all N0 asks), N3 trees valid, spanning
// their centers, within the depth bound and pairwise edge-disjoint.
AuditReport audit_superclustering(const Graph& g, const Superclustering& sc);

struct BoundFit {
  std::string form;
  double a = 0;          // least-squares constant through the origin
  double max_ratio = 0;  // max y/x over the points
  int points = 0;
  nlohmann::json to_json() const;
};

// y ~ a * x where x is the form already evaluated per point.
BoundFit fit_bounds(const std::vector<std::pair<double, double>>& xy, const std::string& form,
                    int min_points = 10);

struct LogLogFit {
  double exponent = 0;
  double coefficient = 0;
};
// Least squares of log y on log x.
LogLogFit fit_loglog(const std::vector<std::pair<double, double>>& xy);

}  // namespace spanner
