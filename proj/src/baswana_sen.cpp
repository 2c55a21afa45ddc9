#include <algorithm>
#include <cmath>
#include <random>

#include "spanner/errors.hpp"
#include "spanner/spanner_k.hpp"

namespace spanner {

// Unweighted clustering version, run centrally: k-1 sampling rounds, then
// every vertex links to each cluster it still sees.
Spanner baswana_sen_baseline(const Graph& g, int k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  if (g.weighted()) throw ParameterError("weighted graphs are only supported for k <= 2");
  const int n = g.n();
  Spanner h(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double p = n > 0 ? std::pow(static_cast<double>(n), -1.0 / k) : 1.0;

  std::vector<Vertex> cl(n);
  for (Vertex v = 0; v < n; ++v) cl[v] = v;
  std::vector<char> live(g.m(), 1);

  auto drop_internal = [&] {
    for (int e = 0; e < g.m(); ++e) {
      const Edge& ed = g.edge(e);
      if (live[e] && cl[ed.u] != kNoVertex && cl[ed.u] == cl[ed.v]) live[e] = 0;
    }
  };
  drop_internal();

  for (int i = 1; i <= k - 1; ++i) {
    std::vector<char> sampled(n, 0);
    for (Vertex v = 0; v < n; ++v)
      if (cl[v] == v) sampled[v] = unif(rng) < p;
    std::vector<Vertex> next(n, kNoVertex);
    for (Vertex v = 0; v < n; ++v)
      if (cl[v] != kNoVertex && sampled[cl[v]]) next[v] = cl[v];
    for (Vertex v = 0; v < n; ++v) {
      if (cl[v] == kNoVertex || sampled[cl[v]]) continue;
      auto nb = g.nbrs(v);
      auto es = g.eids(v);
      int join = -1;
      for (size_t j = 0; j < nb.size() && join < 0; ++j)
        if (live[es[j]] && cl[nb[j]] != kNoVertex && sampled[cl[nb[j]]]) join = static_cast<int>(j);
      if (join >= 0) {
        h.add_edge(es[join], "bs-join");
        next[v] = cl[nb[join]];
        continue;
      }
      std::vector<char> done(n, 0);
      for (size_t j = 0; j < nb.size(); ++j) {
        if (!live[es[j]] || cl[nb[j]] == kNoVertex) continue;
        if (!done[cl[nb[j]]]) {
          done[cl[nb[j]]] = 1;
          h.add_edge(es[j], "bs-link");
        }
      }
      for (int e : es) live[e] = 0;
    }
    cl = std::move(next);
    drop_internal();
  }

  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.nbrs(v);
    auto es = g.eids(v);
    std::vector<Vertex> seen;
    for (size_t j = 0; j < nb.size(); ++j) {
      if (!live[es[j]] || cl[nb[j]] == kNoVertex) continue;
      if (std::find(seen.begin(), seen.end(), cl[nb[j]]) != seen.end()) continue;
      seen.push_back(cl[nb[j]]);
      h.add_edge(es[j], "bs-final");
    }
  }
  return h;
}

nlohmann::json PhaseRecord::to_json() const {
  return {{"level", level},
          {"groups", groups},
          {"threshold", threshold},
          {"iteration_cap", iteration_cap},
          {"iterations_run", iterations_run},
          {"idle_rounds", idle_rounds},
          {"fixed_point", fixed_point},
          {"joined", joined},
          {"centers", centers},
          {"center_bound", center_bound},
          {"overlap_violations", overlap_violations},
          {"high_after", high_after},
          {"max_depth", max_depth},
          {"rounds", rounds}};
}

nlohmann::json NaiveStats::to_json() const {
  nlohmann::json ph = nlohmann::json::array();
  for (const auto& p : phases) ph.push_back(p.to_json());
  return {{"phases", ph}};
}

nlohmann::json BipartiteStats::to_json() const {
  nlohmann::json ph = nlohmann::json::array();
  for (const auto& p : phases) ph.push_back(p.to_json());
  return {{"k_prime", k_prime},
          {"stars", stars},
          {"phases", ph},
          {"min_ratio", min_ratio},
          {"max_ratio", max_ratio},
          {"ratio_samples", ratio_samples},
          {"max_cluster_depth", max_cluster_depth}};
}

nlohmann::json ZeroLevel::to_json() const {
  return {{"level", level},   {"clusters_in", clusters_in}, {"high", high},
          {"t", t},           {"rulers", rulers},           {"count_bound", count_bound},
          {"radius", radius}, {"max_depth", max_depth},     {"low_instances", low_instances}};
}

nlohmann::json ZeroStats::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels) lv.push_back(l.to_json());
  return {{"mode", mode}, {"levels", lv}, {"covered", covered},
          {"max_instances_per_edge", max_instances_per_edge}};
}

nlohmann::json ImprovedStats::to_json() const {
  nlohmann::json ph = nlohmann::json::array();
  for (const auto& p : phases) ph.push_back(p.to_json());
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& s : levels) {
    int singles = 0, biggest = 0;
    for (const auto& x : s.scs) {
      singles += x.singleton;
      biggest = std::max(biggest, static_cast<int>(x.vertices.size()));
    }
    lv.push_back({{"level", s.level},
                  {"superclusters", s.scs.size()},
                  {"singletons", singles},
                  {"clusters", s.clustering.num_clusters()},
                  {"largest", biggest}});
  }
  return {{"path", path},
          {"k", k},
          {"last_level", last_level},
          {"zero", zero.to_json()},
          {"levels", lv},
          {"phases", ph},
          {"bip_instances", bip_instances},
          {"recursions", recursions},
          {"max_instances_per_edge", max_instances_per_edge},
          {"tail", tail.to_json()}};
}

nlohmann::json superclustering_json(const Graph& g, const Superclustering& sc) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : sc.scs) {
    nlohmann::json cs = nlohmann::json::array();
    for (Vertex z : s.centers) cs.push_back(g.id(z));
    arr.push_back({{"id", s.id},
                   {"singleton", s.singleton},
                   {"centers", cs},
                   {"vertices", s.vertices.size()},
                   {"tree_height", s.tree.height()}});
  }
  return {{"n", sc.n}, {"k", sc.k}, {"level", sc.level}, {"superclusters", arr}};
}

}  // namespace spanner
