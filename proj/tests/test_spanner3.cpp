#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <set>

#include "spanner/generators.hpp"
#include "spanner/spanner3.hpp"

using namespace spanner;

namespace {

// Largest dist_H(u,v) / w(u,v) over edges of g whose endpoints both pass
// `in_scope`. Plain Dijkstra over the spanner edges.
double max_edge_stretch(const Spanner& h, const std::function<bool(const Edge&)>& in_scope = {}) {
  const Graph& g = h.base();
  std::vector<std::vector<std::pair<Vertex, double>>> adj(g.n());
  for (int e : h.edge_list()) {
    const Edge& ed = g.edge(e);
    adj[ed.u].push_back({ed.v, ed.w});
    adj[ed.v].push_back({ed.u, ed.w});
  }
  double worst = 0;
  for (Vertex s = 0; s < g.n(); ++s) {
    std::vector<double> d(g.n(), 1e18);
    using QE = std::pair<double, Vertex>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    d[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [dx, x] = pq.top();
      pq.pop();
      if (dx > d[x]) continue;
      for (auto [y, w] : adj[x])
        if (dx + w < d[y]) d[y] = dx + w, pq.push({d[y], y});
    }
    for (int e : g.eids(s)) {
      const Edge& ed = g.edge(e);
      if (ed.u != s) continue;
      if (in_scope && !in_scope(ed)) continue;
      worst = std::max(worst, d[ed.v] / ed.w);
    }
  }
  return worst;
}

Bipartition sides_by_id(const Graph& g, VertexId a_below) {
  Bipartition p;
  for (Vertex v = 0; v < g.n(); ++v) (g.id(v) < a_below ? p.A : p.B).push_back(v);
  return p;
}

Graph weighted_from(const std::vector<std::tuple<VertexId, VertexId, double>>& es) {
  GraphBuilder b;
  for (auto [u, v, w] : es) b.add_edge(u, v, w);
  return b.build();
}

}  // namespace

TEST_CASE("bip3: K_{2,4} within |B| + |A|^2 in two rounds") {
  Graph g = complete_bipartite(2, 4);
  RoundLedger L;
  Spanner h = bipartite_3_spanner(g, sides_by_id(g, 2), SimConfig{}, &L);
  CHECK(h.size() <= 4 + 2 * 2);
  // all four stars pick A-vertex 0; vertex 1 then links to B-vertex 2 only
  CHECK(h.size() == 5);
  CHECK(h.contains(g.at(1), g.at(2)));
  CHECK(max_edge_stretch(h) == 3.0);
  CHECK(L.rounds_used == 2);
}

TEST_CASE("bip3: B vertex without A neighbors adds nothing") {
  GraphBuilder b;
  b.add_edge(0, 10);
  b.add_edge(11, 12);  // B-B edge, ignored
  b.add_vertex(13);
  Graph g = b.build();
  Spanner h = bipartite_3_spanner(g, sides_by_id(g, 10), SimConfig{});
  CHECK(h.size() == 1);
  CHECK(h.contains(g.at(0), g.at(10)));
}

TEST_CASE("bip3: B vertex picks its closest A neighbor, ties to the smaller ID") {
  Graph g = weighted_from({{0, 10, 5}, {1, 10, 2}, {2, 11, 3}, {3, 11, 3}});
  Spanner h = bipartite_3_spanner(g, sides_by_id(g, 10), SimConfig{});
  CHECK(h.tag(g.edge_index(g.at(1), g.at(10))) == "bip3-star");
  CHECK(h.tag(g.edge_index(g.at(2), g.at(11))) == "bip3-star");
  // vertex 0 hears center 1 from 10 and links to it: the only way to cover {0,10}
  CHECK(h.tag(g.edge_index(g.at(0), g.at(10))) == "bip3-link");
  CHECK(h.tag(g.edge_index(g.at(3), g.at(11))) == "bip3-link");
  CHECK(max_edge_stretch(h) <= 3.0);
}

TEST_CASE("bip3: the A side links to the closest member of each star") {
  // 10 and 11 both pick A-vertex 1 (weight 1). Vertex 0 sees center 1 via
  // 10 (w 4) and 11 (w 2) and keeps only the lighter one.
  Graph g = weighted_from({{1, 10, 1}, {1, 11, 1}, {0, 10, 4}, {0, 11, 2}});
  Spanner h = bipartite_3_spanner(g, sides_by_id(g, 10), SimConfig{});
  CHECK(h.contains(g.at(0), g.at(11)));
  CHECK_FALSE(h.contains(g.at(0), g.at(10)));
  CHECK(h.size() == 3);
  CHECK(max_edge_stretch(h) <= 3.0 + 1e-9);
}

TEST_CASE("bip3: random bipartite instances, unweighted and weighted") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (bool weighted : {false, true}) {
      Graph g = random_bipartite(10, 60, 0.3, seed);
      if (weighted) g = with_random_weights(g, seed + 100);
      RoundLedger L;
      Spanner h = bipartite_3_spanner(g, sides_by_id(g, 10), SimConfig{}, &L);
      CHECK(L.rounds_used == 2);
      CHECK(L.violations.empty());
      CHECK(h.size() <= 60 + 10 * 10);
      CHECK(max_edge_stretch(h) <= 3.0 + 1e-9);
    }
  }
}

TEST_CASE("bip3: overlapping sides are rejected") {
  Graph g = complete_bipartite(2, 2);
  Bipartition p{{0, 1}, {1, 2, 3}};
  CHECK_THROWS_AS(bipartite_3_spanner(g, p, SimConfig{}), PreconditionError);
}

TEST_CASE("high-degree partition: nothing to do when all degrees are small") {
  Graph g = cycle_graph(25);  // degree 2 < 5
  RoundLedger L;
  auto hp = partition_high_degree(g, SimConfig{}, &L);
  CHECK(hp.threshold == 5);
  CHECK(hp.parts.empty());
  CHECK(L.rounds_used == 0);
}

TEST_CASE("high-degree partition: K16 and the star K_{1,100}") {
  auto hp = partition_high_degree(complete_graph(16), SimConfig{});
  CHECK(hp.high.size() == 16);
  std::set<Vertex> seen;
  for (auto& p : hp.parts) {
    CHECK(p.size() <= 8);
    for (Vertex v : p) CHECK(seen.insert(v).second);
  }
  CHECK(seen.size() == 16);
  // single ruler, one cluster of weight 16, B = 4: parts weigh in [4,8]
  CHECK(hp.rulers.size() == 1);
  CHECK(hp.parts.size() >= 2);
  CHECK(hp.parts.size() <= 4);

  Graph star = complete_bipartite(1, 100);
  auto hs = partition_high_degree(star, SimConfig{});
  CHECK(hs.threshold == 11);
  REQUIRE(hs.parts.size() == 1);
  CHECK(hs.parts[0] == std::vector<Vertex>{star.at(0)});
}

TEST_CASE("high-degree partition: parts cover V_h with the size bounds") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Graph g = erdos_renyi(120, 0.15, seed);
    RoundLedger L;
    auto hp = partition_high_degree(g, SimConfig{}, &L);
    const int sq = static_cast<int>(std::ceil(std::sqrt(120.0)));
    std::set<Vertex> seen;
    for (auto& p : hp.parts) {
      CHECK(!p.empty());
      CHECK(static_cast<int>(p.size()) <= 2 * sq);
      for (Vertex v : p) CHECK(seen.insert(v).second);
    }
    CHECK(seen == std::set<Vertex>(hp.high.begin(), hp.high.end()));
    // at most one light part per cluster, every other part holds >= floor(sqrt n)
    CHECK(hp.parts.size() <= hp.high.size() / 10 + hp.rulers.size());
    CHECK(L.violations.empty());
  }
}

TEST_CASE("given partition: one part is the whole graph") {
  Graph g = erdos_renyi(12, 0.5, 3);
  std::vector<Vertex> all;
  for (Vertex v = 0; v < g.n(); ++v) all.push_back(v);
  ThreeSpannerStats st;
  Spanner h = three_spanner_given_partition(g, {all}, SimConfig{}, nullptr, {}, &st);
  CHECK(h.size() == g.m());
  CHECK(st.max_instances_per_edge == 0);
}

TEST_CASE("given partition: two parts on K4") {
  Graph g = complete_graph(4);
  ThreeSpannerStats st;
  RoundLedger L;
  Spanner h = three_spanner_given_partition(g, {{0, 1}, {2, 3}}, SimConfig{}, &L, {}, &st);
  CHECK(max_edge_stretch(h) <= 3.0);
  CHECK(h.contains(0, 1));
  CHECK(h.contains(2, 3));
  CHECK(st.max_instances_per_edge == 2);
  CHECK(st.announce_rounds == 1);
  CHECK(L.rounds_used == 3);
  CHECK(L.max_edge_load <= 2);
}

TEST_CASE("given partition: overlapping parts are rejected") {
  Graph g = complete_graph(4);
  CHECK_THROWS_AS(three_spanner_given_partition(g, {{0, 1}, {1, 2}}, SimConfig{}), PreconditionError);
}

TEST_CASE("given partition: G(60,0.2) with the computed partition") {
  Graph g = erdos_renyi(60, 0.2, 7);
  auto hp = partition_high_degree(g, SimConfig{});
  Spanner h = three_spanner_given_partition(g, hp.parts, SimConfig{});
  std::vector<char> covered(g.n(), 0);
  for (auto& p : hp.parts)
    for (Vertex v : p) covered[v] = 1;
  CHECK(max_edge_stretch(h, [&](const Edge& e) { return covered[e.u] || covered[e.v]; }) <= 3.0);
  // first-run pin: 333 edges, c ~ 0.72 against 60^1.5
  CHECK(h.size() == 333);
}

TEST_CASE("improved 3-spanner: trees are kept whole") {
  Rng rng(5);
  for (int n : {2, 10, 50, 200}) {
    GraphBuilder b;
    b.add_vertex(0);
    for (int i = 1; i < n; ++i) b.add_edge(rng.below(i), i);
    Graph t = b.build();
    Spanner h = improved_3_spanner(t, SimConfig{});
    // a star center may be high-degree, but a tree has no cycles to drop edges on
    CHECK(h.size() == t.m());
  }
}

TEST_CASE("improved 3-spanner: K16 and random graphs") {
  Graph k16 = complete_graph(16);
  RoundLedger L;
  Improved3Stats st;
  Spanner h = improved_3_spanner(k16, SimConfig{}, &L, &st);
  CHECK(max_edge_stretch(h) <= 3.0);
  CHECK(h.size() <= 2 * 64);
  CHECK(L.violations.empty());
  CHECK(st.given.max_instances_per_edge <= 2);

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (double p : {0.05, 0.2, 0.5}) {
      Graph g = erdos_renyi(80, p, seed);
      RoundLedger l2;
      Spanner hg = improved_3_spanner(g, SimConfig{}, &l2);
      CHECK(max_edge_stretch(hg) <= 3.0);
      CHECK(l2.violations.empty());
      double lg = std::log2(80.0);
      CHECK(l2.rounds_used <= 4 * lg * lg);
    }
  }
}

TEST_CASE("improved 3-spanner: weighted G(50,0.3)") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph g = with_random_weights(erdos_renyi(50, 0.3, seed), seed);
    Spanner h = improved_3_spanner(g, SimConfig{});
    CHECK(max_edge_stretch(h) <= 3.0 + 1e-9);
  }
}

TEST_CASE("small-ID: IDs 1..64 give 8 parts of 8") {
  std::map<long, int> cnt;
  for (VertexId id = 1; id <= 64; ++id) ++cnt[small_id_part(id, 64)];
  CHECK(cnt.size() == 8);
  for (auto [p, c] : cnt) CHECK(c == 8);
  CHECK(small_id_part(1, 64) == 0);
  CHECK(small_id_part(8, 64) == 0);
  CHECK(small_id_part(9, 64) == 1);
  CHECK(small_id_part(64, 64) == 7);
}

TEST_CASE("small-ID: exactly two rounds and stretch 3") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = bounded_id(100, 0.15, seed);
    RoundLedger L;
    ThreeSpannerStats st;
    Spanner h = small_id_3_spanner(g, SimConfig{}, &L, &st);
    CHECK(L.rounds_used == 2);
    CHECK(L.violations.empty());
    CHECK(st.announce_rounds == 0);
    CHECK(st.max_instances_per_edge <= 2);
    CHECK(max_edge_stretch(h) <= 3.0);
  }
  Graph p = path_graph(64);  // IDs 0..63
  RoundLedger L;
  small_id_3_spanner(p, SimConfig{}, &L);
  CHECK(L.rounds_used == 2);
}

TEST_CASE("small-ID: oversized IDs are rejected by name") {
  GraphBuilder b;
  b.add_edge(1, 2);
  b.add_edge(2, 13);  // 13 > 4 * 3
  Graph g = b.build();
  try {
    small_id_3_spanner(g, SimConfig{});
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("13") != std::string::npos);
  }
}
