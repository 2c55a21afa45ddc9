#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spanner/generators.hpp"
#include "spanner/spanner3.hpp"
#include "spanner/verify.hpp"

using namespace spanner;

TEST_CASE("stretch: H = G") {
  Graph g = grid_graph(5, 6);
  Spanner h(g);
  for (int e = 0; e < g.m(); ++e) h.add_edge(e, "all");
  auto r = verify_stretch(h, 1);
  CHECK(r.pass);
  CHECK(r.max_stretch == 1.0);
  CHECK(r.edges_checked == g.m());
  CHECK(r.histogram.at(1) == g.m());
}

TEST_CASE("stretch: spanning path of C9 fails with 8") {
  Graph g = cycle_graph(9);
  Spanner h(g);
  for (int i = 0; i + 1 < 9; ++i) h.add(i, i + 1, "path");
  auto r = verify_stretch(h, 3);
  CHECK_FALSE(r.pass);
  CHECK(r.max_stretch == 8.0);
  CHECK(r.failures == 1);
  CHECK(r.worst_u == 0);
  CHECK(r.worst_v == 8);
  CHECK(r.to_json()["histogram"]["8"] == 1);
}

TEST_CASE("stretch: weighted boundary case is exactly t") {
  GraphBuilder b;
  b.add_edge(0, 1, 1);
  b.add_edge(1, 2, 1);
  b.add_edge(2, 3, 1);
  b.add_edge(0, 3, 1);
  b.add_edge(0, 2, 5);
  Graph g = b.build();
  Spanner h(g);
  h.add(0, 1, "x");
  h.add(1, 2, "x");
  h.add(2, 3, "x");
  auto r = verify_stretch(h, 3);
  CHECK(r.pass);
  CHECK(r.max_stretch == doctest::Approx(3.0));
  auto r2 = verify_stretch(h, 2.9);
  CHECK_FALSE(r2.pass);
}

TEST_CASE("stretch: disconnected edges and non-subgraphs") {
  Graph g = path_graph(3);
  Spanner h(g);
  h.add(0, 1, "x");
  auto r = verify_stretch(h, 5);
  CHECK_FALSE(r.pass);
  CHECK(std::isinf(r.max_stretch));
  CHECK(r.histogram.at(-1) == 1);
  CHECK(r.to_json()["max_stretch"] == "inf");

  Graph other = complete_graph(3);
  CHECK_THROWS_AS(verify_stretch(g, other, 3), VerifyError);
}

TEST_CASE("stretch: empty graph") {
  Graph g = GraphBuilder().build();
  Spanner h(g);
  auto r = verify_stretch(h, 3);
  CHECK(r.pass);
  CHECK(r.edges_checked == 0);
  CHECK(r.max_stretch == 0);
}

TEST_CASE("stretch: per-edge check agrees with Floyd-Warshall") {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Graph g = erdos_renyi(40 + static_cast<int>(seed), 0.15, seed);
    if (seed % 2) g = with_random_weights(g, seed);
    // a sparse random subgraph: many failures, varied stretch values
    Rng rng(seed);
    Spanner h(g);
    for (int e = 0; e < g.m(); ++e)
      if (rng.uniform() < 0.6) h.add_edge(e, "r");
    auto a = verify_stretch(h, 3);
    auto b = verify_stretch_all_pairs(g, h.as_graph(), 3);
    CHECK(a.max_stretch == b.per_edge.max_stretch);
    CHECK(a.histogram == b.per_edge.histogram);
    CHECK(a.failures == b.per_edge.failures);
    // the per-edge maximum bounds every pair
    CHECK(b.max_pair_stretch <= a.max_stretch + 1e-9);
    ++compared;
  }
  CHECK(compared == 30);
  CHECK_THROWS_AS(floyd_warshall(path_graph(121)), VerifyError);
}

TEST_CASE("audits do not touch their inputs") {
  Graph g = erdos_renyi(60, 0.2, 4);
  Spanner h = improved_3_spanner(g, SimConfig{});
  auto gh = graph_hash(g), hh = spanner_hash(h);
  verify_stretch(h, 3);
  verify_stretch_all_pairs(g, h.as_graph(), 3);
  CHECK(graph_hash(g) == gh);
  CHECK(spanner_hash(h) == hh);
  Spanner h2 = h;
  h2.add_edge(0, "extra");
  if (!h.contains(0)) CHECK(spanner_hash(h2) != hh);
}

TEST_CASE("ruling-set audit") {
  Graph p = path_graph(10);
  auto ok = audit_ruling_set(p, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {0, 4, 8}, 4, 2);
  CHECK(ok.pass());
  auto close = audit_ruling_set(p, {0, 1, 2, 3}, {0, 3}, 4, 2);
  CHECK(close.violations.size() == 1);
  auto far = audit_ruling_set(p, {0, 9}, {0}, 4, 3);
  CHECK(far.violations.size() == 1);
}

TEST_CASE("tree-partition audit flags a bad part") {
  Graph g = path_graph(4);
  WeightedTree wt;
  wt.tree.root = 0;
  wt.tree.nodes = {0, 1, 2, 3};
  wt.tree.parent = {kNoVertex, 0, 1, 2};
  wt.weight = {1, 1, 1, 1};
  wt.bound = 2;
  TreePartition good = partition_tree(g, wt, SimConfig{});
  CHECK(audit_tree_partition(g, wt, good).pass());
  TreePartition bad = good;
  bad.parts[0].owned.push_back(bad.parts[0].owned.front());
  CHECK_FALSE(audit_tree_partition(g, wt, bad).pass());
}

TEST_CASE("bound fitting") {
  auto f = fit_bounds({{1, 2}, {2, 4}}, "a*x", 2);
  CHECK(f.a == doctest::Approx(2.0));
  CHECK(f.max_ratio == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_bounds({{1, 2}, {2, 4}}, "a*x"), VerifyError);
  CHECK_THROWS_AS(fit_bounds({{0, 1}, {0, 2}}, "a*x", 2), VerifyError);
  auto ll = fit_loglog({{64, 8}, {256, 16}, {1024, 32}});
  CHECK(ll.exponent == doctest::Approx(0.5));
  CHECK(ll.coefficient == doctest::Approx(1.0));
}

namespace {

Supercluster sc_of(const Graph& g, std::vector<Vertex> centers, std::vector<Vertex> nodes,
                   std::vector<Vertex> parent) {
  Supercluster s;
  s.centers = centers;
  s.vertices = centers;
  s.singleton = centers.size() == 1;
  for (Vertex v : centers) s.id = std::max(s.id, g.id(v));
  s.tree.root = nodes.front();
  s.tree.nodes = std::move(nodes);
  s.tree.parent = std::move(parent);
  return s;
}

}  // namespace

TEST_CASE("superclustering audit: BFS-tree construction on P_50 passes") {
  Graph g = path_graph(50);
  Superclustering sc = bfs_zero_superclustering(g, 4, SimConfig{});
  const std::uint64_t before = graph_hash(g);
  AuditReport r = audit_superclustering(g, sc);
  CHECK_MESSAGE(r.pass(), (r.pass() ? "" : r.violations.front()));
  CHECK(graph_hash(g) == before);
}

TEST_CASE("superclustering audit: shared tree edge is an N3 violation") {
  Graph g = path_graph(6);
  Superclustering sc;
  sc.n = 6;
  sc.k = 4;
  sc.level = 0;
  sc.clustering = Clustering::singletons(6, {0, 1, 2, 3, 4, 5});
  sc.scs.push_back(sc_of(g, {0, 1, 2}, {1, 0, 2, 3}, {kNoVertex, 1, 1, 2}));
  sc.scs.push_back(sc_of(g, {3, 4, 5}, {4, 3, 5, 2}, {kNoVertex, 4, 4, 3}));
  AuditReport r = audit_superclustering(g, sc);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].rfind("N3: tree edge", 0) == 0);

  // same layout without the overlap
  sc.scs[0] = sc_of(g, {0, 1, 2}, {1, 0, 2}, {kNoVertex, 1, 1});
  CHECK(audit_superclustering(g, sc).pass());
}

TEST_CASE("superclustering audit: large singletons are allowed") {
  Graph g = path_graph(64);  // sqrt n = 8
  Clustering c = Clustering::empty(64, 1);
  c.depth_bound = 16;
  for (Vertex v = 0; v < 16; ++v) {
    c.center[v] = 0;
    c.parent[v] = v == 0 ? kNoVertex : v - 1;
    c.depth[v] = v;
  }
  Superclustering sc;
  sc.n = 64;
  sc.k = 4;
  sc.level = 1;
  sc.clustering = c;
  Supercluster s = sc_of(g, {0}, {0}, {kNoVertex});
  s.id = 15;
  for (Vertex v = 1; v < 16; ++v) s.vertices.push_back(v);
  sc.scs.push_back(s);
  CHECK(audit_superclustering(g, sc).pass());

  // a wrong singleton flag is reported
  sc.scs[0].singleton = false;
  CHECK_FALSE(audit_superclustering(g, sc).pass());
}
