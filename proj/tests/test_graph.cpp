#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "spanner/generators.hpp"
#include "spanner/graph.hpp"
#include "spanner/io.hpp"

using namespace spanner;

namespace {

// O(n*m) relaxation, independent of the queue-based BFS.
std::vector<int> relax_dist(const Graph& g, Vertex s) {
  const int inf = 1 << 29;
  std::vector<int> d(g.n(), inf);
  d[s] = 0;
  for (int it = 0; it < g.n(); ++it) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      if (d[e.u] + 1 < d[e.v]) d[e.v] = d[e.u] + 1, changed = true;
      if (d[e.v] + 1 < d[e.u]) d[e.u] = d[e.v] + 1, changed = true;
    }
    if (!changed) break;
  }
  for (int& x : d)
    if (x == inf) x = -1;
  return d;
}

std::vector<Graph> small_corpus() {
  std::vector<Graph> c;
  c.push_back(path_graph(1));
  c.push_back(path_graph(17));
  c.push_back(cycle_graph(9));
  c.push_back(grid_graph(5, 7));
  c.push_back(complete_graph(12));
  c.push_back(complete_bipartite(3, 5));
  c.push_back(hypercube(5));
  for (std::uint64_t s = 0; s < 6; ++s) {
    c.push_back(erdos_renyi(40 + 20 * static_cast<int>(s), 0.05, s));
    c.push_back(random_bipartite(10, 30, 0.2, s));
    c.push_back(bounded_id(50, 0.08, s));
  }
  return c;
}

}  // namespace

TEST_CASE("generator examples") {
  Graph k4 = generate(parse_gen_spec("complete:n=4"), 0);
  CHECK(k4.n() == 4);
  CHECK(k4.m() == 6);
  Graph k24 = generate(parse_gen_spec("complete-bipartite:a=2,b=4"), 0);
  CHECK(k24.m() == 8);
  Graph er = generate(parse_gen_spec("er:n=100,p=0.1"), 7);
  CHECK(er.m() == 481);  // pinned from the first deterministic run
}

TEST_CASE("generators are deterministic and valid") {
  for (std::uint64_t s : {1u, 2u, 99u}) {
    CHECK(erdos_renyi(60, 0.1, s) == erdos_renyi(60, 0.1, s));
    CHECK(bounded_id(60, 0.1, s) == bounded_id(60, 0.1, s));
  }
  CHECK_FALSE(erdos_renyi(60, 0.1, 1) == erdos_renyi(60, 0.1, 2));
  for (const Graph& g : small_corpus()) CHECK(validate(g).empty());
  CHECK(validate(with_random_weights(grid_graph(4, 4), 3)).empty());
}

TEST_CASE("bounded-id ids lie in [1,2n]") {
  Graph g = bounded_id(80, 0.1, 5);
  CHECK(g.n() == 80);
  for (VertexId id : g.ids()) {
    CHECK(id >= 1);
    CHECK(id <= 160);
  }
}

TEST_CASE("generator parameter errors") {
  CHECK_THROWS_AS(generate(parse_gen_spec("er:n=10,p=1.5"), 0), ParameterError);
  CHECK_THROWS_AS(generate(parse_gen_spec("er:n=10,p=-0.1"), 0), ParameterError);
  CHECK_THROWS_AS(erdos_renyi(10, 2.0, 0), ParameterError);
  CHECK_THROWS_AS(parse_gen_spec("nosuch:n=3"), ParameterError);
  CHECK_THROWS_AS(generate(parse_gen_spec("path:n=3,q=1"), 0), ParameterError);
  CHECK_THROWS_AS(generate(parse_gen_spec("path:n=x"), 0), ParameterError);
  CHECK_THROWS_AS(generate(parse_gen_spec("cycle:n=2"), 0), ParameterError);
}

TEST_CASE("graph builder rejects bad input") {
  GraphBuilder b;
  CHECK_THROWS_AS(b.add_edge(1, 1), GraphError);
  b.add_edge(1, 2);
  CHECK_THROWS_AS(b.add_edge(2, 1), GraphError);
  CHECK_THROWS_AS(b.add_edge(3, 4, -1.0), GraphError);
  GraphBuilder mix;
  mix.add_edge(1, 2);
  mix.add_edge(2, 3, 2.0);
  CHECK_THROWS_AS(mix.build(), GraphError);
}

TEST_CASE("neighbor lists sorted by id, symmetric") {
  GraphBuilder b;
  b.add_edge(50, 7);
  b.add_edge(7, 3);
  b.add_edge(50, 3);
  b.add_edge(9, 50);
  Graph g = b.build();
  CHECK(validate(g).empty());
  Vertex v50 = g.at(50);
  std::vector<VertexId> got;
  for (Vertex u : g.nbrs(v50)) got.push_back(g.id(u));
  CHECK(got == std::vector<VertexId>{3, 7, 9});
  CHECK_FALSE(g.find(4).has_value());
  CHECK_THROWS_AS(g.at(4), GraphError);
}

TEST_CASE("edge list round trip") {
  Graph k4 = complete_graph(4);
  CHECK(parse_edge_list(format_edge_list(k4)) == k4);

  Graph e = parse_edge_list("n=3\n");
  CHECK(e.n() == 3);
  CHECK(e.m() == 0);

  Graph w = parse_edge_list("# weighted\n0 1 2.5\n");
  CHECK(w.weighted());
  CHECK(w.m() == 1);
  CHECK(w.weight(0) == doctest::Approx(2.5));

  for (const Graph& g : small_corpus()) CHECK(parse_edge_list(format_edge_list(g)) == g);
  Graph wg = with_random_weights(bounded_id(30, 0.2, 4), 4);
  CHECK(parse_edge_list(format_edge_list(wg)) == wg);

  // isolated vertices outside the header range survive
  GraphBuilder b;
  b.add_vertex(100);
  b.add_edge(3, 8);
  Graph sparse = b.build();
  CHECK(parse_edge_list(format_edge_list(sparse)) == sparse);

  // canonical form: sorted by (u,v) whatever the input order
  Graph shuffled = parse_edge_list("n=4\n3 2\n1 0\n0 3\n");
  CHECK(format_edge_list(shuffled) == "n=4\n0 1\n0 3\n2 3\n");
}

TEST_CASE("file save and load") {
  auto path = std::filesystem::temp_directory_path() / "spanner_io_test.txt";
  Graph g = grid_graph(3, 4);
  save(g, path.string());
  CHECK(load(path.string()) == g);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load("/nonexistent/dir/file"), IoError);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_edge_list("n=3\n0 1\n0 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_edge_list("0 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1\n1 2 3.0\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1 -2\n"), ParseError);
}

TEST_CASE("bfs_dist examples") {
  Graph p = path_graph(4);
  auto d = bfs_dist_by_id(p, 0);
  CHECK(d == std::map<VertexId, int>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  auto dc = bfs_dist_by_id(p, 0, 2);
  CHECK(dc[3] == -1);
  CHECK(dc[2] == 2);

  Graph k24 = complete_bipartite(2, 4);
  auto db = bfs_dist_by_id(k24, 0);
  CHECK(db[1] == 2);
  for (VertexId b = 2; b < 6; ++b) CHECK(db[b] == 1);
  CHECK_THROWS_AS(bfs_dist_by_id(k24, 77), GraphError);
}

TEST_CASE("bfs_dist matches relaxation reference") {
  for (const Graph& g : small_corpus())
    for (Vertex s = 0; s < g.n(); s += 3) CHECK(bfs_dist(g, s) == relax_dist(g, s));
}

TEST_CASE("spanner edge set") {
  Graph g = cycle_graph(5);
  Spanner h(g);
  CHECK(h.add_by_id(0, 1, "a"));
  CHECK_FALSE(h.add_by_id(1, 0, "b"));
  CHECK_THROWS_AS(h.add_by_id(0, 2, "c"), GraphError);
  CHECK(h.size() == 1);
  CHECK(h.tag(h.edge_list()[0]) == "a");
  Graph hg = h.as_graph();
  CHECK(hg.n() == 5);
  CHECK(hg.m() == 1);
}
