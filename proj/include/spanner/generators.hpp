// Deterministic graph generators and the `kind:key=val,...` spec grammar.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "spanner/errors.hpp"
#include "spanner/graph.hpp"

namespace spanner {

// Small deterministic PRNG wrapper. Doubles are built from raw 64-bit
// output so sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                       // [0,1)
  std::uint64_t below(std::uint64_t k);   // [0,k)
 private:
  std::uint64_t s_[4];
};

std::uint64_t mix64(std::uint64_t x);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph grid_graph(int rows, int cols);
Graph complete_graph(int n);
// A side gets IDs 0..a-1, B side a..a+b-1.
Graph complete_bipartite(int a, int b);
Graph erdos_renyi(int n, double p, std::uint64_t seed);
Graph random_bipartite(int a, int b, double p, std::uint64_t seed);
Graph hypercube(int d);
// G(n,p) whose IDs are a seeded n-subset of [1, 2n].
Graph bounded_id(int n, double p, std::uint64_t seed);
// Same topology with integer weights drawn uniformly from [lo, hi].
Graph with_random_weights(const Graph& g, std::uint64_t seed, int lo = 1, int hi = 10);

struct GenSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

// "er:n=100,p=0.1" -> {kind="erdos-renyi", params={n:100, p:0.1}}
GenSpec parse_gen_spec(const std::string& text);
Graph generate(const GenSpec& spec, std::uint64_t seed, bool weighted = false);
std::string gen_spec_help();

}  // namespace spanner
