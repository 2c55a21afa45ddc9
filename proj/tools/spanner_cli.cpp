// spanner: generate or load a graph, run one construction, verify it and
// write the reports.
//
//   spanner run --alg improved --k 4 --gen er:n=200,p=0.05 --out run.json
//   spanner verify --graph g.txt --spanner h.txt --t 7
//
// run writes <out> (report JSON), <stem>.edges (spanner edge list) and
// <stem>.csv (n,m,k,|H|,rounds,max_bits,max_stretch).

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spanner/errors.hpp"
#include "spanner/generators.hpp"
#include "spanner/io.hpp"
#include "spanner/spanner3.hpp"
#include "spanner/spanner_k.hpp"
#include "spanner/verify.hpp"

using namespace spanner;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kVerifyFail = 1, kUsage = 2, kIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kAlgs = {"naive",  "sparserbip", "improved", "zerosc",  "bs-baseline",
                                        "imp3",   "bip3",       "small-id", "naive-bfs-zero"};

bool fixed_k(const std::string& alg) { return alg == "imp3" || alg == "bip3" || alg == "small-id"; }

// A = IDs below `split`, or else a 2-coloring with each component's
// smallest ID on the A side.
Bipartition sides(const Graph& g, std::optional<VertexId> split) {
  Bipartition p;
  if (split) {
    for (Vertex v = 0; v < g.n(); ++v) (g.id(v) < *split ? p.A : p.B).push_back(v);
    return p;
  }
  std::vector<int> col(g.n(), -1);
  for (Vertex s = 0; s < g.n(); ++s) {
    if (col[s] >= 0) continue;
    col[s] = 0;
    std::deque<Vertex> q{s};
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      for (Vertex y : g.nbrs(x)) {
        if (col[y] < 0) col[y] = 1 - col[x], q.push_back(y);
        else if (col[y] == col[x])
          throw UsageError("graph is not bipartite; pass --split to choose the A side");
      }
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) (col[v] == 0 ? p.A : p.B).push_back(v);
  return p;
}

// A x B edges of g, on all of g's vertices.
Graph cross_graph(const Graph& g, const Bipartition& p) {
  std::vector<char> in_a(g.n(), 0);
  for (Vertex v : p.A) in_a[v] = 1;
  GraphBuilder b;
  for (Vertex v = 0; v < g.n(); ++v) b.add_vertex(g.id(v));
  for (const Edge& e : g.edges())
    if (in_a[e.u] != in_a[e.v]) {
      if (g.weighted()) b.add_edge(g.id(e.u), g.id(e.v), e.w);
      else b.add_edge(g.id(e.u), g.id(e.v));
    }
  return b.build();
}

std::string stem_of(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size());
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

struct RunArgs {
  std::string alg;
  int k = 0;
  std::string gen, graph, out;
  bool weighted = false;
  std::uint64_t seed = 1;
  int msg_bits = 0;
  bool audit = false;
  long max_rounds = 0;
  std::optional<VertexId> split;
  bool k_given = false;
  std::string save_graph;
};

int do_run(const RunArgs& a) {
  if (std::find(kAlgs.begin(), kAlgs.end(), a.alg) == kAlgs.end())
    throw UsageError("unknown algorithm '" + a.alg + "'");
  if (a.gen.empty() == a.graph.empty()) throw UsageError("give exactly one of --gen or --graph");
  int k = a.k;
  if (fixed_k(a.alg)) {
    if (a.k_given && a.k != 2) std::cerr << "warning: --k ignored, " << a.alg << " always builds a 3-spanner\n";
    k = 2;
  } else if (!a.k_given) {
    throw UsageError(a.alg + " needs --k");
  }
  if (k < 2) throw UsageError("k must be >= 2");

  Graph g;
  try {
    g = a.gen.empty() ? load(a.graph) : generate(parse_gen_spec(a.gen), a.seed, a.weighted);
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!a.save_graph.empty()) save(g, a.save_graph);
  if (g.weighted() && k > 2) throw UsageError("weighted graphs are only supported for k <= 2");

  SimConfig cfg;
  cfg.msg_bit_budget = a.msg_bits;
  cfg.strict = !a.audit;
  if (a.max_rounds > 0) cfg.max_rounds = a.max_rounds;

  RoundLedger led;
  json stats = json::object();
  std::optional<Spanner> h;
  Graph scope = g;  // edges the spanner must take care of
  const double t = 2.0 * k - 1;

  if (a.alg == "naive") {
    NaiveStats st;
    h.emplace(naive_spanner(g, k, cfg, &led, &st));
    stats = st.to_json();
  } else if (a.alg == "improved" || a.alg == "naive-bfs-zero") {
    ImprovedStats st;
    ImprovedOptions opt;
    if (a.alg == "naive-bfs-zero") opt.zero = ZeroMode::Bfs;
    h.emplace(improved_spanner(g, k, cfg, &led, &st, opt));
    stats = st.to_json();
    json audits = json::array();
    for (const Superclustering& sc : st.levels) audits.push_back(audit_superclustering(g, sc).to_json());
    stats["audits"] = audits;
  } else if (a.alg == "zerosc") {
    ZeroStats st;
    ZeroResult z = cons_zero_superclustering(g, k, cfg, &led, &st);
    stats = st.to_json();
    stats["superclustering"] = superclustering_json(g, z.sc);
    stats["audit"] = audit_superclustering(g, z.sc).to_json();
    // only edges at uncovered vertices are owed; H' itself is added so the
    // check sees a supergraph of it
    GraphBuilder b;
    for (Vertex v = 0; v < g.n(); ++v) b.add_vertex(g.id(v));
    for (int e = 0; e < g.m(); ++e) {
      const Edge& ed = g.edge(e);
      if (z.h.contains(e) || z.sc.clustering.center[ed.u] == kNoVertex ||
          z.sc.clustering.center[ed.v] == kNoVertex)
        b.add_edge(g.id(ed.u), g.id(ed.v));
    }
    scope = b.build();
    h.emplace(std::move(z.h));
  } else if (a.alg == "bs-baseline") {
    h.emplace(baswana_sen_baseline(g, k, a.seed));
  } else if (a.alg == "sparserbip" || a.alg == "bip3") {
    Bipartition p = sides(g, a.split);
    if (a.alg == "bip3") {
      h.emplace(bipartite_3_spanner(g, p, cfg, &led));
    } else {
      BipartiteStats st;
      h.emplace(sparser_bipartite_spanner(g, p, k, cfg, &led, &st));
      stats = st.to_json();
    }
    stats["A"] = p.A.size();
    stats["B"] = p.B.size();
    scope = cross_graph(g, p);
  } else if (a.alg == "imp3") {
    Improved3Stats st;
    h.emplace(improved_3_spanner(g, cfg, &led, &st));
    stats = {{"parts", st.given.parts}, {"max_instances_per_edge", st.given.max_instances_per_edge}};
  } else if (a.alg == "small-id") {
    ThreeSpannerStats st;
    h.emplace(small_id_3_spanner(g, cfg, &led, &st));
    stats = {{"parts", st.parts}, {"max_instances_per_edge", st.max_instances_per_edge}};
  }

  StretchReport rep = verify_stretch(scope, h->as_graph(), t);
  const bool ok = rep.pass && (a.audit || led.violations.empty());

  json report = {{"algorithm", a.alg},
                 {"k", k},
                 {"seed", a.seed},
                 {"graph", {{"n", g.n()}, {"m", g.m()}, {"weighted", g.weighted()}}},
                 {"spanner_edges", h->size()},
                 {"tags", h->tag_histogram()},
                 {"stretch", rep.to_json()},
                 {"ledger", led.to_json()},
                 {"stats", stats},
                 {"pass", ok}};
  const std::string stem = stem_of(a.out);
  write_file(a.out, report.dump(2) + "\n");
  write_file(stem + ".edges", format_edge_list(h->as_graph()));
  std::ostringstream csv;
  csv << "n,m,k,H,rounds,max_bits,max_stretch\n"
      << g.n() << ',' << g.m() << ',' << k << ',' << h->size() << ',' << led.rounds_used << ','
      << led.max_bits_seen << ',' << rep.max_stretch << '\n';
  write_file(stem + ".csv", csv.str());

  std::cout << a.alg << ": n=" << g.n() << " m=" << g.m() << " |H|=" << h->size()
            << " rounds=" << led.rounds_used << " max_stretch=" << rep.max_stretch
            << (ok ? " PASS" : " FAIL") << "\n";
  return ok ? kPass : kVerifyFail;
}

int do_verify(const std::string& gpath, const std::string& hpath, int t) {
  if (t < 1) throw UsageError("--t must be >= 1");
  Graph g = load(gpath);
  Graph h = load(hpath);
  StretchReport rep;
  try {
    rep = verify_stretch(g, h, t);
  } catch (const VerifyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFail;
  }
  std::cout << rep.to_json().dump(2) << "\n";
  return rep.pass ? kPass : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed spanner constructions under a CONGEST simulator"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "build a spanner, verify it, write reports");
  run->add_option("--alg", ra.alg, "naive|sparserbip|improved|zerosc|bs-baseline|imp3|bip3|small-id|naive-bfs-zero")
      ->required();
  auto* kopt = run->add_option("--k", ra.k, "stretch parameter, spanner stretch is 2k-1");
  run->add_option("--gen", ra.gen, "generator spec kind:key=val,...\n" + gen_spec_help());
  run->add_option("--graph", ra.graph, "edge-list file");
  run->add_flag("--weighted", ra.weighted, "random integer weights on generated graphs");
  run->add_option("--seed", ra.seed, "generator and baseline seed");
  run->add_option("--msg-bits", ra.msg_bits, "message bit budget, default ceil(8 log2 n)");
  run->add_flag("--audit", ra.audit, "record budget violations instead of failing");
  run->add_option("--max-rounds", ra.max_rounds, "round cap per simulated program");
  VertexId split = 0;
  auto* sopt = run->add_option("--split", split, "sparserbip/bip3: A = vertices with ID below this");
  run->add_option("--out", ra.out, "report JSON path")->required();
  run->add_option("--save-graph", ra.save_graph, "also write the input graph as an edge list");

  std::string gpath, hpath;
  int t = 0;
  auto* ver = app.add_subcommand("verify", "check the stretch of a spanner file");
  ver->add_option("--graph", gpath)->required();
  ver->add_option("--spanner", hpath)->required();
  ver->add_option("--t", t)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*run) {
      ra.k_given = kopt->count() > 0;
      if (sopt->count()) ra.split = split;
      return do_run(ra);
    }
    return do_verify(gpath, hpath, t);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const BudgetError& e) {
    std::cerr << "budget violation: " << e.what() << "\n";
    return kVerifyFail;
  } catch (const TimeoutError& e) {
    std::cerr << "round cap: " << e.what() << "\n";
    return kVerifyFail;
  }
}
