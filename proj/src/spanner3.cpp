#include "spanner/spanner3.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "spanner/errors.hpp"
#include "spanner/primitives.hpp"

namespace spanner {

namespace {

constexpr long kNoPart = -1;

std::pair<double, VertexId> closeness(const Graph& g, Vertex v, size_t i) {
  return {g.weight(g.eids(v)[i]), g.id(g.nbrs(v)[i])};
}

// All bipartite instances (V_j, V \ V_j) at once. Round 1: every vertex picks
// its closest neighbor in each foreign part and tells that part's neighbors
// which center it chose. Round 2: part vertices add one edge per announced
// star and notify the chosen endpoint.
class ParallelBip3 : public NodeProgram {
 public:
  ParallelBip3(const std::vector<long>& part, const std::vector<std::vector<long>>& nbr_part,
               Spanner& h, bool internal)
      : part_(part), nbr_part_(nbr_part), h_(h), internal_(internal) {}
  std::string name() const override { return "bipartite-3"; }
  void setup(const SimContext& ctx) override { g_ = &ctx.g; }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    const Graph& g = *g_;
    auto nb = g.nbrs(v);
    if (step == 0) {
      std::map<long, size_t> best;  // part -> neighbor slot
      for (size_t i = 0; i < nb.size(); ++i) {
        long j = nbr_part_[v][i];
        if (j == kNoPart) continue;
        if (j == part_[v]) {
          if (internal_) h_.add_edge(g.eids(v)[i], "internal");
          continue;
        }
        auto it = best.find(j);
        if (it == best.end() || closeness(g, v, i) < closeness(g, v, it->second)) best[j] = i;
      }
      for (auto [j, i] : best) h_.add_edge(g.eids(v)[i], "bip3-star");
      for (size_t i = 0; i < nb.size(); ++i) {
        long j = nbr_part_[v][i];
        if (j == kNoPart || j == part_[v]) continue;
        Message m('C');
        m.id(g.id(nb[best.at(j)]));
        out.send(nb[i], m);
      }
    } else if (step == 1 && part_[v] != kNoPart) {
      std::map<VertexId, std::pair<std::pair<double, VertexId>, Vertex>> pick;
      for (const Incoming& m : in) {
        VertexId z = m.msg.id_at(0);
        if (z == g.id(v)) continue;
        int e = g.edge_index(v, m.from);
        std::pair<double, VertexId> key{g.weight(e), g.id(m.from)};
        auto it = pick.find(z);
        if (it == pick.end() || key < it->second.first) pick[z] = {key, m.from};
      }
      for (auto& [z, kb] : pick) {
        h_.add(v, kb.second, "bip3-link");
        out.send(kb.second, Message('K'));
      }
    }
    return step >= 2;
  }

 private:
  const Graph* g_ = nullptr;
  const std::vector<long>& part_;
  const std::vector<std::vector<long>>& nbr_part_;
  Spanner& h_;
  bool internal_;
};

// One round: every part member tells its neighbors which part it is in.
class AnnouncePart : public NodeProgram {
 public:
  explicit AnnouncePart(const std::vector<long>& part) : part_(part) {}
  std::string name() const override { return "announce-part"; }
  void setup(const SimContext& ctx) override {
    g_ = &ctx.g;
    nbr_part.assign(ctx.g.n(), {});
  }
  void init(Vertex v) override { nbr_part[v].assign(g_->degree(v), kNoPart); }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    if (step == 0 && part_[v] != kNoPart) {
      Message m('P');
      m.count(part_[v]);
      out.send_all(m);
    }
    auto nb = g_->nbrs(v);
    for (const Incoming& m : in) {
      size_t i = std::lower_bound(nb.begin(), nb.end(), m.from) - nb.begin();
      nbr_part[v][i] = m.msg[0];
    }
    return true;
  }
  std::vector<std::vector<long>> nbr_part;

 private:
  const Graph* g_ = nullptr;
  const std::vector<long>& part_;
};

int isqrt_ceil(int n) {
  int s = 0;
  while (s * s < n) ++s;
  return s;
}

int isqrt_floor(int n) {
  int s = 0;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

}  // namespace

Spanner bipartite_3_spanner(const Graph& g, const Bipartition& part, const SimConfig& cfg,
                            RoundLedger* led) {
  std::vector<char> side(g.n(), 0);  // 1 = A, 2 = B
  for (Vertex a : part.A) side.at(a) = 1;
  for (Vertex b : part.B) {
    if (side.at(b) != 0) throw PreconditionError("bipartition sides overlap");
    side[b] = 2;
  }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.n(); ++v)
    if (side[v]) keep.push_back(v);
  std::vector<Vertex> to_parent;
  Graph sub = g.filtered(
      keep, [&](const Edge& e) { return side[e.u] + side[e.v] == 3; }, &to_parent);
  // inside the bipartite instance every neighbor is on the other side
  std::vector<long> p(sub.n(), kNoPart);
  std::vector<std::vector<long>> nbr(sub.n());
  for (Vertex s = 0; s < sub.n(); ++s) {
    bool is_a = side[to_parent[s]] == 1;
    if (is_a) p[s] = 0;
    nbr[s].assign(sub.degree(s), is_a ? kNoPart : 0);
  }
  SimConfig c = cfg.resolved(g);
  Spanner hs(sub);
  ParallelBip3 prog(p, nbr, hs, false);
  RoundLedger L = run(sub, prog, c);
  if (led) led->append(L);
  Spanner h(g);
  for (int e : hs.edge_list()) {
    const Edge& ed = sub.edge(e);
    h.add(to_parent[ed.u], to_parent[ed.v], hs.tag(e));
  }
  return h;
}

HighDegreePartition partition_high_degree(const Graph& g, const SimConfig& cfg, RoundLedger* led) {
  HighDegreePartition out;
  out.threshold = isqrt_ceil(g.n());
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) >= out.threshold) out.high.push_back(v);
  if (out.high.empty()) return out;

  RulingStats rs;
  out.rulers = ruling_set_log(g, out.high, cfg, led, &rs);
  // every high vertex is within 3 * id_bits hops of a ruler
  Clustering c = grow_bfs_clusters(g, out.rulers, 3 * rs.id_bits, cfg, led);

  std::vector<char> is_high(g.n(), 0);
  for (Vertex v : out.high) is_high[v] = 1;
  std::vector<WeightedTree> wts;
  for (RootedTree& t : c.trees()) {
    WeightedTree wt;
    for (Vertex x : t.nodes) wt.weight.push_back(is_high[x]);
    wt.tree = std::move(t);
    wt.bound = std::max(1, isqrt_floor(g.n()));
    wts.push_back(std::move(wt));
  }
  auto parts = partition_forest(g, wts, cfg, led);
  for (const auto& tp : parts)
    for (const auto& p : tp.parts) {
      std::vector<Vertex> mem;
      for (Vertex x : p.owned)
        if (is_high[x]) mem.push_back(x);
      if (mem.empty()) continue;
      out.parts.push_back(std::move(mem));
      out.labels.emplace_back(p.creator, p.index);
    }
  return out;
}

Spanner three_spanner_given_partition(const Graph& g, const std::vector<std::vector<Vertex>>& parts,
                                      const SimConfig& cfg, RoundLedger* led,
                                      std::function<long(VertexId)> part_of_id,
                                      ThreeSpannerStats* stats) {
  std::vector<long> part(g.n(), kNoPart);
  std::set<long> used;
  for (size_t j = 0; j < parts.size(); ++j) {
    long label = static_cast<long>(j);
    if (part_of_id && !parts[j].empty()) label = part_of_id(g.id(parts[j][0]));
    if (!used.insert(label).second) throw PreconditionError("two parts share a label");
    for (Vertex v : parts[j]) {
      if (part.at(v) != kNoPart) throw PreconditionError("parts overlap at vertex " + std::to_string(g.id(v)));
      if (part_of_id && part_of_id(g.id(v)) != label)
        throw PreconditionError("part labels disagree with the ID rule");
      part[v] = label;
    }
  }

  SimConfig c = cfg.resolved(g);
  // an edge lies in at most two bipartite instances, one per endpoint's part
  c.congestion_factor = std::max(c.congestion_factor, 2);
  Engine eng(g, c);
  RoundLedger L;

  std::vector<std::vector<long>> nbr(g.n());
  long announce = 0;
  if (part_of_id) {
    for (Vertex v = 0; v < g.n(); ++v)
      for (Vertex u : g.nbrs(v)) nbr[v].push_back(part[u] == kNoPart ? kNoPart : part_of_id(g.id(u)));
  } else {
    AnnouncePart ap(part);
    RoundLedger a = eng.run(ap, {});
    announce = a.rounds_used;
    L.append(a);
    nbr = std::move(ap.nbr_part);
  }

  Spanner h(g);
  ParallelBip3 prog(part, nbr, h, true);
  L.append(eng.run(prog, {}));
  if (led) led->append(L);

  if (stats) {
    *stats = {};
    stats->parts = static_cast<int>(parts.size());
    for (const auto& p : parts) stats->largest_part = std::max(stats->largest_part, static_cast<int>(p.size()));
    for (const Edge& e : g.edges()) {
      long pu = part[e.u], pv = part[e.v];
      int cnt = (pu != kNoPart && pu != pv) + (pv != kNoPart && pv != pu);
      stats->max_instances_per_edge = std::max(stats->max_instances_per_edge, cnt);
    }
    stats->announce_rounds = announce;
  }
  return h;
}

Spanner improved_3_spanner(const Graph& g, const SimConfig& cfg, RoundLedger* led,
                           Improved3Stats* stats) {
  Spanner h(g);
  const int thr = isqrt_ceil(g.n());
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) < thr)
      for (int e : g.eids(v)) h.add_edge(e, "low-degree");

  RoundLedger L;
  HighDegreePartition hp = partition_high_degree(g, cfg, &L);
  ThreeSpannerStats ts;
  if (!hp.parts.empty()) h.merge(three_spanner_given_partition(g, hp.parts, cfg, &L, {}, &ts));
  if (led) led->append(L);
  if (stats) {
    stats->partition = std::move(hp);
    stats->given = ts;
  }
  return h;
}

long small_id_part(VertexId id, int n) {
  int h = (ceil_log2(static_cast<std::uint64_t>(std::max(n, 1))) + 1) / 2;
  if (id == 0) return 0;
  return static_cast<long>((id - 1) >> h);
}

Spanner small_id_3_spanner(const Graph& g, const SimConfig& cfg, RoundLedger* led,
                           ThreeSpannerStats* stats) {
  const int n = g.n();
  for (VertexId id : g.ids())
    if (id > static_cast<VertexId>(kSmallIdFactor) * static_cast<VertexId>(n))
      throw PreconditionError("vertex ID " + std::to_string(id) + " exceeds " +
                              std::to_string(kSmallIdFactor) + "n = " + std::to_string(kSmallIdFactor * n));
  std::map<long, std::vector<Vertex>> by;
  for (Vertex v = 0; v < n; ++v) by[small_id_part(g.id(v), n)].push_back(v);
  std::vector<std::vector<Vertex>> parts;
  for (auto& [_, vs] : by) parts.push_back(std::move(vs));
  return three_spanner_given_partition(
      g, parts, cfg, led, [n](VertexId id) { return small_id_part(id, n); }, stats);
}

}  // namespace spanner
