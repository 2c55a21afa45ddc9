#include "spanner/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

namespace spanner {

// ---------------------------------------------------------------- trees

int RootedTree::height() const {
  std::unordered_map<Vertex, int> pos;
  for (int j = 0; j < size(); ++j) pos[nodes[j]] = j;
  std::vector<int> h(size(), -1);
  int best = 0;
  for (int j = 0; j < size(); ++j) {
    // walk up until a node with known height
    std::vector<int> path;
    int x = j;
    while (h[x] < 0 && parent[x] != kNoVertex) {
      path.push_back(x);
      x = pos.at(parent[x]);
    }
    if (h[x] < 0) h[x] = 0;
    int base = h[x];
    for (auto it = path.rbegin(); it != path.rend(); ++it) h[*it] = ++base;
    best = std::max(best, h[j]);
  }
  return best;
}

std::vector<int> RootedTree::edge_ids(const Graph& g) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (parent[j] != kNoVertex) out.push_back(g.edge_index(nodes[j], parent[j]));
  std::sort(out.begin(), out.end());
  return out;
}

std::string check_tree(const Graph& g, const RootedTree& t) {
  if (t.nodes.empty()) return "empty tree";
  if (t.parent.size() != t.nodes.size()) return "parent array size mismatch";
  if (t.nodes[0] != t.root || t.parent[0] != kNoVertex) return "nodes[0] must be the root";
  std::unordered_map<Vertex, int> pos;
  for (int j = 0; j < t.size(); ++j) {
    Vertex x = t.nodes[j];
    if (x < 0 || x >= g.n()) return "tree vertex outside graph";
    if (!pos.emplace(x, j).second) return "vertex repeated in tree";
  }
  for (int j = 1; j < t.size(); ++j) {
    Vertex p = t.parent[j];
    if (p == kNoVertex) return "second root in tree";
    if (!pos.count(p)) return "parent outside tree";
    if (!g.has_edge(t.nodes[j], p)) return "tree edge not in graph";
  }
  // every node must reach the root within size() steps
  for (int j = 0; j < t.size(); ++j) {
    int x = j;
    int steps = 0;
    while (t.parent[x] != kNoVertex && steps <= t.size()) {
      x = pos.at(t.parent[x]);
      ++steps;
    }
    if (t.parent[x] != kNoVertex) return "cycle in parent pointers";
  }
  return {};
}

// ---------------------------------------------------------------- clustering

Clustering Clustering::empty(int n, int level) {
  Clustering c;
  c.level = level;
  c.center.assign(n, kNoVertex);
  c.parent.assign(n, kNoVertex);
  c.depth.assign(n, -1);
  return c;
}

Clustering Clustering::singletons(int n, const std::vector<Vertex>& vs, int level) {
  Clustering c = empty(n, level);
  for (Vertex v : vs) {
    c.center[v] = v;
    c.depth[v] = 0;
  }
  return c;
}

std::vector<Vertex> Clustering::centers() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<Vertex>(center.size()); ++v)
    if (center[v] == v) out.push_back(v);
  return out;
}

std::vector<std::vector<Vertex>> Clustering::members() const {
  auto cs = centers();
  std::unordered_map<Vertex, int> idx;
  for (size_t i = 0; i < cs.size(); ++i) idx[cs[i]] = static_cast<int>(i);
  std::vector<std::vector<Vertex>> out(cs.size());
  for (Vertex v = 0; v < static_cast<Vertex>(center.size()); ++v)
    if (center[v] != kNoVertex) out[idx.at(center[v])].push_back(v);
  return out;
}

std::vector<RootedTree> Clustering::trees() const {
  auto cs = centers();
  auto ms = members();
  std::vector<RootedTree> out(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    RootedTree& t = out[i];
    t.root = cs[i];
    t.nodes.push_back(cs[i]);
    t.parent.push_back(kNoVertex);
    for (Vertex v : ms[i]) {
      if (v == cs[i]) continue;
      t.nodes.push_back(v);
      t.parent.push_back(parent[v]);
    }
  }
  return out;
}

int Clustering::max_depth() const {
  int d = 0;
  for (int x : depth) d = std::max(d, x);
  return d;
}

std::string check_clustering(const Graph& g, const Clustering& c) {
  const int n = g.n();
  if (static_cast<int>(c.center.size()) != n || static_cast<int>(c.parent.size()) != n ||
      static_cast<int>(c.depth.size()) != n)
    return "clustering arrays do not match graph size";
  for (Vertex v = 0; v < n; ++v) {
    Vertex z = c.center[v];
    if (z == kNoVertex) {
      if (c.parent[v] != kNoVertex || c.depth[v] != -1) return "unclustered vertex with tree data";
      continue;
    }
    if (z < 0 || z >= n || c.center[z] != z) return "center of " + std::to_string(g.id(v)) + " is not a center";
    if (v == z) {
      if (c.parent[v] != kNoVertex || c.depth[v] != 0) return "center with a parent";
      continue;
    }
    Vertex p = c.parent[v];
    if (p == kNoVertex || !g.has_edge(v, p)) return "bad tree parent at " + std::to_string(g.id(v));
    if (c.center[p] != z) return "tree parent in another cluster at " + std::to_string(g.id(v));
    if (c.depth[v] != c.depth[p] + 1) return "depth mismatch at " + std::to_string(g.id(v));
    if (c.depth[v] > c.depth_bound) return "tree deeper than bound at " + std::to_string(g.id(v));
  }
  return {};
}

// ---------------------------------------------------------------- forest index

namespace {

struct Slot {
  int tree;
  int node;
  Vertex parent;
  std::vector<Vertex> children;  // sorted
};

// Per-vertex memberships of a set of edge-disjoint trees. Because the trees
// share no edge, the neighbor a message arrives from identifies the tree.
struct ForestIndex {
  std::vector<std::vector<Slot>> at;

  ForestIndex(const Graph& g, const std::vector<RootedTree>& trees) : at(g.n()) {
    std::vector<char> used(g.m(), 0);
    for (int t = 0; t < static_cast<int>(trees.size()); ++t) {
      const RootedTree& tr = trees[t];
      if (auto bad = check_tree(g, tr); !bad.empty())
        throw PreconditionError("tree " + std::to_string(t) + ": " + bad);
      std::unordered_map<Vertex, std::pair<Vertex, int>> where;  // vertex -> (vertex, slot)
      for (int j = 0; j < tr.size(); ++j) {
        Vertex x = tr.nodes[j];
        where[x] = {x, static_cast<int>(at[x].size())};
        at[x].push_back({t, j, tr.parent[j], {}});
      }
      for (int j = 1; j < tr.size(); ++j) {
        int e = g.edge_index(tr.nodes[j], tr.parent[j]);
        if (used[e]) throw PreconditionError("trees share an edge");
        used[e] = 1;
        auto [p, s] = where.at(tr.parent[j]);
        at[p][s].children.push_back(tr.nodes[j]);
      }
    }
    for (auto& slots : at)
      for (auto& s : slots) std::sort(s.children.begin(), s.children.end());
  }

  int from_child(Vertex v, Vertex c) const {
    for (int s = 0; s < static_cast<int>(at[v].size()); ++s)
      if (std::binary_search(at[v][s].children.begin(), at[v][s].children.end(), c)) return s;
    throw std::logic_error("message from a non-child");
  }
  int from_parent(Vertex v, Vertex p) const {
    for (int s = 0; s < static_cast<int>(at[v].size()); ++s)
      if (at[v][s].parent == p) return s;
    throw std::logic_error("message from a non-parent");
  }
};

Message encode(std::uint8_t tag, const AggValue& x, const AggSpec& spec) {
  Message m(tag);
  for (int i = 0; i < spec.arity; ++i) {
    switch (spec.kinds[i]) {
      case Field::Id: m.id(static_cast<VertexId>(x.v[i])); break;
      case Field::Count: m.count(x.v[i]); break;
      case Field::Flag: m.flag(x.v[i] != 0); break;
    }
  }
  return m;
}

AggValue decode(const Message& m, int arity) {
  AggValue x;
  for (int i = 0; i < arity && i < m.size(); ++i) x.v[i] = m[i];
  return x;
}

class Upcast : public NodeProgram {
 public:
  Upcast(const ForestIndex& fx, const std::vector<std::vector<AggValue>>& vals, const AggSpec& spec,
         std::string label, int ntrees)
      : fx_(fx), vals_(vals), spec_(spec), label_(std::move(label)), result(ntrees) {}
  std::string name() const override { return label_; }
  void setup(const SimContext& ctx) override {
    int n = ctx.g.n();
    acc_.assign(n, {});
    pending_.assign(n, {});
    sent_.assign(n, {});
  }
  void init(Vertex v) override {
    for (const Slot& s : fx_.at[v]) {
      acc_[v].push_back(vals_[s.tree][s.node]);
      pending_[v].push_back(static_cast<int>(s.children.size()));
      sent_[v].push_back(0);
    }
  }
  bool on_round(Vertex v, int, Inbox in, Outbox& out) override {
    for (const Incoming& m : in) {
      int s = fx_.from_child(v, m.from);
      acc_[v][s] = spec_.combine(acc_[v][s], decode(m.msg, spec_.arity));
      --pending_[v][s];
    }
    for (size_t s = 0; s < fx_.at[v].size(); ++s) {
      if (sent_[v][s] || pending_[v][s] > 0) continue;
      sent_[v][s] = 1;
      const Slot& sl = fx_.at[v][s];
      if (sl.parent != kNoVertex) out.send(sl.parent, encode('U', acc_[v][s], spec_));
      else result[sl.tree] = acc_[v][s];
    }
    return true;
  }

 private:
  const ForestIndex& fx_;
  const std::vector<std::vector<AggValue>>& vals_;
  AggSpec spec_;
  std::string label_;
  std::vector<std::vector<AggValue>> acc_;
  std::vector<std::vector<int>> pending_;
  std::vector<std::vector<char>> sent_;

 public:
  std::vector<AggValue> result;
};

class Downcast : public NodeProgram {
 public:
  Downcast(const ForestIndex& fx, const std::vector<RootedTree>& trees,
           const std::vector<AggValue>& roots, const AggSpec& spec, std::string label)
      : fx_(fx), roots_(roots), spec_(spec), label_(std::move(label)) {
    seen.resize(trees.size());
    for (size_t t = 0; t < trees.size(); ++t) seen[t].resize(trees[t].size());
  }
  std::string name() const override { return label_; }
  void setup(const SimContext&) override {}
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    auto push = [&](const Slot& sl, const AggValue& x) {
      seen[sl.tree][sl.node] = x;
      for (Vertex c : sl.children) out.send(c, encode('D', x, spec_));
    };
    if (step == 0)
      for (const Slot& sl : fx_.at[v])
        if (sl.parent == kNoVertex) push(sl, roots_[sl.tree]);
    for (const Incoming& m : in) push(fx_.at[v][fx_.from_parent(v, m.from)], decode(m.msg, spec_.arity));
    return true;
  }

 private:
  const ForestIndex& fx_;
  const std::vector<AggValue>& roots_;
  AggSpec spec_;
  std::string label_;

 public:
  std::vector<std::vector<AggValue>> seen;
};

void record(RoundLedger* led, const RoundLedger& part) {
  if (led) led->append(part);
}

}  // namespace

AggValue AggSpec::combine(const AggValue& a, const AggValue& b) const {
  if (op == AggOp::Sum) {
    AggValue r;
    for (int i = 0; i < 2; ++i) r.v[i] = a.v[i] + b.v[i];
    return r;
  }
  for (int i = 0; i < arity; ++i) {
    if (a.v[i] != b.v[i]) return a.v[i] > b.v[i] ? a : b;
  }
  return a;
}

std::vector<AggValue> forest_aggregate(const Graph& g, const std::vector<RootedTree>& trees,
                                       const std::vector<std::vector<AggValue>>& values,
                                       const AggSpec& spec, const SimConfig& cfg,
                                       RoundLedger* led, const std::string& label) {
  ForestIndex fx(g, trees);
  Upcast p(fx, values, spec, label, static_cast<int>(trees.size()));
  record(led, run(g, p, cfg));
  return p.result;
}

std::vector<std::vector<AggValue>> forest_broadcast(const Graph& g,
                                                    const std::vector<RootedTree>& trees,
                                                    const std::vector<AggValue>& root_values,
                                                    const AggSpec& spec, const SimConfig& cfg,
                                                    RoundLedger* led, const std::string& label) {
  ForestIndex fx(g, trees);
  Downcast p(fx, trees, root_values, spec, label);
  record(led, run(g, p, cfg));
  return p.seen;
}

// ---------------------------------------------------------------- BFS growth

namespace {

class BfsGrow : public NodeProgram {
 public:
  BfsGrow(const std::vector<char>& source, int cap, const std::vector<char>* allowed)
      : source_(source), cap_(cap), allowed_(allowed) {}
  std::string name() const override { return "bfs-grow"; }
  void setup(const SimContext& ctx) override {
    g_ = &ctx.g;
    int n = ctx.g.n();
    center.assign(n, 0);
    joined.assign(n, 0);
    parent.assign(n, kNoVertex);
    dist.assign(n, -1);
  }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    bool ok = !allowed_ || (*allowed_)[v];
    bool fresh = false;
    if (!joined[v] && ok) {
      if (step == 0 && source_[v]) {
        joined[v] = 1;
        center[v] = g_->id(v);
        dist[v] = 0;
        fresh = true;
      } else {
        // inbox is sorted by sender, so the first best offer is the smallest sender
        for (const Incoming& m : in) {
          if (m.msg.tag() != 'O') continue;
          VertexId c = m.msg.id_at(0);
          if (!joined[v] || c > center[v]) {
            joined[v] = 1;
            center[v] = c;
            parent[v] = m.from;
          }
        }
        if (joined[v]) {
          dist[v] = step;
          fresh = true;
        }
      }
    }
    if (fresh) {
      if (parent[v] != kNoVertex) out.send(parent[v], Message('A'));
      if (dist[v] < cap_) {
        Message offer('O');
        offer.id(center[v]);
        for (Vertex u : g_->nbrs(v))
          if (u != parent[v]) out.send(u, offer);
      }
    }
    return true;
  }

  std::vector<VertexId> center;
  std::vector<char> joined;
  std::vector<Vertex> parent;
  std::vector<int> dist;

 private:
  const Graph* g_ = nullptr;
  const std::vector<char>& source_;
  int cap_;
  const std::vector<char>* allowed_;
};

}  // namespace

Clustering grow_bfs_clusters(const Graph& g, const std::vector<Vertex>& centers, int depth,
                             const SimConfig& cfg, RoundLedger* led,
                             const std::vector<char>* allowed) {
  if (depth < 0) throw ParameterError("cluster depth must be >= 0");
  std::vector<char> src(g.n(), 0);
  for (Vertex z : centers) {
    if (z < 0 || z >= g.n()) throw PreconditionError("center outside graph");
    if (allowed && !(*allowed)[z]) throw PreconditionError("center outside the allowed set");
    src[z] = 1;
  }
  BfsGrow p(src, depth, allowed);
  record(led, run(g, p, cfg));
  Clustering c = Clustering::empty(g.n());
  c.depth_bound = depth;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!p.joined[v]) continue;
    c.center[v] = g.at(p.center[v]);
    c.parent[v] = p.parent[v];
    c.depth[v] = p.dist[v];
  }
  return c;
}

std::vector<AggValue> cluster_aggregate(const Graph& g, const Clustering& c,
                                        const std::vector<AggValue>& values, const AggSpec& spec,
                                        const SimConfig& cfg, RoundLedger* led) {
  auto trees = c.trees();
  std::vector<std::vector<AggValue>> vals(trees.size());
  for (size_t t = 0; t < trees.size(); ++t)
    for (Vertex x : trees[t].nodes) vals[t].push_back(values[x]);
  auto res = forest_aggregate(g, trees, vals, spec, cfg, led, "cluster-aggregate");
  std::vector<AggValue> out(g.n());
  for (size_t t = 0; t < trees.size(); ++t) out[trees[t].root] = res[t];
  return out;
}

// ---------------------------------------------------------------- floods

namespace {

class HopFlood : public NodeProgram {
 public:
  HopFlood(const std::vector<char>& src, int d, std::string label)
      : src_(src), d_(d), label_(std::move(label)) {}
  std::string name() const override { return label_; }
  void setup(const SimContext& ctx) override { reached.assign(ctx.g.n(), 0); }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    bool fresh = false;
    if (step == 0 && src_[v]) {
      reached[v] = 1;
      fresh = true;
    } else if (!reached[v] && !in.empty()) {
      reached[v] = 1;
      fresh = true;
    }
    if (fresh && step < d_) out.send_all(Message('F'));
    return true;
  }
  std::vector<char> reached;

 private:
  const std::vector<char>& src_;
  int d_;
  std::string label_;
};

// Max of (flag, id) keys over the d-hop ball; relays through every vertex.
class MaxFlood : public NodeProgram {
 public:
  using Key = std::pair<int, VertexId>;
  MaxFlood(const std::vector<char>& has, const std::vector<Key>& key, int d)
      : has_(has), key_(key), d_(d) {}
  std::string name() const override { return "max-flood"; }
  void setup(const SimContext& ctx) override {
    best.assign(ctx.g.n(), Key{-1, 0});
  }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    bool changed = false;
    if (step == 0 && has_[v]) {
      best[v] = key_[v];
      changed = true;
    }
    for (const Incoming& m : in) {
      Key k{static_cast<int>(m.msg[0]), m.msg.id_at(1)};
      if (k > best[v]) {
        best[v] = k;
        changed = true;
      }
    }
    if (changed && step < d_) {
      Message msg('M');
      msg.flag(best[v].first == 1).id(best[v].second);
      out.send_all(msg);
    }
    return true;
  }
  std::vector<Key> best;

 private:
  const std::vector<char>& has_;
  const std::vector<Key>& key_;
  int d_;
};

}  // namespace

std::vector<char> hop_flood(const Graph& g, const std::vector<char>& sources, int d,
                            const SimConfig& cfg, RoundLedger* led, const std::string& label) {
  HopFlood p(sources, d, label);
  record(led, run(g, p, cfg));
  return p.reached;
}

// ---------------------------------------------------------------- ruling sets

namespace {

// One bit per block of three rounds: survivors whose bit is 0 flood three
// hops, and survivors with bit 1 that hear the flood drop out.
class BitRuling : public NodeProgram {
 public:
  explicit BitRuling(const std::vector<char>& cand) : cand_(cand) {}
  std::string name() const override { return "ruling-set-log"; }
  void setup(const SimContext& ctx) override {
    g_ = &ctx.g;
    bits_ = ctx.cfg.id_bits;
    alive.assign(ctx.g.n(), 0);
    reached_.assign(ctx.g.n(), 0);
  }
  void init(Vertex v) override { alive[v] = cand_[v]; }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    if (step > 0) {
      int hop = step - 3 * ((step - 1) / 3);  // 1..3 within the block
      if (!in.empty() && !reached_[v]) {
        reached_[v] = 1;
        if (hop < 3) out.send_all(Message('R'));
      }
    }
    if (step % 3 == 0) {
      int b = step / 3;
      if (b > 0) {
        // close block b-1
        if (alive[v] && bit(v, b - 1) == 1 && reached_[v]) alive[v] = 0;
        reached_[v] = 0;
      }
      if (b < bits_ && alive[v] && bit(v, b) == 0) {
        reached_[v] = 1;
        out.send_all(Message('R'));
      }
    }
    return step >= 3 * bits_;
  }
  std::vector<char> alive;

 private:
  int bit(Vertex v, int b) const { return static_cast<int>((g_->id(v) >> b) & 1U); }
  const Graph* g_ = nullptr;
  const std::vector<char>& cand_;
  int bits_ = 0;
  std::vector<char> reached_;
};

// Each vertex learns the candidates within d hops, up to the cutoff: lists
// shorter than the cutoff travel in chunks, longer ones as a saturation mark.
class CandidateCount : public NodeProgram {
 public:
  CandidateCount(const std::vector<char>& cand, int d, int cutoff)
      : cand_(cand), d_(d), cutoff_(cutoff) {}
  std::string name() const override { return "candidate-count"; }
  void setup(const SimContext& ctx) override {
    g_ = &ctx.g;
    ipm_ = ids_per_message(ctx.cfg);
    chunks = std::max(1, (cutoff_ - 1 + ipm_ - 1) / ipm_);
    int n = ctx.g.n();
    known_.assign(n, {});
    incoming_.assign(n, {});
    sending_.assign(n, {});
    in_sat_.assign(n, 0);
    saturated.assign(n, 0);
  }
  void init(Vertex v) override {
    if (cand_[v]) known_[v].push_back(g_->id(v));
    if (static_cast<int>(known_[v].size()) >= cutoff_) saturated[v] = 1;
  }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    for (const Incoming& m : in) {
      if (m.msg.tag() == 'H') in_sat_[v] = 1;
      else
        for (int i = 0; i < m.msg.size(); ++i) incoming_[v].push_back(m.msg.id_at(i));
    }
    int x = step / chunks;
    int r = step % chunks;
    if (r == 0 && x >= 1) {
      auto& k = known_[v];
      k.insert(k.end(), incoming_[v].begin(), incoming_[v].end());
      std::sort(k.begin(), k.end());
      k.erase(std::unique(k.begin(), k.end()), k.end());
      incoming_[v].clear();
      if (in_sat_[v] || static_cast<int>(k.size()) >= cutoff_) saturated[v] = 1;
    }
    if (x < d_) {
      if (saturated[v]) {
        if (r == 0) out.send_all(Message('H'));
      } else {
        if (r == 0) sending_[v] = known_[v];
        size_t lo = static_cast<size_t>(r) * ipm_;
        if (lo < sending_[v].size()) {
          Message m('L');
          for (size_t i = lo; i < std::min(sending_[v].size(), lo + ipm_); ++i) m.id(sending_[v][i]);
          out.send_all(m);
        }
      }
    }
    return step >= d_ * chunks;
  }
  std::vector<char> saturated;
  int chunks = 1;

 private:
  const Graph* g_ = nullptr;
  const std::vector<char>& cand_;
  int d_;
  int cutoff_;
  int ipm_ = 1;
  std::vector<std::vector<VertexId>> known_, incoming_, sending_;
  std::vector<char> in_sat_;
};

// Bijection on b-bit integers; spreads IDs so local maxima are not chained
// along monotone ID runs.
VertexId shuffle_bits(VertexId x, int b) {
  const VertexId mask = b >= 64 ? ~VertexId{0} : ((VertexId{1} << b) - 1);
  for (int r = 0; r < 2; ++r) {
    x = (x * 0x9e3779b97f4a7c15ULL) & mask;
    x ^= x >> ((b + 1) / 2);
  }
  return x;
}

std::vector<char> as_mask(const Graph& g, const std::vector<Vertex>& vs) {
  std::vector<char> m(g.n(), 0);
  for (Vertex v : vs) {
    if (v < 0 || v >= g.n()) throw PreconditionError("candidate outside graph");
    m[v] = 1;
  }
  return m;
}

}  // namespace

std::vector<Vertex> ruling_set_log(const Graph& g, const std::vector<Vertex>& candidates,
                                   const SimConfig& cfg, RoundLedger* led, RulingStats* stats) {
  auto cand = as_mask(g, candidates);
  BitRuling p(cand);
  Engine eng(g, cfg);
  RoundLedger L = eng.run(p, {});
  record(led, L);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.n(); ++v)
    if (p.alive[v]) out.push_back(v);
  if (stats) {
    *stats = {};
    stats->id_bits = eng.config().id_bits;
    stats->rounds = L.rounds_used;
  }
  return out;
}

int power_threshold(int n) {
  double lg = std::log2(static_cast<double>(std::max(n, 1)));
  return static_cast<int>(std::ceil(std::exp2(std::sqrt(lg)) - 1e-9));
}

long ruling_power_round_cap(int n, int t) {
  // c = 16, c' = 1
  double lg = std::log2(static_cast<double>(std::max(n, 2)));
  int s = static_cast<int>(std::ceil(std::sqrt(lg) - 1e-9));
  return 16L * t * (1L << s);
}

std::vector<Vertex> ruling_set_power(const Graph& g, const std::vector<Vertex>& candidates, int t,
                                     const SimConfig& cfg, RoundLedger* led, RulingStats* stats) {
  if (t < 1) throw ParameterError("ruling_set_power needs t >= 1");
  auto cand = as_mask(g, candidates);
  const int d = 3 * t - 1;
  const int cutoff = power_threshold(g.n());
  Engine eng(g, cfg);
  const int b = eng.config().id_bits;
  RoundLedger L;

  CandidateCount cc(cand, d, cutoff);
  L.append(eng.run(cc, {}));

  std::vector<char> active = cand;
  std::vector<MaxFlood::Key> key(g.n());
  for (Vertex v = 0; v < g.n(); ++v) key[v] = {cc.saturated[v] ? 1 : 0, shuffle_bits(g.id(v), b)};

  std::vector<Vertex> out;
  int iters = 0;
  // The host only checks whether any candidate is still active.
  while (std::any_of(active.begin(), active.end(), [](char c) { return c != 0; })) {
    ++iters;
    MaxFlood mf(active, key, d);
    L.append(eng.run(mf, {}));
    std::vector<char> win(g.n(), 0);
    for (Vertex v = 0; v < g.n(); ++v)
      if (active[v] && mf.best[v] == key[v]) {
        win[v] = 1;
        out.push_back(v);
      }
    HopFlood hf(win, d, "ruling-remove");
    L.append(eng.run(hf, {}));
    for (Vertex v = 0; v < g.n(); ++v)
      if (hf.reached[v]) active[v] = 0;
  }
  std::sort(out.begin(), out.end());
  record(led, L);
  if (stats) {
    *stats = {};
    stats->reach = d;
    stats->threshold = cutoff;
    stats->iterations = iters;
    stats->rounds = L.rounds_used;
    for (Vertex v = 0; v < g.n(); ++v) stats->heavy += cand[v] && cc.saturated[v];
  }
  return out;
}

// ---------------------------------------------------------------- partition

std::int64_t WeightedTree::total() const {
  std::int64_t s = 0;
  for (auto w : weight) s += w;
  return s;
}

namespace {

class Partition : public NodeProgram {
 public:
  Partition(const ForestIndex& fx, const std::vector<WeightedTree>& ts) : fx_(fx), ts_(ts) {}
  std::string name() const override { return "partition"; }
  void setup(const SimContext& ctx) override {
    g_ = &ctx.g;
    int n = ctx.g.n();
    st.assign(n, {});
  }
  void init(Vertex v) override {
    for (const Slot& s : fx_.at[v]) {
      State x;
      x.pending = static_cast<int>(s.children.size());
      x.w = ts_[s.tree].weight[s.node];
      st[v].push_back(x);
    }
  }
  bool on_round(Vertex v, int, Inbox in, Outbox& out) override {
    for (const Incoming& m : in) {
      if (m.msg.tag() == 'W') {
        int s = fx_.from_child(v, m.from);
        st[v][s].reports.emplace_back(m.from, m.msg[0]);
        --st[v][s].pending;
      } else {
        int s = fx_.from_parent(v, m.from);
        st[v][s].label = {m.msg.id_at(0), static_cast<int>(m.msg[1])};
        send_labels(v, s, out);
      }
    }
    for (size_t s = 0; s < st[v].size(); ++s) {
      State& x = st[v][s];
      if (x.closed || x.pending > 0) continue;
      x.closed = true;
      close(v, static_cast<int>(s));
      const Slot& sl = fx_.at[v][s];
      if (sl.parent != kNoVertex) {
        Message m('W');
        m.count(x.w0);
        out.send(sl.parent, m);
      } else {
        x.label = {g_->id(v), 0};
        send_labels(v, static_cast<int>(s), out);
      }
    }
    return true;
  }

  struct State {
    int pending = 0;
    std::int64_t w = 0;
    bool closed = false;
    std::vector<std::pair<Vertex, std::int64_t>> reports;  // child, W(T0) of the child
    std::map<Vertex, int> group;  // child -> -1 own part, 0 my T0, j aux part j
    std::int64_t w0 = 0;
    std::pair<VertexId, int> label{0, -1};
  };
  std::vector<std::vector<State>> st;

 private:
  void close(Vertex v, int s) {
    State& x = st[v][s];
    const std::int64_t B = ts_[fx_.at[v][s].tree].bound;
    std::sort(x.reports.begin(), x.reports.end());
    int aux = 0;
    std::vector<Vertex> open;
    std::int64_t sum = 0;
    for (auto [c, w] : x.reports) {
      if (w > B) {
        x.group[c] = -1;
        continue;
      }
      open.push_back(c);
      sum += w;
      if (sum > B) {
        ++aux;
        for (Vertex y : open) x.group[y] = aux;
        open.clear();
        sum = 0;
      }
    }
    if (!open.empty() && sum < B) {
      for (Vertex y : open) x.group[y] = 0;
      x.w0 = sum + x.w;
    } else {
      if (!open.empty()) {
        ++aux;
        for (Vertex y : open) x.group[y] = aux;
      }
      x.w0 = x.w;
    }
  }

  void send_labels(Vertex v, int s, Outbox& out) {
    const State& x = st[v][s];
    for (Vertex c : fx_.at[v][s].children) {
      int gidx = x.group.at(c);
      Message m('L');
      if (gidx < 0) m.id(g_->id(c)).count(0);
      else if (gidx == 0) m.id(x.label.first).count(x.label.second);
      else m.id(g_->id(v)).count(gidx);
      out.send(c, m);
    }
  }

  const Graph* g_ = nullptr;
  const ForestIndex& fx_;
  const std::vector<WeightedTree>& ts_;
};

}  // namespace

std::vector<TreePartition> partition_forest(const Graph& g, const std::vector<WeightedTree>& ts,
                                            const SimConfig& cfg, RoundLedger* led) {
  std::vector<RootedTree> trees;
  for (const auto& wt : ts) {
    if (wt.bound < 1) throw PreconditionError("partition bound B must be >= 1");
    if (wt.weight.size() != wt.tree.nodes.size())
      throw PreconditionError("weight array does not match tree");
    for (size_t j = 0; j < wt.weight.size(); ++j) {
      if (wt.weight[j] < 0) throw PreconditionError("negative vertex weight");
      if (wt.weight[j] > wt.bound)
        throw PreconditionError("weight of vertex " + std::to_string(g.id(wt.tree.nodes[j])) +
                                " exceeds B=" + std::to_string(wt.bound));
    }
    trees.push_back(wt.tree);
  }
  ForestIndex fx(g, trees);
  Partition p(fx, ts);
  record(led, run(g, p, cfg));

  std::vector<TreePartition> res(ts.size());
  for (size_t t = 0; t < ts.size(); ++t) {
    const WeightedTree& wt = ts[t];
    std::map<std::pair<VertexId, int>, TreePart> parts;
    std::map<std::pair<VertexId, int>, std::vector<std::pair<Vertex, Vertex>>> edges;
    for (int j = 0; j < wt.tree.size(); ++j) {
      Vertex x = wt.tree.nodes[j];
      int s = -1;
      for (size_t q = 0; q < fx.at[x].size(); ++q)
        if (fx.at[x][q].tree == static_cast<int>(t)) s = static_cast<int>(q);
      const auto& state = p.st[x][s];
      auto key = state.label;
      TreePart& part = parts[key];
      part.creator = key.first;
      part.index = key.second;
      part.owned.push_back(x);
      part.weight += wt.weight[j];
      if (wt.tree.parent[j] != kNoVertex && state.w0 <= wt.bound)
        edges[key].emplace_back(x, wt.tree.parent[j]);
    }
    for (auto& [key, part] : parts) {
      part.root = g.at(key.first);
      std::sort(part.owned.begin(), part.owned.end());
      part.tree.root = part.root;
      part.tree.nodes.push_back(part.root);
      part.tree.parent.push_back(kNoVertex);
      for (auto [c, par] : edges[key]) {
        part.tree.nodes.push_back(c);
        part.tree.parent.push_back(par);
      }
      if (key == std::make_pair(g.id(wt.tree.root), 0))
        res[t].leftover = static_cast<int>(res[t].parts.size());
      res[t].parts.push_back(std::move(part));
    }
  }
  return res;
}

TreePartition partition_tree(const Graph& g, const WeightedTree& t, const SimConfig& cfg,
                             RoundLedger* led) {
  return partition_forest(g, {t}, cfg, led).front();
}

}  // namespace spanner
