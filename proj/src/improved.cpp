#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kdetail.hpp"
#include "spanner/errors.hpp"
#include "spanner/spanner_k.hpp"

namespace spanner {

using detail::exchange;

namespace {

int last_level(int k) { return k / 2; }  // k/2 for even k, (k-1)/2 for odd

std::vector<std::int64_t> cluster_sizes(const Graph& g, const detail::GroupNet& net,
                                        const Clustering& cl, RoundLedger& L) {
  std::vector<std::int64_t> ones(g.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v) ones[v] = cl.clustered(v) ? 1 : 0;
  auto s = net.sum(ones, L);
  std::vector<std::int64_t> by_center(g.n(), 0);
  for (int q = 0; q < net.size(); ++q) by_center[net.centers(q).front()] = s[q];
  return by_center;
}

RootedTree lone(Vertex z) {
  RootedTree t;
  t.root = z;
  t.nodes = {z};
  t.parent = {kNoVertex};
  return t;
}

// Runs the bipartite sub-instances (A = group, B = outside neighbors it
// reaches) and the recursive calls on the groups, side by side.
struct InstanceOut {
  int bip = 0;
  int rec = 0;
  int share = 0;
};
InstanceOut run_instances(const Graph& g, int k, const SimConfig& c, const ImprovedOptions& opt,
                          const std::vector<Bipartition>& inst, bool recurse, Spanner& h,
                          RoundLedger& L, const std::string& label) {
  InstanceOut o;
  o.share = detail::max_instances_per_edge(g, inst);
  std::vector<RoundLedger> bips, recs;
  for (const Bipartition& p : inst) {
    if (!p.B.empty()) {
      RoundLedger lb;
      h.merge(sparser_bipartite_spanner(g, p, k, c, &lb));
      bips.push_back(std::move(lb));
      ++o.bip;
    }
    if (recurse && p.A.size() >= 2) {
      RoundLedger lr;
      std::vector<Vertex> tp;
      Graph sub = g.induced(p.A, &tp);
      Spanner hs = improved_spanner(sub, k, c, &lr, nullptr, opt);
      detail::merge_mapped(h, hs, tp);
      recs.push_back(std::move(lr));
      ++o.rec;
    }
  }
  detail::absorb_instances(L, bips, recs, o.share, label);
  return o;
}

// Each group announces itself; vertices allowed by `listen` record, per
// neighboring group other than their own, the smallest-ID neighbor in it.
std::vector<std::vector<std::pair<int, Vertex>>> hear_groups(
    const Graph& g, const SimConfig& c, const detail::GroupNet& net, const std::vector<char>& speak,
    const std::vector<char>& listen, RoundLedger& L, const std::string& name) {
  std::map<VertexId, int> index;
  for (int q = 0; q < net.size(); ++q) index[net.gid(q)] = q;
  std::vector<std::vector<std::pair<int, Vertex>>> heard(g.n());
  exchange(
      g, c, L, name,
      [&](Vertex v, Outbox& out) {
        int q = net.group_of(v);
        if (q < 0 || !speak[q]) return;
        Message m('R');
        m.id(net.gid(q));
        out.send_all(m);
      },
      [&](Vertex v, Inbox in) {
        if (!listen[v]) return;
        int mine = net.group_of(v);
        std::set<int> seen;
        for (const Incoming& m : in) {
          int q = index.at(m.msg.id_at(0));
          if (q == mine || !seen.insert(q).second) continue;
          heard[v].emplace_back(q, m.from);
        }
      });
  return heard;
}

// Step SIV: large clusters become singletons, the rest are regrouped along
// the trees of the superclusters that succeeded, first by cluster count and
// then by vertex count.
Superclustering regroup(const Graph& g, const SimConfig& c, int k, int i, const Clustering& cl,
                        const Superclustering& prev, const std::vector<char>& succeeded,
                        RoundLedger& L) {
  const int n = g.n();
  detail::GroupNet cnet(g, c, cl);
  auto size = cluster_sizes(g, cnet, cl, L);
  const long vb = ceil_pow(n, 0.5);
  const long cb = ceil_pow(n, 0.5 - static_cast<double>(i) / k);
  Superclustering out;
  out.n = n;
  out.k = k;
  out.level = i;
  out.clustering = cl;

  std::vector<char> small(n, 0);
  for (Vertex z : cl.centers()) {
    if (size[z] >= vb) {
      Supercluster s;
      s.centers = {z};
      s.tree = lone(z);
      out.scs.push_back(std::move(s));
    } else {
      small[z] = 1;
    }
  }

  std::vector<WeightedTree> w1;
  std::vector<std::set<Vertex>> mine1;
  for (size_t q = 0; q < prev.scs.size(); ++q) {
    if (!succeeded[q]) continue;
    std::set<Vertex> zs;
    for (Vertex z : prev.scs[q].centers)
      if (small[z]) zs.insert(z);
    if (zs.empty()) continue;
    WeightedTree wt;
    wt.tree = prev.scs[q].tree;
    for (Vertex x : wt.tree.nodes) wt.weight.push_back(zs.count(x) ? 1 : 0);
    wt.bound = cb;
    w1.push_back(std::move(wt));
    mine1.push_back(std::move(zs));
  }
  auto p1 = partition_forest(g, w1, c, &L);

  std::vector<WeightedTree> w2;
  std::vector<std::set<Vertex>> mine2;
  for (size_t t = 0; t < p1.size(); ++t)
    for (const TreePart& part : p1[t].parts) {
      std::set<Vertex> zs;
      for (Vertex x : part.owned)
        if (mine1[t].count(x)) zs.insert(x);
      if (zs.empty()) continue;
      WeightedTree wt;
      wt.tree = part.tree;
      for (Vertex x : wt.tree.nodes) wt.weight.push_back(zs.count(x) ? size[x] : 0);
      wt.bound = vb;
      w2.push_back(std::move(wt));
      mine2.push_back(std::move(zs));
    }
  auto p2 = partition_forest(g, w2, c, &L);
  for (size_t t = 0; t < p2.size(); ++t)
    for (const TreePart& part : p2[t].parts) {
      Supercluster s;
      for (Vertex x : part.owned)
        if (mine2[t].count(x)) s.centers.push_back(x);
      if (s.centers.empty()) continue;
      s.tree = part.tree;
      out.scs.push_back(std::move(s));
    }
  detail::finalize_superclustering(g, c, out, L);
  return out;
}

void check_input(const Graph& g, int k) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  if (g.weighted()) throw ParameterError("weighted graphs are only supported for k <= 2");
}

}  // namespace

NiceBounds nice_bounds(int n, int k, int level) {
  NiceBounds b;
  b.vertex_bound = ceil_pow(n, 0.5);
  b.cluster_bound = ceil_pow(n, 0.5 - static_cast<double>(level) / k);
  b.depth_bound = 1L << std::min(4 * k, 62);
  return b;
}

ZeroResult cons_zero_superclustering(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led,
                                     ZeroStats* stats, const ImprovedOptions& opt) {
  check_input(g, k);
  const int n = g.n();
  SimConfig c = cfg.resolved(g);
  ZeroStats st;
  st.mode = "cons";
  ZeroResult res{Superclustering{}, Spanner(g)};
  RoundLedger L;

  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  Clustering cl = Clustering::singletons(n, all);
  int r = 0;  // radius of the current clusters
  for (int i = 1; i <= last_level(k); ++i) {
    ZeroLevel zl;
    zl.level = i;
    detail::GroupNet net(g, c, cl);
    zl.clusters_in = net.size();

    // deg(C) = |Gamma+(C)|: members count themselves, outsiders ACK one member
    std::vector<char> speak(net.size(), 1), everyone(n, 1);
    auto heard = hear_groups(g, c, net, speak, everyone, L, "zero-announce");
    std::vector<std::int64_t> val(n, 0);
    exchange(
        g, c, L, "zero-ack",
        [&](Vertex v, Outbox& out) {
          for (auto [q, u] : heard[v]) out.send(u, Message('a'));
        },
        [&](Vertex v, Inbox in) {
          val[v] = static_cast<std::int64_t>(in.size()) + (cl.clustered(v) ? 1 : 0);
        });
    auto deg = net.sum(val, L);
    const long thr = ceil_pow(n, static_cast<double>(i) / k);
    std::vector<std::int64_t> high(net.size(), 0);
    std::vector<Vertex> cand;
    for (int q = 0; q < net.size(); ++q)
      if (deg[q] >= thr) {
        high[q] = 1;
        cand.push_back(net.centers(q).front());
      }
    zl.high = static_cast<int>(cand.size());

    // rulers at distance >= 3t > 2(r+1): their closed neighborhoods stay apart
    const int t = (2 * r + 3 + 2) / 3;
    zl.t = t;
    std::vector<Vertex> z;
    if (!cand.empty()) z = ruling_set_power(g, cand, t, c, &L);
    zl.rulers = static_cast<int>(z.size());

    // low-expansion clusters: bipartite instance to the outside plus recursion inside
    auto hv = net.bcast(high, L);
    std::vector<char> low(net.size(), 0);
    for (int q = 0; q < net.size(); ++q) low[q] = !high[q];
    auto outside = hear_groups(g, c, net, low, everyone, L, "low-announce");
    std::vector<Bipartition> inst(net.size());
    for (int q = 0; q < net.size(); ++q)
      if (low[q]) inst[q].A = net.members(q);
    for (Vertex v = 0; v < n; ++v)
      for (auto [q, _] : outside[v]) inst[q].B.push_back(v);
    std::vector<Bipartition> used;
    for (int q = 0; q < net.size(); ++q)
      if (low[q]) used.push_back(std::move(inst[q]));
    auto io = run_instances(g, k, c, opt, used, true, res.h, L, "zero-instances");
    zl.low_instances = io.bip;
    st.max_instances_per_edge = std::max(st.max_instances_per_edge, io.share);

    // dominated centers lie within 3t-1 of a ruler; their clusters within r more
    const int radius = 3 * t - 1 + r;
    cl = grow_bfs_clusters(g, z, radius, c, &L);
    cl.level = i;
    r = radius;
    zl.radius = radius;
    zl.max_depth = cl.max_depth();
    zl.count_bound = ceil_pow(n, 1.0 - static_cast<double>(i) / k);
    st.levels.push_back(zl);
  }

  // termination: large clusters are cut into parts of about sqrt(n) vertices
  detail::GroupNet net(g, c, cl);
  auto size = cluster_sizes(g, net, cl, L);
  const long vb = ceil_pow(n, 0.5);
  Superclustering& sc = res.sc;
  sc.n = n;
  sc.k = k;
  sc.level = 0;
  auto trees = cl.trees();
  std::vector<WeightedTree> big;
  std::vector<Vertex> covered;
  for (size_t q = 0; q < trees.size(); ++q) {
    const RootedTree& t = trees[q];
    for (Vertex x : t.nodes) covered.push_back(x);
    if (size[t.root] >= vb) {
      WeightedTree wt;
      wt.tree = t;
      wt.weight.assign(t.nodes.size(), 1);
      wt.bound = vb;
      big.push_back(std::move(wt));
    } else {
      Supercluster s;
      s.centers = t.nodes;
      s.tree = t;
      sc.scs.push_back(std::move(s));
    }
  }
  for (const TreePartition& tp : partition_forest(g, big, c, &L))
    for (const TreePart& part : tp.parts) {
      Supercluster s;
      s.centers = part.owned;
      s.tree = part.tree;
      sc.scs.push_back(std::move(s));
    }
  std::sort(covered.begin(), covered.end());
  sc.clustering = Clustering::singletons(n, covered);
  detail::finalize_superclustering(g, c, sc, L);
  st.covered = static_cast<int>(covered.size());

  if (led) led->append(L);
  if (stats) *stats = std::move(st);
  return res;
}

Superclustering bfs_zero_superclustering(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led) {
  check_input(g, k);
  const int n = g.n();
  SimConfig c = cfg.resolved(g);
  RoundLedger L;

  // each component agrees on its maximum ID by flooding
  std::vector<VertexId> best(n);
  std::vector<char> changed(n, 1);
  for (Vertex v = 0; v < n; ++v) best[v] = g.id(v);
  for (bool any = true; any;) {
    any = false;
    exchange(
        g, c, L, "max-flood",
        [&](Vertex v, Outbox& out) {
          if (!changed[v]) return;
          changed[v] = 0;
          Message m('X');
          m.id(best[v]);
          out.send_all(m);
        },
        [&](Vertex v, Inbox in) {
          for (const Incoming& m : in)
            if (m.msg.id_at(0) > best[v]) {
              best[v] = m.msg.id_at(0);
              changed[v] = 1;
            }
        });
    for (Vertex v = 0; v < n; ++v) any = any || changed[v];
  }
  std::vector<Vertex> roots;
  for (Vertex v = 0; v < n; ++v)
    if (best[v] == g.id(v)) roots.push_back(v);
  Clustering bfs = grow_bfs_clusters(g, roots, n, c, &L);

  const long vb = ceil_pow(n, 0.5);
  std::vector<WeightedTree> wts;
  for (RootedTree& t : bfs.trees()) {
    WeightedTree wt;
    wt.weight.assign(t.nodes.size(), 1);
    wt.tree = std::move(t);
    wt.bound = vb;
    wts.push_back(std::move(wt));
  }
  Superclustering sc;
  sc.n = n;
  sc.k = k;
  sc.level = 0;
  for (const TreePartition& tp : partition_forest(g, wts, c, &L))
    for (const TreePart& part : tp.parts) {
      Supercluster s;
      s.centers = part.owned;
      s.tree = part.tree;
      sc.scs.push_back(std::move(s));
    }
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  sc.clustering = Clustering::singletons(n, all);
  detail::finalize_superclustering(g, c, sc, L);
  if (led) led->append(L);
  return sc;
}

Spanner improved_spanner(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led,
                         ImprovedStats* stats, const ImprovedOptions& opt) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  ImprovedStats st;
  st.k = k;
  if (k == 2) {
    st.path = "imp3";
    Spanner h = improved_3_spanner(g, cfg, led);
    if (stats) *stats = std::move(st);
    return h;
  }
  check_input(g, k);
  const int n = g.n();
  SimConfig c = cfg.resolved(g);
  if (n < opt.n_min) {
    st.path = "naive-base";
    Spanner h = naive_spanner(g, k, c, led, &st.tail);
    if (stats) *stats = std::move(st);
    return h;
  }

  st.path = "improved";
  st.last_level = last_level(k);
  Spanner h(g);
  RoundLedger L;
  Superclustering sc;
  if (opt.zero == ZeroMode::Cons) {
    ZeroResult z = cons_zero_superclustering(g, k, c, &L, &st.zero, opt);
    h.merge(z.h);
    sc = std::move(z.sc);
  } else {
    sc = bfs_zero_superclustering(g, k, c, &L);
    st.zero.mode = "bfs";
    st.zero.covered = n;
  }
  st.levels.push_back(sc);

  for (int i = 1; i <= st.last_level; ++i) {
    RoundLedger P;
    detail::GroupNet net(g, c, sc);
    std::vector<char> marked(n, 0), remaining(net.size(), 1);
    detail::ElectionInput in;
    in.level = i;
    in.closed = true;
    in.threshold = ceil_pow(n, 0.5 + 1.0 / k);
    in.cap = static_cast<int>(std::ceil(opt.si_cap_factor * std::pow(n, 0.5 - 1.0 / k) - 1e-9));
    PhaseRecord rec = detail::elect(g, c, net, in, marked, remaining, P);

    // SII: unmarked neighbors of singleton superclusters link directly;
    // non-singletons get a bipartite instance and a recursive call
    std::vector<char> unmarked(n);
    for (Vertex v = 0; v < n; ++v) unmarked[v] = !marked[v];
    auto heard = hear_groups(g, c, net, remaining, unmarked, P, "sc-remaining");
    std::vector<Bipartition> inst(net.size());
    for (int q = 0; q < net.size(); ++q) inst[q].A = net.members(q);
    for (Vertex v = 0; v < n; ++v)
      for (auto [q, u] : heard[v]) {
        if (sc.scs[q].singleton) h.add(v, u, "sc-link");
        else inst[q].B.push_back(v);
      }
    std::vector<Bipartition> used;
    for (int q = 0; q < net.size(); ++q)
      if (remaining[q] && !sc.scs[q].singleton) used.push_back(std::move(inst[q]));
    auto io = run_instances(g, k, c, opt, used, true, h, P, "sii-instances");
    st.bip_instances += io.bip;
    st.recursions += io.rec;
    st.max_instances_per_edge = std::max(st.max_instances_per_edge, io.share);

    // SIII
    std::vector<Vertex> z;
    std::vector<char> succeeded(net.size(), 0);
    for (int q = 0; q < net.size(); ++q)
      if (!remaining[q]) {
        succeeded[q] = 1;
        for (Vertex x : net.centers(q)) z.push_back(x);
      }
    Clustering cl = grow_bfs_clusters(g, z, i, c, &P);
    cl.level = i;
    detail::add_tree_edges(h, cl, "cluster-tree");

    // SIV
    sc = regroup(g, c, k, i, cl, sc, succeeded, P);

    rec.centers = static_cast<int>(z.size());
    rec.center_bound = 4 * ceil_pow(n, 1.0 - static_cast<double>(i) / k);
    rec.max_depth = cl.max_depth();
    rec.rounds = P.rounds_used;
    st.phases.push_back(rec);
    st.levels.push_back(sc);
    L.append(P);
  }

  h.merge(naive_spanner_from(g, k, st.last_level + 1, sc.clustering, c, &L, &st.tail));
  if (led) led->append(L);
  if (stats) *stats = std::move(st);
  return h;
}

}  // namespace spanner
