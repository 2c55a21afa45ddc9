#include <map>
#include <set>

#include "kdetail.hpp"
#include "spanner/errors.hpp"
#include "spanner/spanner_k.hpp"

namespace spanner {

using detail::exchange;

namespace {

void check_k_input(const Graph& g, int k) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  if (g.weighted()) throw ParameterError("weighted graphs are only supported for k <= 2");
}

// Every vertex allowed by `who` adds one edge to each neighboring cluster
// announced this round (other than its own): its smallest-ID neighbor there.
void link_to_clusters(const Graph& g, const SimConfig& cfg, RoundLedger& led, Spanner& h,
                      const detail::GroupNet& net, const std::vector<char>& announce,
                      const std::vector<char>& who, const std::string& tag) {
  exchange(
      g, cfg, led, tag,
      [&](Vertex v, Outbox& out) {
        int q = net.group_of(v);
        if (q < 0 || !announce[q]) return;
        Message m('R');
        m.id(net.gid(q));
        out.send_all(m);
      },
      [&](Vertex v, Inbox in) {
        if (!who[v]) return;
        int q = net.group_of(v);
        VertexId mine = q >= 0 ? net.gid(q) : detail::kNoCluster;
        std::set<VertexId> seen;
        for (const Incoming& m : in) {
          VertexId c = m.msg.id_at(0);
          if (c == mine || !seen.insert(c).second) continue;
          h.add(v, m.from, tag);
        }
      });
}

}  // namespace

Spanner naive_spanner_from(const Graph& g, int k, int start_level, const Clustering& prev,
                           const SimConfig& cfg, RoundLedger* led, NaiveStats* stats) {
  check_k_input(g, k);
  if (start_level < 1 || start_level > k)
    throw ParameterError("start level must be in [1, k], got " + std::to_string(start_level));
  if (static_cast<int>(prev.center.size()) != g.n())
    throw PreconditionError("clustering does not match the graph");
  const int n = g.n();
  SimConfig c = cfg.resolved(g);
  Spanner h(g);
  RoundLedger L;
  NaiveStats st;
  Clustering cl = prev;
  detail::add_tree_edges(h, cl, "cluster-tree");

  for (int i = start_level; i <= k - 1; ++i) {
    detail::GroupNet net(g, c, cl);
    std::vector<char> marked(n, 0), remaining(net.size(), 1);
    detail::ElectionInput in;
    in.level = i;
    in.closed = false;
    in.threshold = ceil_pow(n, static_cast<double>(i) / k);
    in.cap = static_cast<int>(ceil_pow(n, 1.0 - static_cast<double>(i) / k));
    RoundLedger P;
    PhaseRecord rec = detail::elect(g, c, net, in, marked, remaining, P);

    std::vector<char> unmarked(n);
    for (Vertex v = 0; v < n; ++v) unmarked[v] = !marked[v];
    link_to_clusters(g, c, P, h, net, remaining, unmarked, "naive-link");

    std::vector<Vertex> z;
    for (int q = 0; q < net.size(); ++q)
      if (!remaining[q]) z.push_back(net.centers(q).front());
    cl = grow_bfs_clusters(g, z, i, c, &P);
    cl.level = i;
    detail::add_tree_edges(h, cl, "cluster-tree");

    rec.centers = static_cast<int>(z.size());
    rec.center_bound = ceil_pow(n, 1.0 - static_cast<double>(i) / k);
    rec.max_depth = cl.max_depth();
    rec.rounds = P.rounds_used;
    st.phases.push_back(rec);
    L.append(P);
  }

  // final phase: one edge from every vertex into each neighboring cluster
  detail::GroupNet net(g, c, cl);
  std::vector<char> all(net.size(), 1), everyone(n, 1);
  link_to_clusters(g, c, L, h, net, all, everyone, "naive-final");

  if (led) led->append(L);
  if (stats) *stats = std::move(st);
  return h;
}

Spanner naive_spanner(const Graph& g, int k, const SimConfig& cfg, RoundLedger* led,
                      NaiveStats* stats) {
  check_k_input(g, k);
  std::vector<Vertex> all(g.n());
  for (Vertex v = 0; v < g.n(); ++v) all[v] = v;
  return naive_spanner_from(g, k, 1, Clustering::singletons(g.n(), all), cfg, led, stats);
}

}  // namespace spanner
