#include <algorithm>
#include <map>
#include <set>

#include "kdetail.hpp"
#include "spanner/errors.hpp"
#include "spanner/spanner_k.hpp"

namespace spanner {

using detail::exchange;
using detail::kNoCluster;

namespace {

using Tuple = std::pair<std::int64_t, VertexId>;  // (degree, cluster ID)
constexpr Tuple kNoTuple{-1, 0};

// The star-graph pipeline on the A x B subgraph. Stars are radius-1
// clusters around A vertices; clusters of stars are tracked as an ordinary
// vertex-level Clustering so the tree kernels can serve them.
class StarRun {
 public:
  StarRun(const Graph& s, const std::vector<char>& is_a, int k, const SimConfig& cfg, Spanner& h,
          BipartiteStats& st)
      : s_(s), is_a_(is_a), k_(k), cfg_(cfg), h_(h), st_(st), n_(s.n()) {}

  void run(RoundLedger& L) {
    kp_ = (k_ % 2 == 0) ? k_ / 2 : (k_ - 1) / 2;
    st_.k_prime = kp_;
    for (Vertex v = 0; v < n_; ++v) a_count_ += is_a_[v];
    st_.stars = static_cast<int>(a_count_);
    form_stars(L);
    for (int i = 1; i <= kp_ - 1; ++i) phase(i, L);
    last_phase(L);
    st_.max_cluster_depth = std::max(st_.max_cluster_depth, cl_.max_depth());
  }

 private:
  VertexId cid(Vertex v) const {
    return cl_.center[v] == kNoVertex ? kNoCluster : s_.id(cl_.center[v]);
  }
  bool is_leader(Vertex v) const { return leader_[v] == v; }

  void form_stars(RoundLedger& L) {
    leader_.assign(n_, kNoVertex);
    members_.assign(n_, {});
    cl_ = Clustering::empty(n_, 0);
    exchange(
        s_, cfg_, L, "star-form",
        [&](Vertex v, Outbox& out) {
          if (is_a_[v]) {
            leader_[v] = v;
            cl_.center[v] = v;
            cl_.depth[v] = 0;
            return;
          }
          if (s_.degree(v) == 0) return;
          Vertex a = s_.nbrs(v)[0];  // smallest ID
          leader_[v] = a;
          cl_.center[v] = a;
          cl_.parent[v] = a;
          cl_.depth[v] = 1;
          h_.add(v, a, "star");
          out.send(a, Message('J'));
        },
        [&](Vertex v, Inbox in) {
          for (const Incoming& m : in) members_[v].push_back(m.from);
        });
  }

  // Every star learns which clusters it touches and the leader assigns one
  // responsible member per neighboring cluster.
  void representatives(RoundLedger& L) {
    nbr_cluster_.assign(n_, {});
    resp_.assign(n_, {});
    exchange(
        s_, cfg_, L, "cluster-announce",
        [&](Vertex v, Outbox& out) {
          if (cid(v) == kNoCluster) return;
          Message m('L');
          m.id(cid(v));
          out.send_all(m);
        },
        [&](Vertex v, Inbox in) {
          for (const Incoming& m : in) nbr_cluster_[v].emplace(m.msg.id_at(0), m.from);
        });
    detail::ListOut up(n_);
    for (Vertex v = 0; v < n_; ++v) {
      if (leader_[v] == kNoVertex || is_leader(v) || nbr_cluster_[v].empty()) continue;
      std::vector<VertexId> ids;
      for (auto& [c, _] : nbr_cluster_[v]) ids.push_back(c);
      up[v].emplace_back(leader_[v], std::move(ids));
    }
    std::vector<std::vector<std::pair<Vertex, VertexId>>> got;
    detail::send_lists(s_, cfg_, L, "representatives-up", up, got);

    detail::ListOut down(n_);
    for (Vertex a = 0; a < n_; ++a) {
      if (!is_a_[a]) continue;
      std::map<VertexId, Vertex> pick;
      if (cid(a) != kNoCluster) pick[cid(a)] = a;
      for (auto& [c, _] : nbr_cluster_[a]) pick[c] = a;
      // arrival order is by sender index, i.e. by ID
      for (auto [from, c] : got[a])
        if (!pick.count(c) || (pick[c] != a && from < pick[c])) pick[c] = from;
      std::map<Vertex, std::vector<VertexId>> lists;
      for (auto [c, who] : pick) lists[who].push_back(c);
      for (auto& [who, ids] : lists) {
        if (who == a) resp_[a] = ids;
        else down[a].emplace_back(who, ids);
      }
    }
    std::vector<std::vector<std::pair<Vertex, VertexId>>> back;
    detail::send_lists(s_, cfg_, L, "representatives-down", down, back);
    for (Vertex v = 0; v < n_; ++v)
      for (auto [_, c] : back[v]) resp_[v].push_back(c);
  }

  // Phase 1: within a factor 2. Leaders count distinct unmarked stars among
  // their neighbors and themselves; unmarked leaders ACK every neighboring
  // star once, through its smallest-ID member they see.
  std::vector<std::int64_t> approx_degree(RoundLedger& L) {
    std::vector<std::int64_t> val(n_, 0);
    std::vector<std::map<VertexId, Vertex>> nbr_star(n_);
    exchange(
        s_, cfg_, L, "star-status",
        [&](Vertex v, Outbox& out) {
          if (leader_[v] == kNoVertex) return;
          Message m('S');
          m.id(s_.id(leader_[v])).flag(unmarked_[v]);
          out.send_all(m);
        },
        [&](Vertex v, Inbox in) {
          if (!is_leader(v)) return;
          std::set<VertexId> un;
          if (unmarked_[v]) un.insert(s_.id(v));
          for (const Incoming& m : in) {
            nbr_star[v].emplace(m.msg.id_at(0), m.from);
            if (m.msg[1]) un.insert(m.msg.id_at(0));
          }
          val[v] += static_cast<std::int64_t>(un.size());
        });
    exchange(
        s_, cfg_, L, "star-ack",
        [&](Vertex v, Outbox& out) {
          if (!is_leader(v) || !unmarked_[v]) return;
          for (auto [sid, u] : nbr_star[v])
            if (sid != s_.id(v)) out.send(u, Message('a'));
        },
        [&](Vertex v, Inbox in) { val[v] += static_cast<std::int64_t>(in.size()); });
    return val;
  }

  // Phases >= 2: exact, through the responsible members.
  std::vector<std::int64_t> exact_degree(RoundLedger& L) {
    std::vector<std::int64_t> val(n_, 0);
    exchange(
        s_, cfg_, L, "cluster-ack",
        [&](Vertex v, Outbox& out) {
          if (leader_[v] == kNoVertex || !unmarked_[v]) return;
          for (VertexId c : resp_[v]) {
            if (c == cid(v)) ++val[v];
            else out.send(nbr_cluster_[v].at(c), Message('a'));
          }
        },
        [&](Vertex v, Inbox in) { val[v] += static_cast<std::int64_t>(in.size()); });
    return val;
  }

  // Host oracle: unmarked stars in or next to cluster q.
  long exact_star_degree(const detail::GroupNet& net, int q) const {
    std::set<Vertex> stars;
    for (Vertex x : net.members(q)) {
      if (unmarked_[leader_[x]]) stars.insert(leader_[x]);
      for (Vertex y : s_.nbrs(x))
        if (leader_[y] != kNoVertex && unmarked_[leader_[y]]) stars.insert(leader_[y]);
    }
    return static_cast<long>(stars.size());
  }

  void phase(int i, RoundLedger& L) {
    RoundLedger P;
    detail::GroupNet net(s_, cfg_, cl_);
    unmarked_.assign(n_, 1);
    std::vector<char> remaining(net.size(), 1);
    if (i >= 2) representatives(P);

    PhaseRecord rec;
    rec.level = i;
    rec.groups = net.size();
    rec.threshold = ceil_pow(static_cast<double>(a_count_), static_cast<double>(i) / kp_);
    long base_cap = ceil_pow(static_cast<double>(a_count_), 1.0 - static_cast<double>(i) / kp_);
    rec.iteration_cap = static_cast<int>(i == 1 ? 2 * base_cap : base_cap);
    rec.center_bound = 2 * base_cap;

    auto own = [&](Vertex v) { return net.group_of(v); };
    auto live = [&](Vertex v) { return own(v) >= 0 && remaining[own(v)]; };

    std::vector<std::int64_t> deg, degv;
    for (int it = 0; it < rec.iteration_cap; ++it) {
      RoundLedger I;
      auto val = (i == 1) ? approx_degree(I) : exact_degree(I);
      deg = net.sum(val, I);
      degv = net.bcast(deg, I);
      if (i == 1)
        for (int q = 0; q < net.size(); ++q) {
          if (!remaining[q]) continue;
          long ex = exact_star_degree(net, q);
          if (ex == 0) continue;
          double r = static_cast<double>(deg[q]) / static_cast<double>(ex);
          if (st_.ratio_samples == 0) st_.min_ratio = st_.max_ratio = r;
          st_.min_ratio = std::min(st_.min_ratio, r);
          st_.max_ratio = std::max(st_.max_ratio, r);
          ++st_.ratio_samples;
        }

      // local maxima: every unmarked star names the best tuple it sees and
      // refuses the others
      std::vector<std::vector<std::pair<Vertex, Tuple>>> heard(n_);
      std::vector<Tuple> best(n_, kNoTuple), star_best(n_, kNoTuple);
      std::vector<std::int64_t> nack(n_, 0);
      auto own_tuple = [&](Vertex v) { return live(v) ? Tuple{degv[v], cid(v)} : kNoTuple; };
      exchange(
          s_, cfg_, I, "tuple",
          [&](Vertex v, Outbox& out) {
            if (!live(v)) return;
            Message m('T');
            m.count(degv[v]).id(cid(v));
            out.send_all(m);
          },
          [&](Vertex v, Inbox in) {
            if (leader_[v] == kNoVertex || !unmarked_[v]) return;
            best[v] = own_tuple(v);
            for (const Incoming& m : in) {
              Tuple t{m.msg[0], m.msg.id_at(1)};
              heard[v].emplace_back(m.from, t);
              best[v] = std::max(best[v], t);
            }
          });
      exchange(
          s_, cfg_, I, "star-best-up",
          [&](Vertex v, Outbox& out) {
            if (is_leader(v) || leader_[v] == kNoVertex || best[v] == kNoTuple) return;
            Message m('B');
            m.count(best[v].first).id(best[v].second);
            out.send(leader_[v], m);
          },
          [&](Vertex v, Inbox in) {
            if (!is_leader(v)) return;
            star_best[v] = best[v];
            for (const Incoming& m : in) star_best[v] = std::max(star_best[v], Tuple{m.msg[0], m.msg.id_at(1)});
          });
      exchange(
          s_, cfg_, I, "star-best-down",
          [&](Vertex v, Outbox& out) {
            if (!is_leader(v) || star_best[v] == kNoTuple) return;
            Message m('B');
            m.count(star_best[v].first).id(star_best[v].second);
            for (Vertex b : members_[v]) out.send(b, m);
          },
          [&](Vertex v, Inbox in) {
            for (const Incoming& m : in) star_best[v] = Tuple{m.msg[0], m.msg.id_at(1)};
          });
      exchange(
          s_, cfg_, I, "refuse",
          [&](Vertex v, Outbox& out) {
            if (leader_[v] == kNoVertex || !unmarked_[v]) return;
            for (auto& [from, t] : heard[v])
              if (t != star_best[v]) out.send(from, Message('N'));
            if (is_leader(v) && live(v) && own_tuple(v) != star_best[v]) ++nack[v];
          },
          [&](Vertex v, Inbox in) { nack[v] += static_cast<std::int64_t>(in.size()); });
      auto refused = net.sum(nack, I);

      std::vector<std::int64_t> join(net.size(), 0);
      int joined = 0;
      for (int q = 0; q < net.size(); ++q)
        if (remaining[q] && refused[q] == 0 && deg[q] > 0 && deg[q] >= rec.threshold) {
          join[q] = 1;
          ++joined;
        }
      rec.overlap_violations += overlap(net, join);

      auto jv = net.bcast(join, I);
      std::vector<char> flagged(n_, 0), newly(n_, 0);
      exchange(
          s_, cfg_, I, "mark",
          [&](Vertex v, Outbox& out) {
            if (jv[v]) out.send_all(Message('M'));
          },
          [&](Vertex v, Inbox in) {
            if (leader_[v] == kNoVertex || !unmarked_[v]) return;
            if (!in.empty() || jv[v]) flagged[v] = 1;
          });
      exchange(
          s_, cfg_, I, "mark-up",
          [&](Vertex v, Outbox& out) {
            if (flagged[v] && !is_leader(v)) out.send(leader_[v], Message('m'));
          },
          [&](Vertex v, Inbox in) {
            if (is_leader(v) && unmarked_[v] && (flagged[v] || !in.empty())) newly[v] = 1;
          });
      exchange(
          s_, cfg_, I, "mark-down",
          [&](Vertex v, Outbox& out) {
            if (!newly[v]) return;
            unmarked_[v] = 0;
            for (Vertex b : members_[v]) out.send(b, Message('U'));
          },
          [&](Vertex v, Inbox in) {
            if (!in.empty()) unmarked_[v] = 0;
          });
      for (int q = 0; q < net.size(); ++q)
        if (join[q]) remaining[q] = 0;

      rec.joined += joined;
      ++rec.iterations_run;
      P.append(I);
      if (joined == 0) {
        rec.fixed_point = true;
        long idle = static_cast<long>(rec.iteration_cap - it - 1) * I.rounds_used;
        if (idle > 0) {
          P.rounds_used += idle;
          P.add_phase("idle-iterations", idle);
        }
        rec.idle_rounds = idle;
        break;
      }
    }
    for (int q = 0; q < net.size(); ++q)
      if (remaining[q] && exact_star_degree(net, q) >= rec.threshold) ++rec.high_after;

    // SII: each (remaining cluster, unmarked star) pair that touches gets an edge
    if (i == 1) {
      std::vector<std::map<VertexId, std::pair<Vertex, std::pair<bool, bool>>>> seen(n_);
      exchange(
          s_, cfg_, P, "pair-status",
          [&](Vertex v, Outbox& out) {
            if (leader_[v] == kNoVertex) return;
            Message m('S');
            m.id(s_.id(leader_[v])).flag(unmarked_[v]).flag(live(v));
            out.send_all(m);
          },
          [&](Vertex v, Inbox in) {
            if (!is_leader(v)) return;
            for (const Incoming& m : in) seen[v].emplace(m.msg.id_at(0), std::make_pair(m.from, std::make_pair(m.msg[1] != 0, m.msg[2] != 0)));
            bool mine_un = unmarked_[v], mine_rem = live(v);
            for (auto& [sid, x] : seen[v]) {
              if (sid == s_.id(v)) continue;
              auto [from, flags] = x;
              auto [s_un, s_rem] = flags;
              if ((mine_rem && s_un) || (s_rem && mine_un)) h_.add(v, from, "bip-link");
            }
          });
    } else {
      exchange(
          s_, cfg_, P, "remaining",
          [&](Vertex v, Outbox& out) {
            if (!live(v)) return;
            Message m('R');
            m.id(cid(v));
            out.send_all(m);
          },
          [&](Vertex v, Inbox in) {
            if (leader_[v] == kNoVertex || !unmarked_[v]) return;
            std::map<VertexId, Vertex> rem;
            for (const Incoming& m : in) rem.emplace(m.msg.id_at(0), m.from);
            for (VertexId c : resp_[v]) {
              if (c == cid(v)) continue;
              auto it = rem.find(c);
              if (it != rem.end()) h_.add(v, it->second, "bip-link");
            }
          });
    }

    std::vector<Vertex> z;
    for (int q = 0; q < net.size(); ++q)
      if (!remaining[q]) z.push_back(net.centers(q).front());
    star_bfs(z, i, P);
    rec.centers = static_cast<int>(z.size());
    rec.max_depth = cl_.max_depth();
    st_.max_cluster_depth = std::max(st_.max_cluster_depth, rec.max_depth);
    rec.rounds = P.rounds_used;
    st_.phases.push_back(rec);
    L.append(P);
  }

  int overlap(const detail::GroupNet& net, const std::vector<std::int64_t>& join) const {
    std::map<Vertex, int> owner;
    int bad = 0;
    for (int q = 0; q < net.size(); ++q) {
      if (!join[q]) continue;
      std::set<Vertex> stars;
      for (Vertex x : net.members(q)) {
        if (unmarked_[leader_[x]]) stars.insert(leader_[x]);
        for (Vertex y : s_.nbrs(x))
          if (leader_[y] != kNoVertex && unmarked_[leader_[y]]) stars.insert(leader_[y]);
      }
      for (Vertex a : stars)
        if (!owner.emplace(a, q).second) {
          ++bad;
          break;
        }
    }
    return bad;
  }

  // BFS over the star graph from the stars of `z`, `depth` star hops.
  // A star joins through one member; ties go to the larger center ID, then
  // the smaller member and sender IDs.
  void star_bfs(const std::vector<Vertex>& z, int depth, RoundLedger& L) {
    Clustering nc = Clustering::empty(n_, depth);
    std::vector<char> fresh(n_, 0), is_z(n_, 0);
    for (Vertex a : z) is_z[a] = 1;
    exchange(
        s_, cfg_, L, "star-bfs-seed",
        [&](Vertex v, Outbox& out) {
          if (!is_z[v]) return;
          nc.center[v] = v;
          fresh[v] = 1;
          Message m('J');
          m.id(s_.id(v));
          for (Vertex b : members_[v]) out.send(b, m);
        },
        [&](Vertex v, Inbox in) {
          for (const Incoming& m : in) {
            nc.center[v] = s_.at(m.msg.id_at(0));
            nc.parent[v] = m.from;
            fresh[v] = 1;
          }
        });
    std::vector<std::pair<VertexId, Vertex>> offer(n_);
    std::vector<std::pair<VertexId, Vertex>> decision(n_);
    for (int d = 1; d <= depth; ++d) {
      bool any = false;
      for (Vertex v = 0; v < n_; ++v) any = any || fresh[v];
      if (!any) break;
      std::fill(offer.begin(), offer.end(), std::make_pair(VertexId{0}, kNoVertex));
      std::fill(decision.begin(), decision.end(), std::make_pair(VertexId{0}, kNoVertex));
      exchange(
          s_, cfg_, L, "star-bfs-offer",
          [&](Vertex v, Outbox& out) {
            if (!fresh[v]) return;
            fresh[v] = 0;
            Message m('O');
            m.id(s_.id(nc.center[v]));
            out.send_all(m);
          },
          [&](Vertex v, Inbox in) {
            if (leader_[v] == kNoVertex || nc.center[v] != kNoVertex) return;
            for (const Incoming& m : in)
              if (offer[v].second == kNoVertex || m.msg.id_at(0) > offer[v].first)
                offer[v] = {m.msg.id_at(0), m.from};
          });
      exchange(
          s_, cfg_, L, "star-bfs-up",
          [&](Vertex v, Outbox& out) {
            if (is_leader(v) || offer[v].second == kNoVertex) return;
            Message m('F');
            m.id(offer[v].first);
            out.send(leader_[v], m);
          },
          [&](Vertex v, Inbox in) {
            if (!is_leader(v)) return;
            std::vector<std::pair<VertexId, Vertex>> cand;  // (center, member)
            if (offer[v].second != kNoVertex) cand.emplace_back(offer[v].first, v);
            for (const Incoming& m : in) cand.emplace_back(m.msg.id_at(0), m.from);
            for (auto& c : cand) {
              auto& best = decision[v];
              if (best.second == kNoVertex || c.first > best.first ||
                  (c.first == best.first && c.second < best.second))
                best = c;
            }
          });
      exchange(
          s_, cfg_, L, "star-bfs-join",
          [&](Vertex v, Outbox& out) {
            if (!is_leader(v) || decision[v].second == kNoVertex) return;
            auto [c, via] = decision[v];
            nc.center[v] = s_.at(c);
            nc.parent[v] = (via == v) ? offer[v].second : via;
            fresh[v] = 1;
            Message m('J');
            m.id(c).id(s_.id(via));
            for (Vertex b : members_[v]) out.send(b, m);
          },
          [&](Vertex v, Inbox in) {
            for (const Incoming& m : in) {
              nc.center[v] = s_.at(m.msg.id_at(0));
              nc.parent[v] = (m.msg.id_at(1) == s_.id(v)) ? offer[v].second : leader_[v];
              fresh[v] = 1;
            }
          });
    }
    detail::fill_depths(nc);
    nc.depth_bound = 2 * depth + 1;
    cl_ = std::move(nc);
    detail::add_tree_edges(h_, cl_, "bip-cluster-tree");
  }

  void last_phase(RoundLedger& L) {
    if (kp_ - 1 == 0) {
      // clusters are the stars themselves: every leader links to every
      // neighboring star, which covers each touching pair from one side
      exchange(
          s_, cfg_, L, "final-stars",
          [&](Vertex v, Outbox& out) {
            if (leader_[v] == kNoVertex) return;
            Message m('S');
            m.id(s_.id(leader_[v]));
            out.send_all(m);
          },
          [&](Vertex v, Inbox in) {
            if (!is_leader(v)) return;
            std::set<VertexId> seen;
            for (const Incoming& m : in) {
              VertexId sid = m.msg.id_at(0);
              if (sid == s_.id(v) || !seen.insert(sid).second) continue;
              h_.add(v, m.from, "bip-final");
            }
          });
      return;
    }
    representatives(L);
    for (Vertex v = 0; v < n_; ++v) {
      if (leader_[v] == kNoVertex) continue;
      for (VertexId c : resp_[v])
        if (c != cid(v)) h_.add(v, nbr_cluster_[v].at(c), "bip-final");
    }
  }

  const Graph& s_;
  const std::vector<char>& is_a_;
  int k_;
  const SimConfig& cfg_;
  Spanner& h_;
  BipartiteStats& st_;
  int n_;
  int kp_ = 0;
  long a_count_ = 0;

  std::vector<Vertex> leader_;
  std::vector<std::vector<Vertex>> members_;  // at leaders: the B vertices of the star
  std::vector<char> unmarked_;                // each vertex's view of its star
  Clustering cl_;
  std::vector<std::map<VertexId, Vertex>> nbr_cluster_;
  std::vector<std::vector<VertexId>> resp_;
};

}  // namespace

Spanner sparser_bipartite_spanner(const Graph& g, const Bipartition& part, int k,
                                  const SimConfig& cfg, RoundLedger* led, BipartiteStats* stats) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  if (k < 3) {
    if (stats) *stats = {};
    return bipartite_3_spanner(g, part, cfg, led);
  }
  if (g.weighted()) throw ParameterError("weighted graphs are only supported for k <= 2");
  std::vector<char> side(g.n(), 0);
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
  std::vector<char> is_a(sub.n(), 0);
  for (Vertex s = 0; s < sub.n(); ++s) is_a[s] = side[to_parent[s]] == 1;

  SimConfig c = cfg.resolved(g);
  Spanner hs(sub);
  BipartiteStats st;
  RoundLedger L;
  StarRun r(sub, is_a, k, c, hs, st);
  r.run(L);
  if (led) led->append(L);
  if (stats) *stats = std::move(st);
  Spanner h(g);
  detail::merge_mapped(h, hs, to_parent);
  return h;
}

}  // namespace spanner
