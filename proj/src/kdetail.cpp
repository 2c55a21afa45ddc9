#include "kdetail.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "spanner/errors.hpp"

namespace spanner {

long ceil_pow(double n, double x) {
  if (n <= 0) return 0;
  long double p = std::pow(static_cast<long double>(n), static_cast<long double>(x));
  long r = static_cast<long>(std::ceil(p - 1e-9L));
  return std::max(r, 1L);
}

namespace detail {

namespace {

class Exchange : public NodeProgram {
 public:
  Exchange(std::string name, const std::function<void(Vertex, Outbox&)>& send,
           const std::function<void(Vertex, Inbox)>& recv)
      : name_(std::move(name)), send_(send), recv_(recv) {}
  std::string name() const override { return name_; }
  void setup(const SimContext&) override {}
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    if (step == 0) {
      send_(v, out);
      return false;
    }
    if (step == 1) recv_(v, in);
    return true;
  }

 private:
  std::string name_;
  const std::function<void(Vertex, Outbox&)>& send_;
  const std::function<void(Vertex, Inbox)>& recv_;
};

class Lists : public NodeProgram {
 public:
  Lists(std::string name, const ListOut& out, std::vector<std::vector<std::pair<Vertex, VertexId>>>& rcv)
      : name_(std::move(name)), out_(out), rcv_(rcv) {}
  std::string name() const override { return name_; }
  void setup(const SimContext& ctx) override {
    per_ = std::min(Message::kCap, std::max(1, ids_per_message(ctx.cfg)));
    rcv_.assign(ctx.g.n(), {});
  }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    for (const Incoming& m : in)
      for (int i = 0; i < m.msg.size(); ++i) rcv_[v].emplace_back(m.from, m.msg.id_at(i));
    bool more = false;
    size_t lo = static_cast<size_t>(step) * per_;
    for (const auto& [to, ids] : out_[v]) {
      if (ids.size() <= lo) continue;
      Message m('I');
      for (size_t i = lo; i < ids.size() && i < lo + per_; ++i) m.id(ids[i]);
      out.send(to, m);
      if (ids.size() > lo + per_) more = true;
    }
    return !more;
  }

 private:
  std::string name_;
  const ListOut& out_;
  std::vector<std::vector<std::pair<Vertex, VertexId>>>& rcv_;
  size_t per_ = 1;
};

const AggSpec kSum{AggOp::Sum, 1, {Field::Count, Field::Count}};
const AggSpec kMax{AggOp::LexMax, 1, {Field::Id, Field::Id}};

std::vector<Vertex> unmarked_nbhd(const Graph& g, const GroupNet& net, int q,
                                  const std::vector<char>& marked, bool closed,
                                  std::vector<int>& stamp, int tick) {
  std::vector<Vertex> out;
  auto take = [&](Vertex y) {
    if (marked[y] || stamp[y] == tick) return;
    stamp[y] = tick;
    out.push_back(y);
  };
  for (Vertex x : net.members(q)) {
    if (closed) take(x);
    for (Vertex y : g.nbrs(x)) take(y);
  }
  return out;
}

}  // namespace

void exchange(const Graph& g, const SimConfig& cfg, RoundLedger& led, const std::string& name,
              const std::function<void(Vertex, Outbox&)>& send,
              const std::function<void(Vertex, Inbox)>& recv) {
  Exchange p(name, send, recv);
  led.append(run(g, p, cfg));
}

void send_lists(const Graph& g, const SimConfig& cfg, RoundLedger& led, const std::string& name,
                const ListOut& out, std::vector<std::vector<std::pair<Vertex, VertexId>>>& received) {
  Lists p(name, out, received);
  led.append(run(g, p, cfg));
}

GroupNet::GroupNet(const Graph& g, const SimConfig& cfg, const Clustering& c)
    : g_(g), cfg_(cfg), of_(g.n(), -1) {
  ctrees_ = c.trees();
  members_ = c.members();
  for (size_t t = 0; t < ctrees_.size(); ++t) {
    cgroup_.push_back(static_cast<int>(t));
    gid_.push_back(g.id(ctrees_[t].root));
    centers_.push_back({ctrees_[t].root});
    for (Vertex x : members_[t]) of_[x] = static_cast<int>(t);
  }
}

GroupNet::GroupNet(const Graph& g, const SimConfig& cfg, const Superclustering& sc)
    : g_(g), cfg_(cfg), of_(g.n(), -1), has_sc_(true) {
  ctrees_ = sc.clustering.trees();
  auto mem = sc.clustering.members();
  std::unordered_map<Vertex, int> cidx;
  for (size_t t = 0; t < ctrees_.size(); ++t) cidx[ctrees_[t].root] = static_cast<int>(t);
  cgroup_.assign(ctrees_.size(), -1);
  for (size_t q = 0; q < sc.scs.size(); ++q) {
    const Supercluster& s = sc.scs[q];
    strees_.push_back(s.tree);
    gid_.push_back(s.id);
    centers_.push_back(s.centers);
    std::vector<Vertex> vs;
    for (Vertex z : s.centers) {
      auto it = cidx.find(z);
      if (it == cidx.end()) throw PreconditionError("supercluster center " + std::to_string(g.id(z)) + " is not a cluster center");
      if (cgroup_[it->second] >= 0) throw PreconditionError("cluster in two superclusters");
      cgroup_[it->second] = static_cast<int>(q);
      for (Vertex x : mem[it->second]) {
        of_[x] = static_cast<int>(q);
        vs.push_back(x);
      }
    }
    std::sort(vs.begin(), vs.end());
    members_.push_back(std::move(vs));
  }
}

std::vector<std::int64_t> GroupNet::reduce(const std::vector<std::int64_t>& per_vertex,
                                           const AggSpec& spec, RoundLedger& led) const {
  std::vector<std::vector<AggValue>> v1(ctrees_.size());
  for (size_t t = 0; t < ctrees_.size(); ++t)
    for (Vertex x : ctrees_[t].nodes) v1[t].push_back(AggValue{{per_vertex[x], 0}});
  std::vector<AggValue> a1;
  if (!ctrees_.empty()) a1 = forest_aggregate(g_, ctrees_, v1, spec, cfg_, &led, "cluster-up");
  std::vector<std::int64_t> out(size(), 0);
  if (!has_sc_) {
    for (size_t t = 0; t < a1.size(); ++t) out[t] = a1[t].v[0];
    return out;
  }
  std::unordered_map<Vertex, int> cidx;
  for (size_t t = 0; t < ctrees_.size(); ++t) cidx[ctrees_[t].root] = static_cast<int>(t);
  std::vector<std::vector<AggValue>> v2(strees_.size());
  for (size_t q = 0; q < strees_.size(); ++q)
    for (Vertex x : strees_[q].nodes) {
      AggValue a;
      auto it = cidx.find(x);
      if (it != cidx.end() && cgroup_[it->second] == static_cast<int>(q)) a = a1[it->second];
      v2[q].push_back(a);
    }
  if (strees_.empty()) return out;
  auto a2 = forest_aggregate(g_, strees_, v2, spec, cfg_, &led, "supercluster-up");
  for (size_t q = 0; q < a2.size(); ++q) out[q] = a2[q].v[0];
  return out;
}

std::vector<std::int64_t> GroupNet::sum(const std::vector<std::int64_t>& per_vertex,
                                        RoundLedger& led) const {
  return reduce(per_vertex, kSum, led);
}

std::vector<std::int64_t> GroupNet::max(const std::vector<std::int64_t>& per_vertex,
                                        RoundLedger& led) const {
  return reduce(per_vertex, kMax, led);
}

std::vector<std::int64_t> GroupNet::bcast(const std::vector<std::int64_t>& per_group,
                                          RoundLedger& led) const {
  std::vector<AggValue> croot(ctrees_.size());
  if (!has_sc_) {
    for (size_t t = 0; t < ctrees_.size(); ++t) croot[t] = AggValue{{per_group[t], 0}};
  } else if (!strees_.empty()) {
    std::vector<AggValue> sroot;
    for (size_t q = 0; q < strees_.size(); ++q) sroot.push_back(AggValue{{per_group[q], 0}});
    auto seen = forest_broadcast(g_, strees_, sroot, kSum, cfg_, &led, "supercluster-down");
    std::unordered_map<Vertex, int> cidx;
    for (size_t t = 0; t < ctrees_.size(); ++t) cidx[ctrees_[t].root] = static_cast<int>(t);
    for (size_t q = 0; q < strees_.size(); ++q)
      for (size_t j = 0; j < strees_[q].nodes.size(); ++j) {
        auto it = cidx.find(strees_[q].nodes[j]);
        if (it != cidx.end() && cgroup_[it->second] == static_cast<int>(q)) croot[it->second] = seen[q][j];
      }
  }
  std::vector<std::int64_t> out(g_.n(), 0);
  if (ctrees_.empty()) return out;
  auto seen = forest_broadcast(g_, ctrees_, croot, kSum, cfg_, &led, "cluster-down");
  for (size_t t = 0; t < ctrees_.size(); ++t)
    for (size_t j = 0; j < ctrees_[t].nodes.size(); ++j) out[ctrees_[t].nodes[j]] = seen[t][j].v[0];
  return out;
}

PhaseRecord elect(const Graph& g, const SimConfig& cfg, const GroupNet& net, const ElectionInput& in,
                  std::vector<char>& marked, std::vector<char>& remaining, RoundLedger& led) {
  PhaseRecord rec;
  rec.level = in.level;
  rec.threshold = in.threshold;
  rec.iteration_cap = in.cap;
  for (char r : remaining) rec.groups += r;

  const int n = g.n();
  auto own = [&](Vertex v) { return net.group_of(v); };
  auto live = [&](Vertex v) { return own(v) >= 0 && remaining[own(v)]; };
  std::vector<std::vector<Vertex>> ack_to(n);
  std::vector<Vertex> best_from(n, kNoVertex);
  std::vector<std::int64_t> val(n, 0), degv;
  std::vector<int> stamp(n, -1);
  int tick = 0;

  for (int it = 0; it < in.cap; ++it) {
    RoundLedger L;
    std::fill(val.begin(), val.end(), 0);
    exchange(
        g, cfg, L, "announce-group",
        [&](Vertex v, Outbox& out) {
          if (!live(v)) return;
          Message m('G');
          m.id(net.gid(own(v)));
          out.send_all(m);
        },
        [&](Vertex v, Inbox inb) {
          ack_to[v].clear();
          if (marked[v]) return;
          VertexId mine = own(v) >= 0 ? net.gid(own(v)) : kNoCluster;
          std::set<VertexId> seen;
          // inboxes are sorted by sender: the first sender of a group is its smallest-ID one
          for (const Incoming& m : inb) {
            VertexId q = m.msg.id_at(0);
            if (in.closed && q == mine) continue;
            if (seen.insert(q).second) ack_to[v].push_back(m.from);
          }
        });
    exchange(
        g, cfg, L, "ack-group",
        [&](Vertex v, Outbox& out) {
          for (Vertex u : ack_to[v]) out.send(u, Message('a'));
        },
        [&](Vertex v, Inbox inb) { val[v] += static_cast<std::int64_t>(inb.size()); });
    if (in.closed)
      for (Vertex v = 0; v < n; ++v)
        if (!marked[v] && live(v)) ++val[v];
    auto deg = net.sum(val, L);
    degv = net.bcast(deg, L);

    std::fill(val.begin(), val.end(), 0);
    exchange(
        g, cfg, L, "tuple",
        [&](Vertex v, Outbox& out) {
          if (!live(v)) return;
          Message m('T');
          m.count(degv[v]).id(net.gid(own(v)));
          out.send_all(m);
        },
        [&](Vertex v, Inbox inb) {
          best_from[v] = kNoVertex;
          if (marked[v]) return;
          std::pair<std::int64_t, VertexId> best{-1, 0};
          bool self = false;
          if (in.closed && live(v)) {
            best = {degv[v], net.gid(own(v))};
            self = true;
          }
          for (const Incoming& m : inb) {
            std::pair<std::int64_t, VertexId> t{m.msg[0], m.msg.id_at(1)};
            if (t > best) {
              best = t;
              best_from[v] = m.from;
              self = false;
            }
          }
          if (self) {
            best_from[v] = kNoVertex;
            ++val[v];
          }
        });
    exchange(
        g, cfg, L, "ack-max",
        [&](Vertex v, Outbox& out) {
          if (best_from[v] != kNoVertex) out.send(best_from[v], Message('x'));
        },
        [&](Vertex v, Inbox inb) { val[v] += static_cast<std::int64_t>(inb.size()); });
    auto mx = net.sum(val, L);

    std::vector<std::int64_t> join(net.size(), 0);
    int joined = 0;
    for (int q = 0; q < net.size(); ++q)
      if (remaining[q] && deg[q] > 0 && mx[q] == deg[q] && deg[q] >= in.threshold) {
        join[q] = 1;
        ++joined;
      }

    // audit: unmarked neighborhoods of this iteration's winners are disjoint
    ++tick;
    std::vector<int> owner(n, -1);
    for (int q = 0; q < net.size(); ++q) {
      if (!join[q]) continue;
      for (Vertex y : unmarked_nbhd(g, net, q, marked, in.closed, stamp, ++tick)) {
        if (owner[y] >= 0) {
          ++rec.overlap_violations;
          break;
        }
        owner[y] = q;
      }
    }

    auto jv = net.bcast(join, L);
    std::vector<char> hit(n, 0);
    exchange(
        g, cfg, L, "mark",
        [&](Vertex v, Outbox& out) {
          if (jv[v]) out.send_all(Message('M'));
        },
        [&](Vertex v, Inbox inb) {
          if (marked[v]) return;
          if (!inb.empty() || (in.closed && jv[v])) hit[v] = 1;
        });
    for (Vertex v = 0; v < n; ++v)
      if (hit[v]) marked[v] = 1;
    for (int q = 0; q < net.size(); ++q)
      if (join[q]) remaining[q] = 0;

    rec.joined += joined;
    ++rec.iterations_run;
    led.append(L);
    rec.rounds += L.rounds_used;
    if (joined == 0) {
      rec.fixed_point = true;
      long idle = static_cast<long>(in.cap - it - 1) * L.rounds_used;
      if (idle > 0) {
        led.rounds_used += idle;
        led.add_phase("idle-iterations", idle);
      }
      rec.idle_rounds = idle;
      rec.rounds += idle;
      break;
    }
  }

  for (int q = 0; q < net.size(); ++q)
    if (remaining[q] &&
        static_cast<long>(unmarked_nbhd(g, net, q, marked, in.closed, stamp, ++tick).size()) >= in.threshold)
      ++rec.high_after;
  return rec;
}

void absorb_instances(RoundLedger& led, const std::vector<RoundLedger>& bip,
                      const std::vector<RoundLedger>& rec, int max_share, const std::string& label) {
  std::vector<RoundLedger> all = bip;
  all.insert(all.end(), rec.begin(), rec.end());
  if (all.empty()) return;
  led.absorb_parallel(all, label);
  if (max_share >= 2) {
    long longest = 0;
    for (const auto& b : bip) longest = std::max(longest, b.rounds_used);
    if (longest > 0) {
      led.rounds_used += longest;
      led.add_phase(label + "-congestion", longest);
    }
  }
}

int max_instances_per_edge(const Graph& g, const std::vector<Bipartition>& inst) {
  std::vector<int> cnt(g.m(), 0);
  std::vector<int> side(g.n(), 0);
  int best = 0;
  for (const Bipartition& p : inst) {
    for (Vertex b : p.B) side[b] = 2;
    for (Vertex a : p.A)
      for (size_t i = 0; i < g.nbrs(a).size(); ++i)
        if (side[g.nbrs(a)[i]] == 2) best = std::max(best, ++cnt[g.eids(a)[i]]);
    for (Vertex b : p.B) side[b] = 0;
  }
  return best;
}

void add_tree_edges(Spanner& h, const Clustering& c, const std::string& tag) {
  for (Vertex v = 0; v < static_cast<Vertex>(c.parent.size()); ++v)
    if (c.parent[v] != kNoVertex) h.add(v, c.parent[v], tag);
}

void fill_depths(Clustering& c) {
  const int n = static_cast<int>(c.center.size());
  std::fill(c.depth.begin(), c.depth.end(), -1);
  for (Vertex v = 0; v < n; ++v) {
    if (c.center[v] == kNoVertex || c.depth[v] >= 0) continue;
    std::vector<Vertex> path;
    Vertex x = v;
    while (x != kNoVertex && c.depth[x] < 0 && c.parent[x] != kNoVertex) {
      path.push_back(x);
      x = c.parent[x];
    }
    int d = (x == kNoVertex) ? 0 : (c.depth[x] < 0 ? 0 : c.depth[x]);
    if (x != kNoVertex && c.depth[x] < 0) c.depth[x] = 0;
    for (auto it = path.rbegin(); it != path.rend(); ++it) c.depth[*it] = ++d;
  }
}

void finalize_superclustering(const Graph& g, const SimConfig& cfg, Superclustering& sc,
                              RoundLedger& led) {
  auto mem = sc.clustering.members();
  auto cs = sc.clustering.centers();
  std::unordered_map<Vertex, int> cidx;
  for (size_t t = 0; t < cs.size(); ++t) cidx[cs[t]] = static_cast<int>(t);
  for (Supercluster& s : sc.scs) {
    std::sort(s.centers.begin(), s.centers.end());
    s.singleton = s.centers.size() == 1;
    s.vertices.clear();
    for (Vertex z : s.centers)
      for (Vertex x : mem.at(cidx.at(z))) s.vertices.push_back(x);
    std::sort(s.vertices.begin(), s.vertices.end());
  }
  GroupNet net(g, cfg, sc);
  std::vector<std::int64_t> ids(g.n());
  for (Vertex v = 0; v < g.n(); ++v) ids[v] = static_cast<std::int64_t>(g.id(v));
  auto mx = net.max(ids, led);
  for (size_t q = 0; q < sc.scs.size(); ++q) sc.scs[q].id = static_cast<VertexId>(mx[q]);
}

void merge_mapped(Spanner& h, const Spanner& sub, const std::vector<Vertex>& to_parent) {
  for (int e : sub.edge_list()) {
    const Edge& ed = sub.base().edge(e);
    h.add(to_parent[ed.u], to_parent[ed.v], sub.tag(e));
  }
}

}  // namespace detail
}  // namespace spanner
