#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanner/congest.hpp"
#include "spanner/errors.hpp"
#include "spanner/generators.hpp"

using namespace spanner;

namespace {

// Every vertex learns the maximum ID. Improvements are forwarded to all
// neighbors except the one they came from.
class FloodMax : public NodeProgram {
 public:
  std::string name() const override { return "flood-max"; }
  std::vector<std::string> provides() const override { return {"max_id"}; }
  void setup(const SimContext& c) override {
    g_ = &c.g;
    best_.assign(c.g.n(), 0);
  }
  void init(Vertex v) override { best_[v] = g_->id(v); }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    if (step == 0) {
      out.send_all(Message(1).id(best_[v]));
      return true;
    }
    Vertex src = kNoVertex;
    for (const auto& m : in)
      if (m.msg.id_at(0) > best_[v]) best_[v] = m.msg.id_at(0), src = m.from;
    if (src != kNoVertex)
      for (Vertex u : g_->nbrs(v))
        if (u != src) out.send(u, Message(1).id(best_[v]));
    return true;
  }
  void publish(ParamBlock& b) const override { b.set("max_id", best_); }
  std::vector<VertexId> best_;

 private:
  const Graph* g_ = nullptr;
};

class HaltNow : public NodeProgram {
 public:
  std::string name() const override { return "halt-now"; }
  void setup(const SimContext&) override {}
  bool on_round(Vertex, int, Inbox, Outbox&) override { return true; }
};

// Vertex 0 sends one message with `fields` id fields on round 1.
class Payload : public NodeProgram {
 public:
  explicit Payload(int fields, int copies = 1) : fields_(fields), copies_(copies) {}
  std::string name() const override { return "payload"; }
  void setup(const SimContext& c) override { g_ = &c.g; }
  bool on_round(Vertex v, int step, Inbox, Outbox& out) override {
    if (step == 0 && v == 0) {
      Message m(2);
      for (int i = 0; i < fields_; ++i) m.flag(true);
      for (int c = 0; c < copies_; ++c) out.send(g_->nbrs(v)[0], m);
    }
    return true;
  }

 private:
  int fields_, copies_;
  const Graph* g_ = nullptr;
};

// Records the step at which each message was seen.
class PingPong : public NodeProgram {
 public:
  std::string name() const override { return "ping"; }
  void setup(const SimContext& c) override {
    g_ = &c.g;
    seen_.assign(c.g.n(), -1);
  }
  bool on_round(Vertex v, int step, Inbox in, Outbox& out) override {
    if (step == 0 && v == 0) out.send(1, Message(3).count(step));
    for (const auto& m : in) {
      CHECK(m.msg[0] == step - 1);
      seen_[v] = step;
    }
    return true;
  }
  std::vector<int> seen_;

 private:
  const Graph* g_ = nullptr;
};

class Forever : public NodeProgram {
 public:
  std::string name() const override { return "forever"; }
  void setup(const SimContext&) override {}
  bool on_round(Vertex, int, Inbox, Outbox&) override { return false; }
};

class ReadMax : public NodeProgram {
 public:
  std::string name() const override { return "read-max"; }
  std::vector<std::string> needs() const override { return {"max_id"}; }
  void setup(const SimContext& c) override { got_ = c.params.get<std::vector<VertexId>>("max_id"); }
  bool on_round(Vertex, int, Inbox, Outbox&) override { return true; }
  std::vector<VertexId> got_;
};

}  // namespace

TEST_CASE("bit helpers and default budget") {
  CHECK(bits_for(0) == 1);
  CHECK(bits_for(1) == 1);
  CHECK(bits_for(2) == 2);
  CHECK(bits_for(255) == 8);
  CHECK(bits_for(256) == 9);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(default_bit_budget(4) == 16);
  CHECK(default_bit_budget(100) == 54);
  CHECK(default_bit_budget(1) == 16);
  SimConfig bad;
  bad.msg_bit_budget = 5;
  CHECK_THROWS_AS(bad.resolved(path_graph(64)), ParameterError);
}

TEST_CASE("flood max on a 4-path takes 3 rounds") {
  Graph g = path_graph(4);
  FloodMax p;
  RoundLedger L = run(g, p, SimConfig{});
  CHECK(L.rounds_used == 3);
  for (VertexId b : p.best_) CHECK(b == 3);
  CHECK(L.violations.empty());
  CHECK(L.max_edge_load == 1);
}

TEST_CASE("immediate halt uses zero rounds") {
  HaltNow p;
  CHECK(run(path_graph(4), p, SimConfig{}).rounds_used == 0);
  CHECK(run(Graph{}, p, SimConfig{}).rounds_used == 0);
}

TEST_CASE("oversized payload: audit records, strict throws") {
  Graph g = path_graph(4);
  SimConfig cfg;
  cfg.strict = false;
  // budget is 16 bits at n=4; tag 8 + 9 flags = 17
  Payload big(9);
  RoundLedger L = run(g, big, cfg);
  REQUIRE(L.violations.size() == 1);
  CHECK(L.violations[0].kind == "bits");
  CHECK(L.violations[0].value == 17);
  CHECK(L.max_bits_seen == 17);

  Payload fits(8);
  CHECK(run(g, fits, cfg).violations.empty());

  cfg.strict = true;
  CHECK_THROWS_AS(run(g, big, cfg), BudgetError);
}

TEST_CASE("congestion above the factor is a violation") {
  Graph g = path_graph(3);
  SimConfig cfg;
  cfg.strict = false;
  Payload two(1, 2);
  CHECK(run(g, two, cfg).violations.size() == 1);
  cfg.congestion_factor = 2;
  RoundLedger L = run(g, two, cfg);
  CHECK(L.violations.empty());
  CHECK(L.max_edge_load == 2);
}

TEST_CASE("counter overflow is flagged") {
  class Big : public NodeProgram {
   public:
    std::string name() const override { return "big"; }
    void setup(const SimContext&) override {}
    bool on_round(Vertex v, int step, Inbox, Outbox& out) override {
      if (step == 0 && v == 0) out.send(1, Message(1).count(1 << 20));
      return true;
    }
  } p;
  SimConfig cfg;
  cfg.strict = false;
  RoundLedger L = run(path_graph(4), p, cfg);
  REQUIRE(L.violations.size() == 1);
  CHECK(L.violations[0].kind == "field");
}

TEST_CASE("messages are visible exactly one round later") {
  PingPong p;
  RoundLedger L = run(path_graph(2), p, SimConfig{});
  CHECK(L.rounds_used == 1);
  CHECK(p.seen_[1] == 1);
  CHECK(p.seen_[0] == -1);
}

TEST_CASE("timeout names the program") {
  Forever p;
  SimConfig cfg;
  cfg.max_rounds = 5;
  try {
    run(path_graph(3), p, cfg);
    FAIL("expected timeout");
  } catch (const TimeoutError& e) {
    CHECK(std::string(e.what()).find("forever") != std::string::npos);
  }
}

TEST_CASE("determinism") {
  Graph g = erdos_renyi(120, 0.05, 11);
  FloodMax a, b;
  RoundLedger la = run(g, a, SimConfig{});
  RoundLedger lb = run(g, b, SimConfig{});
  CHECK(a.best_ == b.best_);
  CHECK(la.to_json().dump() == lb.to_json().dump());
}

TEST_CASE("run_composed") {
  Graph g = path_graph(4);
  {
    HaltNow h1, h2;
    ParamBlock blk;
    CHECK(run_composed(g, {&h1, &h2}, SimConfig{}, blk).rounds_used == 0);
  }
  {
    FloodMax f;
    HaltNow h;
    ParamBlock blk;
    RoundLedger L = run_composed(g, {&f, &h}, SimConfig{}, blk);
    CHECK(L.rounds_used == 3);
    REQUIRE(L.per_phase.size() == 2);
    CHECK(L.per_phase[0].name == "flood-max");
    CHECK(L.per_phase[0].rounds == 3);
    CHECK(L.per_phase[1].rounds == 0);
    auto j = L.to_json();
    CHECK(j["rounds"] == 3);
    CHECK(j["per_phase"][0]["name"] == "flood-max");
  }
  {
    FloodMax f;
    ReadMax r;
    ParamBlock blk;
    run_composed(g, {&f, &r}, SimConfig{}, blk);
    CHECK(r.got_ == std::vector<VertexId>{3, 3, 3, 3});
  }
  {
    ReadMax r;
    HaltNow h;
    ParamBlock blk;
    CHECK_THROWS_AS(run_composed(g, {&h, &r}, SimConfig{}, blk), CompositionError);
  }
}

TEST_CASE("ledger composition") {
  RoundLedger a, b, c;
  a.rounds_used = 3;
  a.per_phase = {{"x", 3}};
  b.rounds_used = 5;
  b.per_phase = {{"y", 5}};
  c.rounds_used = 2;
  RoundLedger t;
  t.append(a);
  t.absorb_parallel({b, c}, "par");
  CHECK(t.rounds_used == 8);
  CHECK(t.phase_rounds("par") == 5);
  t.append(a);
  CHECK(t.phase_rounds("x") == 6);
}
