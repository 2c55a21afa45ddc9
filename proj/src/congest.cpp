#include "spanner/congest.hpp"

#include <algorithm>
#include <cmath>

#include "spanner/errors.hpp"

namespace spanner {

int bits_for(std::uint64_t x) {
  int b = 1;
  while (b < 64 && (x >> b) != 0) ++b;
  return b;
}

int ceil_log2(std::uint64_t x) {
  int b = 0;
  while (b < 64 && (std::uint64_t{1} << b) < x) ++b;
  return b;
}

int default_bit_budget(int n) {
  double lg = std::log2(static_cast<double>(std::max(n, 4)));
  return static_cast<int>(std::ceil(8.0 * lg - 1e-9));
}

SimConfig SimConfig::resolved(const Graph& g) const {
  SimConfig c = *this;
  if (c.msg_bit_budget <= 0) c.msg_bit_budget = default_bit_budget(g.n());
  if (c.id_bits <= 0) c.id_bits = bits_for(g.max_id());
  if (c.count_bits <= 0) c.count_bits = bits_for(static_cast<std::uint64_t>(std::max(g.n(), 1))) + 1;
  if (c.congestion_factor < 1) throw ParameterError("congestion_factor must be >= 1");
  if (c.max_rounds < 0) throw ParameterError("max_rounds must be >= 0");
  if (c.msg_bit_budget < ceil_log2(std::max(g.n(), 1)) + 4)
    throw ParameterError("msg_bit_budget below ceil(log2 n) + 4");
  return c;
}

Message& Message::push(std::int64_t x, Field f) {
  if (len_ >= kCap) throw std::logic_error("message field capacity exceeded");
  w_[len_] = x;
  f_[len_] = f;
  ++len_;
  return *this;
}

static int width(Field f, const SimConfig& cfg) {
  switch (f) {
    case Field::Id: return cfg.id_bits;
    case Field::Count: return cfg.count_bits;
    case Field::Flag: return 1;
  }
  return 0;
}

int Message::bits(const SimConfig& cfg) const {
  int b = kTagBits;
  for (int i = 0; i < len_; ++i) b += width(f_[i], cfg);
  return b;
}

std::string Message::field_overflow(const SimConfig& cfg) const {
  for (int i = 0; i < len_; ++i) {
    std::int64_t x = w_[i];
    switch (f_[i]) {
      case Field::Id:
        if (x < 0 || (cfg.id_bits < 63 && (static_cast<std::uint64_t>(x) >> cfg.id_bits) != 0))
          return "id field " + std::to_string(x);
        break;
      case Field::Count: {
        std::int64_t lim = std::int64_t{1} << (cfg.count_bits - 1);
        if (x >= lim || x < -lim) return "counter field " + std::to_string(x);
        break;
      }
      case Field::Flag:
        if (x != 0 && x != 1) return "flag field " + std::to_string(x);
        break;
    }
  }
  return {};
}

bool Message::operator==(const Message& o) const {
  if (tag_ != o.tag_ || len_ != o.len_) return false;
  for (int i = 0; i < len_; ++i)
    if (w_[i] != o.w_[i] || f_[i] != o.f_[i]) return false;
  return true;
}

int ids_per_message(const SimConfig& cfg, int fixed_ids, int fixed_counts) {
  int room = cfg.msg_bit_budget - Message::kTagBits - fixed_ids * cfg.id_bits -
             fixed_counts * cfg.count_bits;
  int k = room / cfg.id_bits;
  k = std::min(k, Message::kCap - fixed_ids - fixed_counts);
  if (k < 1) throw ParameterError("message budget too small for one id field");
  return k;
}

void Outbox::send(Vertex to, const Message& m) {
  if (!g_->has_edge(self_, to))
    throw std::logic_error("send to a non-neighbor");
  out_.emplace_back(to, m);
}

void Outbox::send_all(const Message& m) {
  for (Vertex u : g_->nbrs(self_)) out_.emplace_back(u, m);
}

std::string Violation::describe() const {
  return "round " + std::to_string(round) + " " + program + " " + kind + " " +
         std::to_string(from) + "->" + std::to_string(to) + " value " + std::to_string(value);
}

void RoundLedger::add_phase(const std::string& name, long rounds) {
  for (auto& p : per_phase)
    if (p.name == name) {
      p.rounds += rounds;
      return;
    }
  per_phase.push_back({name, rounds});
}

long RoundLedger::phase_rounds(const std::string& name) const {
  for (const auto& p : per_phase)
    if (p.name == name) return p.rounds;
  return 0;
}

void RoundLedger::append(const RoundLedger& o) {
  rounds_used += o.rounds_used;
  max_bits_seen = std::max(max_bits_seen, o.max_bits_seen);
  max_edge_load = std::max(max_edge_load, o.max_edge_load);
  messages += o.messages;
  per_round_edge_load.insert(per_round_edge_load.end(), o.per_round_edge_load.begin(),
                             o.per_round_edge_load.end());
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  for (const auto& p : o.per_phase) add_phase(p.name, p.rounds);
}

void RoundLedger::absorb_parallel(const std::vector<RoundLedger>& parts, const std::string& label) {
  long longest = 0;
  std::vector<int> load;
  for (const auto& p : parts) {
    longest = std::max(longest, p.rounds_used);
    max_bits_seen = std::max(max_bits_seen, p.max_bits_seen);
    max_edge_load = std::max(max_edge_load, p.max_edge_load);
    messages += p.messages;
    if (load.size() < p.per_round_edge_load.size()) load.resize(p.per_round_edge_load.size(), 0);
    for (size_t r = 0; r < p.per_round_edge_load.size(); ++r)
      load[r] = std::max(load[r], p.per_round_edge_load[r]);
    violations.insert(violations.end(), p.violations.begin(), p.violations.end());
  }
  rounds_used += longest;
  per_round_edge_load.insert(per_round_edge_load.end(), load.begin(), load.end());
  add_phase(label, longest);
}

nlohmann::json RoundLedger::to_json() const {
  nlohmann::json j;
  j["rounds"] = rounds_used;
  j["max_bits"] = max_bits_seen;
  j["max_edge_load"] = max_edge_load;
  j["messages"] = messages;
  j["per_phase"] = nlohmann::json::array();
  for (const auto& p : per_phase) j["per_phase"].push_back({{"name", p.name}, {"rounds", p.rounds}});
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations) j["violations"].push_back(v.describe());
  return j;
}

RoundLedger Engine::run(NodeProgram& p, const ParamBlock& params, ParamBlock* out) {
  for (const auto& key : p.needs())
    if (!params.has(key))
      throw CompositionError(p.name() + " requires '" + key + "' which no earlier phase provides");

  const int n = g_.n();
  const std::string name = p.name();
  RoundLedger L;
  p.setup(SimContext{g_, cfg_, params});
  for (Vertex v = 0; v < n; ++v) p.init(v);

  std::vector<std::vector<Incoming>> inbox(n), next(n);
  std::vector<Outbox> boxes(n);
  for (Vertex v = 0; v < n; ++v) {
    boxes[v].g_ = &g_;
    boxes[v].self_ = v;
  }
  // load[e*2 + dir] for the current round
  std::vector<int> load(2 * static_cast<size_t>(g_.m()), 0);
  std::vector<int> touched;

  auto flag = [&](const std::string& kind, Vertex a, Vertex b, int value) {
    Violation viol{L.rounds_used + 1, name, kind, g_.id(a), g_.id(b), value};
    if (cfg_.strict) throw BudgetError(viol.describe());
    L.violations.push_back(viol);
  };

  for (int step = 0;; ++step) {
    bool all_halt = true;
    bool any_sent = false;
    for (Vertex v = 0; v < n; ++v) {
      boxes[v].out_.clear();
      bool h = p.on_round(v, step, Inbox(inbox[v]), boxes[v]);
      all_halt = all_halt && h;
      any_sent = any_sent || !boxes[v].out_.empty();
    }
    if (all_halt && !any_sent) break;
    if (L.rounds_used >= cfg_.max_rounds)
      throw TimeoutError(name + " exceeded max_rounds=" + std::to_string(cfg_.max_rounds));

    // Deliver in sender order so inboxes come out sorted by sender index.
    for (auto& q : next) q.clear();
    int round_load = 0;
    for (Vertex v = 0; v < n; ++v) {
      for (auto& [to, msg] : boxes[v].out_) {
        int bits = msg.bits(cfg_);
        L.max_bits_seen = std::max(L.max_bits_seen, bits);
        if (bits > cfg_.msg_bit_budget) flag("bits", v, to, bits);
        if (auto bad = msg.field_overflow(cfg_); !bad.empty()) flag("field", v, to, bits);
        int e = g_.edge_index(v, to);
        int slot = 2 * e + (v < to ? 0 : 1);
        if (load[slot] == 0) touched.push_back(slot);
        int l = ++load[slot];
        round_load = std::max(round_load, l);
        if (l > cfg_.congestion_factor) flag("congestion", v, to, l);
        ++L.messages;
        next[to].push_back({v, msg});
      }
    }
    for (int s : touched) load[s] = 0;
    touched.clear();
    L.per_round_edge_load.push_back(round_load);
    L.max_edge_load = std::max(L.max_edge_load, round_load);
    ++L.rounds_used;
    std::swap(inbox, next);
  }
  L.per_phase.push_back({name, L.rounds_used});
  if (out) p.publish(*out);
  return L;
}

RoundLedger run(const Graph& g, NodeProgram& p, const SimConfig& cfg, const ParamBlock& params,
                ParamBlock* out) {
  return Engine(g, cfg).run(p, params, out);
}

RoundLedger run_composed(const Graph& g, const std::vector<NodeProgram*>& phases,
                         const SimConfig& cfg, ParamBlock& block) {
  Engine eng(g, cfg);
  RoundLedger total;
  for (NodeProgram* p : phases) total.append(eng.run(*p, block, &block));
  return total;
}

}  // namespace spanner
