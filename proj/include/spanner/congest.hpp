// Round-synchronous CONGEST simulator.
//
// A NodeProgram keeps its per-vertex state in arrays indexed by Vertex and
// only ever touches slot v inside init/on_round for vertex v. Topology is
// read through the Graph handed to setup(), restricted to v's own
// neighborhood. Everything else a vertex learns arrives in its inbox.
#pragma once

#include <any>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <typeinfo>
#include <vector>

#include "spanner/graph.hpp"
#include <json.hpp>

namespace spanner {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bits needed to write x in binary (at least 1).
int bits_for(std::uint64_t x);
// ceil(log2 x) for x >= 1.
int ceil_log2(std::uint64_t x);

struct SimConfig {
  int msg_bit_budget = 0;  // 0: ceil(8 * log2 max(n,4))
  long max_rounds = 2'000'000;
  int congestion_factor = 1;
  bool strict = true;
  // Field widths. 0: derived from the graph by resolved().
  int id_bits = 0;
  int count_bits = 0;

  // Fills unset fields from g. A resolved config passed to a sub-instance
  // keeps the widths and budget of the original network.
  SimConfig resolved(const Graph& g) const;
  bool is_resolved() const { return msg_bit_budget > 0 && id_bits > 0 && count_bits > 0; }
};

int default_bit_budget(int n);

enum class Field : std::uint8_t { Id, Count, Flag };

// Tag (8 bits) plus a short record of typed fields.
class Message {
 public:
  static constexpr int kCap = 16;
  static constexpr int kTagBits = 8;

  Message() = default;
  explicit Message(std::uint8_t tag) : tag_(tag) {}

  std::uint8_t tag() const { return tag_; }
  int size() const { return len_; }
  std::int64_t operator[](int i) const { return w_[i]; }
  VertexId id_at(int i) const { return static_cast<VertexId>(w_[i]); }
  Field kind(int i) const { return f_[i]; }

  Message& id(VertexId x) { return push(static_cast<std::int64_t>(x), Field::Id); }
  Message& count(std::int64_t x) { return push(x, Field::Count); }
  Message& flag(bool b) { return push(b ? 1 : 0, Field::Flag); }

  int bits(const SimConfig& cfg) const;
  // Empty when every field fits its declared width.
  std::string field_overflow(const SimConfig& cfg) const;

  bool operator==(const Message& o) const;

 private:
  Message& push(std::int64_t x, Field f);
  std::uint8_t tag_ = 0;
  std::uint8_t len_ = 0;
  std::array<std::int64_t, kCap> w_{};
  std::array<Field, kCap> f_{};
};

// How many Id fields fit next to `fixed_counts` counters in one message.
int ids_per_message(const SimConfig& cfg, int fixed_ids = 0, int fixed_counts = 0);

struct Incoming {
  Vertex from;
  Message msg;
};
using Inbox = std::span<const Incoming>;

class Outbox {
 public:
  void send(Vertex to, const Message& m);
  void send_all(const Message& m);
  bool empty() const { return out_.empty(); }

 private:
  friend class Engine;
  const Graph* g_ = nullptr;
  Vertex self_ = kNoVertex;
  std::vector<std::pair<Vertex, Message>> out_;
};

// Named values threaded between phases.
class ParamBlock {
 public:
  template <class T>
  void set(const std::string& key, T value) {
    m_[key] = std::move(value);
  }
  bool has(const std::string& key) const { return m_.count(key) > 0; }
  template <class T>
  const T& get(const std::string& key) const {
    auto it = m_.find(key);
    if (it == m_.end()) throw CompositionError("missing parameter '" + key + "'");
    const T* p = std::any_cast<T>(&it->second);
    if (!p) throw CompositionError("parameter '" + key + "' has the wrong type");
    return *p;
  }
  template <class T>
  T get_or(const std::string& key, T dflt) const {
    return has(key) ? get<T>(key) : dflt;
  }

 private:
  std::map<std::string, std::any> m_;
};

struct SimContext {
  const Graph& g;
  const SimConfig& cfg;
  const ParamBlock& params;
};

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual std::string name() const = 0;
  // Keys that must be present in the parameter block before setup.
  virtual std::vector<std::string> needs() const { return {}; }
  virtual std::vector<std::string> provides() const { return {}; }

  virtual void setup(const SimContext& ctx) = 0;
  virtual void init(Vertex) {}
  // Returns the vertex's halt vote for this step.
  virtual bool on_round(Vertex v, int step, Inbox in, Outbox& out) = 0;
  virtual void publish(ParamBlock&) const {}
};

struct Violation {
  long round;
  std::string program;
  std::string kind;  // "bits", "congestion", "field"
  VertexId from;
  VertexId to;
  int value;
  std::string describe() const;
};

struct PhaseRounds {
  std::string name;
  long rounds;
};

class RoundLedger {
 public:
  long rounds_used = 0;
  int max_bits_seen = 0;
  int max_edge_load = 0;
  long messages = 0;
  std::vector<int> per_round_edge_load;
  std::vector<Violation> violations;
  std::vector<PhaseRounds> per_phase;

  // Sequential composition.
  void append(const RoundLedger& o);
  // Independent runs executed side by side: the slowest one sets the pace.
  // Recorded as a single phase `label`.
  void absorb_parallel(const std::vector<RoundLedger>& parts, const std::string& label);
  void add_phase(const std::string& name, long rounds);
  long phase_rounds(const std::string& name) const;

  nlohmann::json to_json() const;
};

class Engine {
 public:
  Engine(const Graph& g, const SimConfig& cfg) : g_(g), cfg_(cfg.resolved(g)) {}
  const SimConfig& config() const { return cfg_; }
  RoundLedger run(NodeProgram& p, const ParamBlock& params, ParamBlock* out = nullptr);

 private:
  const Graph& g_;
  SimConfig cfg_;
};

RoundLedger run(const Graph& g, NodeProgram& p, const SimConfig& cfg,
                const ParamBlock& params = {}, ParamBlock* out = nullptr);

// Runs the phases in order over one parameter block. Each phase's needs()
// must be satisfied before it starts.
RoundLedger run_composed(const Graph& g, const std::vector<NodeProgram*>& phases,
                         const SimConfig& cfg, ParamBlock& block);

}  // namespace spanner
