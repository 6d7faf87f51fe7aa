#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oddcycle/protocol.hpp"
#include "oddcycle/wire.hpp"

namespace oddcycle {

// Actor names double as addresses: "referee", "source", "alice", "bob".
std::string actor_name(Role role);

struct Outgoing {
  std::string to;
  WireMessage msg;
};
using Outbox = std::vector<Outgoing>;

// Event-driven endpoint. The same actor classes run single-threaded over
// in-process queues and multi-process over TCP; only the driver differs, so
// record streams are identical across transports for identical seeds.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual void start(Outbox& out) { (void)out; }
  virtual void on_message(const std::string& from, const WireMessage& msg,
                          Outbox& out) = 0;
  // Driver-declared round failure (deadline passed / peer gone).
  virtual void on_timeout(Outbox& out) { (void)out; }
  virtual bool done() const = 0;
};

enum class SessionMode { Game, Bell };

struct RefereeConfig {
  int n = 3;
  std::uint64_t rounds = 0;
  SessionMode mode = SessionMode::Game;
  StrategyTag strategy = StrategyTag::Quantum;
  std::uint64_t seed = 0;
};

class RefereeActor : public Actor {
 public:
  explicit RefereeActor(const RefereeConfig& cfg);

  void on_message(const std::string& from, const WireMessage& msg, Outbox& out) override;
  void on_timeout(Outbox& out) override;
  bool done() const override;

  Phase phase() const { return machine_.phase(); }
  std::uint64_t commenced() const { return commenced_; }
  std::uint64_t current_round() const { return machine_.round(); }
  const std::vector<RoundRecord>& records() const { return records_; }
  const std::vector<BellRecord>& bell_records() const { return bell_records_; }
  GameStats stats() const { return build_game_stats(cfg_.n, records_); }

 private:
  int slot(const std::string& from) const;
  void handle_hello(const std::string& from, const WireMessage& msg, Outbox& out);
  void begin_round();
  void dispatch_queries(Outbox& out);
  void dispatch_queries_on_timeout(Outbox& out);
  void evaluate(Outbox& out, bool complete);

  RefereeConfig cfg_;
  RefereeStateMachine machine_;
  Rng rng_;
  bool registered_[2] = {false, false};
  bool ready_[2] = {false, false};
  std::optional<int> gamma_[2];
  std::optional<int> resp_bit_[2];
  std::optional<int> resp_vertex_[2];
  std::uint64_t commenced_ = 0;
  bool zero_rounds_done_ = false;
  std::vector<RoundRecord> records_;
  std::vector<BellRecord> bell_records_;
};

struct PlayerConfig {
  Role role = Role::Alice;
  int n = 3;
  std::uint64_t rounds = 0;
  SessionMode mode = SessionMode::Game;
  StrategyTag strategy = StrategyTag::Quantum;
  std::uint64_t seed = 0;
  // This player's own coloring (classical strategy only). Players never see
  // each other's colorings.
  std::vector<std::uint8_t> coloring;
};

class PlayerActor : public Actor {
 public:
  explicit PlayerActor(const PlayerConfig& cfg);

  void start(Outbox& out) override;
  void on_message(const std::string& from, const WireMessage& msg, Outbox& out) override;
  bool done() const override { return done_; }

  // Re-sent by the transport after a reconnect to the source.
  WireMessage hello_message() const;
  bool uses_source() const { return cfg_.strategy == StrategyTag::Quantum; }

 private:
  void begin_round(Outbox& out);

  PlayerConfig cfg_;
  Rng rng_;
  bool referee_ok_ = false;
  bool source_ok_ = false;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t round_ = 0;
  int setting_ = -1;
};

struct SourceConfig {
  int n = 3;
  NoiseModel noise;
  HeraldPattern herald;
  bool correction = true;
  std::uint64_t seed = 0;
};

// Trusted entanglement holder: keeps the joint state, draws the herald index,
// and answers both players' measurement requests consistently within a round.
class SourceActor : public Actor {
 public:
  explicit SourceActor(const SourceConfig& cfg);

  void on_message(const std::string& from, const WireMessage& msg, Outbox& out) override;
  bool done() const override { return finished_[0] && finished_[1]; }

 private:
  struct PendingRound {
    bool requested[2] = {false, false};
    int gamma = -1;
    std::optional<int> vertex[2];
    bool answered = false;
  };

  const std::array<double, 4>& distribution(int gamma, int x, int y);

  SourceConfig cfg_;
  Rng rng_;
  bool finished_[2] = {false, false};
  std::map<std::uint64_t, PendingRound> rounds_;
  // Measurement distributions are pure functions of (gamma, x, y); cached.
  std::map<std::uint64_t, std::array<double, 4>> dist_cache_;
};

// Single-threaded deterministic driver for the in-process transport. Routes
// envelopes FIFO, enforces the allowed sender/recipient pairs, and converts
// quiescence with a live referee into round timeouts (only reachable when an
// actor has been killed by fault injection).
class InprocDriver {
 public:
  static bool route_allowed(const std::string& from, const std::string& to);

  void add(const std::string& name, Actor* actor);
  void kill(const std::string& name);
  void revive(const std::string& name, Actor* replacement);

  // Invoked after every round the referee records; receives records so far.
  void set_round_hook(std::function<void(std::uint64_t)> hook) { hook_ = std::move(hook); }

  void run();

 private:
  struct Envelope {
    std::string from, to;
    WireMessage msg;
  };

  void enqueue(const std::string& from, Outbox& out);

  std::vector<std::pair<std::string, Actor*>> actors_;
  std::set<std::string> dead_;
  std::deque<Envelope> queue_;
  std::function<void(std::uint64_t)> hook_;
  RefereeActor* referee_ = nullptr;
};

}  // namespace oddcycle
