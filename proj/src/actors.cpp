#include "oddcycle/actors.hpp"

#include <algorithm>

namespace oddcycle {

namespace {

bool is_player(const std::string& name) { return name == "alice" || name == "bob"; }
bool is_service(const std::string& name) { return name == "referee" || name == "source"; }

int player_slot(const std::string& name) {
  if (name == "alice") return 0;
  if (name == "bob") return 1;
  throw ProtocolError("unexpected sender '" + name + "'");
}

WireMessage msg_of(MsgKind kind, std::uint64_t round) {
  WireMessage m;
  m.kind = kind;
  m.round = round;
  return m;
}

void check_hello(const std::string& from, const WireMessage& msg) {
  if (!msg.role) throw ProtocolError("hello requires a role");
  if (actor_name(*msg.role) != from)
    throw ProtocolError("hello role does not match sender");
  if (msg.round != 0) throw ProtocolError("hello must reference round 0");
}

}  // namespace

std::string actor_name(Role role) { return to_string(role); }

// ---------------------------------------------------------------- referee --

RefereeActor::RefereeActor(const RefereeConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed) {
  validate_game_size(cfg.n);
}

bool RefereeActor::done() const {
  return machine_.phase() == Phase::Done || zero_rounds_done_;
}

int RefereeActor::slot(const std::string& from) const { return player_slot(from); }

void RefereeActor::begin_round() {
  for (int s = 0; s < 2; ++s) {
    ready_[s] = false;
    gamma_[s].reset();
    resp_bit_[s].reset();
    resp_vertex_[s].reset();
  }
}

void RefereeActor::handle_hello(const std::string& from, const WireMessage& msg,
                                Outbox& out) {
  if (machine_.phase() != Phase::Idle)
    throw ProtocolError("hello after session start");
  check_hello(from, msg);
  int s = slot(from);
  if (registered_[s])
    throw ProtocolError("duplicate role registration: " + from);
  registered_[s] = true;
  if (!(registered_[0] && registered_[1])) return;

  WireMessage ack = msg_of(MsgKind::Hello, 0);
  out.push_back({"alice", ack});
  out.push_back({"bob", ack});
  if (cfg_.rounds == 0) {
    WireMessage fin = msg_of(MsgKind::Finish, 0);
    out.push_back({"alice", fin});
    out.push_back({"bob", fin});
    zero_rounds_done_ = true;
    return;
  }
  machine_.transition(Phase::Strategise);
  commenced_ = 1;
  begin_round();
}

void RefereeActor::dispatch_queries(Outbox& out) {
  machine_.transition(Phase::Query);
  std::uint64_t r = machine_.round();
  if (cfg_.mode == SessionMode::Game) {
    Query q = draw_query(rng_, cfg_.n);
    machine_.set_pending(q);
    WireMessage to_alice = msg_of(MsgKind::Query, r);
    to_alice.vertex = q.s;
    WireMessage to_bob = msg_of(MsgKind::Query, r);
    to_bob.vertex = q.t;
    out.push_back({"alice", to_alice});
    out.push_back({"bob", to_bob});
  } else {
    // Data collection: players draw their own settings; this only paces them.
    WireMessage nudge = msg_of(MsgKind::Query, r);
    out.push_back({"alice", nudge});
    out.push_back({"bob", nudge});
  }
  machine_.transition(Phase::Collect);
}

void RefereeActor::evaluate(Outbox& out, bool complete) {
  machine_.transition(Phase::Evaluate);
  std::uint64_t r = machine_.round();

  if (cfg_.mode == SessionMode::Game) {
    const Query& q = *machine_.pending();
    RoundRecord rec;
    rec.round = r;
    rec.strategy = cfg_.strategy;
    rec.gamma = gamma_[0] ? *gamma_[0] : (gamma_[1] ? *gamma_[1] : -1);
    rec.query = q;
    rec.a = resp_bit_[0].value_or(-1);
    rec.b = resp_bit_[1].value_or(-1);
    rec.complete = complete;
    rec.won = complete && wins(q, rec.a, rec.b);
    records_.push_back(rec);
    WireMessage result = msg_of(MsgKind::RoundResult, r);
    result.won = rec.won ? 1 : 0;
    out.push_back({"alice", result});
    out.push_back({"bob", result});
  } else {
    BellRecord rec;
    rec.round = r;
    rec.x = resp_vertex_[0].value_or(-1);
    rec.y = resp_vertex_[1].value_or(-1);
    rec.a = resp_bit_[0].value_or(-1);
    rec.b = resp_bit_[1].value_or(-1);
    rec.complete = complete;
    bell_records_.push_back(rec);
    WireMessage result = msg_of(MsgKind::RoundResult, r);
    out.push_back({"alice", result});
    out.push_back({"bob", result});
  }

  if (r + 1 < cfg_.rounds) {
    machine_.transition(Phase::Strategise);
    ++commenced_;
    begin_round();
  } else {
    machine_.transition(Phase::Done);
    WireMessage fin = msg_of(MsgKind::Finish, cfg_.rounds);
    out.push_back({"alice", fin});
    out.push_back({"bob", fin});
  }
}

void RefereeActor::on_message(const std::string& from, const WireMessage& msg,
                              Outbox& out) {
  if (msg.kind == MsgKind::Hello) {
    handle_hello(from, msg, out);
    return;
  }
  if (done()) return;
  int s = slot(from);

  switch (msg.kind) {
    case MsgKind::EventReady: {
      if (msg.round < machine_.round()) return;  // stale, round already closed
      if (msg.round > machine_.round())
        throw ProtocolError("event_ready for a future round");
      if (machine_.phase() != Phase::Strategise || ready_[s])
        throw ProtocolError("unexpected event_ready");
      ready_[s] = true;
      gamma_[s] = msg.gamma;
      if (!(ready_[0] && ready_[1])) return;
      if (gamma_[0].has_value() != gamma_[1].has_value())
        throw ProtocolError("players disagree on herald presence");
      if (gamma_[0] && gamma_[1] && *gamma_[0] != *gamma_[1])
        throw ProtocolError("players reported different herald indices");
      dispatch_queries(out);
      return;
    }
    case MsgKind::Response: {
      if (msg.round < machine_.round()) return;  // stale
      if (msg.round > machine_.round())
        throw ProtocolError("response for a future round");
      if (machine_.phase() != Phase::Collect || resp_bit_[s])
        throw ProtocolError("unexpected response");
      if (!msg.bit) throw ProtocolError("response requires a bit");
      if (cfg_.mode == SessionMode::Game) {
        if (msg.vertex) throw ProtocolError("unexpected vertex in game response");
      } else {
        if (!msg.vertex) throw ProtocolError("setting missing in response");
        if (*msg.vertex >= cfg_.n) throw ProtocolError("setting out of range");
        resp_vertex_[s] = msg.vertex;
      }
      resp_bit_[s] = msg.bit;
      if (resp_bit_[0] && resp_bit_[1]) evaluate(out, true);
      return;
    }
    default:
      throw ProtocolError(std::string("unexpected kind at referee: ") +
                          to_string(msg.kind));
  }
}

void RefereeActor::on_timeout(Outbox& out) {
  switch (machine_.phase()) {
    case Phase::Idle:
    case Phase::Done:
    case Phase::Evaluate:
      return;
    case Phase::Strategise:
      dispatch_queries_on_timeout(out);
      return;
    case Phase::Query:
      machine_.transition(Phase::Collect);
      evaluate(out, false);
      return;
    case Phase::Collect:
      evaluate(out, false);
      return;
  }
}

void RefereeActor::dispatch_queries_on_timeout(Outbox& out) {
  // The round still consumes one query draw so the referee stream stays
  // aligned round-for-round whether or not peers responded.
  machine_.transition(Phase::Query);
  if (cfg_.mode == SessionMode::Game)
    machine_.set_pending(draw_query(rng_, cfg_.n));
  machine_.transition(Phase::Collect);
  evaluate(out, false);
}

// ----------------------------------------------------------------- player --

PlayerActor::PlayerActor(const PlayerConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed) {
  validate_game_size(cfg.n);
  if (cfg.mode == SessionMode::Bell && cfg.strategy != StrategyTag::Quantum)
    throw ValidationError("data-collection mode requires the quantum strategy");
  if (cfg.strategy == StrategyTag::Classical &&
      cfg.coloring.size() != static_cast<std::size_t>(cfg.n))
    throw ValidationError("coloring length does not match game size");
}

WireMessage PlayerActor::hello_message() const {
  WireMessage hello = msg_of(MsgKind::Hello, 0);
  hello.role = cfg_.role;
  return hello;
}

void PlayerActor::start(Outbox& out) {
  out.push_back({"referee", hello_message()});
  if (uses_source()) out.push_back({"source", hello_message()});
}

void PlayerActor::begin_round(Outbox& out) {
  setting_ = -1;
  WireMessage ready = msg_of(MsgKind::EventReady, round_);
  if (uses_source())
    out.push_back({"source", ready});
  else
    out.push_back({"referee", ready});
}

void PlayerActor::on_message(const std::string& from, const WireMessage& msg,
                             Outbox& out) {
  if (done_) return;

  if (from == "referee") {
    switch (msg.kind) {
      case MsgKind::Hello:
        referee_ok_ = true;
        break;
      case MsgKind::Query: {
        if (msg.round < round_) return;
        if (msg.round > round_) throw ProtocolError("query for a future round");
        if (cfg_.mode == SessionMode::Game) {
          if (!msg.vertex) throw ProtocolError("query without a vertex");
          if (*msg.vertex >= cfg_.n) throw ProtocolError("vertex out of range");
          setting_ = *msg.vertex;
        } else {
          if (msg.vertex) throw ProtocolError("unexpected vertex in data collection");
          setting_ = static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.n)));
        }
        if (uses_source()) {
          WireMessage fwd = msg_of(MsgKind::Query, round_);
          fwd.vertex = setting_;
          out.push_back({"source", fwd});
        } else {
          WireMessage resp = msg_of(MsgKind::Response, round_);
          resp.bit = static_cast<int>(cfg_.coloring[setting_]);
          out.push_back({"referee", resp});
        }
        return;
      }
      case MsgKind::RoundResult: {
        if (msg.round < round_) return;
        if (msg.round > round_) throw ProtocolError("result for a future round");
        ++round_;
        if (round_ < cfg_.rounds) begin_round(out);
        return;
      }
      case MsgKind::Finish: {
        done_ = true;
        if (uses_source()) {
          WireMessage fin = msg_of(MsgKind::Finish, msg.round);
          out.push_back({"source", fin});
        }
        return;
      }
      default:
        throw ProtocolError(std::string("unexpected kind from referee: ") +
                            to_string(msg.kind));
    }
  } else if (from == "source") {
    switch (msg.kind) {
      case MsgKind::Hello:
        source_ok_ = true;
        break;
      case MsgKind::EventReady: {
        if (msg.round < round_) return;
        if (msg.round > round_) throw ProtocolError("event_ready for a future round");
        if (!msg.gamma) throw ProtocolError("source event_ready without herald index");
        WireMessage fwd = msg_of(MsgKind::EventReady, round_);
        fwd.gamma = msg.gamma;
        out.push_back({"referee", fwd});
        return;
      }
      case MsgKind::Response: {
        if (msg.round < round_) return;
        if (msg.round > round_) throw ProtocolError("response for a future round");
        if (!msg.bit) throw ProtocolError("source response without a bit");
        int m = *msg.bit;
        int output = cfg_.role == Role::Alice ? 1 - m : m;
        WireMessage resp = msg_of(MsgKind::Response, round_);
        if (cfg_.mode == SessionMode::Bell) resp.vertex = setting_;
        resp.bit = output;
        out.push_back({"referee", resp});
        return;
      }
      default:
        throw ProtocolError(std::string("unexpected kind from source: ") +
                            to_string(msg.kind));
    }
  } else {
    throw ProtocolError("player received message from '" + from + "'");
  }

  // Hello-ack bookkeeping falls through to here.
  if (!started_ && referee_ok_ && (source_ok_ || !uses_source())) {
    started_ = true;
    begin_round(out);
  }
}

// ----------------------------------------------------------------- source --

SourceActor::SourceActor(const SourceConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed) {
  validate_game_size(cfg.n);
  validate_noise(cfg.noise);
  validate_herald_pattern(cfg.herald);
}

const std::array<double, 4>& SourceActor::distribution(int gamma, int x, int y) {
  // Corrected states coincide for every herald index, so they share one slot.
  int key_gamma = cfg_.correction ? 0 : gamma;
  std::uint64_t key =
      (static_cast<std::uint64_t>(key_gamma) * cfg_.n + x) * cfg_.n + y;
  auto it = dist_cache_.find(key);
  if (it != dist_cache_.end()) return it->second;

  TwoQubitState state = bell_state(cfg_.herald.phases[gamma]);
  if (cfg_.correction) state = phase_correction(state, cfg_.herald, gamma);
  MeasurementAngles a{alpha_angle(cfg_.n, x), beta_angle(cfg_.n, y)};
  auto dist = measured_distribution(state, a, cfg_.noise);
  return dist_cache_.emplace(key, dist).first->second;
}

void SourceActor::on_message(const std::string& from, const WireMessage& msg,
                             Outbox& out) {
  int s = player_slot(from);

  switch (msg.kind) {
    case MsgKind::Hello:
      check_hello(from, msg);
      // Re-registration is allowed: a player may reconnect after a fault.
      out.push_back({from, msg_of(MsgKind::Hello, 0)});
      return;
    case MsgKind::EventReady: {
      PendingRound& pr = rounds_[msg.round];
      pr.requested[s] = true;
      if (pr.requested[0] && pr.requested[1] && pr.gamma < 0) {
        pr.gamma = static_cast<int>(rng_.below(4));
        WireMessage ready = msg_of(MsgKind::EventReady, msg.round);
        ready.gamma = pr.gamma;
        out.push_back({"alice", ready});
        out.push_back({"bob", ready});
      }
      return;
    }
    case MsgKind::Query: {
      if (!msg.vertex) throw ProtocolError("measurement request without a vertex");
      if (*msg.vertex >= cfg_.n) throw ProtocolError("vertex out of range");
      PendingRound& pr = rounds_[msg.round];
      if (pr.answered) return;  // stale duplicate
      if (pr.vertex[s]) throw ProtocolError("duplicate measurement request");
      pr.vertex[s] = msg.vertex;
      if (!(pr.vertex[0] && pr.vertex[1])) return;
      // After a mid-round restart the herald request may never have reached
      // this instance; prepare on demand.
      if (pr.gamma < 0) pr.gamma = static_cast<int>(rng_.below(4));
      const auto& dist = distribution(pr.gamma, *pr.vertex[0], *pr.vertex[1]);
      double u = rng_.unit();
      int cell = 3;
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        acc += dist[i];
        if (u < acc) {
          cell = i;
          break;
        }
      }
      WireMessage to_alice = msg_of(MsgKind::Response, msg.round);
      to_alice.bit = cell >> 1;
      WireMessage to_bob = msg_of(MsgKind::Response, msg.round);
      to_bob.bit = cell & 1;
      out.push_back({"alice", to_alice});
      out.push_back({"bob", to_bob});
      pr.answered = true;
      rounds_.erase(rounds_.begin(), rounds_.upper_bound(msg.round));
      return;
    }
    case MsgKind::Finish:
      finished_[s] = true;
      return;
    default:
      throw ProtocolError(std::string("unexpected kind at source: ") +
                          to_string(msg.kind));
  }
}

// ----------------------------------------------------------------- driver --

bool InprocDriver::route_allowed(const std::string& from, const std::string& to) {
  return (is_player(from) && is_service(to)) || (is_service(from) && is_player(to));
}

void InprocDriver::add(const std::string& name, Actor* actor) {
  actors_.emplace_back(name, actor);
  if (name == "referee") referee_ = dynamic_cast<RefereeActor*>(actor);
}

void InprocDriver::kill(const std::string& name) { dead_.insert(name); }

void InprocDriver::revive(const std::string& name, Actor* replacement) {
  dead_.erase(name);
  for (auto& [n, a] : actors_)
    if (n == name) {
      a = replacement;
      return;
    }
  add(name, replacement);
}

void InprocDriver::enqueue(const std::string& from, Outbox& out) {
  for (auto& o : out) {
    if (!route_allowed(from, o.to))
      throw ProtocolError("message route " + from + " -> " + o.to + " is not allowed");
    queue_.push_back({from, o.to, o.msg});
  }
  out.clear();
}

void InprocDriver::run() {
  auto recorded = [&]() -> std::uint64_t {
    if (!referee_) return 0;
    return referee_->records().size() + referee_->bell_records().size();
  };
  std::uint64_t seen = recorded();
  auto maybe_fire_hook = [&]() {
    std::uint64_t now = recorded();
    if (now != seen) {
      seen = now;
      if (hook_) hook_(now);
    }
  };

  Outbox out;
  for (auto& [name, actor] : actors_) {
    if (dead_.count(name)) continue;
    actor->start(out);
    enqueue(name, out);
  }

  for (;;) {
    if (queue_.empty()) {
      bool all_done = true;
      for (auto& [name, actor] : actors_)
        if (!dead_.count(name) && !actor->done()) {
          all_done = false;
          break;
        }
      if (all_done) return;
      if (referee_ == nullptr || dead_.count("referee"))
        throw ProtocolError("session deadlocked before completion");
      // The referee owns session completion: once it is done, whatever state
      // peers still hold (a dead player's unanswered finish) is residual.
      if (referee_->done()) return;
      Phase before = referee_->phase();
      std::uint64_t before_records = recorded();
      referee_->on_timeout(out);
      enqueue("referee", out);
      if (queue_.empty() && recorded() == before_records &&
          referee_->phase() == before)
        throw ProtocolError("session deadlocked before completion");
      maybe_fire_hook();
      continue;
    }

    Envelope env = std::move(queue_.front());
    queue_.pop_front();
    if (dead_.count(env.from) || dead_.count(env.to)) continue;
    Actor* target = nullptr;
    for (auto& [name, actor] : actors_)
      if (name == env.to) {
        target = actor;
        break;
      }
    if (target == nullptr)
      throw ProtocolError("message addressed to unknown actor '" + env.to + "'");
    target->on_message(env.from, env.msg, out);
    enqueue(env.to, out);
    maybe_fire_hook();
  }
}

}  // namespace oddcycle
