#include "oddcycle/session.hpp"

#include <poll.h>

#include <cerrno>
#include <chrono>
#include <exception>
#include <optional>
#include <thread>

#include "oddcycle/rng.hpp"

namespace oddcycle {

namespace {

using Clock = std::chrono::steady_clock;

GameStats summarize(const RefereeActor& ref, SessionMode mode, int n) {
  if (mode == SessionMode::Game) return ref.stats();
  GameStats s;
  s.n = n;
  s.commenced = ref.commenced();
  for (const auto& rec : ref.bell_records())
    rec.complete ? ++s.total_rounds : ++s.incomplete;
  s.has_estimate = false;
  return s;
}

GameRunResult collect(const RefereeActor& ref, SessionMode mode, int n) {
  GameRunResult result;
  result.stats = summarize(ref, mode, n);
  result.records = ref.records();
  result.bell_records = ref.bell_records();
  return result;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.herald = default_herald_pattern();
  return cfg;
}

RefereeConfig referee_config(const RunConfig& cfg) {
  RefereeConfig r;
  r.n = cfg.n;
  r.rounds = cfg.rounds;
  r.mode = cfg.mode;
  r.strategy = cfg.strategy;
  r.seed = derive_seed(cfg.seed, "referee");
  return r;
}

PlayerConfig player_config(const RunConfig& cfg, Role role) {
  PlayerConfig p;
  p.role = role;
  p.n = cfg.n;
  p.rounds = cfg.rounds;
  p.mode = cfg.mode;
  p.strategy = cfg.strategy;
  p.seed = derive_seed(cfg.seed, role == Role::Alice ? "alice" : "bob");
  if (cfg.strategy == StrategyTag::Classical) {
    ClassicalStrategy strat = parity_strategy(cfg.n);
    p.coloring = role == Role::Alice ? strat.color_a : strat.color_b;
  }
  return p;
}

SourceConfig source_config(const RunConfig& cfg) {
  SourceConfig s;
  s.n = cfg.n;
  s.noise = cfg.noise;
  s.herald = cfg.herald;
  s.correction = cfg.herald_correction;
  s.seed = derive_seed(cfg.seed, "source");
  return s;
}

// ----------------------------------------------------------------- inproc --

namespace {

GameRunResult run_game_inproc(const RunConfig& cfg) {
  RefereeActor referee(referee_config(cfg));
  PlayerActor alice(player_config(cfg, Role::Alice));
  PlayerActor bob(player_config(cfg, Role::Bob));
  std::optional<SourceActor> source;

  InprocDriver driver;
  driver.add("referee", &referee);
  if (alice.uses_source()) {
    source.emplace(source_config(cfg));
    driver.add("source", &*source);
  }
  driver.add("alice", &alice);
  driver.add("bob", &bob);
  driver.run();
  return collect(referee, cfg.mode, cfg.n);
}

}  // namespace

// -------------------------------------------------------------- tcp loops --

GameRunResult serve_referee(TcpListener& listener, const RefereeConfig& cfg,
                            SessionMode mode, int timeout_ms) {
  RefereeActor referee(cfg);
  std::optional<TcpConn> conns[2];
  Outbox out;

  auto deliver = [&]() {
    for (auto& o : out) {
      int s = o.to == "alice" ? 0 : 1;
      if (!InprocDriver::route_allowed("referee", o.to))
        throw ProtocolError("referee attempted route to " + o.to);
      if (conns[s] && conns[s]->open()) conns[s]->send_line(encode(o.msg));
    }
    out.clear();
  };

  int handshake_ms = std::max(timeout_ms * 10, 10000);
  auto deadline = Clock::now() + std::chrono::milliseconds(handshake_ms);
  while (!(conns[0] && conns[1])) {
    int remain = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline -
                                                              Clock::now())
            .count());
    if (remain <= 0) throw TransportError("players did not register in time");
    TcpConn conn = listener.accept_conn(remain);
    std::string line;
    if (!conn.recv_line(line, timeout_ms)) continue;  // closed before hello
    WireMessage msg = decode(line);
    if (msg.kind != MsgKind::Hello || !msg.role)
      throw ProtocolError("expected a hello first");
    int s = *msg.role == Role::Alice ? 0 : 1;
    if (conns[s]) throw ProtocolError("duplicate role connection");
    conns[s] = std::move(conn);
    referee.on_message(actor_name(*msg.role), msg, out);
    deliver();
  }

  while (!referee.done()) {
    bool drained_any = false;
    for (int s = 0; s < 2 && !referee.done(); ++s) {
      std::string line;
      while (conns[s]->try_pop_line(line)) {
        drained_any = true;
        referee.on_message(s == 0 ? "alice" : "bob", decode(line), out);
        deliver();
        if (referee.done()) break;
      }
    }
    if (referee.done()) break;
    if (drained_any) continue;

    pollfd pfds[2];
    int idx[2] = {-1, -1};
    int live = 0;
    for (int s = 0; s < 2; ++s) {
      if (conns[s]->open()) {
        pfds[live] = {conns[s]->fd(), POLLIN, 0};
        idx[live] = s;
        ++live;
      }
    }
    if (live == 0) {
      // Both players gone: remaining rounds run out administratively.
      referee.on_timeout(out);
      deliver();
      continue;
    }
    int r = ::poll(pfds, static_cast<nfds_t>(live), timeout_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError("poll failed in referee loop");
    }
    if (r == 0) {
      referee.on_timeout(out);
      deliver();
      continue;
    }
    for (int i = 0; i < live; ++i) {
      if (!(pfds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      conns[idx[i]]->pump(0);  // Data appends to buffer; Eof closes the fd
    }
  }
  return collect(referee, mode, cfg.n);
}

void serve_source(TcpListener& listener, const SourceConfig& cfg,
                  int idle_timeout_ms) {
  SourceActor source(cfg);
  std::optional<TcpConn> conns[2];
  std::vector<TcpConn> pending;  // accepted, awaiting their hello
  Outbox out;

  auto deliver = [&]() {
    for (auto& o : out) {
      int s = o.to == "alice" ? 0 : 1;
      if (!InprocDriver::route_allowed("source", o.to))
        throw ProtocolError("source attempted route to " + o.to);
      if (conns[s] && conns[s]->open()) conns[s]->send_line(encode(o.msg));
    }
    out.clear();
  };

  auto last_activity = Clock::now();
  while (!source.done()) {
    if (Clock::now() - last_activity >
        std::chrono::milliseconds(idle_timeout_ms))
      return;  // abandoned session

    // Drain buffered lines everywhere before polling.
    bool drained_any = false;
    for (int s = 0; s < 2; ++s) {
      std::string line;
      while (conns[s] && conns[s]->try_pop_line(line)) {
        drained_any = true;
        source.on_message(s == 0 ? "alice" : "bob", decode(line), out);
        deliver();
      }
    }
    for (std::size_t i = 0; i < pending.size();) {
      std::string line;
      if (pending[i].try_pop_line(line)) {
        WireMessage msg = decode(line);
        if (msg.kind != MsgKind::Hello || !msg.role)
          throw ProtocolError("expected a hello first");
        int s = *msg.role == Role::Alice ? 0 : 1;
        conns[s] = std::move(pending[i]);  // reconnect replaces the old conn
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
        source.on_message(actor_name(*msg.role), msg, out);
        deliver();
        drained_any = true;
      } else {
        ++i;
      }
    }
    if (drained_any) {
      last_activity = Clock::now();
      continue;
    }

    pollfd pfds[8];
    int live = 0;
    pfds[live++] = {listener.fd(), POLLIN, 0};
    int conn_at[2] = {-1, -1};
    for (int s = 0; s < 2; ++s)
      if (conns[s] && conns[s]->open()) {
        conn_at[s] = live;
        pfds[live++] = {conns[s]->fd(), POLLIN, 0};
      }
    std::size_t pending_base = static_cast<std::size_t>(live);
    for (auto& p : pending)
      if (p.open() && live < 8) pfds[live++] = {p.fd(), POLLIN, 0};

    int r = ::poll(pfds, static_cast<nfds_t>(live), 200);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError("poll failed in source loop");
    }
    if (r == 0) continue;
    last_activity = Clock::now();

    if (pfds[0].revents & POLLIN) {
      if (auto conn = listener.try_accept(0)) pending.push_back(std::move(*conn));
    }
    for (int s = 0; s < 2; ++s)
      if (conn_at[s] >= 0 &&
          (pfds[conn_at[s]].revents & (POLLIN | POLLHUP | POLLERR)))
        conns[s]->pump(0);
    for (std::size_t i = 0; i < pending.size() &&
                            pending_base + i < static_cast<std::size_t>(live);
         ++i)
      if (pfds[pending_base + i].revents & (POLLIN | POLLHUP | POLLERR))
        pending[i].pump(0);
    // Fully closed pending conns are dropped.
    std::erase_if(pending, [](const TcpConn& c) {
      return !c.open() && !c.has_buffered_line();
    });
  }
}

void run_player(const PlayerConfig& cfg, const Endpoint& referee_ep,
                const Endpoint& source_ep, int timeout_ms) {
  PlayerActor player(cfg);
  TcpConn referee = TcpConn::connect(referee_ep, timeout_ms);
  std::optional<TcpConn> source;
  if (player.uses_source())
    source = TcpConn::connect(source_ep, timeout_ms);

  auto send_source = [&](const WireMessage& msg) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (!source || !source->open()) {
        try {
          source = TcpConn::connect(source_ep, timeout_ms);
        } catch (const TransportError&) {
          return;  // unreachable; the referee will time the round out
        }
        source->send_line(encode(player.hello_message()));
      }
      try {
        source->send_line(encode(msg));
        return;
      } catch (const TransportError&) {
        source->close();
      }
    }
  };

  Outbox out;
  auto deliver = [&]() {
    for (auto& o : out) {
      if (!InprocDriver::route_allowed(actor_name(cfg.role), o.to))
        throw ProtocolError("player attempted route to " + o.to);
      if (o.to == "referee")
        referee.send_line(encode(o.msg));
      else
        send_source(o.msg);
    }
    out.clear();
  };

  player.start(out);
  deliver();

  int patience_ms = timeout_ms * 5 + 2000;
  while (!player.done()) {
    bool drained_any = false;
    std::string line;
    while (referee.try_pop_line(line)) {
      drained_any = true;
      player.on_message("referee", decode(line), out);
      deliver();
      if (player.done()) return;
    }
    while (source && source->try_pop_line(line)) {
      drained_any = true;
      player.on_message("source", decode(line), out);
      deliver();
    }
    if (drained_any) continue;

    if (!referee.open())
      throw TransportError("referee closed the connection mid-session");

    pollfd pfds[2];
    int live = 0;
    pfds[live++] = {referee.fd(), POLLIN, 0};
    bool polling_source = source && source->open();
    if (polling_source) pfds[live++] = {source->fd(), POLLIN, 0};

    int r = ::poll(pfds, static_cast<nfds_t>(live), patience_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError("poll failed in player loop");
    }
    if (r == 0) throw TransportError("referee went silent");
    if (pfds[0].revents & (POLLIN | POLLHUP | POLLERR)) referee.pump(0);
    if (polling_source && (pfds[1].revents & (POLLIN | POLLHUP | POLLERR)))
      source->pump(0);  // EOF just closes it; reconnect happens lazily
  }
}

// ------------------------------------------------------------ tcp session --

namespace {

GameRunResult run_game_tcp(const RunConfig& cfg) {
  TcpListener referee_listener(0);
  std::optional<TcpListener> source_listener;
  bool quantum = cfg.strategy == StrategyTag::Quantum;
  if (quantum) source_listener.emplace(0);

  Endpoint referee_ep{"127.0.0.1", referee_listener.port()};
  Endpoint source_ep{"127.0.0.1", quantum ? source_listener->port() : 0};

  GameRunResult result;
  std::exception_ptr errors[4] = {};

  std::thread referee_thread([&] {
    try {
      result = serve_referee(referee_listener, referee_config(cfg), cfg.mode,
                             cfg.timeout_ms);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  });
  std::thread source_thread;
  if (quantum)
    source_thread = std::thread([&] {
      try {
        serve_source(*source_listener, source_config(cfg),
                     std::max(cfg.timeout_ms * 20, 30000));
      } catch (...) {
        errors[1] = std::current_exception();
      }
    });
  std::thread alice_thread([&] {
    try {
      run_player(player_config(cfg, Role::Alice), referee_ep, source_ep,
                 cfg.timeout_ms);
    } catch (...) {
      errors[2] = std::current_exception();
    }
  });
  std::thread bob_thread([&] {
    try {
      run_player(player_config(cfg, Role::Bob), referee_ep, source_ep,
                 cfg.timeout_ms);
    } catch (...) {
      errors[3] = std::current_exception();
    }
  });

  referee_thread.join();
  alice_thread.join();
  bob_thread.join();
  if (source_thread.joinable()) source_thread.join();

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

}  // namespace

GameRunResult run_game(const RunConfig& cfg) {
  validate_game_size(cfg.n);
  validate_noise(cfg.noise);
  validate_herald_pattern(cfg.herald);
  if (cfg.mode == SessionMode::Bell && cfg.strategy != StrategyTag::Quantum)
    throw ValidationError("data-collection mode requires the quantum strategy");
  return cfg.transport == Transport::Inproc ? run_game_inproc(cfg)
                                            : run_game_tcp(cfg);
}

}  // namespace oddcycle
