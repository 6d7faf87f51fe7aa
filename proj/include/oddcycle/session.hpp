#pragma once

#include "oddcycle/actors.hpp"
#include "oddcycle/net.hpp"

namespace oddcycle {

enum class Transport { Inproc, Tcp };

struct RunConfig {
  int n = 3;
  std::uint64_t rounds = 0;
  SessionMode mode = SessionMode::Game;
  StrategyTag strategy = StrategyTag::Quantum;
  NoiseModel noise;
  HeraldPattern herald;  // default-constructed callers should use defaults()
  bool herald_correction = true;
  std::uint64_t seed = 0;
  Transport transport = Transport::Inproc;
  int timeout_ms = 2000;  // referee round deadline over tcp

  static RunConfig defaults();
};

struct GameRunResult {
  GameStats stats;
  std::vector<RoundRecord> records;
  std::vector<BellRecord> bell_records;
};

// Per-actor configs share one master seed; records are transport-independent
// because every role derives its own stream the same way everywhere.
RefereeConfig referee_config(const RunConfig& cfg);
PlayerConfig player_config(const RunConfig& cfg, Role role);
SourceConfig source_config(const RunConfig& cfg);

// Full session on the selected transport. Inproc runs four actors over a
// deterministic queue; tcp runs the same actors over loopback sockets in
// four threads.
GameRunResult run_game(const RunConfig& cfg);

// Process-level loops shared by the threaded tcp path and the CLI layer.
GameRunResult serve_referee(TcpListener& listener, const RefereeConfig& cfg,
                            SessionMode mode, int timeout_ms);
void serve_source(TcpListener& listener, const SourceConfig& cfg,
                  int idle_timeout_ms);
void run_player(const PlayerConfig& cfg, const Endpoint& referee_ep,
                const Endpoint& source_ep, int timeout_ms);

}  // namespace oddcycle
