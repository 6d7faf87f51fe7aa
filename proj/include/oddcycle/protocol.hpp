#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddcycle/game.hpp"
#include "oddcycle/quantum.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

// Referee phases. Legal walk: Idle -> Strategise -> Query -> Collect ->
// Evaluate -> (Strategise | Done). Anything else is rejected.
enum class Phase { Idle, Strategise, Query, Collect, Evaluate, Done };

const char* to_string(Phase phase);

class RefereeStateMachine {
 public:
  Phase phase() const { return phase_; }
  static bool legal(Phase from, Phase to);

  // Throws ProtocolError on an illegal step. Leaving Evaluate clears the
  // pending query; entering Strategise bumps the round index.
  void transition(Phase to);

  // Only callable in Query; the pending query lives through Collect/Evaluate.
  void set_pending(const Query& q);
  const std::optional<Query>& pending() const { return pending_; }

  std::uint64_t round() const { return round_; }

 private:
  Phase phase_ = Phase::Idle;
  std::optional<Query> pending_;
  std::uint64_t round_ = 0;
};

// Uniform draw over the 2n canonical queries.
Query draw_query(Rng& rng, int n);

enum class StrategyTag { Classical, Quantum };
const char* to_string(StrategyTag tag);

// One game round as recorded by the referee. Every commenced round yields
// exactly one record; rounds that failed to finish keep complete = false and
// -1 in the fields that never arrived.
struct RoundRecord {
  std::uint64_t round = 0;
  StrategyTag strategy = StrategyTag::Quantum;
  int gamma = -1;  // herald index, -1 when no herald was involved
  Query query;
  int a = -1;
  int b = -1;
  bool won = false;
  bool complete = true;
};

// One data-collection round where both players picked their own settings.
struct BellRecord {
  std::uint64_t round = 0;
  int x = -1;
  int y = -1;
  int a = -1;
  int b = -1;
  bool complete = true;
};

// CSV lines. Game: round,strategy,gamma,s,t,kind,a,b,won.
// Bell: round,x,y,a,b. No headers; -1 marks fields lost to an aborted round.
std::string to_csv(const RoundRecord& r);
std::string to_csv(const BellRecord& r);

struct PerQueryCell {
  std::uint64_t count = 0;
  std::uint64_t wins = 0;
};

struct GameStats {
  int n = 0;
  std::uint64_t commenced = 0;
  std::uint64_t total_rounds = 0;  // complete rounds only
  std::uint64_t incomplete = 0;
  std::uint64_t wins = 0;
  bool has_estimate = false;
  double omega_hat = 0.0;
  double std_error = 0.0;
  double sigma_above_classical = 0.0;
  std::vector<PerQueryCell> per_query;  // indexed by canonical query index
};

GameStats build_game_stats(int n, const std::vector<RoundRecord>& records);

// (omega_hat - omega_c) / std_error. Throws ValidationError when the stats
// hold no complete rounds.
double sigma_above_classical(const GameStats& stats, int n);

}  // namespace oddcycle
