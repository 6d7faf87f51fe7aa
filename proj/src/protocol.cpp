#include "oddcycle/protocol.hpp"

#include <cmath>
#include <limits>

#include "oddcycle/stats.hpp"

namespace oddcycle {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Idle: return "idle";
    case Phase::Strategise: return "strategise";
    case Phase::Query: return "query";
    case Phase::Collect: return "collect";
    case Phase::Evaluate: return "evaluate";
    case Phase::Done: return "done";
  }
  return "?";
}

bool RefereeStateMachine::legal(Phase from, Phase to) {
  switch (from) {
    case Phase::Idle: return to == Phase::Strategise;
    case Phase::Strategise: return to == Phase::Query;
    case Phase::Query: return to == Phase::Collect;
    case Phase::Collect: return to == Phase::Evaluate;
    case Phase::Evaluate: return to == Phase::Strategise || to == Phase::Done;
    case Phase::Done: return false;
  }
  return false;
}

void RefereeStateMachine::transition(Phase to) {
  if (!legal(phase_, to))
    throw ProtocolError(std::string("illegal referee transition ") + to_string(phase_) +
                        " -> " + to_string(to));
  if (phase_ == Phase::Evaluate) pending_.reset();
  if (to == Phase::Strategise && phase_ != Phase::Idle) ++round_;
  phase_ = to;
}

void RefereeStateMachine::set_pending(const Query& q) {
  if (phase_ != Phase::Query)
    throw ProtocolError("pending query may only be set in the query phase");
  pending_ = q;
}

Query draw_query(Rng& rng, int n) {
  validate_game_size(n);
  auto idx = rng.below(2 * static_cast<std::uint64_t>(n));
  int j = static_cast<int>(idx / 2);
  return idx % 2 == 0 ? same_query(j, n) : adjacent_query(j, n);
}

const char* to_string(StrategyTag tag) {
  return tag == StrategyTag::Classical ? "classical" : "quantum";
}

std::string to_csv(const RoundRecord& r) {
  std::string line = std::to_string(r.round);
  line += ',';
  line += to_string(r.strategy);
  line += ',' + std::to_string(r.gamma);
  line += ',' + std::to_string(r.query.s);
  line += ',' + std::to_string(r.query.t);
  line += r.query.kind == QueryKind::Same ? ",same" : ",adjacent";
  line += ',' + std::to_string(r.a);
  line += ',' + std::to_string(r.b);
  line += r.won ? ",1" : ",0";
  return line;
}

std::string to_csv(const BellRecord& r) {
  std::string line = std::to_string(r.round);
  line += ',' + std::to_string(r.x);
  line += ',' + std::to_string(r.y);
  line += ',' + std::to_string(r.a);
  line += ',' + std::to_string(r.b);
  return line;
}

GameStats build_game_stats(int n, const std::vector<RoundRecord>& records) {
  validate_game_size(n);
  GameStats st;
  st.n = n;
  st.commenced = records.size();
  st.per_query.resize(2 * static_cast<std::size_t>(n));
  for (const auto& r : records) {
    if (!r.complete) {
      ++st.incomplete;
      continue;
    }
    ++st.total_rounds;
    auto& cell = st.per_query[canonical_query_index(r.query)];
    ++cell.count;
    if (r.won) {
      ++st.wins;
      ++cell.wins;
    }
  }
  if (st.total_rounds > 0) {
    st.has_estimate = true;
    st.omega_hat = static_cast<double>(st.wins) / static_cast<double>(st.total_rounds);
    st.std_error = binomial_se(st.omega_hat, st.total_rounds);
    st.sigma_above_classical =
        st.std_error > 0.0 ? (st.omega_hat - omega_c(n)) / st.std_error : 0.0;
  }
  return st;
}

double sigma_above_classical(const GameStats& stats, int n) {
  if (!stats.has_estimate)
    throw ValidationError("no complete rounds: win rate is undefined");
  double se = binomial_se(stats.omega_hat, stats.total_rounds);
  double gap = stats.omega_hat - omega_c(n);
  if (se == 0.0) {
    if (gap == 0.0) return 0.0;
    return gap > 0.0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  }
  return gap / se;
}

}  // namespace oddcycle
