#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "oddcycle/bell.hpp"
#include "oddcycle/bounds.hpp"
#include "oddcycle/errors.hpp"
#include "oddcycle/rng.hpp"
#include "oddcycle/session.hpp"

namespace {

using namespace oddcycle;

std::string f6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

StrategyTag parse_strategy(const std::string& s) {
  if (s == "classical") return StrategyTag::Classical;
  if (s == "quantum") return StrategyTag::Quantum;
  throw ValidationError("unknown strategy '" + s + "'");
}

Transport parse_transport(const std::string& s) {
  if (s == "inproc") return Transport::Inproc;
  if (s == "tcp") return Transport::Tcp;
  throw ValidationError("unknown transport '" + s + "'");
}

SessionMode parse_mode(const std::string& s) {
  if (s == "game") return SessionMode::Game;
  if (s == "bell") return SessionMode::Bell;
  throw ValidationError("unknown mode '" + s + "'");
}

struct SessionOpts {
  int n = 5;
  std::uint64_t rounds = 1000;
  std::string strategy = "quantum";
  std::string transport = "inproc";
  std::uint64_t seed = 1;
  double visibility = 1.0;
  double readout_error = 0.0;
  double target_ratio = -1.0;
  bool no_herald_correction = false;
  int timeout_ms = 2000;
  std::string log_path;
  std::string stats_path;
};

void add_noise_flags(CLI::App* cmd, SessionOpts& o) {
  auto* vis = cmd->add_option("--visibility", o.visibility,
                              "source visibility V in [0,1]");
  auto* ratio =
      cmd->add_option("--target-ratio", o.target_ratio,
                      "calibrate visibility to hit this measured/ideal ratio");
  vis->excludes(ratio);
  ratio->excludes(vis);
  cmd->add_option("--readout-error", o.readout_error,
                  "per-qubit readout flip probability in [0,0.5]");
  cmd->add_flag("--no-herald-correction", o.no_herald_correction,
                "skip the herald-dependent phase correction");
}

void add_session_flags(CLI::App* cmd, SessionOpts& o, bool with_strategy) {
  cmd->add_option("--n", o.n, "cycle length (odd, >= 3)");
  cmd->add_option("--rounds", o.rounds, "number of rounds");
  if (with_strategy)
    cmd->add_option("--strategy", o.strategy, "classical | quantum");
  cmd->add_option("--transport", o.transport, "inproc | tcp");
  cmd->add_option("--seed", o.seed, "master seed; per-role streams derive");
  cmd->add_option("--timeout-ms", o.timeout_ms, "referee round deadline (tcp)");
  cmd->add_option("--log", o.log_path, "write per-round CSV to this file");
  cmd->add_option("--stats-out", o.stats_path, "also write stats to this file");
  add_noise_flags(cmd, o);
}

RunConfig to_config(const SessionOpts& o, SessionMode mode) {
  RunConfig cfg = RunConfig::defaults();
  cfg.n = o.n;
  cfg.rounds = o.rounds;
  cfg.mode = mode;
  cfg.strategy = mode == SessionMode::Bell ? StrategyTag::Quantum
                                           : parse_strategy(o.strategy);
  cfg.transport = parse_transport(o.transport);
  cfg.noise.visibility =
      o.target_ratio >= 0.0 ? calibrate_visibility(o.n, o.target_ratio)
                            : o.visibility;
  cfg.noise.readout_error = o.readout_error;
  cfg.herald_correction = !o.no_herald_correction;
  cfg.seed = o.seed;
  cfg.timeout_ms = o.timeout_ms;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write to '" + path + "'");
  out << text;
}

std::string game_log_csv(const std::vector<RoundRecord>& records) {
  std::string text = "round,strategy,gamma,s,t,kind,a,b,won\n";
  for (const auto& r : records) {
    text += to_csv(r);
    text += '\n';
  }
  return text;
}

std::string bell_log_csv(const std::vector<BellRecord>& records) {
  std::string text = "round,x,y,a,b\n";
  for (const auto& r : records) {
    text += to_csv(r);
    text += '\n';
  }
  return text;
}

std::string stats_text(const GameStats& stats, const RunConfig& cfg) {
  std::string text;
  text += "n=" + std::to_string(stats.n) + "\n";
  text += std::string("strategy=") + to_string(cfg.strategy) + "\n";
  text += std::string("transport=") +
          (cfg.transport == Transport::Inproc ? "inproc" : "tcp") + "\n";
  text += "rounds_requested=" + std::to_string(cfg.rounds) + "\n";
  text += "commenced=" + std::to_string(stats.commenced) + "\n";
  text += "complete=" + std::to_string(stats.total_rounds) + "\n";
  text += "incomplete=" + std::to_string(stats.incomplete) + "\n";
  text += "wins=" + std::to_string(stats.wins) + "\n";
  text += std::string("has_estimate=") + (stats.has_estimate ? "1" : "0") + "\n";
  if (stats.has_estimate) {
    text += "omega_hat=" + f6(stats.omega_hat) + "\n";
    text += "std_error=" + f6(stats.std_error) + "\n";
    text += "omega_c=" + f6(omega_c(stats.n)) + "\n";
    text += "omega_q=" + f6(omega_q(stats.n)) + "\n";
    text += "ratio=" + f6(stats.omega_hat / omega_q(stats.n)) + "\n";
    text += "sigma_above_classical=" + f6(stats.sigma_above_classical) + "\n";
  }
  return text;
}

int cmd_play(const SessionOpts& o) {
  RunConfig cfg = to_config(o, SessionMode::Game);
  GameRunResult result = run_game(cfg);
  std::string text = stats_text(result.stats, cfg);
  std::fputs(text.c_str(), stdout);
  if (!o.stats_path.empty()) write_text(o.stats_path, text);
  if (!o.log_path.empty()) write_text(o.log_path, game_log_csv(result.records));
  return 0;
}

int cmd_bell(const SessionOpts& o) {
  RunConfig cfg = to_config(o, SessionMode::Bell);
  GameRunResult result = run_game(cfg);
  SettingCounts counts = SettingCounts::from_records(cfg.n, result.bell_records);
  BellEstimate est = estimate_omega(counts);
  SignalingCheck sig = nonsignaling_check(counts);
  ChshReference chsh = chsh_reference();

  std::string text;
  text += "n=" + std::to_string(cfg.n) + "\n";
  text += "rounds_requested=" + std::to_string(cfg.rounds) + "\n";
  text += "complete=" + std::to_string(result.stats.total_rounds) + "\n";
  text += "incomplete=" + std::to_string(result.stats.incomplete) + "\n";
  text += "omega_hat=" + f6(est.omega_hat) + "\n";
  text += "std_error=" + f6(est.std_error) + "\n";
  text += "omega_c=" + f6(omega_c(cfg.n)) + "\n";
  text += "omega_q=" + f6(omega_q(cfg.n)) + "\n";
  text += "p_nl_lower=" + f6(est.p_nl_lower) + "\n";
  text += "p_nl_raw=" + f6(est.p_nl_raw) + "\n";
  text += "p_nl_error=" + f6(est.p_nl_error) + "\n";
  text += std::string("p_nl_clamped=") + (est.clamped ? "1" : "0") + "\n";
  text += "theoretical_p_nl=" + f6(theoretical_pnl_bound(cfg.n)) + "\n";
  text += std::string("signaling_passed=") + (sig.passed ? "1" : "0") + "\n";
  text += "signaling_worst_deviation=" + f6(sig.worst_deviation) + "\n";
  text += "signaling_allowance=" + f6(sig.worst_allowance) + "\n";
  text += "signaling_at=" + sig.description + "\n";
  text += "chsh_classical=" + f6(chsh.classical_win) + "\n";
  text += "chsh_quantum=" + f6(chsh.quantum_win) + "\n";
  text += "chsh_p_nl=" + f6(chsh.nonlocal_content) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!o.stats_path.empty()) write_text(o.stats_path, text);
  if (!o.log_path.empty())
    write_text(o.log_path, bell_log_csv(result.bell_records));
  return 0;
}

struct SweepOpts {
  SessionOpts session;
  int n_min = 3;
  int n_max = 13;
};

int cmd_sweep(const SweepOpts& o) {
  if (o.n_min < 3 || o.n_min % 2 == 0 || o.n_max < o.n_min)
    throw ValidationError("sweep needs an odd n range with 3 <= n-min <= n-max");
  std::string text = "n,strategy,omega_hat,se,omega_c,omega_q,ratio\n";
  for (int n = o.n_min; n <= o.n_max; n += 2) {
    for (StrategyTag strategy : {StrategyTag::Classical, StrategyTag::Quantum}) {
      SessionOpts cell = o.session;
      cell.n = n;
      cell.strategy = to_string(strategy);
      RunConfig cfg = to_config(cell, SessionMode::Game);
      cfg.seed = derive_seed(o.session.seed,
                             "sweep:" + std::to_string(n) + ":" +
                                 to_string(strategy));
      GameRunResult result = run_game(cfg);
      const GameStats& s = result.stats;
      text += std::to_string(n);
      text += std::string(",") + to_string(strategy);
      text += "," + f6(s.omega_hat);
      text += "," + f6(s.std_error);
      text += "," + f6(omega_c(n));
      text += "," + f6(omega_q(n));
      text += "," + f6(s.omega_hat / omega_q(n));
      text += "\n";
    }
  }
  std::fputs(text.c_str(), stdout);
  if (!o.session.stats_path.empty()) write_text(o.session.stats_path, text);
  return 0;
}

struct BoundsOpts {
  int n_min = 3;
  int n_max = 13;
  bool closed_form = false;
};

int cmd_bounds(const BoundsOpts& o) {
  if (o.n_min < 3 || o.n_min % 2 == 0 || o.n_max < o.n_min)
    throw ValidationError("bounds needs an odd n range with 3 <= n-min <= n-max");
  std::string text = "n,alpha,theta,alpha_star,omega_c,omega_q_upper,omega_ns\n";
  for (int n = o.n_min; n <= o.n_max; n += 2) {
    BoundsReport r = (o.closed_form || n > 13) ? closed_form_bounds(n)
                                               : bounds_report(n);
    text += std::to_string(n);
    text += "," + f6(r.alpha);
    text += "," + f6(r.theta);
    text += "," + f6(r.alpha_star);
    text += "," + f6(r.omega_c_value);
    text += "," + f6(r.omega_q_upper);
    text += "," + f6(r.omega_ns);
    text += "\n";
  }
  std::fputs(text.c_str(), stdout);
  return 0;
}

struct ServeOpts {
  SessionOpts session;
  std::string mode = "game";
  int port = 0;
  std::string port_file;
};

void write_port_file(const std::string& path, int port) {
  if (path.empty()) return;
  write_text(path, std::to_string(port) + "\n");
}

int cmd_serve(const ServeOpts& o) {
  SessionMode mode = parse_mode(o.mode);
  RunConfig cfg = to_config(o.session, mode);
  TcpListener listener(o.port);
  write_port_file(o.port_file, listener.port());
  GameRunResult result =
      serve_referee(listener, referee_config(cfg), mode, cfg.timeout_ms);
  std::string text = stats_text(result.stats, cfg);
  std::fputs(text.c_str(), stdout);
  if (!o.session.stats_path.empty()) write_text(o.session.stats_path, text);
  if (!o.session.log_path.empty())
    write_text(o.session.log_path, mode == SessionMode::Game
                                       ? game_log_csv(result.records)
                                       : bell_log_csv(result.bell_records));
  return 0;
}

struct PlayerOpts {
  SessionOpts session;
  std::string mode = "game";
  std::string role;
  std::string referee_ep;
  std::string source_ep;
};

int cmd_player(const PlayerOpts& o) {
  SessionMode mode = parse_mode(o.mode);
  RunConfig cfg = to_config(o.session, mode);
  Role role;
  if (o.role == "alice")
    role = Role::Alice;
  else if (o.role == "bob")
    role = Role::Bob;
  else
    throw ValidationError("role must be alice or bob");
  PlayerConfig pc = player_config(cfg, role);
  Endpoint referee = parse_endpoint(o.referee_ep);
  Endpoint source;
  if (cfg.strategy == StrategyTag::Quantum) {
    if (o.source_ep.empty())
      throw ValidationError("quantum players need --source");
    source = parse_endpoint(o.source_ep);
  }
  run_player(pc, referee, source, cfg.timeout_ms);
  return 0;
}

struct SourceOpts {
  SessionOpts session;
  int port = 0;
  std::string port_file;
  int idle_timeout_ms = 30000;
};

int cmd_source(const SourceOpts& o) {
  RunConfig cfg = to_config(o.session, SessionMode::Game);
  TcpListener listener(o.port);
  write_port_file(o.port_file, listener.port());
  serve_source(listener, source_config(cfg), o.idle_timeout_ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"odd-cycle game referee, players, source, and analysis tools"};
  app.set_config("--config");
  app.require_subcommand(1);

  SessionOpts play_opts;
  auto* play = app.add_subcommand("play", "run a full game session");
  add_session_flags(play, play_opts, true);

  SessionOpts bell_opts;
  auto* bell = app.add_subcommand(
      "bell", "free-running data collection and the bound estimates");
  add_session_flags(bell, bell_opts, false);

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand(
      "sweep", "both strategies across a range of cycle lengths, CSV");
  sweep->add_option("--n-min", sweep_opts.n_min, "first odd cycle length");
  sweep->add_option("--n-max", sweep_opts.n_max, "last cycle length");
  sweep->add_option("--rounds", sweep_opts.session.rounds, "rounds per cell");
  sweep->add_option("--seed", sweep_opts.session.seed, "master seed");
  sweep->add_option("--transport", sweep_opts.session.transport,
                    "inproc | tcp");
  sweep->add_option("--stats-out", sweep_opts.session.stats_path,
                    "also write the CSV here");
  add_noise_flags(sweep, sweep_opts.session);

  BoundsOpts bounds_opts;
  auto* bounds = app.add_subcommand(
      "bounds", "independence / Lovasz / packing bound chain, CSV");
  bounds->add_option("--n-min", bounds_opts.n_min, "first odd cycle length");
  bounds->add_option("--n-max", bounds_opts.n_max, "last cycle length");
  bounds->add_flag("--closed-form", bounds_opts.closed_form,
                   "skip the exact solvers");

  ServeOpts serve_opts;
  auto* serve = app.add_subcommand("serve", "run the referee over TCP");
  add_session_flags(serve, serve_opts.session, true);
  serve->add_option("--mode", serve_opts.mode, "game | bell");
  serve->add_option("--port", serve_opts.port, "listen port (0 = ephemeral)");
  serve->add_option("--port-file", serve_opts.port_file,
                    "write the bound port here");

  PlayerOpts player_opts;
  auto* player = app.add_subcommand("player", "run one player over TCP");
  add_session_flags(player, player_opts.session, true);
  player->add_option("--mode", player_opts.mode, "game | bell");
  player->add_option("--role", player_opts.role, "alice | bob")->required();
  player->add_option("--referee", player_opts.referee_ep, "host:port")
      ->required();
  player->add_option("--source", player_opts.source_ep, "host:port");

  SourceOpts source_opts;
  auto* source = app.add_subcommand("source", "run the pair source over TCP");
  add_session_flags(source, source_opts.session, false);
  source->add_option("--port", source_opts.port, "listen port (0 = ephemeral)");
  source->add_option("--port-file", source_opts.port_file,
                     "write the bound port here");
  source->add_option("--idle-timeout-ms", source_opts.idle_timeout_ms,
                     "exit after this long with no players");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (play->parsed()) return cmd_play(play_opts);
    if (bell->parsed()) return cmd_bell(bell_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (bounds->parsed()) return cmd_bounds(bounds_opts);
    if (serve->parsed()) return cmd_serve(serve_opts);
    if (player->parsed()) return cmd_player(player_opts);
    if (source->parsed()) return cmd_source(source_opts);
    std::fputs("no subcommand selected\n", stderr);
    return 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ProtocolError& e) {
    std::fprintf(stderr, "protocol error: %s\n", e.what());
    return 2;
  } catch (const TransportError& e) {
    std::fprintf(stderr, "transport error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
