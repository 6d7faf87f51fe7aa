// End-to-end acceptance harness: ten go/no-go checks covering the exact
// limits, the sampled pipeline, the bound chain, the hardware-detail
// handling, and the networked transport. One [PASS]/[FAIL] line each;
// the process exits nonzero if any check fails.

#include <fcntl.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oddcycle/bell.hpp"
#include "oddcycle/bounds.hpp"
#include "oddcycle/game.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/quantum.hpp"
#include "oddcycle/session.hpp"
#include "oddcycle/stats.hpp"

using namespace oddcycle;

namespace {

// Pinned tolerances and envelopes. Statistical envelopes are sized so a
// correct implementation passes with wide margin at the pinned seeds.
constexpr double kExactTol = 1e-12;        // closed-form equalities
constexpr double kHeraldTol = 1e-12;       // corrected-state entry delta
constexpr double kPulseTvTol = 1e-12;      // pulse-vs-rotation total variation
constexpr double kThetaTol = 1e-6;         // relaxation bound vs closed form
constexpr double kAlphaStarTol = 1e-9;     // packing bound vs closed form
constexpr double kMonteCarloSigmas = 3.0;  // sampled estimate envelope
constexpr double kPnlCenter = 0.54;        // expected nonlocal content, n=5
constexpr double kPnlHalfWidth = 0.02;
constexpr double kSigmaLow = 20.0;   // significance band for the mid-scale run
constexpr double kSigmaHigh = 32.0;
constexpr std::uint64_t kSigmaRounds = 7769;  // lands mid-band in expectation
constexpr double kTransportZLimit = 3.0;
constexpr std::uint64_t kMasterSeed = 6180339887;

int failures = 0;

void report(const char* index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %s: %s (%s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string f(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

RunConfig config_for(int n, std::uint64_t rounds, std::string_view label) {
  RunConfig cfg = RunConfig::defaults();
  cfg.n = n;
  cfg.rounds = rounds;
  cfg.seed = derive_seed(kMasterSeed, label);
  return cfg;
}

// ------------------------------------------------------------ criterion 1 --

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (int n : {3, 5, 7, 9}) {
    BruteForceResult best = brute_force_optimum(n);
    Rational expected(2LL * n - 1, 2LL * n);
    if (!(best.best.exact() == expected)) {
      pass = false;
      detail += "n=" + std::to_string(n) + " off; ";
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 10.0) pass = false;
  detail += "exhaustive optima equal the closed form, " + f(secs) + "s";
  report("1", "deterministic optimum", pass, detail);
}

// ------------------------------------------------------------ criterion 2 --

void criterion_2() {
  bool pass = true;
  double worst = 0.0;
  NoiseModel ideal{};
  for (int n = 3; n <= 27; n += 2) {
    double expected = omega_q(n);
    for (const Query& q : enumerate_queries(n)) {
      double got = win_probability_exact(n, q, ideal);
      worst = std::max(worst, std::abs(got - expected));
    }
  }
  if (worst > kExactTol) pass = false;
  report("2", "ideal pipeline equals the closed-form value", pass,
         "max |delta| = " + f(worst) + " over all sizes 3..27 and queries");
}

// ------------------------------------------------------------ criterion 3 --

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = config_for(3, 100000, "mc-consistency");
  GameRunResult result = run_game(cfg);
  const GameStats& st = result.stats;
  double expected = omega_q(3);
  double delta = std::abs(st.omega_hat - expected);
  double secs = seconds_since(t0);
  bool pass = st.has_estimate &&
              delta < kMonteCarloSigmas * st.std_error && secs < 5.0;
  report("3", "sampled rounds track the exact value", pass,
         "omega_hat = " + f(st.omega_hat) + " vs " + f(expected) + ", |d|/se = " +
             f(delta / st.std_error) + ", " + f(secs) + "s");
}

// ------------------------------------------------------------ criterion 4 --

void criterion_4() {
  const double ratio = 0.978;

  // (a) nonlocal content at n = 5 with the calibrated visibility.
  RunConfig bell_cfg = config_for(5, 100000, "headline-bell");
  bell_cfg.mode = SessionMode::Bell;
  bell_cfg.noise.visibility = calibrate_visibility(5, ratio);
  GameRunResult bell_run = run_game(bell_cfg);
  SettingCounts counts = SettingCounts::from_records(5, bell_run.bell_records);
  BellEstimate est = estimate_omega(counts);
  bool pass_a = std::abs(est.p_nl_lower - kPnlCenter) <= kPnlHalfWidth;
  report("4a", "nonlocal content at the calibrated working point", pass_a,
         "p_nl = " + f(est.p_nl_lower) + " in " + f(kPnlCenter) + " +- " +
             f(kPnlHalfWidth));

  // (b) the statistical advantage window closes exactly after n = 19.
  bool pass_b = true;
  std::string detail_b;
  for (int n = 3; n <= 23; n += 2) {
    RunConfig cfg = config_for(n, 100000,
                               "headline-sweep:" + std::to_string(n));
    cfg.noise.visibility = calibrate_visibility(n, ratio);
    GameRunResult run = run_game(cfg);
    double sigma = run.stats.sigma_above_classical;
    bool advantage = sigma > 3.0;
    bool expected = n <= 19;
    if (advantage != expected) {
      pass_b = false;
      detail_b += "n=" + std::to_string(n) + " sigma=" + f(sigma) + " unexpected; ";
    }
  }
  report("4b", "advantage window closes after n = 19", pass_b,
         detail_b.empty() ? "3-sigma advantage at n <= 19 only, 1e5 rounds per size"
                          : detail_b);

  // (c) significance of the mid-scale run lands in the pinned band.
  RunConfig sig_cfg = config_for(3, kSigmaRounds, "headline-sigma");
  sig_cfg.noise.visibility = calibrate_visibility(3, ratio);
  GameRunResult sig_run = run_game(sig_cfg);
  double sigma = sig_run.stats.sigma_above_classical;
  bool pass_c = sigma >= kSigmaLow && sigma <= kSigmaHigh;
  report("4c", "mid-scale significance band", pass_c,
         "sigma = " + f(sigma) + " in [" + f(kSigmaLow) + ", " + f(kSigmaHigh) +
             "] at " + std::to_string(kSigmaRounds) + " rounds");
}

// ------------------------------------------------------------ criterion 5 --

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (int n = 3; n <= 13; n += 2) {
    BoundsReport r = bounds_report(n);
    double theta_expected = n * (1.0 + std::cos(std::acos(-1.0) / (2.0 * n)));
    bool ok = r.alpha == 2.0 * n - 1.0 &&
              std::abs(r.theta - theta_expected) <= kThetaTol &&
              std::abs(r.alpha_star - 2.0 * n) <= kAlphaStarTol &&
              std::abs(r.theta / (2.0 * n) - omega_q(n)) <= kThetaTol &&
              r.mobius_mapping.size() == static_cast<std::size_t>(4 * n);
    if (!ok) {
      pass = false;
      detail += "n=" + std::to_string(n) + " chain off; ";
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 60.0) pass = false;
  detail += "alpha/theta/packing chain with ladder witness, " + f(secs) + "s";
  report("5", "bound chain matches the closed forms", pass, detail);
}

// ------------------------------------------------------------ criterion 6 --

void criterion_6() {
  HeraldPattern pattern = default_herald_pattern();
  TwoQubitState reference = bell_state(0.0);
  double worst = 0.0;
  for (int gamma = 0; gamma < 4; ++gamma) {
    TwoQubitState corrected = phase_correction(
        bell_state(pattern.phases[static_cast<std::size_t>(gamma)]), pattern,
        gamma);
    for (int i = 0; i < 16; ++i)
      worst = std::max(worst,
                       std::abs(corrected.rho[static_cast<std::size_t>(i)] -
                                reference.rho[static_cast<std::size_t>(i)]));
  }
  bool corrected_ok = worst <= kHeraldTol;

  // Skipping the correction with a half-turn phase must push the average win
  // rate below the deterministic bound; the exact simulator is the oracle.
  NoiseModel ideal{};
  TwoQubitState skewed = bell_state(std::acos(-1.0));  // phase pi
  double average = 0.0;
  auto queries = enumerate_queries(3);
  for (const Query& q : queries)
    average += win_probability_for_state(skewed, 3, q, ideal);
  average /= static_cast<double>(queries.size());
  bool degraded = average < omega_c(3);

  report("6", "herald phase handling", corrected_ok && degraded,
         "corrected delta = " + f(worst) + ", uncorrected half-turn average = " +
             f(average) + " < " + f(omega_c(3)));
}

// ------------------------------------------------------------ criterion 7 --

void criterion_7() {
  Rng rng(derive_seed(kMasterSeed, "pulse-check"));
  double worst_tv = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double theta = (rng.unit() - 0.5) * 4.0 * std::acos(-1.0);
    cplx psi0(rng.unit() - 0.5, rng.unit() - 0.5);
    cplx psi1(rng.unit() - 0.5, rng.unit() - 0.5);
    double norm = std::sqrt(std::norm(psi0) + std::norm(psi1));
    psi0 /= norm;
    psi1 /= norm;

    auto [first, second] = compile_pulse_sequence(theta);
    Mat2 composed = second * first;
    Mat2 reference = ry(theta);

    double p0 = std::norm(composed.at(0, 0) * psi0 + composed.at(0, 1) * psi1);
    double p1 = std::norm(composed.at(1, 0) * psi0 + composed.at(1, 1) * psi1);
    double q0 = std::norm(reference.at(0, 0) * psi0 + reference.at(0, 1) * psi1);
    double q1 = std::norm(reference.at(1, 0) * psi0 + reference.at(1, 1) * psi1);
    double tv = 0.5 * (std::abs(p0 - q0) + std::abs(p1 - q1));
    worst_tv = std::max(worst_tv, tv);
  }
  report("7", "pulse sequence reproduces rotation statistics",
         worst_tv <= kPulseTvTol,
         "max total variation = " + f(worst_tv) + " over 100 random pairs");
}

// ------------------------------------------------------------ criterion 8 --

pid_t spawn(const std::vector<std::string>& args, const std::string& log_path) {
  pid_t pid = fork();
  if (pid != 0) return pid;
  int fd = open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd >= 0) {
    dup2(fd, 1);
    dup2(fd, 2);
    close(fd);
  }
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  execv(argv[0], argv.data());
  _exit(127);
}

bool wait_for_port(const std::string& path, int& port, double timeout_s) {
  auto t0 = std::chrono::steady_clock::now();
  while (seconds_since(t0) < timeout_s) {
    std::ifstream in(path);
    if (in >> port && port > 0) return true;
    usleep(20000);
  }
  return false;
}

std::string stats_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t rounds = 10000;
  const int n = 3;

  char tmpl[] = "/tmp/oddcycle_accept_XXXXXX";
  char* dir_c = mkdtemp(tmpl);
  if (!dir_c) {
    report("8", "networked and in-process runs agree", false, "mkdtemp failed");
    return;
  }
  std::string dir = dir_c;
  std::string cli = ODDCYCLE_CLI_PATH;
  std::string referee_port_file = dir + "/referee.port";
  std::string source_port_file = dir + "/source.port";
  std::string stats_file = dir + "/stats.txt";
  std::string log_file = dir + "/log.csv";
  std::string net_seed = std::to_string(derive_seed(kMasterSeed, "transport-net"));

  pid_t referee = spawn(
      {cli, "serve", "--n", std::to_string(n), "--rounds", std::to_string(rounds),
       "--seed", net_seed, "--timeout-ms", "2000", "--port-file",
       referee_port_file, "--stats-out", stats_file, "--log", log_file},
      dir + "/serve.out");
  pid_t source = spawn({cli, "source", "--n", std::to_string(n), "--seed",
                        net_seed, "--port-file", source_port_file,
                        "--idle-timeout-ms", "30000"},
                       dir + "/source.out");

  int referee_port = 0, source_port = 0;
  bool ports_ok = wait_for_port(referee_port_file, referee_port, 10.0) &&
                  wait_for_port(source_port_file, source_port, 10.0);

  pid_t alice = -1, bob = -1;
  if (ports_ok) {
    std::string referee_ep = "127.0.0.1:" + std::to_string(referee_port);
    std::string source_ep = "127.0.0.1:" + std::to_string(source_port);
    alice = spawn({cli, "player", "--role", "alice", "--referee", referee_ep,
                   "--source", source_ep, "--n", std::to_string(n), "--rounds",
                   std::to_string(rounds), "--seed", net_seed},
                  dir + "/alice.out");
    bob = spawn({cli, "player", "--role", "bob", "--referee", referee_ep,
                 "--source", source_ep, "--n", std::to_string(n), "--rounds",
                 std::to_string(rounds), "--seed", net_seed},
                dir + "/bob.out");
  }

  bool children_ok = ports_ok;
  for (pid_t pid : {alice, bob, referee, source}) {
    if (pid < 0) {
      children_ok = false;
      continue;
    }
    int status = 0;
    waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) children_ok = false;
  }

  std::string detail;
  bool pass = children_ok;
  if (!children_ok) detail = "process orchestration failed (see " + dir + ")";

  std::uint64_t net_wins = 0, net_rounds = 0;
  if (pass) {
    std::ifstream in(stats_file);
    std::ostringstream os;
    os << in.rdbuf();
    std::string text = os.str();
    std::string wins_s = stats_value(text, "wins");
    std::string complete_s = stats_value(text, "complete");
    std::string incomplete_s = stats_value(text, "incomplete");
    if (wins_s.empty() || complete_s.empty()) {
      pass = false;
      detail = "networked stats file missing fields";
    } else {
      net_wins = std::stoull(wins_s);
      net_rounds = std::stoull(complete_s);
      if (incomplete_s != "0") {
        pass = false;
        detail = "networked run dropped rounds (incomplete=" + incomplete_s + ")";
      }
    }
  }

  // Record schema: same header and field count as the in-process log.
  if (pass) {
    std::ifstream in(log_file);
    std::string header;
    std::getline(in, header);
    std::string line;
    std::size_t rows = 0;
    bool fields_ok = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ++rows;
      std::size_t commas = 0;
      for (char c : line)
        if (c == ',') ++commas;
      if (commas != 8) fields_ok = false;
    }
    if (header != "round,strategy,gamma,s,t,kind,a,b,won" || !fields_ok ||
        rows != rounds) {
      pass = false;
      detail = "networked log schema mismatch";
    }
  }

  if (pass) {
    RunConfig cfg = config_for(n, rounds, "transport-inproc");
    GameRunResult inproc = run_game(cfg);
    // Same schema on the in-process side by construction; compare win rates
    // of two independently seeded runs.
    double z = two_proportion_z(net_wins, net_rounds, inproc.stats.wins,
                                inproc.stats.total_rounds);
    double secs = seconds_since(t0);
    pass = std::abs(z) < kTransportZLimit && secs < 60.0;
    detail = "z = " + f(z) + " across transports, " +
             std::to_string(net_rounds) + " rounds each, " + f(secs) + "s";
  }

  report("8", "networked and in-process runs agree", pass, detail);
}

// ------------------------------------------------------------ criterion 9 --

void criterion_9() {
  bool pass = true;
  std::string detail;

  // Clean runs in every mode.
  struct Case {
    const char* label;
    SessionMode mode;
    StrategyTag strategy;
  };
  for (const Case& c : {Case{"quantum", SessionMode::Game, StrategyTag::Quantum},
                        Case{"classical", SessionMode::Game, StrategyTag::Classical},
                        Case{"collect", SessionMode::Bell, StrategyTag::Quantum}}) {
    RunConfig cfg = config_for(3, 2000, std::string("accounting:") + c.label);
    cfg.mode = c.mode;
    cfg.strategy = c.strategy;
    GameRunResult run = run_game(cfg);
    std::size_t recorded = c.mode == SessionMode::Game
                               ? run.records.size()
                               : run.bell_records.size();
    if (recorded != run.stats.commenced || run.stats.commenced != cfg.rounds) {
      pass = false;
      detail += std::string(c.label) + " dropped rounds; ";
    }
  }

  // Fault-injected run: killing the source must not erase rounds either.
  RunConfig cfg = config_for(3, 50, "accounting:faults");
  RefereeActor referee(referee_config(cfg));
  PlayerActor alice(player_config(cfg, Role::Alice));
  PlayerActor bob(player_config(cfg, Role::Bob));
  SourceActor source(source_config(cfg));
  InprocDriver driver;
  driver.add("referee", &referee);
  driver.add("source", &source);
  driver.add("alice", &alice);
  driver.add("bob", &bob);
  driver.set_round_hook([&](std::uint64_t rounds_recorded) {
    if (rounds_recorded == 25) driver.kill("source");
  });
  driver.run();
  bool fault_ok = referee.records().size() == cfg.rounds &&
                  referee.commenced() == cfg.rounds &&
                  referee.stats().incomplete > 0;
  if (!fault_ok) {
    pass = false;
    detail += "faulted run lost accounting; ";
  }

  report("9", "every commenced round is recorded", pass,
         detail.empty() ? "clean and faulted runs keep records == commenced"
                        : detail);
}

// ----------------------------------------------------------- criterion 10 --

void criterion_10() {
  RunConfig cfg = config_for(3, 1000000, "nonsignaling");
  cfg.mode = SessionMode::Bell;
  cfg.noise = NoiseModel{0.95, 0.01};
  GameRunResult run = run_game(cfg);
  SettingCounts counts = SettingCounts::from_records(3, run.bell_records);
  SignalingCheck check = nonsignaling_check(counts);
  report("10", "marginals carry no signal", check.passed,
         "worst deviation " + f(check.worst_deviation) + " vs allowance " +
             f(check.worst_allowance) + " at " + check.description);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  if (failures > 0) {
    std::printf("%d criterion check(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria satisfied\n");
  return 0;
}
