#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oddcycle/protocol.hpp"

namespace oddcycle {

// Outcome tallies per setting pair from free-running data collection, where
// both sides draw settings uniformly: all n^2 pairs occur.
class SettingCounts {
 public:
  explicit SettingCounts(int n);

  // Incomplete records are skipped; field ranges are validated.
  static SettingCounts from_records(int n, const std::vector<BellRecord>& records);

  int n() const { return n_; }
  std::uint64_t& at(int a, int b, int x, int y);
  std::uint64_t at(int a, int b, int x, int y) const;
  std::uint64_t pair_total(int x, int y) const;
  std::uint64_t total() const;

 private:
  std::size_t index(int a, int b, int x, int y) const;

  int n_;
  std::vector<std::uint64_t> data_;
};

struct NonlocalContent {
  double value = 0.0;  // lower bound, clamped at zero
  double raw = 0.0;    // unclamped (omega - omega_c) / (1 - omega_c)
  bool clamped = false;
  double error = 0.0;  // propagated one-sigma error
};

// Local fraction obeys p_L <= (1 - omega) / (1 - omega_c); the complement
// lower-bounds the nonlocal content.
NonlocalContent nonlocal_content(double omega_hat, double std_error, int n);

struct BellEstimate {
  int n = 0;
  double omega_hat = 0.0;
  double std_error = 0.0;
  double p_nl_lower = 0.0;
  double p_nl_raw = 0.0;
  double p_nl_error = 0.0;
  bool clamped = false;
};

// Game value from the 2n relevant setting pairs: matching answers on equal
// settings, differing answers on consecutive ones, each pair weighted 1/2n.
// Standard errors combine in quadrature. Throws when a relevant pair has no
// samples, naming the pair.
BellEstimate estimate_omega(const SettingCounts& counts);

// Ideal nonlocal content at the quantum value: 1 - 2n sin^2(pi/4n).
double theoretical_pnl_bound(int n);

// Visibility reproducing a target ratio omega/omega_q at zero readout error.
double calibrate_visibility(int n, double target_ratio);

struct AdvantageWindow {
  int last_n = -1;        // largest odd n with a positive gap; -1 when none
  bool open_ended = false;  // gap still positive at the scan limit
};

// Scans odd n >= 3 while the measured-to-ideal ratio sustains an advantage:
// ratio * omega_q(n) > omega_c(n). Stops at the first closure or at max_n.
AdvantageWindow advantage_window(double ratio, int max_n);

struct ChshReference {
  double classical_win = 0.0;
  double quantum_win = 0.0;
  double nonlocal_content = 0.0;
};

// Two-input two-output benchmark: 3/4, cos^2(pi/8), sqrt(2) - 1.
ChshReference chsh_reference();

struct SignalingCheck {
  bool passed = false;
  double worst_deviation = 0.0;
  double worst_allowance = 0.0;  // 4 x pooled standard error
  std::string description;
};

// One-sided marginals must not depend on the remote setting: compares
// P(a | x, y) across y (and the mirror) for every setting pair with data,
// flagging any deviation beyond four pooled standard errors.
SignalingCheck nonsignaling_check(const SettingCounts& counts);

}  // namespace oddcycle
