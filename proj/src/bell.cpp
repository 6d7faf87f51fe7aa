#include "oddcycle/bell.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "oddcycle/errors.hpp"
#include "oddcycle/game.hpp"
#include "oddcycle/quantum.hpp"
#include "oddcycle/stats.hpp"

namespace oddcycle {

SettingCounts::SettingCounts(int n) : n_(n) {
  validate_game_size(n);
  data_.assign(static_cast<std::size_t>(n) * n * 4, 0);
}

std::size_t SettingCounts::index(int a, int b, int x, int y) const {
  if (a < 0 || a > 1 || b < 0 || b > 1)
    throw ValidationError("outcome bits must be 0 or 1");
  if (x < 0 || x >= n_ || y < 0 || y >= n_)
    throw ValidationError("setting out of range");
  return ((static_cast<std::size_t>(x) * n_ + y) * 2 + a) * 2 + b;
}

std::uint64_t& SettingCounts::at(int a, int b, int x, int y) {
  return data_[index(a, b, x, y)];
}

std::uint64_t SettingCounts::at(int a, int b, int x, int y) const {
  return data_[index(a, b, x, y)];
}

std::uint64_t SettingCounts::pair_total(int x, int y) const {
  return at(0, 0, x, y) + at(0, 1, x, y) + at(1, 0, x, y) + at(1, 1, x, y);
}

std::uint64_t SettingCounts::total() const {
  std::uint64_t sum = 0;
  for (auto c : data_) sum += c;
  return sum;
}

SettingCounts SettingCounts::from_records(int n,
                                          const std::vector<BellRecord>& records) {
  SettingCounts counts(n);
  for (const auto& rec : records) {
    if (!rec.complete) continue;
    ++counts.at(rec.a, rec.b, rec.x, rec.y);
  }
  return counts;
}

NonlocalContent nonlocal_content(double omega_hat, double std_error, int n) {
  validate_game_size(n);
  double wc = omega_c(n);
  NonlocalContent out;
  out.raw = (omega_hat - wc) / (1.0 - wc);
  out.error = std_error / (1.0 - wc);
  out.clamped = out.raw < 0.0;
  out.value = out.clamped ? 0.0 : out.raw;
  return out;
}

BellEstimate estimate_omega(const SettingCounts& counts) {
  int n = counts.n();
  double sum = 0.0;
  double var = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int adj = 0; adj < 2; ++adj) {
      int x = j;
      int y = adj ? (j + 1) % n : j;
      std::uint64_t total = counts.pair_total(x, y);
      if (total == 0)
        throw ValidationError("no samples for setting pair (" +
                              std::to_string(x) + ", " + std::to_string(y) +
                              ")");
      std::uint64_t winning =
          adj ? counts.at(0, 1, x, y) + counts.at(1, 0, x, y)
              : counts.at(0, 0, x, y) + counts.at(1, 1, x, y);
      double p = static_cast<double>(winning) / static_cast<double>(total);
      double se = binomial_se(p, total);
      sum += p;
      var += se * se;
    }
  }
  BellEstimate est;
  est.n = n;
  est.omega_hat = sum / (2.0 * n);
  est.std_error = std::sqrt(var) / (2.0 * n);
  NonlocalContent nl = nonlocal_content(est.omega_hat, est.std_error, n);
  est.p_nl_lower = nl.value;
  est.p_nl_raw = nl.raw;
  est.p_nl_error = nl.error;
  est.clamped = nl.clamped;
  return est;
}

double theoretical_pnl_bound(int n) {
  validate_game_size(n);
  double s = std::sin(std::numbers::pi / (4.0 * n));
  return 1.0 - 2.0 * n * s * s;
}

double calibrate_visibility(int n, double target_ratio) {
  validate_game_size(n);
  double wq = omega_q(n);
  double v = (target_ratio * wq - 0.5) / (wq - 0.5);
  if (v < 0.0 || v > 1.0)
    throw ValidationError("target ratio is outside the reachable range");
  return v;
}

AdvantageWindow advantage_window(double ratio, int max_n) {
  if (ratio < 0.0 || ratio > 1.0)
    throw ValidationError("ratio must lie in [0, 1]");
  if (max_n < 3) throw ValidationError("scan limit must be at least 3");
  AdvantageWindow window;
  for (int n = 3; n <= max_n; n += 2) {
    double gap = ratio * omega_q(n) - omega_c(n);
    if (gap <= 0.0) return window;
    window.last_n = n;
  }
  window.open_ended = true;
  return window;
}

ChshReference chsh_reference() {
  double c = std::cos(std::numbers::pi / 8.0);
  return {0.75, c * c, std::numbers::sqrt2 - 1.0};
}

SignalingCheck nonsignaling_check(const SettingCounts& counts) {
  int n = counts.n();
  SignalingCheck check;
  check.passed = true;
  double worst_excess = -std::numeric_limits<double>::infinity();

  auto consider = [&](double p1, std::uint64_t n1, double p2, std::uint64_t n2,
                      const std::string& label) {
    double dev = std::fabs(p1 - p2);
    double se = std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n1) +
                          p2 * (1.0 - p2) / static_cast<double>(n2));
    double allowance = 4.0 * se;
    if (dev - allowance > worst_excess) {
      worst_excess = dev - allowance;
      check.worst_deviation = dev;
      check.worst_allowance = allowance;
      check.description = label;
    }
    if (dev > allowance) check.passed = false;
  };

  // Alice's marginal P(a=0 | x, y) across remote settings y < y'.
  for (int x = 0; x < n; ++x) {
    for (int y1 = 0; y1 < n; ++y1) {
      std::uint64_t n1 = counts.pair_total(x, y1);
      if (n1 == 0) continue;
      double p1 = static_cast<double>(counts.at(0, 0, x, y1) +
                                      counts.at(0, 1, x, y1)) /
                  static_cast<double>(n1);
      for (int y2 = y1 + 1; y2 < n; ++y2) {
        std::uint64_t n2 = counts.pair_total(x, y2);
        if (n2 == 0) continue;
        double p2 = static_cast<double>(counts.at(0, 0, x, y2) +
                                        counts.at(0, 1, x, y2)) /
                    static_cast<double>(n2);
        consider(p1, n1, p2, n2,
                 "P(a=0 | x=" + std::to_string(x) + "): y=" +
                     std::to_string(y1) + " vs y=" + std::to_string(y2));
      }
    }
  }
  // Bob's marginal P(b=0 | x, y) across remote settings x < x'.
  for (int y = 0; y < n; ++y) {
    for (int x1 = 0; x1 < n; ++x1) {
      std::uint64_t n1 = counts.pair_total(x1, y);
      if (n1 == 0) continue;
      double p1 = static_cast<double>(counts.at(0, 0, x1, y) +
                                      counts.at(1, 0, x1, y)) /
                  static_cast<double>(n1);
      for (int x2 = x1 + 1; x2 < n; ++x2) {
        std::uint64_t n2 = counts.pair_total(x2, y);
        if (n2 == 0) continue;
        double p2 = static_cast<double>(counts.at(0, 0, x2, y) +
                                        counts.at(1, 0, x2, y)) /
                    static_cast<double>(n2);
        consider(p1, n1, p2, n2,
                 "P(b=0 | y=" + std::to_string(y) + "): x=" +
                     std::to_string(x1) + " vs x=" + std::to_string(x2));
      }
    }
  }
  return check;
}

}  // namespace oddcycle
