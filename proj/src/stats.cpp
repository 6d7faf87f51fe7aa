#include "oddcycle/stats.hpp"

#include <cmath>

#include "oddcycle/errors.hpp"

namespace oddcycle {

namespace {

// Series expansion of P(a,x), converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) by modified Lentz, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw ValidationError("incomplete gamma needs a>0, x>=0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
  if (dof <= 0) throw ValidationError("chi-square dof must be positive");
  if (x <= 0.0) return 1.0;
  double a = 0.5 * dof;
  double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_cf(a, half);
}

double binomial_se(double p_hat, std::uint64_t trials) {
  if (trials == 0) throw ValidationError("standard error needs at least one trial");
  double v = p_hat * (1.0 - p_hat) / static_cast<double>(trials);
  return std::sqrt(v < 0.0 ? 0.0 : v);
}

ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw ValidationError("uniformity test needs >= 2 cells");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw ValidationError("uniformity test needs data");
  double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  int dof = static_cast<int>(counts.size()) - 1;
  return {stat, dof, chi_square_sf(stat, dof)};
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::uint64_t>& totals,
                                       const std::vector<std::uint64_t>& successes) {
  if (totals.size() != successes.size() || totals.size() < 2)
    throw ValidationError("homogeneity test needs matching cells, >= 2 of them");
  std::uint64_t n = 0, w = 0;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    if (successes[i] > totals[i]) throw ValidationError("successes exceed total");
    n += totals[i];
    w += successes[i];
  }
  if (n == 0) throw ValidationError("homogeneity test needs data");
  double pooled = static_cast<double>(w) / static_cast<double>(n);
  if (pooled <= 0.0 || pooled >= 1.0) {
    // Degenerate pooled rate: all cells identical by construction.
    return {0.0, static_cast<int>(totals.size()) - 1, 1.0};
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    double ni = static_cast<double>(totals[i]);
    if (ni == 0.0) continue;
    double ew = ni * pooled;
    double el = ni * (1.0 - pooled);
    double dw = static_cast<double>(successes[i]) - ew;
    double dl = static_cast<double>(totals[i] - successes[i]) - el;
    stat += dw * dw / ew + dl * dl / el;
  }
  int dof = static_cast<int>(totals.size()) - 1;
  return {stat, dof, chi_square_sf(stat, dof)};
}

double two_proportion_z(std::uint64_t wins1, std::uint64_t n1,
                        std::uint64_t wins2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw ValidationError("z test needs data in both samples");
  double p1 = static_cast<double>(wins1) / static_cast<double>(n1);
  double p2 = static_cast<double>(wins2) / static_cast<double>(n2);
  double pooled = static_cast<double>(wins1 + wins2) / static_cast<double>(n1 + n2);
  double var = pooled * (1.0 - pooled) *
               (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  if (var <= 0.0) return 0.0;
  return (p1 - p2) / std::sqrt(var);
}

}  // namespace oddcycle
