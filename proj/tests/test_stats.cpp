#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "oddcycle/errors.hpp"
#include "oddcycle/rng.hpp"
#include "oddcycle/spectrum.hpp"
#include "oddcycle/stats.hpp"

using namespace oddcycle;

TEST_CASE("binomial standard error") {
  CHECK(binomial_se(0.5, 100) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(binomial_se(0.9, 1000) ==
        doctest::Approx(std::sqrt(0.09 / 1000)).epsilon(1e-15));
  CHECK(binomial_se(0.0, 50) == 0.0);
  CHECK_THROWS_AS(binomial_se(0.5, 0), ValidationError);
}

TEST_CASE("chi-square survival function reference values") {
  // Critical values: sf hits the textbook tail probabilities.
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(1.0, 1) == doctest::Approx(0.31731050786291404).epsilon(1e-10));
  CHECK(chi_square_sf(7.5, 4) == doctest::Approx(0.11170929281604326).epsilon(1e-10));
  CHECK(chi_square_sf(2.0, 3) == doctest::Approx(0.5724067044708798).epsilon(1e-10));
  CHECK(chi_square_sf(0.0, 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chi_square_sf(1e4, 2) < 1e-300);
}

TEST_CASE("regularized gamma basic identities") {
  // P(1, x) = 1 - e^{-x}.
  for (double x : {0.1, 1.0, 3.5}) {
    CHECK(regularized_gamma_p(1.0, x) ==
          doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  }
  CHECK(regularized_gamma_p(2.5, 0.0) == 0.0);
}

TEST_CASE("uniformity test on exact and skewed counts") {
  ChiSquareResult flat = chi_square_uniform({250, 250, 250, 250});
  CHECK(flat.statistic == doctest::Approx(0.0));
  CHECK(flat.dof == 3);
  CHECK(flat.p_value == doctest::Approx(1.0).epsilon(1e-12));

  // Deviations 150, -50, -50, -50 around the expected 250 per cell:
  // (150^2 + 3 * 50^2) / 250 = 120.
  ChiSquareResult skew = chi_square_uniform({400, 200, 200, 200});
  CHECK(skew.statistic == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(skew.p_value < 1e-10);
}

TEST_CASE("homogeneity test") {
  // Identical rates: statistic zero.
  ChiSquareResult same = chi_square_homogeneity({1000, 1000}, {800, 800});
  CHECK(same.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.dof == 1);

  // Visibly different rates reject.
  ChiSquareResult diff = chi_square_homogeneity({1000, 1000}, {900, 700});
  CHECK(diff.p_value < 1e-10);
}

TEST_CASE("two proportion z frozen value") {
  CHECK(two_proportion_z(520, 1000, 480, 1000) ==
        doctest::Approx(1.7888543819998333).epsilon(1e-12));
  CHECK(two_proportion_z(480, 1000, 520, 1000) ==
        doctest::Approx(-1.7888543819998333).epsilon(1e-12));
  CHECK(two_proportion_z(500, 1000, 500, 1000) == doctest::Approx(0.0));
}

TEST_CASE("seed derivation separates labels and masters") {
  std::uint64_t a = derive_seed(42, "alice");
  std::uint64_t b = derive_seed(42, "bob");
  std::uint64_t r = derive_seed(42, "referee");
  std::uint64_t s = derive_seed(42, "source");
  std::set<std::uint64_t> distinct{a, b, r, s};
  CHECK(distinct.size() == 4);
  CHECK(derive_seed(42, "alice") == a);
  CHECK(derive_seed(43, "alice") != a);
}

TEST_CASE("bounded draws are in range and unbiased enough") {
  Rng rng(20240817);
  std::vector<std::uint64_t> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    std::uint64_t v = rng.below(10);
    REQUIRE(v < 10);
    ++counts[v];
  }
  ChiSquareResult fit = chi_square_uniform(counts);
  CHECK(fit.p_value > 1e-3);
}

TEST_CASE("unit draws live in the half-open interval") {
  Rng rng(9);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(123456);
  Rng b(123456);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("bernoulli matches its probability") {
  Rng rng(5150);
  int hits = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i)
    if (rng.bernoulli(0.3)) ++hits;
  double p_hat = static_cast<double>(hits) / trials;
  CHECK(std::abs(p_hat - 0.3) < 4 * binomial_se(0.3, trials));
}

TEST_CASE("jacobi eigenvalues of small known matrices") {
  // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
  auto eig2 = symmetric_eigenvalues({2, 1, 1, 2}, 2);
  REQUIRE(eig2.size() == 2);
  CHECK(eig2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig2[1] == doctest::Approx(3.0).epsilon(1e-12));

  // Diagonal matrix comes back sorted.
  auto eig3 = symmetric_eigenvalues({5, 0, 0, 0, -2, 0, 0, 0, 1}, 3);
  CHECK(eig3[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(eig3[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig3[2] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("jacobi recovers the circulant cosine spectrum") {
  // Cycle C_8: eigenvalues 2 cos(2 pi k / 8).
  const int n = 8;
  std::vector<double> adj(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    adj[static_cast<std::size_t>(i) * n + j] = 1.0;
    adj[static_cast<std::size_t>(j) * n + i] = 1.0;
  }
  auto eig = symmetric_eigenvalues(adj, n);
  std::vector<double> expected;
  for (int k = 0; k < n; ++k)
    expected.push_back(2 * std::cos(2 * 3.14159265358979323846 * k / n));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < n; ++i)
    CHECK(eig[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));
}
