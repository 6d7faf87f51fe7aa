#pragma once

#include <cstdint>
#include <vector>

namespace oddcycle {

// Binomial standard error sqrt(p(1-p)/n).
double binomial_se(double p_hat, std::uint64_t trials);

// Survival function P(X >= x) of a chi-square variable with dof degrees of
// freedom, via the regularized incomplete gamma function.
double chi_square_sf(double x, int dof);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed counts against a uniform distribution over the
// cells. dof = cells - 1.
ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts);

// Homogeneity of success rates across cells: 2 x k contingency table of
// (successes, failures) against the pooled rate. dof = cells - 1.
ChiSquareResult chi_square_homogeneity(const std::vector<std::uint64_t>& totals,
                                       const std::vector<std::uint64_t>& successes);

// Two-proportion z statistic with pooled variance.
double two_proportion_z(std::uint64_t wins1, std::uint64_t n1,
                        std::uint64_t wins2, std::uint64_t n2);

}  // namespace oddcycle
