#pragma once

#include <functional>
#include <span>
#include <vector>

namespace duda::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
/// uses the asymptotic Kolmogorov law with Stephens' small-sample correction.
TestResult ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Kolmogorov survival function P(K > x).
double kolmogorov_survival(double x);

/// Pearson chi-square test of observed counts against expected counts.
/// `fitted_parameters` reduces the degrees of freedom.
TestResult chi_square_test(std::span<const double> observed,
                           std::span<const double> expected,
                           int fitted_parameters = 0);

/// Chi-square goodness of fit of integer counts against Poisson(mean).
/// Tail bins are merged until each expects at least `min_expected` counts.
TestResult poisson_chi_square(std::span<const long> counts, double mean,
                              double min_expected = 5.0);

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);

}  // namespace duda::stats
