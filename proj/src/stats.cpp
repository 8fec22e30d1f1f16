#include "duda/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <stdexcept>

namespace duda::stats {

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.3) {
    // Series in the other direction converges faster near zero.
    const double pi2 = M_PI * M_PI;
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = (2.0 * k - 1.0);
      cdf += std::exp(-t * t * pi2 / (8.0 * x * x));
    }
    cdf *= std::sqrt(2.0 * M_PI) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sqrt_n = std::sqrt(n);
  return {d, kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d)};
}

TestResult chi_square_test(std::span<const double> observed,
                           std::span<const double> expected,
                           int fitted_parameters) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw std::invalid_argument("chi_square_test: need matching bins, at least 2");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  const double dof =
      static_cast<double>(observed.size()) - 1.0 - fitted_parameters;
  if (dof < 1.0) throw std::invalid_argument("chi_square_test: no degrees of freedom");
  return {stat, boost::math::gamma_q(0.5 * dof, 0.5 * stat)};
}

TestResult poisson_chi_square(std::span<const long> counts, double mean,
                              double min_expected) {
  const double n = static_cast<double>(counts.size());
  std::map<long, double> histogram;
  for (long c : counts) histogram[c] += 1.0;

  // Bins [lo_k, hi_k]; first and last bins absorb the tails.
  std::vector<double> observed, expected;
  double p = std::exp(-mean);  // P(X = 0)
  double cumulative = 0.0;
  double bin_p = 0.0, bin_obs = 0.0;
  const long hi = static_cast<long>(mean + 20.0 * std::sqrt(mean) + 20.0);
  for (long k = 0; k <= hi; ++k) {
    if (k > 0) p *= mean / static_cast<double>(k);
    bin_p += p;
    cumulative += p;
    auto it = histogram.find(k);
    if (it != histogram.end()) bin_obs += it->second;
    if (bin_p * n >= min_expected && (1.0 - cumulative) * n >= min_expected) {
      observed.push_back(bin_obs);
      expected.push_back(bin_p * n);
      bin_p = 0.0;
      bin_obs = 0.0;
    }
  }
  // Remaining upper tail, including counts beyond `hi`.
  for (const auto& [k, c] : histogram) {
    if (k > hi) bin_obs += c;
  }
  bin_p += std::max(0.0, 1.0 - cumulative);
  if (!observed.empty()) {
    observed.back() += bin_obs;
    expected.back() += bin_p * n;
  }
  return chi_square_test(observed, expected, 0);
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace duda::stats
