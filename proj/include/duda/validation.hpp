#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "duda/config.hpp"

namespace duda {

enum class CheckStatus { kPass, kFail, kSkip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kSkip;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  /// True when no check failed (skipped checks do not count).
  bool passed() const;
};

struct ValidationOptions {
  int quadrature_samples = 1000;
  int latency_grid_points = 10000;
  int spatial_samples = 20000;
  /// Significance level of the statistical tests.
  double significance = 0.01;
};

/// Kernel integral against the alpha = 4 arctan closed form on random
/// parameter tuples; skipped for other path-loss exponents. `measured` is the
/// worst relative error.
CheckResult check_quadrature_arctan(const SystemParams& params, int samples,
                                    std::uint64_t seed);

/// Kernel integral with zero exclusion radius against the closed form
/// valid for every alpha > 2.
CheckResult check_quadrature_full_plane(const SystemParams& params, int samples,
                                        std::uint64_t seed);

/// DUCA - DUDA against the closed-form gap on random (t, s_u, rho) points,
/// requiring a positive gap everywhere. `measured` is the worst relative error.
CheckResult check_latency_gap(int points, std::uint64_t seed);

/// Chi-square test of PPP counts in the window against Poisson.
CheckResult check_ppp_counts(const SystemParams& params, double window_half_width,
                             int samples, double significance, std::uint64_t seed);

/// KS tests of the distance from the origin to the nearest and the second
/// nearest PPP point against their closed-form laws.
CheckResult check_nearest_distance(const SystemParams& params,
                                   double window_half_width, int samples,
                                   double significance, std::uint64_t seed);
CheckResult check_second_nearest_distance(const SystemParams& params,
                                          double window_half_width, int samples,
                                          double significance,
                                          std::uint64_t seed);

/// Simulated first-attempt success rates against the analytic ones.
/// Returns the rho_u and rho_d checks.
std::vector<CheckResult> check_success_probabilities(const ConfigBundle& bundle,
                                                     const LatencyStats& duda_stats);

/// Mean sampled latency against the closed form at measured success rates,
/// within three standard errors.
CheckResult check_self_consistency(const LatencyStats& stats, Scheme scheme,
                                   const SlotTiming& timing);

/// Runs every check for the bundle. Monte Carlo checks use the bundle's
/// iteration count and seed.
ValidationReport run_validation(const ConfigBundle& bundle,
                                const ValidationOptions& options = {});

/// check,status,measured,tolerance,detail
void write_validation_csv(std::ostream& os, const ValidationReport& report);

const char* to_string(CheckStatus status);

}  // namespace duda
