#pragma once

#include "duda/params.hpp"
#include "duda/quadrature.hpp"

namespace duda {

/// Densities of the interfering transmitters seen by a cooperating pair.
/// Each pair serves one UE, so only half the BS density carries a link; a
/// fraction delta of those links are DL.
struct InterfererDensities {
  double lambda_psi = 0.0;  // interfering DL-BSs per m^2
  double lambda_phi = 0.0;  // interfering UL-UEs per m^2

  static InterfererDensities from(const SystemParams& params) {
    return {0.5 * params.delta * params.lambda_b,
            0.5 * (1.0 - params.delta) * params.lambda_b};
  }
};

struct SuccessProbabilityResult {
  double value = 0.0;
  double quadrature_error = 0.0;
};

struct AnalyticOptions {
  /// Multiply the success probabilities by the Rayleigh noise factor
  /// exp(-s sigma^2). Off by default; at the default powers the factor
  /// differs from one by less than 1e-10.
  bool include_noise = false;
};

/// 2 pi lambda r exp(-pi lambda r^2): distance to the nearest PPP point.
double nearest_distance_pdf(double r, double lambda);
double nearest_distance_cdf(double r, double lambda);
/// 2 (pi lambda)^2 d^3 exp(-pi lambda d^2): distance to the second-nearest.
double second_nearest_distance_pdf(double d, double lambda);
double second_nearest_distance_cdf(double d, double lambda);

/// Laplace functional of DL-BS interference at the typical UL-BS for a link
/// of length r, averaged over the nearest interfering BS distance.
SuccessProbabilityResult laplace_ul_from_dl_bs(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec = {});

/// Laplace functional of UL-UE interference at the typical UL-BS; the
/// interfering UEs are farther than r.
SuccessProbabilityResult laplace_ul_from_ul_ue(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec = {});

/// DL-BS interference at the typical UE, interferers farther than r.
SuccessProbabilityResult laplace_dl_from_dl_bs(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec = {});

/// UL-UE interference at the typical UE, no exclusion region.
SuccessProbabilityResult laplace_dl_from_ul_ue(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec = {});

SuccessProbabilityResult ul_success_probability(const SystemParams& params,
                                                const QuadratureSpec& spec = {},
                                                const AnalyticOptions& opts = {});

/// Approximate DL success: the serving DL-BS is the far member of the pair,
/// so the link distance follows the second-nearest law.
SuccessProbabilityResult dl_success_probability(const SystemParams& params,
                                                const QuadratureSpec& spec = {},
                                                const AnalyticOptions& opts = {});

}  // namespace duda
