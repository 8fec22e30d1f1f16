#include "duda/sg_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace duda {

namespace {

constexpr double kPi = std::numbers::pi;

void require_valid(const SystemParams& params) {
  const auto violations = validate(params);
  if (!violations.empty()) {
    throw std::invalid_argument(violations.front().message);
  }
}

template <typename R>
void require_converged(const R& res, const char* what) {
  if (!res.converged) {
    throw QuadratureError(std::string(what) + ": quadrature did not converge",
                          static_cast<double>(res.error));
  }
}

// Radius beyond which the nearest-distance law keeps less than `mass`.
double nearest_cutoff(double lambda, double mass) {
  return std::sqrt(-std::log(mass) / (kPi * lambda));
}

// Same for the second-nearest law, whose tail is exp(-x) (1 + x), x = pi l d^2.
double second_nearest_cutoff(double lambda, double mass) {
  double x = -std::log(mass);
  for (int i = 0; i < 50; ++i) x = -std::log(mass) + std::log1p(x);
  return std::sqrt(x / (kPi * lambda));
}

// exp(-2 pi density * tail integral); the tail integral's error is returned
// alongside, propagated to first order.
SuccessProbabilityResult exp_of_tail(double density, double kappa, double beta,
                                     double r, double alpha, double exclusion,
                                     const QuadratureSpec& spec) {
  if (density == 0.0) return {1.0, 0.0};
  auto tail =
      interference_tail_integral<double>(kappa, beta, r, alpha, exclusion, spec);
  require_converged(tail, "interference_tail_integral");
  const double rate = 2.0 * kPi * density;
  const double value = std::exp(-rate * tail.value);
  return {value, value * rate * tail.error};
}

double noise_factor(const AnalyticOptions& opts, double beta, double r,
                    double alpha, double tx_power, double noise) {
  if (!opts.include_noise || noise == 0.0) return 1.0;
  return std::exp(-beta * std::pow(r, alpha) / tx_power * noise);
}

}  // namespace

double nearest_distance_pdf(double r, double lambda) {
  if (r <= 0.0) return 0.0;
  return 2.0 * kPi * lambda * r * std::exp(-kPi * lambda * r * r);
}

double nearest_distance_cdf(double r, double lambda) {
  if (r <= 0.0) return 0.0;
  return -std::expm1(-kPi * lambda * r * r);
}

double second_nearest_distance_pdf(double d, double lambda) {
  if (d <= 0.0) return 0.0;
  const double pl = kPi * lambda;
  return 2.0 * pl * pl * d * d * d * std::exp(-pl * d * d);
}

double second_nearest_distance_cdf(double d, double lambda) {
  if (d <= 0.0) return 0.0;
  const double x = kPi * lambda * d * d;
  return 1.0 - std::exp(-x) * (1.0 + x);
}

SuccessProbabilityResult laplace_ul_from_dl_bs(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw std::domain_error("laplace_ul_from_dl_bs: r must be > 0");
  require_valid(params);
  const auto dens = InterfererDensities::from(params);
  if (dens.lambda_psi == 0.0) return {1.0, 0.0};
  const double kappa = params.p_b / params.p_m;
  const QuadratureSpec inner = spec.tightened();
  double inner_error = 0.0;
  auto integrand = [&](double t) {
    const double w = second_nearest_distance_pdf(t, params.lambda_b);
    if (w == 0.0) return 0.0;
    auto l = exp_of_tail(dens.lambda_psi, kappa, params.beta_u, r, params.alpha,
                         t, inner);
    inner_error = std::max(inner_error, l.quadrature_error);
    return l.value * w;
  };
  const double upper = second_nearest_cutoff(params.lambda_b, spec.tail_cutoff_mass);
  auto res = integrate<double>(integrand, 0.0, upper, spec);
  require_converged(res, "laplace_ul_from_dl_bs");
  return {res.value, res.error + inner_error + spec.tail_cutoff_mass};
}

SuccessProbabilityResult laplace_ul_from_ul_ue(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw std::domain_error("laplace_ul_from_ul_ue: r must be > 0");
  require_valid(params);
  const auto dens = InterfererDensities::from(params);
  return exp_of_tail(dens.lambda_phi, 1.0, params.beta_u, r, params.alpha, r,
                     spec);
}

SuccessProbabilityResult laplace_dl_from_dl_bs(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw std::domain_error("laplace_dl_from_dl_bs: r must be > 0");
  require_valid(params);
  const auto dens = InterfererDensities::from(params);
  return exp_of_tail(dens.lambda_psi, 1.0, params.beta_d, r, params.alpha, r,
                     spec);
}

SuccessProbabilityResult laplace_dl_from_ul_ue(double r,
                                               const SystemParams& params,
                                               const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw std::domain_error("laplace_dl_from_ul_ue: r must be > 0");
  require_valid(params);
  const auto dens = InterfererDensities::from(params);
  return exp_of_tail(dens.lambda_phi, params.p_m / params.p_b, params.beta_d, r,
                     params.alpha, 0.0, spec);
}

SuccessProbabilityResult ul_success_probability(const SystemParams& params,
                                                const QuadratureSpec& spec,
                                                const AnalyticOptions& opts) {
  require_valid(params);
  const QuadratureSpec inner = spec.tightened();
  double inner_error = 0.0;
  auto integrand = [&](double r) {
    const double w = nearest_distance_pdf(r, params.lambda_b);
    if (w == 0.0) return 0.0;
    auto psi = laplace_ul_from_dl_bs(r, params, inner);
    auto phi = laplace_ul_from_ul_ue(r, params, inner);
    inner_error = std::max(inner_error, psi.quadrature_error + phi.quadrature_error);
    return psi.value * phi.value * w *
           noise_factor(opts, params.beta_u, r, params.alpha, params.p_m,
                        params.noise_power);
  };
  const double upper = nearest_cutoff(params.lambda_b, spec.tail_cutoff_mass);
  auto res = integrate<double>(integrand, 0.0, upper, spec);
  require_converged(res, "ul_success_probability");
  return {res.value, res.error + inner_error + spec.tail_cutoff_mass};
}

SuccessProbabilityResult dl_success_probability(const SystemParams& params,
                                                const QuadratureSpec& spec,
                                                const AnalyticOptions& opts) {
  require_valid(params);
  const QuadratureSpec inner = spec.tightened();
  double inner_error = 0.0;
  auto integrand = [&](double r) {
    const double w = second_nearest_distance_pdf(r, params.lambda_b);
    if (w == 0.0) return 0.0;
    auto psi = laplace_dl_from_dl_bs(r, params, inner);
    auto phi = laplace_dl_from_ul_ue(r, params, inner);
    inner_error = std::max(inner_error, psi.quadrature_error + phi.quadrature_error);
    return psi.value * phi.value * w *
           noise_factor(opts, params.beta_d, r, params.alpha, params.p_b,
                        params.noise_power);
  };
  const double upper = second_nearest_cutoff(params.lambda_b, spec.tail_cutoff_mass);
  auto res = integrate<double>(integrand, 0.0, upper, spec);
  require_converged(res, "dl_success_probability");
  return {res.value, res.error + inner_error + spec.tail_cutoff_mass};
}

}  // namespace duda
