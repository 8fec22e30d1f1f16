#include "duda/params.hpp"

#include <cmath>

namespace duda {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

void require(std::vector<Violation>& out, bool ok, const char* field,
             const char* message) {
  if (!ok) out.push_back({field, message});
}

}  // namespace

std::vector<Violation> validate(const SystemParams& p) {
  std::vector<Violation> out;
  // Comparisons are written so that NaN fails them.
  require(out, p.lambda_b > 0.0, "lambda_b", "lambda_b must be positive");
  require(out, p.delta > 0.0 && p.delta < 1.0, "delta",
          "delta must lie strictly between 0 and 1");
  require(out, p.alpha > 2.0 && std::isfinite(p.alpha), "alpha",
          "alpha must exceed 2 for the interference integrals to converge");
  require(out, p.beta_u > 0.0 && std::isfinite(p.beta_u), "beta_u",
          "beta_u must be positive");
  require(out, p.beta_d > 0.0 && std::isfinite(p.beta_d), "beta_d",
          "beta_d must be positive");
  require(out, p.p_b > 0.0 && std::isfinite(p.p_b), "p_b",
          "p_b must be positive");
  require(out, p.p_m > 0.0 && std::isfinite(p.p_m), "p_m",
          "p_m must be positive");
  require(out, p.noise_power >= 0.0 && std::isfinite(p.noise_power),
          "noise_power", "noise_power must be non-negative");
  require(out, p.bandwidth > 0.0, "bandwidth", "bandwidth must be positive");
  return out;
}

std::vector<Violation> validate(const SlotTiming& t) {
  std::vector<Violation> out;
  require(out, t.t_d > 0.0 && std::isfinite(t.t_d), "t_d",
          "t_d must be positive");
  require(out, t.t_u > 0.0 && std::isfinite(t.t_u), "t_u",
          "t_u must be positive");
  require(out, t.s_u > 0.0, "s_u", "s_u must be positive");
  require(out, !(t.s_u > t.t_u), "s_u", "s_u must not exceed t_u");
  require(out, t.s_d > 0.0, "s_d", "s_d must be positive");
  require(out, !(t.s_d > t.t_d), "s_d", "s_d must not exceed t_d");
  require(out, t.w > 0.0 && std::isfinite(t.w), "w", "w must be positive");
  return out;
}

std::vector<Violation> validate(const LinkSuccess& l) {
  std::vector<Violation> out;
  require(out, l.rho_u > 0.0 && l.rho_u <= 1.0, "rho_u",
          "rho_u must lie in (0, 1]");
  require(out, l.rho_d > 0.0 && l.rho_d <= 1.0, "rho_d",
          "rho_d must lie in (0, 1]");
  return out;
}

std::vector<Violation> validate(const SystemParams& params,
                                const SlotTiming& timing) {
  auto out = validate(params);
  auto more = validate(timing);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace duda
