#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "duda/sg_analytic.hpp"

using namespace duda;

namespace {

// Independent evaluation for alpha = 4: the interference kernel in closed
// form and composite Simpson on truncated ranges.
double kernel4(double c, double a) {
  const double sc = std::sqrt(c);
  return a == 0.0 ? 0.25 * M_PI * sc : 0.5 * sc * std::atan(sc / (a * a));
}

template <typename F>
double simpson(const F& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double pdf1(double r, double l) { return 2 * M_PI * l * r * std::exp(-M_PI * l * r * r); }
double pdf2(double r, double l) {
  return 2 * std::pow(M_PI * l, 2) * r * r * r * std::exp(-M_PI * l * r * r);
}

double oracle_rho_u(const SystemParams& p) {
  const double l_psi = 0.5 * p.delta * p.lambda_b;
  const double l_phi = 0.5 * (1 - p.delta) * p.lambda_b;
  const double kappa = p.p_b / p.p_m;
  const double reach = std::sqrt(45.0 / (M_PI * p.lambda_b));
  auto l_psi_at = [&](double r) {
    const double c = kappa * p.beta_u * std::pow(r, 4);
    return simpson([&](double t) { return pdf2(t, p.lambda_b) *
                                          std::exp(-2 * M_PI * l_psi * kernel4(c, t)); },
                   0.0, reach, 1200);
  };
  return simpson([&](double r) {
    if (r == 0.0) return 0.0;
    const double c = p.beta_u * std::pow(r, 4);
    return pdf1(r, p.lambda_b) * l_psi_at(r) * std::exp(-2 * M_PI * l_phi * kernel4(c, r));
  }, 0.0, reach, 1200);
}

double oracle_rho_d(const SystemParams& p) {
  const double l_psi = 0.5 * p.delta * p.lambda_b;
  const double l_phi = 0.5 * (1 - p.delta) * p.lambda_b;
  const double reach = std::sqrt(45.0 / (M_PI * p.lambda_b));
  return simpson([&](double r) {
    if (r == 0.0) return 0.0;
    const double r4 = std::pow(r, 4);
    return pdf2(r, p.lambda_b) *
           std::exp(-2 * M_PI * l_psi * kernel4(p.beta_d * r4, r)) *
           std::exp(-2 * M_PI * l_phi * kernel4(p.p_m / p.p_b * p.beta_d * r4, 0.0));
  }, 0.0, reach, 4000);
}

}  // namespace

TEST_CASE("distance laws are normalized densities with known means") {
  const double l = 0.005;
  const double reach = std::sqrt(45.0 / (M_PI * l));
  CHECK(simpson([&](double r) { return nearest_distance_pdf(r, l); }, 0, reach, 4000) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(simpson([&](double r) { return second_nearest_distance_pdf(r, l); }, 0, reach,
                4000) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(simpson([&](double r) { return r * nearest_distance_pdf(r, l); }, 0, reach,
                4000) == doctest::Approx(0.5 / std::sqrt(l)).epsilon(1e-9));
  CHECK(simpson([&](double r) { return r * second_nearest_distance_pdf(r, l); }, 0,
                reach, 4000) == doctest::Approx(0.75 / std::sqrt(l)).epsilon(1e-9));
  for (double r : {1.0, 5.0, 10.0, 25.0}) {
    const double h = 1e-5;
    CHECK((nearest_distance_cdf(r + h, l) - nearest_distance_cdf(r - h, l)) / (2 * h) ==
          doctest::Approx(nearest_distance_pdf(r, l)).epsilon(1e-7));
    CHECK((second_nearest_distance_cdf(r + h, l) - second_nearest_distance_cdf(r - h, l)) /
              (2 * h) ==
          doctest::Approx(second_nearest_distance_pdf(r, l)).epsilon(1e-7));
  }
  CHECK(nearest_distance_pdf(-1.0, l) == 0.0);
  CHECK(second_nearest_distance_cdf(0.0, l) == 0.0);
}

TEST_CASE("success probabilities at the default parameters") {
  const SystemParams p;
  const auto ul = ul_success_probability(p);
  const auto dl = dl_success_probability(p);
  // Reference values from an independent scipy evaluation.
  CHECK(ul.value == doctest::Approx(0.2615106).epsilon(5e-7));
  CHECK(dl.value == doctest::Approx(0.8353827).epsilon(5e-7));
  CHECK(ul.quadrature_error < 1e-6);
  CHECK(dl.quadrature_error < 1e-6);
}

TEST_CASE("success probabilities against the arctan-Simpson oracle") {
  for (double delta : {0.2, 0.5, 0.8}) {
    for (double beta_db : {-5.0, 0.0, 5.0}) {
      SystemParams p;
      p.delta = delta;
      p.beta_u = std::pow(10.0, beta_db / 10);
      p.beta_d = std::pow(10.0, (beta_db - 5) / 10);
      CAPTURE(delta);
      CAPTURE(beta_db);
      CHECK(ul_success_probability(p).value == doctest::Approx(oracle_rho_u(p)).epsilon(1e-7));
      CHECK(dl_success_probability(p).value == doctest::Approx(oracle_rho_d(p)).epsilon(1e-7));
    }
  }
}

TEST_CASE("interference-limited success does not depend on the density") {
  SystemParams p;
  const double ul = ul_success_probability(p).value;
  const double dl = dl_success_probability(p).value;
  for (double lambda : {1e-4, 1e-3, 0.05}) {
    p.lambda_b = lambda;
    CHECK(ul_success_probability(p).value == doctest::Approx(ul).epsilon(1e-8));
    CHECK(dl_success_probability(p).value == doctest::Approx(dl).epsilon(1e-8));
  }
}

TEST_CASE("success falls as thresholds rise") {
  SystemParams p;
  double prev_ul = 1.0, prev_dl = 1.0;
  for (double db = -10.0; db <= 10.0; db += 2.5) {
    p.beta_u = p.beta_d = std::pow(10.0, db / 10);
    const double ul = ul_success_probability(p).value;
    const double dl = dl_success_probability(p).value;
    CHECK(ul < prev_ul);
    CHECK(dl < prev_dl);
    CHECK(ul > 0.0);
    prev_ul = ul;
    prev_dl = dl;
  }
}

TEST_CASE("stronger BS interference hurts the uplink") {
  SystemParams p;
  const double base = ul_success_probability(p).value;
  p.p_b = 100.0;
  CHECK(ul_success_probability(p).value < base);
  p = {};
  p.delta = 0.1;  // fewer DL interferers
  CHECK(ul_success_probability(p).value > base);
}

TEST_CASE("Laplace factors are probabilities and behave monotonically") {
  const SystemParams p;
  double prev = 1.0;
  for (double r : {0.5, 2.0, 5.0, 10.0, 20.0}) {
    const double psi = laplace_ul_from_dl_bs(r, p).value;
    const double phi = laplace_ul_from_ul_ue(r, p).value;
    const double dpsi = laplace_dl_from_dl_bs(r, p).value;
    const double dphi = laplace_dl_from_ul_ue(r, p).value;
    for (double v : {psi, phi, dpsi, dphi}) {
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(psi < prev);
    prev = psi;
  }
  CHECK_THROWS_AS(laplace_ul_from_dl_bs(0.0, p), std::domain_error);
}

TEST_CASE("noise only lowers the success probability") {
  SystemParams p;
  AnalyticOptions on;
  on.include_noise = true;
  const double quiet = ul_success_probability(p).value;
  CHECK(ul_success_probability(p, {}, on).value == doctest::Approx(quiet).epsilon(1e-9));
  p.noise_power = 1e-9;
  const double noisy = ul_success_probability(p, {}, on).value;
  CHECK(noisy < quiet);
  CHECK(ul_success_probability(p).value == doctest::Approx(quiet));
}

TEST_CASE("invalid parameters are rejected") {
  SystemParams p;
  p.alpha = 2.0;
  CHECK_THROWS(ul_success_probability(p));
  CHECK_THROWS(dl_success_probability(p));
}

TEST_CASE("interferer densities split half the BS density by direction") {
  SystemParams p;
  p.delta = 0.3;
  const auto d = InterfererDensities::from(p);
  CHECK(d.lambda_psi == doctest::Approx(0.5 * 0.3 * 0.005));
  CHECK(d.lambda_phi == doctest::Approx(0.5 * 0.7 * 0.005));
}
