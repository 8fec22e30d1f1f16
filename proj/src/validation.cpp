#include "duda/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "duda/deployment.hpp"
#include "duda/latency.hpp"
#include "duda/quadrature.hpp"
#include "duda/sg_analytic.hpp"
#include "duda/stats.hpp"
#include "duda/sweep.hpp"

namespace duda {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kSkip: return "skip";
  }
  return "?";
}

bool ValidationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::kFail;
  });
}

namespace {

CheckResult make(std::string name, bool ok, double measured, double tolerance,
                 std::string detail = {}) {
  return {std::move(name), ok ? CheckStatus::kPass : CheckStatus::kFail, measured,
          tolerance, std::move(detail)};
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo * std::pow(hi / lo, uniform01(rng));
}

// Kernel arguments spanning short and long links, light and heavy
// interferers, and exclusion radii from zero to far beyond the link.
struct KernelTuple {
  double kappa, beta, r, a;
};

KernelTuple random_tuple(std::mt19937_64& rng) {
  KernelTuple t;
  t.kappa = log_uniform(rng, 1e-3, 1e3);
  t.beta = log_uniform(rng, 1e-2, 1e2);
  t.r = log_uniform(rng, 0.5, 200.0);
  t.a = uniform01(rng) < 0.1 ? 0.0 : t.r * log_uniform(rng, 1e-3, 30.0);
  return t;
}

double relative_error(double value, double reference) {
  const double scale = std::max(std::abs(reference), 1e-300);
  return std::abs(value - reference) / scale;
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

std::vector<double> distances_from_origin(const SystemParams& params, double h,
                                          int samples, std::uint64_t seed,
                                          std::uint64_t salt, int rank) {
  std::vector<double> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    auto rng = RngStream{seed, static_cast<std::uint64_t>(i)}.substream(salt).engine();
    const auto points = sample_ppp(params.lambda_b, h, rng);
    std::vector<double> d;
    d.reserve(points.size());
    for (const auto& p : points) d.push_back(p.norm());
    if (static_cast<int>(d.size()) < rank) {
      // Nothing inside the window: the distance exceeds the window reach.
      out.push_back(std::sqrt(2.0) * h);
      continue;
    }
    std::nth_element(d.begin(), d.begin() + (rank - 1), d.end());
    out.push_back(d[rank - 1]);
  }
  return out;
}

}  // namespace

CheckResult check_quadrature_arctan(const SystemParams& params, int samples,
                                    std::uint64_t seed) {
  const double tol = 1e-8;
  if (params.alpha != 4.0) {
    return {"quadrature_alpha4_closed_form", CheckStatus::kSkip, 0.0, tol,
            "path-loss exponent is not 4"};
  }
  auto rng = RngStream{seed, 0}.substream(0x71).engine();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto t = random_tuple(rng);
    const double c = t.kappa * t.beta * std::pow(t.r, 4.0);
    const double sc = std::sqrt(c);
    // pi/2 - atan(z) written as atan(1/z) to avoid cancellation.
    const double exact = t.a > 0.0 ? 0.5 * sc * std::atan(sc / (t.a * t.a))
                                   : 0.25 * M_PI * sc;
    const auto got =
        interference_tail_integral(t.kappa, t.beta, t.r, 4.0, t.a, QuadratureSpec{});
    worst = std::max(worst, relative_error(got.value, exact));
  }
  return make("quadrature_alpha4_closed_form", worst <= tol, worst, tol,
              format("%.0f random tuples", samples));
}

CheckResult check_quadrature_full_plane(const SystemParams& params, int samples,
                                        std::uint64_t seed) {
  const double tol = 1e-8;
  const double alpha = params.alpha;
  auto rng = RngStream{seed, 0}.substream(0x72).engine();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto t = random_tuple(rng);
    const double x0 = std::pow(t.kappa * t.beta, 1.0 / alpha) * t.r;
    const double exact = x0 * x0 * (M_PI / alpha) / std::sin(2.0 * M_PI / alpha);
    const auto got =
        interference_tail_integral(t.kappa, t.beta, t.r, alpha, 0.0, QuadratureSpec{});
    worst = std::max(worst, relative_error(got.value, exact));
  }
  return make("quadrature_full_plane", worst <= tol, worst, tol,
              format("alpha %.6g, %.0f tuples", alpha, samples));
}

CheckResult check_latency_gap(int points, std::uint64_t seed) {
  const double tol = 1e-12;
  auto rng = RngStream{seed, 0}.substream(0x73).engine();
  double worst = 0.0;
  double min_gap = INFINITY;
  for (int i = 0; i < points; ++i) {
    SlotTiming timing;
    timing.t_d = timing.t_u = timing.w = log_uniform(rng, 0.1, 10.0);
    // s_u and rho drawn from half-open ranges that exclude zero.
    timing.s_u = timing.t_u * (1.0 - uniform01(rng));
    timing.s_d = timing.t_d * (1.0 - uniform01(rng));
    const double product = 1.0 - 0.99 * uniform01(rng);
    const double rho_d = std::sqrt(product);
    const LinkSuccess link{product / rho_d, rho_d};
    const double diff =
        latency_duca(timing, link).total - latency_duda(timing, link).total;
    const double expected = (timing.t_u - timing.s_u) / link.product() + timing.s_u;
    worst = std::max(worst, relative_error(diff, expected));
    min_gap = std::min(min_gap, diff);
  }
  return make("latency_gap_identity", worst <= tol && min_gap > 0.0, worst, tol,
              format("smallest gap %.9g", min_gap));
}

CheckResult check_ppp_counts(const SystemParams& params, double h, int samples,
                             double significance, std::uint64_t seed) {
  std::vector<long> counts;
  counts.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    auto rng = RngStream{seed, static_cast<std::uint64_t>(i)}.substream(0x74).engine();
    counts.push_back(static_cast<long>(sample_ppp(params.lambda_b, h, rng).size()));
  }
  const double mean = params.lambda_b * 4.0 * h * h;
  const auto t = stats::poisson_chi_square(counts, mean);
  return make("ppp_count_chi_square", t.p_value >= significance, t.p_value,
              significance, format("chi2 %.6g, mean %.6g", t.statistic, mean));
}

CheckResult check_nearest_distance(const SystemParams& params, double h,
                                   int samples, double significance,
                                   std::uint64_t seed) {
  const double lambda = params.lambda_b;
  const auto d = distances_from_origin(params, h, samples, seed, 0x75, 1);
  const auto t = stats::ks_test(d, [&](double r) { return nearest_distance_cdf(r, lambda); });
  return make("nearest_distance_ks", t.p_value >= significance, t.p_value,
              significance, format("D %.6g", t.statistic));
}

CheckResult check_second_nearest_distance(const SystemParams& params, double h,
                                          int samples, double significance,
                                          std::uint64_t seed) {
  const double lambda = params.lambda_b;
  const auto d = distances_from_origin(params, h, samples, seed, 0x76, 2);
  const auto t = stats::ks_test(
      d, [&](double r) { return second_nearest_distance_cdf(r, lambda); });
  return make("second_nearest_distance_ks", t.p_value >= significance, t.p_value,
              significance, format("D %.6g", t.statistic));
}

std::vector<CheckResult> check_success_probabilities(const ConfigBundle& bundle,
                                                     const LatencyStats& duda_stats) {
  AnalyticOptions opts;
  opts.include_noise = bundle.noise;
  const double ul = ul_success_probability(bundle.params, {}, opts).value;
  const double dl = dl_success_probability(bundle.params, {}, opts).value;
  const double du = std::abs(ul - duda_stats.empirical_rho_u);
  const double dd = std::abs(dl - duda_stats.empirical_rho_d);
  return {make("rho_u_analytic_vs_simulated", du <= 0.03, du, 0.03,
               format("analytic %.6f, simulated %.6f", ul, duda_stats.empirical_rho_u)),
          make("rho_d_analytic_vs_simulated", dd <= 0.05, dd, 0.05,
               format("analytic %.6f, simulated %.6f", dl, duda_stats.empirical_rho_d))};
}

CheckResult check_self_consistency(const LatencyStats& stats, Scheme scheme,
                                   const SlotTiming& timing) {
  const auto c = self_consistency(stats, scheme, timing);
  const double z = std::abs(c.difference) / c.std_error;
  return make(std::string("self_consistency_") + (scheme == Scheme::kDuda ? "duda" : "duca"),
              z <= 3.0, z, 3.0,
              format("sampled %.6f vs closed form %.6f", c.sampled_mean, c.closed_form));
}

ValidationReport run_validation(const ConfigBundle& bundle,
                                const ValidationOptions& options) {
  ValidationReport report;
  auto& out = report.checks;
  const auto seed = bundle.trial.seed;
  const double h = bundle.trial.window_half_width;
  const double sig = options.significance;

  out.push_back(check_quadrature_arctan(bundle.params, options.quadrature_samples, seed));
  out.push_back(check_quadrature_full_plane(bundle.params, options.quadrature_samples, seed));
  out.push_back(check_latency_gap(options.latency_grid_points, seed));
  out.push_back(check_ppp_counts(bundle.params, h, options.spatial_samples, sig, seed));
  out.push_back(check_nearest_distance(bundle.params, h, options.spatial_samples, sig, seed));
  out.push_back(
      check_second_nearest_distance(bundle.params, h, options.spatial_samples, sig, seed));

  // Analytic rho_product sweep: DUDA below DUCA at every point.
  {
    SweepSpec spec;
    spec.variable = SweepVariable::kRhoProduct;
    spec.start = 0.3;
    spec.stop = 1.0;
    spec.steps = 15;
    spec.mode = RunMode::kAnalytic;
    const auto table = run_sweep(spec, bundle);
    double worst = INFINITY;
    for (std::size_t i = 0; i + 1 < table.rows.size(); i += 2) {
      worst = std::min(worst, table.rows[i + 1].latency_mean - table.rows[i].latency_mean);
    }
    out.push_back(make("sweep_duda_below_duca", worst > 0.0, worst, 0.0,
                       "smallest DUCA - DUDA gap over rho_product 0.3..1"));
  }

  try {
    TrialConfig trial = bundle.trial;
    trial.scheme = Scheme::kDuda;
    const auto duda = run_campaign(trial);
    trial.scheme = Scheme::kDuca;
    const auto duca = run_campaign(trial);
    for (auto& c : check_success_probabilities(bundle, duda)) out.push_back(std::move(c));
    out.push_back(check_self_consistency(duda, Scheme::kDuda, bundle.timing));
    out.push_back(check_self_consistency(duca, Scheme::kDuca, bundle.timing));
    out.push_back(make("simulated_duda_below_duca", duda.mean < duca.mean,
                       duca.mean - duda.mean, 0.0,
                       format("DUDA %.6f, DUCA %.6f", duda.mean, duca.mean)));
  } catch (const std::exception& e) {
    out.push_back({"monte_carlo", CheckStatus::kFail, 0.0, 0.0, e.what()});
  }
  return report;
}

void write_validation_csv(std::ostream& os, const ValidationReport& report) {
  os << "check,status,measured,tolerance,detail\n";
  char buf[64];
  for (const auto& c : report.checks) {
    os << c.name << ',' << to_string(c.status) << ',';
    std::snprintf(buf, sizeof buf, "%.9g", c.measured);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9g", c.tolerance);
    os << buf << ',';
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    os << detail << '\n';
  }
}

}  // namespace duda
