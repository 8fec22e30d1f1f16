#include "duda/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "duda/latency.hpp"

namespace duda {

DeploymentConfig TrialConfig::deployment_config() const {
  DeploymentConfig dc;
  dc.lambda_b = params.lambda_b;
  dc.delta = params.delta;
  dc.window_half_width = window_half_width;
  dc.typical_mode = typical_mode;
  dc.scheme = scheme;
  dc.typical_pairing = typical_pairing;
  dc.unpaired_active = unpaired_active;
  return dc;
}

const char* to_string(Scheme scheme) {
  return scheme == Scheme::kDuda ? "DUDA" : "DUCA";
}

double sinr(double tx_power, double distance, double fading,
            std::span<const InterfererSample> interferers, double alpha,
            double noise_power) {
  if (!(distance > 0.0)) {
    throw std::domain_error("sinr: serving distance must be positive");
  }
  double interference = noise_power;
  for (const auto& i : interferers) {
    interference += i.power * i.fading * std::pow(i.distance, -alpha);
  }
  return tx_power * fading * std::pow(distance, -alpha) / interference;
}

namespace {

struct Emitter {
  Point position;
  double power;
};

std::vector<Emitter> active_emitters(const Deployment& dep,
                                     const SystemParams& params) {
  std::vector<Emitter> out;
  out.reserve(dep.interferers.size());
  for (const auto& link : dep.interferers) {
    if (link.direction == LinkDirection::kDownlink) {
      out.push_back({dep.bs_positions[link.dl_bs], params.p_b});
    } else {
      out.push_back({link.ue, params.p_m});
    }
  }
  return out;
}

double attempt_sinr(const Point& rx, const Point& tx, double tx_power,
                    const std::vector<Emitter>& emitters,
                    const SystemParams& params, std::mt19937_64& rng,
                    const FadingSource& fading,
                    std::vector<InterfererSample>& scratch) {
  auto draw = [&] { return fading ? fading(rng) : unit_exponential(rng); };
  const double g = draw();
  scratch.clear();
  for (const auto& e : emitters) {
    // An emitter co-located with the receiver would make the SINR zero;
    // clamp to keep the path loss finite.
    const double d = std::max((e.position - rx).norm(), 1e-9);
    scratch.push_back({e.power, d, draw()});
  }
  return sinr(tx_power, (tx - rx).norm(), g, scratch, params.alpha,
              params.noise_power);
}

}  // namespace

TrialOutcome run_two_way_trial(const Deployment& deployment,
                               const TrialConfig& config, std::mt19937_64& rng,
                               const FadingSource& fading) {
  const auto& params = config.params;
  const auto& timing = config.timing;
  TrialOutcome out;

  // Arrival offset within the TDD frame, drawn up front for every scheme so
  // the stream layout does not depend on the scheme.
  const double offset = uniform01(rng) * (timing.t_d + timing.t_u);

  Deployment local;
  const Deployment* dep = &deployment;
  std::vector<InterfererSample> scratch;
  bool success = false;
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    if (attempt > 1 && config.redraw != RedrawPolicy::kFading) {
      if (config.redraw == RedrawPolicy::kInterferers) {
        if (dep != &local) local = deployment;
        redraw_interferers(local, params.delta, rng);
      } else {
        RngStream sub{rng(), static_cast<std::uint64_t>(attempt)};
        local = generate_deployment(config.deployment_config(), sub).deployment;
      }
      dep = &local;
    }
    const auto emitters = active_emitters(*dep, params);
    const Point& ul_bs = dep->bs_positions[dep->typical.ul_bs];
    const Point& dl_bs = dep->bs_positions[dep->typical.dl_bs];
    const Point& ue = dep->typical.ue;

    const double ul = attempt_sinr(ul_bs, ue, params.p_m, emitters, params, rng,
                                   fading, scratch);
    const double dl = attempt_sinr(ue, dl_bs, params.p_b, emitters, params, rng,
                                   fading, scratch);
    const bool ul_ok = ul >= params.beta_u;
    const bool dl_ok = dl >= params.beta_d;
    if (attempt == 1) {
      out.first_ul_success = ul_ok;
      out.first_dl_success = dl_ok;
    }
    out.attempts = attempt;
    if (ul_ok && dl_ok) {
      success = true;
      break;
    }
  }
  out.censored = !success;
  out.offset = offset;
  out.latency = trial_latency(out, config.scheme, timing);
  return out;
}

double trial_latency(const TrialOutcome& outcome, Scheme scheme,
                     const SlotTiming& timing) {
  const double retries = static_cast<double>(outcome.attempts - 1);
  if (scheme == Scheme::kDuda) {
    return retries * (timing.s_u + timing.w) + timing.s_u + timing.s_d;
  }
  return protocol_delay_sample(timing, outcome.offset) +
         retries * (timing.t_d + timing.t_u) + timing.t_u + timing.s_d;
}

CampaignRun run_trials(const TrialConfig& config) {
  if (config.iterations < 1 || config.max_attempts < 1) {
    throw std::invalid_argument("run_campaign: iterations and max_attempts must be >= 1");
  }
  const auto violations = validate(config.params, config.timing);
  if (!violations.empty()) {
    throw std::invalid_argument("run_campaign: " + violations.front().message);
  }
  const int n = config.iterations;
  CampaignRun run;
  run.outcomes.resize(n);
  std::vector<int> resamples(n, 0);
  const DeploymentConfig geometry = config.deployment_config();

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        const RngStream stream{config.seed, static_cast<std::uint64_t>(i)};
        auto generated = generate_deployment(geometry, stream.substream(0));
        auto rng = stream.substream(1).engine();
        run.outcomes[i] = run_two_way_trial(generated.deployment, config, rng);
        resamples[i] = generated.resamples;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  unsigned threads = config.threads ? config.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (int r : resamples) run.resamples += r;
  if (run.resamples > 10L * n) {
    throw std::runtime_error("run_campaign: typical BS resamples exceed 10x iterations");
  }
  return run;
}

CampaignRun run_bernoulli_trials(const TrialConfig& config,
                                 const LinkSuccess& link) {
  if (config.iterations < 1 || config.max_attempts < 1) {
    throw std::invalid_argument("run_bernoulli_trials: iterations and max_attempts must be >= 1");
  }
  if (!validate(link).empty() || !validate(config.timing).empty()) {
    throw std::invalid_argument("run_bernoulli_trials: invalid success probabilities or timing");
  }
  CampaignRun run;
  run.outcomes.resize(config.iterations);
  for (int i = 0; i < config.iterations; ++i) {
    const RngStream stream{config.seed, static_cast<std::uint64_t>(i)};
    auto rng = stream.substream(1).engine();
    auto& out = run.outcomes[i];
    out.offset = uniform01(rng) * (config.timing.t_d + config.timing.t_u);
    out.censored = true;
    for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
      const bool ul_ok = uniform01(rng) < link.rho_u;
      const bool dl_ok = uniform01(rng) < link.rho_d;
      if (attempt == 1) {
        out.first_ul_success = ul_ok;
        out.first_dl_success = dl_ok;
      }
      out.attempts = attempt;
      if (ul_ok && dl_ok) {
        out.censored = false;
        break;
      }
    }
    out.latency = trial_latency(out, config.scheme, config.timing);
  }
  return run;
}

LatencyStats summarize(const CampaignRun& run, Scheme scheme,
                       const SlotTiming& timing) {
  const int n = static_cast<int>(run.outcomes.size());
  if (n == 0) throw std::invalid_argument("summarize: no trials");
  LatencyStats stats;
  stats.samples.reserve(n);
  stats.attempts.reserve(n);
  double sum = 0.0, sum_attempts = 0.0;
  int ul_ok = 0, dl_ok = 0, both_ok = 0;
  for (const auto& o : run.outcomes) {
    const double latency = trial_latency(o, scheme, timing);
    const bool both = o.first_ul_success && o.first_dl_success;
    stats.samples.push_back(latency);
    stats.attempts.push_back(o.attempts);
    stats.censored.push_back(o.censored);
    stats.first_attempt_success.push_back(both);
    sum += latency;
    sum_attempts += o.attempts;
    stats.censored_count += o.censored ? 1 : 0;
    ul_ok += o.first_ul_success ? 1 : 0;
    dl_ok += o.first_dl_success ? 1 : 0;
    both_ok += both ? 1 : 0;
  }
  stats.mean = sum / n;
  stats.mean_attempts = sum_attempts / n;
  double ss = 0.0;
  for (double x : stats.samples) ss += (x - stats.mean) * (x - stats.mean);
  const double var = n > 1 ? ss / (n - 1) : 0.0;
  stats.std_error = std::sqrt(var / n);
  stats.ci95_half_width = 1.959963984540054 * stats.std_error;
  stats.empirical_rho_u = static_cast<double>(ul_ok) / n;
  stats.empirical_rho_d = static_cast<double>(dl_ok) / n;
  stats.empirical_rho_d_given_u =
      ul_ok > 0 ? static_cast<double>(both_ok) / ul_ok : 0.0;
  stats.resamples = run.resamples;
  stats.resample_rate = static_cast<double>(run.resamples) / n;
  return stats;
}

LatencyStats run_campaign(const TrialConfig& config) {
  return summarize(run_trials(config), config.scheme, config.timing);
}

ConsistencyCheck self_consistency(const LatencyStats& stats, Scheme scheme,
                                  const SlotTiming& timing) {
  const std::size_t n = stats.samples.size();
  const double p = stats.empirical_rho_u * stats.empirical_rho_d_given_u;
  if (n < 2 || !(p > 0.0)) {
    throw std::domain_error("self_consistency: no first-attempt successes");
  }
  const LinkSuccess link{stats.empirical_rho_u, stats.empirical_rho_d_given_u};
  ConsistencyCheck check;
  check.sampled_mean = stats.mean;
  check.closed_form = scheme == Scheme::kDuda ? latency_duda(timing, link).total
                                              : latency_duca(timing, link).total;
  check.difference = check.sampled_mean - check.closed_form;

  // Influence of trial i on the difference: L_i - f'(p) (X_i - p), where X_i
  // flags a first-attempt success and f'(p) = -cycle / p^2.
  const double cycle =
      scheme == Scheme::kDuda ? timing.s_u + timing.w : timing.t_d + timing.t_u;
  const double slope = -cycle / (p * p);
  std::vector<double> influence(n);
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = stats.first_attempt_success[i] ? 1.0 : 0.0;
    influence[i] = stats.samples[i] - slope * (x - p);
    m += influence[i];
  }
  m /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : influence) ss += (v - m) * (v - m);
  check.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return check;
}

void write_samples_csv(std::ostream& os, const LatencyStats& stats,
                       Scheme scheme, bool header) {
  if (header) os << "iteration,scheme,attempts,latency,censored\n";
  char buf[128];
  for (std::size_t i = 0; i < stats.samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%d,%.9g,%d\n", i, to_string(scheme),
                  stats.attempts[i], stats.samples[i], stats.censored[i] ? 1 : 0);
    os << buf;
  }
}

}  // namespace duda
