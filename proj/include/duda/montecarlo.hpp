#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "duda/deployment.hpp"
#include "duda/params.hpp"

namespace duda {

/// What is re-randomized between retransmission attempts of one trial.
enum class RedrawPolicy {
  kFading,       // fading only; topology and directions fixed
  kInterferers,  // fading plus interferer directions and UE positions
  kDeployment,   // a fresh realization per attempt
};

struct TrialConfig {
  SystemParams params;
  SlotTiming timing;
  int iterations = 10000;
  int max_attempts = 1000;
  Scheme scheme = Scheme::kDuda;
  std::uint64_t seed = 1;
  RedrawPolicy redraw = RedrawPolicy::kDeployment;
  double window_half_width = 75.0;
  TypicalMode typical_mode = TypicalMode::kUplink;
  TypicalPairing typical_pairing = TypicalPairing::kUeNearestTwo;
  bool unpaired_active = false;
  /// Worker threads for run_campaign; 0 picks hardware concurrency.
  unsigned threads = 0;

  DeploymentConfig deployment_config() const;
};

struct InterfererSample {
  double power = 0.0;     // W
  double distance = 0.0;  // m
  double fading = 1.0;
};

/// tx g d^-alpha / (noise + sum P_i g_i d_i^-alpha). Throws
/// std::domain_error for a non-positive serving distance.
double sinr(double tx_power, double distance, double fading,
            std::span<const InterfererSample> interferers, double alpha,
            double noise_power);

struct TrialOutcome {
  int attempts = 0;
  double latency = 0.0;  // slots
  bool censored = false;
  bool first_ul_success = false;
  bool first_dl_success = false;
  double offset = 0.0;  // packet arrival time within the TDD frame
};

/// Latency of a finished trial under `timing`. Attempts and arrival offset do
/// not depend on the slot sizes, so one set of trials serves a whole s_u sweep.
double trial_latency(const TrialOutcome& outcome, Scheme scheme,
                     const SlotTiming& timing);

/// Source of per-link fading gains; the default draws unit-mean exponentials.
using FadingSource = std::function<double(std::mt19937_64&)>;

/// Repeats data + ACK attempts on one deployment until both directions pass
/// their thresholds or max_attempts is reached.
TrialOutcome run_two_way_trial(const Deployment& deployment,
                               const TrialConfig& config, std::mt19937_64& rng,
                               const FadingSource& fading = {});

struct LatencyStats {
  std::vector<double> samples;
  std::vector<int> attempts;
  std::vector<bool> censored;
  double mean = 0.0;
  double std_error = 0.0;
  double ci95_half_width = 0.0;
  int censored_count = 0;
  double empirical_rho_u = 0.0;
  double empirical_rho_d = 0.0;
  /// First-attempt DL success among trials whose first UL attempt passed. The
  /// ACK is only sent after a decoded UL packet, so rho_u times this is the
  /// per-attempt success rate that drives retransmissions.
  double empirical_rho_d_given_u = 0.0;
  std::vector<bool> first_attempt_success;
  double mean_attempts = 0.0;
  long resamples = 0;  // realizations dropped because the typical BS was unpaired
  double resample_rate = 0.0;
};

struct CampaignRun {
  std::vector<TrialOutcome> outcomes;
  long resamples = 0;
};

/// `iterations` independent trials, trial i drawing from RngStream{seed, i}.
/// Results do not depend on the thread count. Throws std::runtime_error if
/// the typical-BS resamples exceed 10x the iteration count.
CampaignRun run_trials(const TrialConfig& config);

/// Trials with fixed per-attempt success probabilities and no geometry: UL
/// succeeds with probability rho_u and the ACK with rho_d, independently.
/// Uses the same per-index streams, arrival offsets and attempt cap.
CampaignRun run_bernoulli_trials(const TrialConfig& config,
                                 const LinkSuccess& link);

/// Aggregates trial outcomes, recomputing each latency under `timing`.
LatencyStats summarize(const CampaignRun& run, Scheme scheme,
                       const SlotTiming& timing);

/// run_trials followed by summarize with the config's own timing.
LatencyStats run_campaign(const TrialConfig& config);

/// Sampled mean latency against the closed form at the measured success
/// rates. `std_error` is the standard error of `difference`, including the
/// uncertainty of the measured rates (delta method over the same trials).
struct ConsistencyCheck {
  double sampled_mean = 0.0;
  double closed_form = 0.0;
  double difference = 0.0;
  double std_error = 0.0;
};
ConsistencyCheck self_consistency(const LatencyStats& stats, Scheme scheme,
                                  const SlotTiming& timing);

/// CSV sink: iteration,scheme,attempts,latency,censored.
void write_samples_csv(std::ostream& os, const LatencyStats& stats,
                       Scheme scheme, bool header = true);

const char* to_string(Scheme scheme);

}  // namespace duda
