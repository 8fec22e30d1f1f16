#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "duda/montecarlo.hpp"
#include "duda/params.hpp"

namespace duda {

enum class SweepVariable { kSu, kRhoProduct, kDelta, kLambdaB, kBetaUDb, kBetaDDb };
enum class RunMode { kAnalytic, kSimulate, kBoth };

struct SweepSpec {
  SweepVariable variable = SweepVariable::kSu;
  double start = 0.1;
  double stop = 0.9;
  int steps = 9;
  std::vector<Scheme> schemes = {Scheme::kDuda, Scheme::kDuca};
  RunMode mode = RunMode::kAnalytic;

  /// Evenly spaced values from start to stop inclusive.
  std::vector<double> values() const;
};

/// Everything a run needs. `trial.params` and `trial.timing` mirror `params`
/// and `timing` after finalize().
struct ConfigBundle {
  SystemParams params;
  SlotTiming timing;
  TrialConfig trial;
  SweepSpec sweep;
  /// Include thermal noise in SINR evaluation (analytic and simulated).
  bool noise = false;
  /// Record wall-clock time in sweep output. Off keeps output reproducible.
  bool wall_time = false;
  /// Thermal noise density in dBm/Hz; multiplied by the bandwidth.
  double noise_dbm_per_hz = -174.0;
  /// Set once `w` is given; otherwise w follows t_d.
  bool w_explicit = false;
  /// Source line of each key set from a file, for error reporting.
  std::map<std::string, int, std::less<>> key_lines;
};

/// Configuration problem. `line` is 0 when no source line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat `key = value` document, one pair per line, `#` starts a comment.
/// Unspecified keys keep their defaults; dB and dBm keys are converted to
/// linear units here. Throws ConfigError on unknown keys, malformed values or
/// invalid parameter combinations.
ConfigBundle parse_config(std::string_view text);

/// Reads settings without finalizing, so further overrides can follow.
ConfigBundle read_settings(std::string_view text);
ConfigBundle load_settings(const std::filesystem::path& path);

/// Applies one setting. Shared by the file parser and command-line overrides.
void apply_setting(ConfigBundle& bundle, std::string_view key,
                   std::string_view value, int line = 0);

/// Parses VAR:START:STOP:STEPS into the bundle's sweep.
void apply_sweep_flag(ConfigBundle& bundle, std::string_view flag);

/// Derives dependent values (w defaults to t_d, noise power from density and
/// bandwidth) and validates. Call once, after the last apply_setting.
void finalize(ConfigBundle& bundle);

/// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();

const char* to_string(SweepVariable variable);
const char* to_string(RunMode mode);

}  // namespace duda
