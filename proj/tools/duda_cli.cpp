// Command-line front end: analytic and simulated two-way latency, sweeps,
// validation and deployment snapshots. All tables are CSV.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "duda/config.hpp"
#include "duda/deployment.hpp"
#include "duda/montecarlo.hpp"
#include "duda/sweep.hpp"
#include "duda/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::string scheme;
  std::string mode;
  std::string sweep;
  std::string out;
  std::string noise;
  std::string samples;
  std::vector<std::string> sets;
  bool wall_time = false;
  int spatial_samples = 20000;
};

duda::ConfigBundle build_bundle(const Flags& f) {
  duda::ConfigBundle b =
      f.config.empty() ? duda::ConfigBundle{} : duda::load_settings(f.config);
  // Flags override the file, the file overrides defaults.
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw duda::ConfigError(0, "--set expects key=value, got '" + kv + "'");
    }
    duda::apply_setting(b, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) duda::apply_setting(b, "seed", std::to_string(*f.seed));
  if (f.iterations) duda::apply_setting(b, "iterations", std::to_string(*f.iterations));
  if (!f.scheme.empty()) duda::apply_setting(b, "scheme", f.scheme);
  if (!f.mode.empty()) duda::apply_setting(b, "mode", f.mode);
  if (!f.noise.empty()) duda::apply_setting(b, "noise", f.noise);
  if (!f.sweep.empty()) duda::apply_sweep_flag(b, f.sweep);
  b.wall_time = f.wall_time;
  duda::finalize(b);
  return b;
}

// Writes to --out when given, stdout otherwise.
void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(f.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + f.out);
  os << text;
}

int cmd_table(const Flags& f, duda::RunMode mode) {
  const auto b = build_bundle(f);
  std::ostringstream os;
  duda::write_sweep_csv(os, duda::run_point(b, mode));
  emit(f, os.str());
  return kExitOk;
}

int cmd_simulate(const Flags& f) {
  const auto b = build_bundle(f);
  std::map<duda::Scheme, duda::CampaignRun> runs;
  std::ostringstream os;
  duda::write_sweep_csv(os, duda::run_point(b, duda::RunMode::kSimulate, &runs));
  emit(f, os.str());
  if (!f.samples.empty()) {
    std::ofstream ss(f.samples, std::ios::binary);
    if (!ss) throw std::runtime_error("cannot write " + f.samples);
    bool header = true;
    for (auto scheme : b.sweep.schemes) {
      if (!runs.count(scheme)) continue;
      duda::write_samples_csv(ss, duda::summarize(runs[scheme], scheme, b.timing),
                              scheme, header);
      header = false;
    }
  }
  return kExitOk;
}

int cmd_sweep(const Flags& f) {
  const auto b = build_bundle(f);
  std::ostringstream os;
  duda::write_sweep_csv(os, duda::run_sweep(b.sweep, b));
  emit(f, os.str());
  return kExitOk;
}

int cmd_validate(const Flags& f) {
  const auto b = build_bundle(f);
  duda::ValidationOptions opts;
  opts.spatial_samples = f.spatial_samples;
  const auto report = duda::run_validation(b, opts);
  std::ostringstream os;
  duda::write_validation_csv(os, report);
  emit(f, os.str());
  for (const auto& c : report.checks) {
    if (c.status == duda::CheckStatus::kFail) {
      std::cerr << "FAIL " << c.name << ": " << c.detail << '\n';
    }
  }
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_snapshot(const Flags& f) {
  const auto b = build_bundle(f);
  const auto outcome = duda::generate_deployment(b.trial.deployment_config(),
                                                 duda::RngStream{b.trial.seed, 0});
  std::ostringstream os;
  duda::write_snapshot_csv(os, outcome.deployment);
  emit(f, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way latency of decoupled vs coupled UL/DL access"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--iterations", f.iterations, "Monte Carlo trials per point");
    sub->add_option("--scheme", f.scheme, "duda, duca or both");
    sub->add_option("--mode", f.mode, "analytic, simulate or both");
    sub->add_option("--sweep", f.sweep, "VAR:START:STOP:STEPS");
    sub->add_option("--out", f.out, "output CSV path (default stdout)");
    sub->add_option("--noise", f.noise, "on or off");
    sub->add_option("--set", f.sets, "extra key=value override (repeatable)");
    sub->add_flag("--wall-time", f.wall_time, "record wall-clock time in tables");
  };

  auto* analytic = app.add_subcommand("analytic", "closed-form latency at the configured point");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo latency at the configured point");
  auto* sweep = app.add_subcommand("sweep", "latency over a parameter sweep");
  auto* validate = app.add_subcommand("validate", "run the cross-check suite");
  auto* snapshot = app.add_subcommand("snapshot", "one deployment as CSV");
  for (auto* sub : {analytic, simulate, sweep, validate, snapshot}) add_common(sub);
  simulate->add_option("--samples", f.samples, "per-trial samples CSV path");
  validate->add_option("--spatial-samples", f.spatial_samples,
                       "realizations for the point-process tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*analytic) return cmd_table(f, duda::RunMode::kAnalytic);
    if (*simulate) return cmd_simulate(f);
    if (*sweep) return cmd_sweep(f);
    if (*validate) return cmd_validate(f);
    if (*snapshot) return cmd_snapshot(f);
  } catch (const duda::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
