#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "duda/config.hpp"

namespace duda {

struct SweepRow {
  SweepVariable variable = SweepVariable::kSu;
  double value = 0.0;
  Scheme scheme = Scheme::kDuda;
  RunMode mode = RunMode::kAnalytic;  // kAnalytic or kSimulate, never kBoth
  double latency_mean = 0.0;
  double latency_ci95 = 0.0;
  double rho_u = 0.0;
  double rho_d = 0.0;
  double censored_fraction = 0.0;
  /// 1 - DUDA/DUCA at the same point and mode; NaN when either is missing.
  double reduction = 0.0;
  double wall_time_ms = 0.0;
  std::string error;  // empty on success
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// One row per sweep point, scheme and mode, in sweep order. A failing point
/// records its error in the row and the remaining points still run.
/// Analytic rows feed the stochastic-geometry success probabilities into the
/// closed forms; rho_product points set rho_u = rho_d = sqrt(p) directly.
SweepTable run_sweep(const SweepSpec& spec, const ConfigBundle& bundle);

/// The configured operating point alone, reported as a one-point s_u table.
/// When `runs` is given it receives the simulated trials of each scheme.
SweepTable run_point(const ConfigBundle& bundle, RunMode mode,
                     std::map<Scheme, CampaignRun>* runs = nullptr);

/// Fixed header, 9 significant digits, empty cells for missing values.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

}  // namespace duda
