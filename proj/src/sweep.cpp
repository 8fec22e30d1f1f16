#include "duda/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include "duda/latency.hpp"
#include "duda/sg_analytic.hpp"

namespace duda {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Copies of params/timing into the trial config, honoring the noise switch.
void sync_trial(ConfigBundle& b) {
  b.trial.params = b.params;
  b.trial.timing = b.timing;
  if (!b.noise) b.trial.params.noise_power = 0.0;
}

ConfigBundle at_value(const ConfigBundle& base, SweepVariable var, double v) {
  ConfigBundle b = base;
  switch (var) {
    case SweepVariable::kSu: b.timing.s_u = v; break;
    case SweepVariable::kRhoProduct: break;
    case SweepVariable::kDelta: b.params.delta = v; break;
    case SweepVariable::kLambdaB: b.params.lambda_b = v; break;
    case SweepVariable::kBetaUDb: b.params.beta_u = db_to_linear(v); break;
    case SweepVariable::kBetaDDb: b.params.beta_d = db_to_linear(v); break;
  }
  sync_trial(b);
  return b;
}

LinkSuccess analytic_link(const ConfigBundle& b) {
  AnalyticOptions opts;
  opts.include_noise = b.noise;
  return {ul_success_probability(b.params, {}, opts).value,
          dl_success_probability(b.params, {}, opts).value};
}

LatencyBreakdown closed_form(Scheme scheme, const SlotTiming& timing,
                             const LinkSuccess& link) {
  return scheme == Scheme::kDuda ? latency_duda(timing, link)
                                 : latency_duca(timing, link);
}

struct PointResult {
  std::optional<LinkSuccess> link;
  std::string error;
  double wall_ms = 0.0;
};

SweepRow base_row(SweepVariable var, double value, Scheme scheme, RunMode mode) {
  SweepRow row;
  row.variable = var;
  row.value = value;
  row.scheme = scheme;
  row.mode = mode;
  row.reduction = kNaN;
  return row;
}

void mark_failed(SweepRow& row, const std::string& error) {
  row.error = error;
  row.latency_mean = row.latency_ci95 = row.rho_u = row.rho_d = kNaN;
  row.censored_fraction = kNaN;
}

// Analytic success probabilities for every point, evaluated on a worker pool.
std::vector<PointResult> analytic_links(const std::vector<ConfigBundle>& points,
                                        SweepVariable var,
                                        const std::vector<double>& values,
                                        unsigned threads) {
  std::vector<PointResult> out(points.size());
  if (var == SweepVariable::kRhoProduct) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double r = std::sqrt(values[i]);
      out[i].link = LinkSuccess{r, r};
    }
    return out;
  }
  auto evaluate = [&](std::size_t i) {
    const auto start = Clock::now();
    try {
      out[i].link = analytic_link(points[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
    out[i].wall_ms = elapsed_ms(start);
  };
  if (var == SweepVariable::kSu) {
    // Geometry does not depend on the packet size.
    evaluate(0);
    for (std::size_t i = 1; i < points.size(); ++i) out[i] = out[0];
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) evaluate(i);
  };
  threads = std::max(1u, std::min<unsigned>(threads, points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

SweepRow analytic_row(SweepVariable var, double value, Scheme scheme,
                      const ConfigBundle& point, const PointResult& links,
                      bool wall_time) {
  SweepRow row = base_row(var, value, scheme, RunMode::kAnalytic);
  row.wall_time_ms = wall_time ? links.wall_ms : 0.0;
  if (!links.link) {
    mark_failed(row, links.error);
    return row;
  }
  try {
    row.latency_mean = closed_form(scheme, point.timing, *links.link).total;
    row.rho_u = links.link->rho_u;
    row.rho_d = links.link->rho_d;
  } catch (const std::exception& e) {
    mark_failed(row, e.what());
  }
  return row;
}

SweepRow simulated_row(SweepVariable var, double value, Scheme scheme,
                       const ConfigBundle& point, const CampaignRun& run,
                       double wall_ms, bool wall_time) {
  SweepRow row = base_row(var, value, scheme, RunMode::kSimulate);
  row.wall_time_ms = wall_time ? wall_ms : 0.0;
  const auto stats = summarize(run, scheme, point.timing);
  row.latency_mean = stats.mean;
  row.latency_ci95 = stats.ci95_half_width;
  row.rho_u = stats.empirical_rho_u;
  row.rho_d = stats.empirical_rho_d;
  row.censored_fraction =
      static_cast<double>(stats.censored_count) / stats.samples.size();
  return row;
}

void fill_reductions(SweepTable& table) {
  std::map<std::pair<double, int>, std::pair<SweepRow*, SweepRow*>> groups;
  for (auto& row : table.rows) {
    auto& g = groups[{row.value, static_cast<int>(row.mode)}];
    (row.scheme == Scheme::kDuda ? g.first : g.second) = &row;
  }
  for (auto& [key, g] : groups) {
    auto* duda = g.first;
    auto* duca = g.second;
    if (!duda || !duca || !duda->error.empty() || !duca->error.empty()) continue;
    const double r = 1.0 - duda->latency_mean / duca->latency_mean;
    duda->reduction = duca->reduction = r;
  }
}

void format_value(std::ostream& os, double v) {
  if (std::isnan(v)) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  os << buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

SweepTable run_values(SweepVariable var, const std::vector<double>& values,
                      const std::vector<Scheme>& schemes, RunMode mode,
                      const ConfigBundle& bundle,
                      std::map<Scheme, CampaignRun>* runs_out = nullptr) {
  std::vector<ConfigBundle> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(at_value(bundle, var, v));

  const bool analytic = mode != RunMode::kSimulate;
  const bool simulate = mode != RunMode::kAnalytic;
  const unsigned threads = bundle.trial.threads
                               ? bundle.trial.threads
                               : std::max(1u, std::thread::hardware_concurrency());

  std::vector<PointResult> links;
  if (analytic || var == SweepVariable::kRhoProduct) {
    links = analytic_links(points, var, values, threads);
  }

  // For s_u sweeps one set of trials per scheme serves every point.
  std::map<Scheme, std::pair<CampaignRun, double>> shared_runs;
  std::map<Scheme, std::string> shared_errors;
  auto simulate_point = [&](std::size_t i, Scheme scheme) -> SweepRow {
    const auto& point = points[i];
    TrialConfig trial = point.trial;
    trial.scheme = scheme;
    try {
      if (var == SweepVariable::kSu) {
        if (!shared_runs.count(scheme) && !shared_errors.count(scheme)) {
          const auto start = Clock::now();
          try {
            auto run = run_trials(trial);
            shared_runs.emplace(scheme, std::make_pair(std::move(run), elapsed_ms(start)));
          } catch (const std::exception& e) {
            shared_errors[scheme] = e.what();
          }
        }
        if (shared_errors.count(scheme)) throw std::runtime_error(shared_errors[scheme]);
        const auto& [run, ms] = shared_runs.at(scheme);
        return simulated_row(var, values[i], scheme, point, run,
                             i == 0 ? ms : 0.0, bundle.wall_time);
      }
      const auto start = Clock::now();
      CampaignRun run;
      if (var == SweepVariable::kRhoProduct) {
        run = run_bernoulli_trials(trial, *links[i].link);
      } else {
        run = run_trials(trial);
      }
      return simulated_row(var, values[i], scheme, point, run, elapsed_ms(start),
                           bundle.wall_time);
    } catch (const std::exception& e) {
      SweepRow row = base_row(var, values[i], scheme, RunMode::kSimulate);
      mark_failed(row, e.what());
      return row;
    }
  };

  SweepTable table;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (analytic) {
      for (Scheme s : schemes) {
        table.rows.push_back(analytic_row(var, values[i], s, points[i], links[i],
                                          bundle.wall_time));
      }
    }
    if (simulate) {
      for (Scheme s : schemes) table.rows.push_back(simulate_point(i, s));
    }
  }
  fill_reductions(table);
  if (runs_out) {
    for (auto& [scheme, run] : shared_runs) (*runs_out)[scheme] = std::move(run.first);
  }
  return table;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, const ConfigBundle& bundle) {
  return run_values(spec.variable, spec.values(), spec.schemes, spec.mode, bundle);
}

SweepTable run_point(const ConfigBundle& bundle, RunMode mode,
                     std::map<Scheme, CampaignRun>* runs) {
  return run_values(SweepVariable::kSu, {bundle.timing.s_u}, bundle.sweep.schemes,
                    mode, bundle, runs);
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "variable,value,scheme,mode,latency_mean,latency_ci95,rho_u,rho_d,"
        "censored_fraction,reduction,wall_time_ms,error\n";
  for (const auto& r : table.rows) {
    os << to_string(r.variable) << ',';
    format_value(os, r.value);
    os << ',' << to_string(r.scheme) << ',' << to_string(r.mode) << ',';
    format_value(os, r.latency_mean);
    os << ',';
    format_value(os, r.latency_ci95);
    os << ',';
    format_value(os, r.rho_u);
    os << ',';
    format_value(os, r.rho_d);
    os << ',';
    format_value(os, r.censored_fraction);
    os << ',';
    format_value(os, r.reduction);
    os << ',';
    format_value(os, r.wall_time_ms);
    os << ',' << quote(r.error) << '\n';
  }
}

}  // namespace duda
