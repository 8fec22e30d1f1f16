#include "duda/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace duda {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    // Endpoints are exact; interior points interpolate from both ends.
    const double t = static_cast<double>(i) / (steps - 1);
    out.push_back(i == steps - 1 ? stop : start + (stop - start) * t);
  }
  return out;
}

const char* to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kSu: return "s_u";
    case SweepVariable::kRhoProduct: return "rho_product";
    case SweepVariable::kDelta: return "delta";
    case SweepVariable::kLambdaB: return "lambda_b";
    case SweepVariable::kBetaUDb: return "beta_u_db";
    case SweepVariable::kBetaDDb: return "beta_d_db";
  }
  return "?";
}

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kAnalytic: return "analytic";
    case RunMode::kSimulate: return "simulate";
    case RunMode::kBoth: return "both";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view value, int line) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(line, "malformed number for " + std::string(key) + ": '" +
                                std::string(value) + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value, int line) {
  Int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(line, "malformed integer for " + std::string(key) + ": '" +
                                std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value, int line) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(line, "malformed switch for " + std::string(key) + ": '" +
                              std::string(value) + "' (use on/off)");
}

std::vector<Scheme> parse_schemes(std::string_view value, int line) {
  if (value == "duda" || value == "DUDA") return {Scheme::kDuda};
  if (value == "duca" || value == "DUCA") return {Scheme::kDuca};
  if (value == "both") return {Scheme::kDuda, Scheme::kDuca};
  throw ConfigError(line, "scheme must be duda, duca or both, got '" +
                              std::string(value) + "'");
}

RunMode parse_mode(std::string_view value, int line) {
  if (value == "analytic") return RunMode::kAnalytic;
  if (value == "simulate") return RunMode::kSimulate;
  if (value == "both") return RunMode::kBoth;
  throw ConfigError(line, "mode must be analytic, simulate or both, got '" +
                              std::string(value) + "'");
}

SweepVariable parse_variable(std::string_view value, int line) {
  for (auto v : {SweepVariable::kSu, SweepVariable::kRhoProduct,
                 SweepVariable::kDelta, SweepVariable::kLambdaB,
                 SweepVariable::kBetaUDb, SweepVariable::kBetaDDb}) {
    if (value == to_string(v)) return v;
  }
  throw ConfigError(line, "unknown sweep variable '" + std::string(value) + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "lambda_b",     "delta",       "alpha",         "beta_u_db",
      "beta_d_db",    "p_b_dbm",     "p_m_dbm",       "noise_dbm",
      "bandwidth_hz", "t_d",         "t_u",           "s_u",
      "s_d",          "w",           "iterations",    "max_attempts",
      "seed",         "window_side", "scheme",        "mode",
      "redraw",       "typical_pairing", "unpaired_active", "threads",
      "noise",        "sweep",       "sweep_variable", "sweep_start",
      "sweep_stop",   "sweep_steps"};
  return keys;
}

void apply_setting(ConfigBundle& b, std::string_view key, std::string_view value,
                   int line) {
  auto num = [&] { return parse_double(key, value, line); };
  auto& p = b.params;
  auto& t = b.timing;
  if (key == "lambda_b") p.lambda_b = num();
  else if (key == "delta") p.delta = num();
  else if (key == "alpha") p.alpha = num();
  else if (key == "beta_u_db") p.beta_u = db_to_linear(num());
  else if (key == "beta_d_db") p.beta_d = db_to_linear(num());
  else if (key == "p_b_dbm") p.p_b = dbm_to_watts(num());
  else if (key == "p_m_dbm") p.p_m = dbm_to_watts(num());
  // Noise spectral density in dBm/Hz; scaled by the bandwidth in finalize().
  else if (key == "noise_dbm") b.noise_dbm_per_hz = num();
  else if (key == "bandwidth_hz") p.bandwidth = num();
  else if (key == "t_d") t.t_d = num();
  else if (key == "t_u") t.t_u = num();
  else if (key == "s_u") t.s_u = num();
  else if (key == "s_d") t.s_d = num();
  else if (key == "w") { t.w = num(); b.w_explicit = true; }
  else if (key == "iterations") b.trial.iterations = parse_int<int>(key, value, line);
  else if (key == "max_attempts") b.trial.max_attempts = parse_int<int>(key, value, line);
  else if (key == "seed") b.trial.seed = parse_int<std::uint64_t>(key, value, line);
  else if (key == "window_side") b.trial.window_half_width = 0.5 * num();
  else if (key == "scheme") b.sweep.schemes = parse_schemes(value, line);
  else if (key == "mode") b.sweep.mode = parse_mode(value, line);
  else if (key == "redraw") {
    if (value == "fading") b.trial.redraw = RedrawPolicy::kFading;
    else if (value == "interferers") b.trial.redraw = RedrawPolicy::kInterferers;
    else if (value == "deployment") b.trial.redraw = RedrawPolicy::kDeployment;
    else throw ConfigError(line, "redraw must be fading, interferers or deployment");
  } else if (key == "typical_pairing") {
    if (value == "random") b.trial.typical_pairing = TypicalPairing::kRandomOrder;
    else if (value == "typical_first") b.trial.typical_pairing = TypicalPairing::kTypicalFirst;
    else if (value == "ue_nearest_two") b.trial.typical_pairing = TypicalPairing::kUeNearestTwo;
    else throw ConfigError(line, "typical_pairing must be random, typical_first or ue_nearest_two");
  } else if (key == "unpaired_active") b.trial.unpaired_active = parse_bool(key, value, line);
  else if (key == "threads") b.trial.threads = parse_int<unsigned>(key, value, line);
  else if (key == "noise") b.noise = parse_bool(key, value, line);
  else if (key == "sweep") apply_sweep_flag(b, value);
  else if (key == "sweep_variable") b.sweep.variable = parse_variable(value, line);
  else if (key == "sweep_start") b.sweep.start = num();
  else if (key == "sweep_stop") b.sweep.stop = num();
  else if (key == "sweep_steps") b.sweep.steps = parse_int<int>(key, value, line);
  else throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  if (line > 0) b.key_lines[std::string(key)] = line;
}

void apply_sweep_flag(ConfigBundle& b, std::string_view flag) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = flag.find(':', pos);
    parts.push_back(trim(flag.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (parts.size() != 4) {
    throw ConfigError(0, "sweep must look like VAR:START:STOP:STEPS, got '" +
                             std::string(flag) + "'");
  }
  b.sweep.variable = parse_variable(parts[0], 0);
  b.sweep.start = parse_double("sweep start", parts[1], 0);
  b.sweep.stop = parse_double("sweep stop", parts[2], 0);
  b.sweep.steps = parse_int<int>("sweep steps", parts[3], 0);
}

namespace {

// Config key that sets a validated field, where the names differ.
std::string_view key_for_field(std::string_view field) {
  if (field == "beta_u") return "beta_u_db";
  if (field == "beta_d") return "beta_d_db";
  if (field == "p_b") return "p_b_dbm";
  if (field == "p_m") return "p_m_dbm";
  if (field == "noise_power") return "noise_dbm";
  if (field == "bandwidth") return "bandwidth_hz";
  return field;
}

}  // namespace

void finalize(ConfigBundle& b) {
  if (!b.w_explicit) b.timing.w = b.timing.t_d;
  b.params.noise_power = dbm_to_watts(b.noise_dbm_per_hz) * b.params.bandwidth;

  std::vector<Violation> problems = validate(b.params, b.timing);
  if (b.trial.iterations < 1) problems.push_back({"iterations", "iterations must be >= 1"});
  if (b.trial.max_attempts < 1) problems.push_back({"max_attempts", "max_attempts must be >= 1"});
  if (!(b.trial.window_half_width > 0.0)) {
    problems.push_back({"window_side", "window_side must be positive"});
  }
  const auto& s = b.sweep;
  if (!(s.start < s.stop)) problems.push_back({"sweep", "sweep start must be below stop"});
  if (s.steps < 2) problems.push_back({"sweep", "sweep needs at least 2 steps"});
  if (s.schemes.empty()) problems.push_back({"scheme", "no scheme selected"});
  const double lo = s.start, hi = s.stop;
  switch (s.variable) {
    case SweepVariable::kSu:
      if (!(lo > 0.0 && hi <= b.timing.t_u && hi <= b.timing.t_d)) {
        problems.push_back({"sweep", "s_u sweep must stay within (0, t_u] and (0, t_d]"});
      }
      break;
    case SweepVariable::kRhoProduct:
      if (!(lo > 0.0 && hi <= 1.0)) {
        problems.push_back({"sweep", "rho_product sweep must stay within (0, 1]"});
      }
      break;
    case SweepVariable::kDelta:
      if (!(lo > 0.0 && hi < 1.0)) {
        problems.push_back({"sweep", "delta sweep must stay within (0, 1)"});
      }
      break;
    case SweepVariable::kLambdaB:
      if (!(lo > 0.0)) problems.push_back({"sweep", "lambda_b sweep must be positive"});
      break;
    case SweepVariable::kBetaUDb:
    case SweepVariable::kBetaDDb:
      break;
  }
  if (!problems.empty()) {
    const auto& first = problems.front();
    const auto it = b.key_lines.find(key_for_field(first.field));
    std::string msg;
    for (const auto& v : problems) msg += (msg.empty() ? "" : "; ") + v.message;
    throw ConfigError(it == b.key_lines.end() ? 0 : it->second, msg);
  }

  b.trial.params = b.params;
  b.trial.timing = b.timing;
  if (!b.noise) b.trial.params.noise_power = 0.0;
  b.trial.scheme = s.schemes.front();
}

ConfigBundle parse_config(std::string_view text) {
  ConfigBundle bundle = read_settings(text);
  finalize(bundle);
  return bundle;
}

ConfigBundle read_settings(std::string_view text) {
  ConfigBundle bundle;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected key = value, got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (value.empty()) {
      throw ConfigError(line_no, "missing value for " + std::string(key));
    }
    try {
      apply_setting(bundle, key, value, line_no);
    } catch (const ConfigError& e) {
      if (e.line() > 0) throw;
      throw ConfigError(line_no, e.what());
    }
  }
  return bundle;
}

ConfigBundle load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_settings(ss.str());
}

}  // namespace duda
