#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "duda/config.hpp"

using namespace duda;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

int line_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("an empty document gives the defaults") {
  const auto b = parse_config("");
  const SystemParams p;
  CHECK(b.params.lambda_b == p.lambda_b);
  CHECK(b.params.beta_u == doctest::Approx(p.beta_u));
  CHECK(b.params.beta_d == doctest::Approx(p.beta_d));
  CHECK(b.params.noise_power == doctest::Approx(p.noise_power).epsilon(1e-12));
  CHECK(b.timing.w == b.timing.t_d);
  CHECK(b.trial.iterations == 10000);
  CHECK(b.trial.params.noise_power == 0.0);  // noise off unless asked for
  CHECK(b.sweep.schemes.size() == 2);
  CHECK(b.trial.scheme == Scheme::kDuda);
}

TEST_CASE("dB keys are converted to linear units") {
  const auto b = parse_config("beta_u_db = 3\np_b_dbm = 30\np_m_dbm = 0\n");
  CHECK(b.params.beta_u == doctest::Approx(1.9953).epsilon(1e-4));
  CHECK(b.params.p_b == doctest::Approx(1.0));
  CHECK(b.params.p_m == doctest::Approx(1e-3));
}

TEST_CASE("comments, blank lines and spacing") {
  const auto b = parse_config("# header\n\n  delta=0.3   # trailing\n\tseed = 99\n");
  CHECK(b.params.delta == 0.3);
  CHECK(b.trial.seed == 99u);
  CHECK(b.key_lines.at("delta") == 3);
}

TEST_CASE("a non-converging path-loss exponent names the line") {
  const auto msg = error_of("delta = 0.5\nalpha = 2\n");
  CHECK(msg.find("converge") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(line_of("delta = 0.5\nalpha = 2\n") == 2);
  CHECK(line_of("beta_u_db = 3\nlambda_b = -1\n") == 2);
}

TEST_CASE("malformed documents are rejected with their line") {
  CHECK(line_of("delta = 0.5\nfoo = 1\n") == 2);
  CHECK(error_of("foo = 1").find("unknown key") != std::string::npos);
  CHECK(line_of("\n\ndelta = abc\n") == 3);
  CHECK(line_of("delta 0.5\n") == 1);
  CHECK(line_of("delta =\n") == 1);
  CHECK(line_of("iterations = 1.5\n") == 1);
  CHECK(line_of("scheme = tdd\n") == 1);
  CHECK(line_of("noise = maybe\n") == 1);
  CHECK(line_of("s_u = 1.5\n") == 1);
  CHECK(line_of("delta = 1\n") == 1);
}

TEST_CASE("w follows t_d unless given") {
  auto b = parse_config("t_d = 2\nt_u = 2\n");
  CHECK(b.timing.w == 2.0);
  b = parse_config("t_d = 2\nt_u = 2\nw = 0.5\n");
  CHECK(b.timing.w == 0.5);
}

TEST_CASE("later settings override earlier ones") {
  auto b = read_settings("seed = 3\niterations = 50\n");
  apply_setting(b, "seed", "8");
  apply_sweep_flag(b, "rho_product:0.3:1:8");
  finalize(b);
  CHECK(b.trial.seed == 8u);
  CHECK(b.trial.iterations == 50);
  CHECK(b.sweep.variable == SweepVariable::kRhoProduct);
  CHECK(b.sweep.steps == 8);
  CHECK(b.sweep.values().front() == doctest::Approx(0.3));
  CHECK(b.sweep.values().back() == doctest::Approx(1.0));
}

TEST_CASE("sweep flags and ranges") {
  ConfigBundle b;
  CHECK_THROWS_AS(apply_sweep_flag(b, "s_u:0.1:0.9"), ConfigError);
  CHECK_THROWS_AS(apply_sweep_flag(b, "gain:0:1:3"), ConfigError);
  CHECK(line_of("sweep = s_u:0.1:1.5:5\n") == 1);
  CHECK(line_of("sweep = rho_product:0.5:1.2:5\n") == 1);
  CHECK(line_of("sweep = delta:0.1:0.9:1\n") == 1);
  const auto ok = parse_config("sweep = beta_u_db:-10:10:5\n");
  const std::vector<double> expect{-10, -5, 0, 5, 10};
  const auto got = ok.sweep.values();
  REQUIRE(got.size() == expect.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]));
}

TEST_CASE("enumerated settings") {
  const auto b = parse_config(
      "scheme = duca\nmode = both\nredraw = fading\ntypical_pairing = random\n"
      "unpaired_active = on\nnoise = on\nwindow_side = 200\nthreads = 2\n");
  CHECK(b.sweep.schemes == std::vector<Scheme>{Scheme::kDuca});
  CHECK(b.trial.scheme == Scheme::kDuca);
  CHECK(b.sweep.mode == RunMode::kBoth);
  CHECK(b.trial.redraw == RedrawPolicy::kFading);
  CHECK(b.trial.typical_pairing == TypicalPairing::kRandomOrder);
  CHECK(b.trial.unpaired_active);
  CHECK(b.trial.params.noise_power > 0.0);
  CHECK(b.trial.window_half_width == 100.0);
  CHECK(b.trial.threads == 2u);
}

TEST_CASE("every listed key is accepted") {
  std::set<std::string> keys(config_keys().begin(), config_keys().end());
  CHECK(keys.size() == config_keys().size());
  ConfigBundle b;
  for (const auto& k : keys) {
    if (k == "scheme" || k == "mode" || k == "redraw" || k == "typical_pairing" ||
        k == "noise" || k == "unpaired_active" || k == "sweep" || k == "sweep_variable") {
      continue;
    }
    CHECK_NOTHROW(apply_setting(b, k, "1"));
  }
}

TEST_CASE("config files load from disk") {
  const auto path = std::filesystem::temp_directory_path() / "duda_config_test.cfg";
  {
    std::ofstream out(path);
    out << "delta = 0.25\n";
  }
  auto b = load_settings(path);
  finalize(b);
  CHECK(b.params.delta == 0.25);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_settings(path), ConfigError);
}
