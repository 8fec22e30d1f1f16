#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "duda/validation.hpp"

using namespace duda;

namespace {

const CheckResult& find(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return r.checks.front();
}

}  // namespace

TEST_CASE("deterministic checks pass") {
  const SystemParams p;
  CHECK(check_quadrature_arctan(p, 300, 1).status == CheckStatus::kPass);
  CHECK(check_quadrature_full_plane(p, 50, 1).status == CheckStatus::kPass);
  const auto gap = check_latency_gap(2000, 1);
  CHECK(gap.status == CheckStatus::kPass);
  CHECK(gap.measured <= 1e-12);
}

TEST_CASE("the arctan check only applies to alpha = 4") {
  SystemParams p;
  p.alpha = 3.5;
  CHECK(check_quadrature_arctan(p, 10, 1).status == CheckStatus::kSkip);
  CHECK(check_quadrature_full_plane(p, 50, 1).status == CheckStatus::kPass);
}

TEST_CASE("spatial checks pass for several seeds") {
  const SystemParams p;
  int failures = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    failures += check_ppp_counts(p, 75.0, 3000, 0.01, seed).status == CheckStatus::kFail;
    failures += check_nearest_distance(p, 75.0, 3000, 0.01, seed).status == CheckStatus::kFail;
    failures +=
        check_second_nearest_distance(p, 75.0, 3000, 0.01, seed).status == CheckStatus::kFail;
  }
  // Nine tests at the 1% level: more than one failure is very unlikely.
  CHECK(failures <= 1);
}

TEST_CASE("full validation at a small budget") {
  auto b = parse_config("iterations = 300\nseed = 3\nalpha = 3.5\n");
  ValidationOptions opts;
  opts.quadrature_samples = 50;
  opts.latency_grid_points = 500;
  opts.spatial_samples = 2000;
  const auto report = run_validation(b, opts);
  CHECK(find(report, "quadrature_alpha4_closed_form").status == CheckStatus::kSkip);
  CHECK(find(report, "latency_gap_identity").status == CheckStatus::kPass);
  CHECK(find(report, "sweep_duda_below_duca").status == CheckStatus::kPass);
  std::ostringstream os;
  write_validation_csv(os, report);
  CHECK(os.str().rfind("check,status,measured,tolerance,detail\n", 0) == 0);
}
