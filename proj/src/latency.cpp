#include "duda/latency.hpp"

#include <cmath>
#include <stdexcept>

namespace duda {

double n_shot_success(const LinkSuccess& link, unsigned n) {
  if (n == 0) throw std::invalid_argument("n_shot_success: n must be >= 1");
  // 1 - (1-p)^n without cancellation for small p.
  return -std::expm1(static_cast<double>(n) * std::log1p(-link.product()));
}

double protocol_delay_expected(const SlotTiming& t) {
  const double frame = t.t_d + t.t_u;
  return (t.t_d * t.t_d + (2.0 * t.t_d + t.t_u) * t.s_u) / frame -
         0.5 * (t.t_d + t.s_u);
}

double protocol_delay_timeline_mean(const SlotTiming& t) {
  const double lead = t.t_d + t.s_u;
  return lead * lead / (2.0 * (t.t_d + t.t_u));
}

double protocol_delay_sample(const SlotTiming& t, double offset) {
  if (offset <= t.t_d) return t.t_d - offset;
  if (offset <= t.t_d + t.t_u - t.s_u) return 0.0;
  return 2.0 * t.t_d + t.t_u - offset;
}

double retransmission_delay(const LinkSuccess& link, double cycle) {
  const double p = link.product();
  if (!(p > 0.0)) {
    throw std::domain_error(
        "retransmission_delay: rho_u * rho_d must be positive");
  }
  return cycle * (1.0 / p - 1.0);
}

LatencyBreakdown latency_duca(const SlotTiming& timing,
                              const LinkSuccess& link) {
  LatencyBreakdown out;
  out.protocol = protocol_delay_expected(timing);
  out.retransmission = retransmission_delay(link, timing.t_d + timing.t_u);
  out.fundamental = timing.t_u + timing.s_d;
  out.total = out.protocol + out.retransmission + out.fundamental;
  return out;
}

LatencyBreakdown latency_duda(const SlotTiming& timing,
                              const LinkSuccess& link) {
  LatencyBreakdown out;
  out.retransmission = retransmission_delay(link, timing.s_u + timing.w);
  out.fundamental = timing.s_u + timing.s_d;
  out.total = out.retransmission + out.fundamental;
  return out;
}

double latency_gap(const SlotTiming& timing, const LinkSuccess& link) {
  const double p = link.product();
  if (!(p > 0.0)) {
    throw std::domain_error("latency_gap: rho_u * rho_d must be positive");
  }
  if (timing.t_d == timing.t_u && timing.w == timing.t_d) {
    return (timing.t_u - timing.s_u) / p + timing.s_u;
  }
  return latency_duca(timing, link).total - latency_duda(timing, link).total;
}

}  // namespace duda
