#pragma once

#include "duda/params.hpp"

namespace duda {

/// Expected two-way latency split into its three delay sources, in slots.
struct LatencyBreakdown {
  double protocol = 0.0;
  double retransmission = 0.0;
  double fundamental = 0.0;
  double total = 0.0;
};

/// Probability that at least one of `n` data+ACK attempts succeeds.
/// Throws std::invalid_argument for n == 0.
double n_shot_success(const LinkSuccess& link, unsigned n);

/// Expected wait for the UL slot in the coupled scheme, in the closed form
/// used by the coupled-latency expression (the arrival offset enters through
/// its mean). See protocol_delay_timeline_mean for the exact slot-timeline
/// expectation; the two differ by (T_d-S_u)(T_u-S_u) / (2(T_d+T_u)).
double protocol_delay_expected(const SlotTiming& timing);

/// Exact mean of protocol_delay_sample over a uniform arrival offset:
/// (T_d + S_u)^2 / (2 (T_d + T_u)).
double protocol_delay_timeline_mean(const SlotTiming& timing);

/// Wait for the transmission to start when a packet arrives `offset` slots
/// after the start of a DL slot. The frame is [DL T_d][UL T_u]; a packet that
/// cannot finish inside the current UL slot waits for the next one.
double protocol_delay_sample(const SlotTiming& timing, double offset);

/// cycle * (1 / (rho_u rho_d) - 1). Throws std::domain_error when the
/// success product is zero.
double retransmission_delay(const LinkSuccess& link, double cycle);

LatencyBreakdown latency_duca(const SlotTiming& timing, const LinkSuccess& link);

/// Decoupled scheme: no protocol delay, retransmission cycle S_u + W.
LatencyBreakdown latency_duda(const SlotTiming& timing, const LinkSuccess& link);

/// Closed-form DUCA - DUDA gap, (T_u - S_u) / (rho_u rho_d) + S_u. Valid when
/// t_d == t_u and w == t_d; otherwise the difference of the two totals is
/// returned.
double latency_gap(const SlotTiming& timing, const LinkSuccess& link);

}  // namespace duda
