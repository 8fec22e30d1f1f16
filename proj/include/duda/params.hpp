#pragma once

#include <string>
#include <vector>

namespace duda {

/// Physical-layer and geometry constants of the network. All powers are
/// linear (watts) and all thresholds are linear SINR ratios; dB values are
/// converted at the IO boundary.
struct SystemParams {
  double lambda_b = 0.005;      // BS density, BS per m^2
  double delta = 0.5;           // fraction of links active in DL
  double alpha = 4.0;           // path-loss exponent
  double beta_u = 1.0;          // UL SINR threshold (0 dB)
  double beta_d = 0.31622776601683794;  // DL SINR threshold (-5 dB)
  double p_b = 10.0;            // BS transmit power (40 dBm)
  double p_m = 0.1;             // UE transmit power (20 dBm)
  double noise_power = 3.981071705534973e-21;  // -174 dBm over 1 Hz
  double bandwidth = 1.0;       // Hz; unrelated to the ACK wait time below
};

/// TDD frame quantities, all measured in slots.
struct SlotTiming {
  double t_d = 1.0;  // DL slot duration
  double t_u = 1.0;  // UL slot duration
  double s_u = 0.5;  // UL data size
  double s_d = 0.5;  // DL ACK size
  double w = 1.0;    // ACK wait time used by the decoupled scheme
};

/// Per-attempt success probabilities of the UL data and DL ACK.
struct LinkSuccess {
  double rho_u = 1.0;
  double rho_d = 1.0;

  double product() const { return rho_u * rho_d; }
};

struct Violation {
  std::string field;
  std::string message;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

std::vector<Violation> validate(const SystemParams& params);
std::vector<Violation> validate(const SlotTiming& timing);
std::vector<Violation> validate(const LinkSuccess& link);
/// Every violated invariant of both bundles; empty means ok.
std::vector<Violation> validate(const SystemParams& params,
                                const SlotTiming& timing);

}  // namespace duda
