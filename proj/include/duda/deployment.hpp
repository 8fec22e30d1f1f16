#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "duda/params.hpp"

namespace duda {

using Point = Eigen::Vector2d;
using Polygon = std::vector<Point>;

/// Identifies an independent random stream. Identical (seed, stream_id)
/// pairs reproduce identical realizations.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 engine() const;
  RngStream substream(std::uint64_t salt) const;
};

/// Uniform draw in [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& rng);
/// Unit-mean exponential draw (Rayleigh power fading).
double unit_exponential(std::mt19937_64& rng);

enum class TypicalMode {
  kUplink,    // typical UL-BS at the origin
  kDownlink,  // typical UE at the origin
};

enum class LinkDirection { kUplink, kDownlink };

/// How the typical UL-BS obtains its cooperating partner.
enum class TypicalPairing {
  kRandomOrder,   // ordinary member of the randomized matching
  kTypicalFirst,  // matching starts at the typical BS: partner is its nearest BS
  kUeNearestTwo,  // the typical UE's two nearest BSs form the typical pair
};

/// Access scheme the deployment is built for.
enum class Scheme { kDuda, kDuca };

/// One cell group (a cooperating pair, or a single BS) with its active link.
struct ActiveLink {
  int ul_bs = -1;  // nearer BS to the UE
  int dl_bs = -1;  // farther BS of the pair; equals ul_bs for a single BS
  int pair_id = -1;  // index into Deployment::pairs, -1 if unpaired
  LinkDirection direction = LinkDirection::kUplink;
  Point ue = Point::Zero();
};

struct Deployment {
  double window_half_width = 75.0;
  std::vector<Point> bs_positions;
  std::vector<std::vector<int>> adjacency;
  bool degenerate = false;
  std::vector<std::array<int, 2>> pairs;
  std::vector<int> unpaired;
  /// Interfering links, one per cell group other than the typical one.
  std::vector<ActiveLink> interferers;
  /// Serving geometry of the typical UE. For DUCA ul_bs == dl_bs.
  ActiveLink typical;
  TypicalMode typical_mode = TypicalMode::kUplink;
  Scheme scheme = Scheme::kDuda;
  bool unpaired_active = false;
};

struct DeploymentConfig {
  double lambda_b = 0.005;
  double delta = 0.5;
  double window_half_width = 75.0;
  TypicalMode typical_mode = TypicalMode::kUplink;
  Scheme scheme = Scheme::kDuda;
  TypicalPairing typical_pairing = TypicalPairing::kUeNearestTwo;
  /// Whether BSs left unmatched by the pairing carry a link of their own.
  bool unpaired_active = false;
  /// Upper bound on realizations drawn while waiting for a paired typical BS.
  int max_resamples = 1000;
};

/// PPP of density `lambda` in the square [-h, h]^2.
std::vector<Point> sample_ppp(double lambda, double window_half_width,
                              std::mt19937_64& rng);

struct Adjacency {
  std::vector<std::vector<int>> neighbors;  // sorted, symmetric
  bool degenerate = false;
};

/// Delaunay neighbor lists (Bowyer-Watson). Fewer than three points or a
/// collinear set yields complete adjacency flagged as degenerate.
Adjacency delaunay_adjacency(const std::vector<Point>& points);

struct Pairing {
  std::vector<std::array<int, 2>> pairs;
  std::vector<int> unpaired;  // ascending
};

/// Greedy randomized matching: BSs are visited in a uniformly random order
/// and each unpaired BS pairs with its nearest unpaired neighbor (ties go to
/// the lower index). A non-negative `first` is visited before the rest; a
/// `forced` pair is matched before the randomized pass.
Pairing pair_bs(const std::vector<Point>& points,
                const std::vector<std::vector<int>>& neighbors,
                std::mt19937_64& rng, int first = -1,
                std::array<int, 2> forced = {-1, -1});

/// Voronoi cell of `site` clipped to the square window. `neighbors` must
/// contain every Voronoi neighbor of the site.
Polygon voronoi_cell(const std::vector<Point>& points, int site,
                     const std::vector<int>& neighbors,
                     double window_half_width);

double polygon_area(const Polygon& poly);

/// Uniform point in a convex polygon.
Point sample_in_polygon(const Polygon& poly, std::mt19937_64& rng);

/// Assigns a direction (DL with probability delta) and a UE to every cell
/// group except the typical one. Pairs place their UE uniformly in the union
/// of both cells; the nearer member becomes the UL-BS.
std::vector<ActiveLink> assign_directions_and_ues(
    const std::vector<Point>& points, const Adjacency& adjacency,
    const Pairing& pairing, const std::vector<int>& skip_bs, double delta,
    double window_half_width, std::mt19937_64& rng,
    bool unpaired_active = true);

struct DeploymentOutcome {
  Deployment deployment;
  int resamples = 0;  // realizations rejected because the typical BS was unpaired
};

/// Full realization: PPP, typical link at the origin, adjacency, pairing (for
/// DUDA) and interfering links. Throws std::runtime_error if no realization
/// with a paired typical BS is found within max_resamples draws.
DeploymentOutcome generate_deployment(const DeploymentConfig& config,
                                      const RngStream& stream);

/// Re-draws only directions and UE positions of the interfering links.
void redraw_interferers(Deployment& deployment, double delta,
                        std::mt19937_64& rng);

/// CSV snapshot with header x,y,role,pair_id. Roles: typical_ul_bs,
/// typical_dl_bs (typical_bs for DUCA), typical_ue, ul_bs, dl_bs, bs, ue_ul,
/// ue_dl, idle_bs.
void write_snapshot_csv(std::ostream& os, const Deployment& deployment);

}  // namespace duda
