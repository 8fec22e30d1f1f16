#include "duda/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace duda {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Triangle {
  std::array<int, 3> v;
  Point center;
  double radius2;
};

Triangle make_triangle(const std::vector<Point>& pts, int a, int b, int c) {
  const Point& pa = pts[a];
  const Point ab = pts[b] - pa;
  const Point ac = pts[c] - pa;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = ab.squaredNorm();
  const double ac2 = ac.squaredNorm();
  const Point rel((ac.y() * ab2 - ab.y() * ac2) / d,
                  (ab.x() * ac2 - ac.x() * ab2) / d);
  return {{a, b, c}, pa + rel, rel.squaredNorm()};
}

bool collinear(const std::vector<Point>& pts) {
  const Point& p0 = pts[0];
  std::size_t far = 0;
  double best = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = (pts[i] - p0).squaredNorm();
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (best == 0.0) return true;
  const Point dir = pts[far] - p0;
  const double len = std::sqrt(best);
  for (const auto& p : pts) {
    if (std::abs(cross(dir, p - p0)) > 1e-12 * len * len) return false;
  }
  return true;
}

Adjacency complete_adjacency(std::size_t n) {
  Adjacency adj;
  adj.degenerate = true;
  adj.neighbors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) adj.neighbors[i].push_back(static_cast<int>(j));
    }
  }
  return adj;
}

// Keeps the part of `poly` where (x - mid) . normal <= 0.
Polygon clip_half_plane(const Polygon& poly, const Point& mid,
                        const Point& normal) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = poly[i];
    const Point& nxt = poly[(i + 1) % n];
    const double dc = (cur - mid).dot(normal);
    const double dn = (nxt - mid).dot(normal);
    if (dc <= 0.0) out.push_back(cur);
    if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
      out.push_back(cur + (nxt - cur) * (dc / (dc - dn)));
    }
  }
  return out;
}

}  // namespace

std::mt19937_64 RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

RngStream RngStream::substream(std::uint64_t salt) const {
  return {splitmix64(seed ^ splitmix64(salt)), stream_id};
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double unit_exponential(std::mt19937_64& rng) {
  return -std::log1p(-uniform01(rng));
}

std::vector<Point> sample_ppp(double lambda, double h, std::mt19937_64& rng) {
  if (!(lambda > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("sample_ppp: lambda and window must be positive");
  }
  std::poisson_distribution<long> count(lambda * 4.0 * h * h);
  const long n = count(rng);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = (2.0 * uniform01(rng) - 1.0) * h;
    const double y = (2.0 * uniform01(rng) - 1.0) * h;
    pts.emplace_back(x, y);
  }
  return pts;
}

Adjacency delaunay_adjacency(const std::vector<Point>& points) {
  const std::size_t n = points.size();
  if (n < 3 || collinear(points)) return complete_adjacency(n);

  Eigen::Vector2d lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point mid = 0.5 * (lo + hi);
  const double span = std::max((hi - lo).maxCoeff(), 1e-9);
  const double big = 1e4 * span;

  std::vector<Point> pts = points;
  const int s0 = static_cast<int>(n);
  pts.push_back(mid + Point(-big, -big));
  pts.push_back(mid + Point(big, -big));
  pts.push_back(mid + Point(0.0, big));

  std::vector<Triangle> tris{make_triangle(pts, s0, s0 + 1, s0 + 2)};
  std::vector<std::array<int, 2>> boundary;
  std::vector<Triangle> kept;
  for (int i = 0; i < s0; ++i) {
    const Point& p = pts[i];
    boundary.clear();
    kept.clear();
    std::vector<std::array<int, 2>> edges;
    for (const auto& t : tris) {
      if ((p - t.center).squaredNorm() < t.radius2) {
        for (int k = 0; k < 3; ++k) {
          int a = t.v[k], b = t.v[(k + 1) % 3];
          edges.push_back({std::min(a, b), std::max(a, b)});
        }
      } else {
        kept.push_back(t);
      }
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 0; k < edges.size();) {
      std::size_t m = k + 1;
      while (m < edges.size() && edges[m] == edges[k]) ++m;
      if (m - k == 1) boundary.push_back(edges[k]);
      k = m;
    }
    tris.swap(kept);
    for (const auto& e : boundary) {
      // Keep counter-clockwise orientation so the circumcenter formula holds.
      int a = e[0], b = e[1];
      if (cross(pts[b] - pts[a], p - pts[a]) < 0.0) std::swap(a, b);
      tris.push_back(make_triangle(pts, a, b, i));
    }
  }

  Adjacency adj;
  adj.neighbors.resize(n);
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      const int a = t.v[k], b = t.v[(k + 1) % 3];
      if (a >= s0 || b >= s0) continue;
      adj.neighbors[a].push_back(b);
      adj.neighbors[b].push_back(a);
    }
  }
  for (auto& nb : adj.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

Pairing pair_bs(const std::vector<Point>& points,
                const std::vector<std::vector<int>>& neighbors,
                std::mt19937_64& rng, int first, std::array<int, 2> forced) {
  const int n = static_cast<int>(points.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform01(rng) * (i + 1));
    std::swap(order[i], order[j]);
  }
  if (first >= 0 && first < n) {
    std::rotate(order.begin(),
                std::find(order.begin(), order.end(), first),
                std::find(order.begin(), order.end(), first) + 1);
  }
  std::vector<int> mate(n, -1);
  Pairing out;
  if (forced[0] >= 0 && forced[1] >= 0 && forced[0] != forced[1]) {
    mate[forced[0]] = forced[1];
    mate[forced[1]] = forced[0];
    out.pairs.push_back(forced);
  }
  for (int i : order) {
    if (mate[i] >= 0) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j : neighbors[i]) {
      if (j == i || mate[j] >= 0) continue;
      const double d = (points[j] - points[i]).squaredNorm();
      if (d < best_d || (d == best_d && j < best)) {
        best_d = d;
        best = j;
      }
    }
    if (best < 0) continue;
    mate[i] = best;
    mate[best] = i;
    out.pairs.push_back({i, best});
  }
  for (int i = 0; i < n; ++i) {
    if (mate[i] < 0) out.unpaired.push_back(i);
  }
  return out;
}

Polygon voronoi_cell(const std::vector<Point>& points, int site,
                     const std::vector<int>& neighbors, double h) {
  Polygon poly{Point(-h, -h), Point(h, -h), Point(h, h), Point(-h, h)};
  const Point& p = points[site];
  for (int j : neighbors) {
    if (j == site) continue;
    const Point normal = points[j] - p;
    poly = clip_half_plane(poly, 0.5 * (points[j] + p), normal);
    if (poly.empty()) break;
  }
  return poly;
}

double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

Point sample_in_polygon(const Polygon& poly, std::mt19937_64& rng) {
  if (poly.size() < 3) {
    throw std::invalid_argument("sample_in_polygon: polygon has no area");
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    total += 0.5 * std::abs(cross(poly[i] - poly[0], poly[i + 1] - poly[0]));
    cumulative.push_back(total);
  }
  const double pick = uniform01(rng) * total;
  std::size_t k = std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                  cumulative.begin();
  k = std::min(k, cumulative.size() - 1);
  double u = uniform01(rng);
  double v = uniform01(rng);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return poly[0] + u * (poly[k + 1] - poly[0]) + v * (poly[k + 2] - poly[0]);
}

std::vector<ActiveLink> assign_directions_and_ues(
    const std::vector<Point>& points, const Adjacency& adjacency,
    const Pairing& pairing, const std::vector<int>& skip_bs, double delta,
    double h, std::mt19937_64& rng, bool unpaired_active) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("assign_directions_and_ues: delta must be in (0, 1)");
  }
  auto skipped = [&](int i) {
    return std::find(skip_bs.begin(), skip_bs.end(), i) != skip_bs.end();
  };
  auto make_link = [&](std::vector<int> members, int pair_id) {
    std::vector<Polygon> cells;
    std::vector<double> areas;
    double total = 0.0;
    for (int m : members) {
      cells.push_back(voronoi_cell(points, m, adjacency.neighbors[m], h));
      areas.push_back(polygon_area(cells.back()));
      total += areas.back();
    }
    ActiveLink link;
    link.pair_id = pair_id;
    link.direction = uniform01(rng) < delta ? LinkDirection::kDownlink
                                            : LinkDirection::kUplink;
    std::size_t pick = 0;
    if (members.size() == 2 && uniform01(rng) * total >= areas[0]) pick = 1;
    link.ue = sample_in_polygon(cells[pick], rng);
    link.ul_bs = members[pick];
    link.dl_bs = members[members.size() == 2 ? 1 - pick : 0];
    return link;
  };

  std::vector<ActiveLink> out;
  for (std::size_t k = 0; k < pairing.pairs.size(); ++k) {
    const auto& pr = pairing.pairs[k];
    if (skipped(pr[0]) || skipped(pr[1])) continue;
    out.push_back(make_link({pr[0], pr[1]}, static_cast<int>(k)));
  }
  for (int i : pairing.unpaired) {
    if (skipped(i) || !unpaired_active) continue;
    out.push_back(make_link({i}, -1));
  }
  return out;
}

DeploymentOutcome generate_deployment(const DeploymentConfig& config,
                                      const RngStream& stream) {
  if (!(config.lambda_b > 0.0) || !(config.window_half_width > 0.0)) {
    throw std::invalid_argument("generate_deployment: invalid geometry");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("generate_deployment: delta must be in (0, 1)");
  }
  auto rng = stream.engine();
  const double h = config.window_half_width;
  DeploymentOutcome outcome;
  for (int attempt = 0; attempt <= config.max_resamples; ++attempt) {
    Deployment dep;
    dep.window_half_width = h;
    dep.typical_mode = config.typical_mode;
    dep.scheme = config.scheme;
    Point ue = Point::Zero();
    int serving = -1;

    if (config.typical_mode == TypicalMode::kUplink) {
      // BS at the origin; given the UE's nearest-BS distance r, the other
      // BSs form a PPP outside the disc of radius r around the UE.
      const double r = std::sqrt(unit_exponential(rng) /
                                 (std::numbers::pi * config.lambda_b));
      const double theta = 2.0 * std::numbers::pi * uniform01(rng);
      ue = Point(r * std::cos(theta), r * std::sin(theta));
      dep.bs_positions.push_back(Point::Zero());
      for (const auto& p : sample_ppp(config.lambda_b, h, rng)) {
        if ((p - ue).norm() > r) dep.bs_positions.push_back(p);
      }
      serving = 0;
    } else {
      dep.bs_positions = sample_ppp(config.lambda_b, h, rng);
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(dep.bs_positions.size()); ++i) {
        const double d = dep.bs_positions[i].squaredNorm();
        if (d < best) {
          best = d;
          serving = i;
        }
      }
      if (serving < 0) {
        ++outcome.resamples;
        continue;
      }
    }

    const Adjacency adj = delaunay_adjacency(dep.bs_positions);
    dep.adjacency = adj.neighbors;
    dep.degenerate = adj.degenerate;

    Pairing pairing;
    int partner = serving;
    if (config.scheme == Scheme::kDuda) {
      if (config.typical_pairing == TypicalPairing::kUeNearestTwo) {
        // The UE's second-nearest BS is always a Delaunay neighbor of its
        // nearest one.
        int second = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(dep.bs_positions.size()); ++i) {
          if (i == serving) continue;
          const double d = (dep.bs_positions[i] - ue).squaredNorm();
          if (d < best) {
            best = d;
            second = i;
          }
        }
        pairing = pair_bs(dep.bs_positions, adj.neighbors, rng, -1,
                          second >= 0 ? std::array<int, 2>{serving, second}
                                      : std::array<int, 2>{-1, -1});
      } else {
        const int first =
            config.typical_pairing == TypicalPairing::kTypicalFirst ? serving : -1;
        pairing = pair_bs(dep.bs_positions, adj.neighbors, rng, first);
      }
      partner = -1;
      for (const auto& pr : pairing.pairs) {
        if (pr[0] == serving) partner = pr[1];
        if (pr[1] == serving) partner = pr[0];
      }
      if (partner < 0) {
        ++outcome.resamples;
        continue;
      }
    } else {
      for (int i = 0; i < static_cast<int>(dep.bs_positions.size()); ++i) {
        pairing.unpaired.push_back(i);
      }
    }
    dep.pairs = pairing.pairs;
    dep.unpaired = pairing.unpaired;

    dep.typical.ul_bs = serving;
    dep.typical.dl_bs = partner;
    dep.typical.ue = ue;
    dep.typical.direction = LinkDirection::kUplink;
    for (std::size_t k = 0; k < dep.pairs.size(); ++k) {
      if (dep.pairs[k][0] == serving || dep.pairs[k][1] == serving) {
        dep.typical.pair_id = static_cast<int>(k);
      }
    }
    dep.interferers = assign_directions_and_ues(
        dep.bs_positions, adj, pairing, {serving, partner}, config.delta, h, rng,
        config.scheme == Scheme::kDuca || config.unpaired_active);
    dep.unpaired_active = config.scheme == Scheme::kDuca || config.unpaired_active;
    outcome.deployment = std::move(dep);
    return outcome;
  }
  throw std::runtime_error(
      "generate_deployment: typical BS stayed unpaired after max_resamples draws");
}

void redraw_interferers(Deployment& dep, double delta, std::mt19937_64& rng) {
  Adjacency adj{dep.adjacency, dep.degenerate};
  Pairing pairing{dep.pairs, dep.unpaired};
  dep.interferers = assign_directions_and_ues(
      dep.bs_positions, adj, pairing, {dep.typical.ul_bs, dep.typical.dl_bs},
      delta, dep.window_half_width, rng, dep.unpaired_active);
}

void write_snapshot_csv(std::ostream& os, const Deployment& dep) {
  os << "x,y,role,pair_id\n";
  char buf[128];
  auto row = [&](const Point& p, const char* role, int pair_id) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%s,%d\n", p.x(), p.y(), role,
                  pair_id);
    os << buf;
  };
  const auto& t = dep.typical;
  std::vector<bool> shown(dep.bs_positions.size(), false);
  shown[t.ul_bs] = shown[t.dl_bs] = true;
  for (const auto& link : dep.interferers) shown[link.ul_bs] = shown[link.dl_bs] = true;
  if (t.ul_bs == t.dl_bs) {
    row(dep.bs_positions[t.ul_bs], "typical_bs", t.pair_id);
  } else {
    row(dep.bs_positions[t.ul_bs], "typical_ul_bs", t.pair_id);
    row(dep.bs_positions[t.dl_bs], "typical_dl_bs", t.pair_id);
  }
  row(t.ue, "typical_ue", t.pair_id);
  for (const auto& link : dep.interferers) {
    if (link.ul_bs == link.dl_bs) {
      row(dep.bs_positions[link.ul_bs], "bs", link.pair_id);
    } else {
      row(dep.bs_positions[link.ul_bs], "ul_bs", link.pair_id);
      row(dep.bs_positions[link.dl_bs], "dl_bs", link.pair_id);
    }
    row(link.ue,
        link.direction == LinkDirection::kUplink ? "ue_ul" : "ue_dl",
        link.pair_id);
  }
  // BSs without a link of their own (silent leftovers of the matching).
  for (std::size_t i = 0; i < dep.bs_positions.size(); ++i) {
    if (!shown[i]) row(dep.bs_positions[i], "idle_bs", -1);
  }
}

}  // namespace duda
