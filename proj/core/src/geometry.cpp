#include "wloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_space(const Point& x, const Point& y) {
  if (x.space != y.space) {
    throw std::invalid_argument("points belong to different spaces");
  }
}

}  // namespace

std::string space_name(Space s) {
  switch (s) {
    case Space::Euclidean2D: return "euclidean2d";
    case Space::AffineGroup: return "affine";
    case Space::BergmanDisc: return "bergman";
  }
  return "unknown";
}

bool point_is_valid(const Point& p) {
  if (!std::isfinite(p.c0) || !std::isfinite(p.c1)) return false;
  switch (p.space) {
    case Space::Euclidean2D: return true;
    case Space::AffineGroup: return p.c0 > 0.0;
    case Space::BergmanDisc: return p.c0 * p.c0 + p.c1 * p.c1 < 1.0;
  }
  return false;
}

void require_valid(const Point& p) {
  if (!point_is_valid(p)) {
    throw std::domain_error("point outside the valid coordinate domain of " +
                            space_name(p.space));
  }
}

MetricMeasureSpace MetricMeasureSpace::euclidean2d() {
  return MetricMeasureSpace(Space::Euclidean2D, Point{Space::Euclidean2D, 0, 0});
}

MetricMeasureSpace MetricMeasureSpace::affine_group() {
  return MetricMeasureSpace(Space::AffineGroup, Point{Space::AffineGroup, 1, 0});
}

MetricMeasureSpace MetricMeasureSpace::bergman_disc() {
  return MetricMeasureSpace(Space::BergmanDisc, Point{Space::BergmanDisc, 0, 0});
}

double MetricMeasureSpace::distance(const Point& x, const Point& y) const {
  require_same_space(x, y);
  if (x.space != tag_) throw std::invalid_argument("point space mismatch");
  require_valid(x);
  require_valid(y);
  switch (tag_) {
    case Space::Euclidean2D:
      return std::hypot(x.c0 - y.c0, x.c1 - y.c1);
    case Space::AffineGroup: {
      const double da = x.c0 - y.c0;
      const double db = x.c1 - y.c1;
      const double arg = 1.0 + (da * da + db * db) / (2.0 * x.c0 * y.c0);
      return std::acosh(std::max(arg, 1.0));
    }
    case Space::BergmanDisc: {
      const std::complex<double> z(x.c0, x.c1), w(y.c0, y.c1);
      const double num = std::abs(z - w);
      const double den = std::abs(1.0 - std::conj(z) * w);
      const double rho = num / den;
      // atanh(rho) = 1/2 log((1+rho)/(1-rho))
      return std::atanh(std::min(rho, 1.0 - 1e-16));
    }
  }
  throw std::logic_error("unreachable");
}

double MetricMeasureSpace::measure_density(const Point& x) const {
  if (x.space != tag_) throw std::invalid_argument("point space mismatch");
  require_valid(x);
  switch (tag_) {
    case Space::Euclidean2D:
      return 1.0;
    case Space::AffineGroup:
      return 1.0 / (x.c0 * x.c0);
    case Space::BergmanDisc: {
      const double one_minus = 1.0 - (x.c0 * x.c0 + x.c1 * x.c1);
      return 1.0 / (kPi * one_minus * one_minus);
    }
  }
  throw std::logic_error("unreachable");
}

Point MetricMeasureSpace::group_product(const Point& y, const Point& x) const {
  require_same_space(x, y);
  require_valid(x);
  require_valid(y);
  switch (tag_) {
    case Space::Euclidean2D:
      return Point{tag_, y.c0 + x.c0, y.c1 + x.c1};
    case Space::AffineGroup:
      // (a1, b1) * (a2, b2) = (a1 a2, a1 b2 + b1)
      return Point{tag_, y.c0 * x.c0, y.c0 * x.c1 + y.c1};
    case Space::BergmanDisc:
      throw std::invalid_argument("BergmanDisc carries no group structure here");
  }
  throw std::logic_error("unreachable");
}

SampledDomain sample_grid(const MetricMeasureSpace& space, double resolution,
                          double truncation_radius) {
  if (resolution <= 0.0 || truncation_radius <= 0.0) {
    throw std::invalid_argument("resolution and truncation_radius must be positive");
  }
  SampledDomain dom{space, {}, {}, truncation_radius, resolution};
  const double h = resolution;
  const double R = truncation_radius;
  const Point base = space.basepoint();

  switch (space.tag()) {
    case Space::Euclidean2D: {
      const int kmax = static_cast<int>(std::floor(R / h));
      for (int i = -kmax; i <= kmax; ++i) {
        for (int j = -kmax; j <= kmax; ++j) {
          Point p{Space::Euclidean2D, i * h, j * h};
          if (space.distance(p, base) <= R + 1e-12) {
            dom.nodes.push_back(p);
            dom.weights.push_back(h * h);
          }
        }
      }
      break;
    }
    case Space::AffineGroup: {
      // Lattice in (u, v) = (log a, b / a); Haar measure is du dv, so every
      // node gets weight h^2.
      const int umax = static_cast<int>(std::floor(R / h));
      for (int i = -umax; i <= umax; ++i) {
        const double a = std::exp(i * h);
        // Ball of radius R about (1, 0) is the Euclidean disc centred at
        // (b, a) = (0, cosh R) with radius sinh R.
        const double slack = std::sinh(R) * std::sinh(R) -
                             (a - std::cosh(R)) * (a - std::cosh(R));
        if (slack < 0.0) continue;
        const double bmax = std::sqrt(slack);
        const int vmax = static_cast<int>(std::floor(bmax / (a * h))) + 1;
        for (int j = -vmax; j <= vmax; ++j) {
          Point p{Space::AffineGroup, a, j * h * a};
          if (space.distance(p, base) <= R + 1e-12) {
            dom.nodes.push_back(p);
            dom.weights.push_back(h * h);
          }
        }
      }
      break;
    }
    case Space::BergmanDisc: {
      // Polar shells uniform in hyperbolic radial distance s; angle counts
      // sized so that cells are roughly h-square in the metric.
      const int shells = static_cast<int>(std::floor(R / h));
      for (int k = 0; k < shells; ++k) {
        const double s = (k + 0.5) * h;
        const double s_hi = (k + 1.0) * h;
        const int m = std::max(1, static_cast<int>(std::ceil(kPi * std::sinh(2.0 * s_hi) / h)));
        const double r = std::tanh(s);
        const double w = std::sinh(2.0 * s) * h / m;
        for (int j = 0; j < m; ++j) {
          const double theta = 2.0 * kPi * (j + 0.5) / m;
          Point p{Space::BergmanDisc, r * std::cos(theta), r * std::sin(theta)};
          dom.nodes.push_back(p);
          dom.weights.push_back(w);
        }
      }
      break;
    }
  }
  if (dom.nodes.empty()) {
    throw std::runtime_error("degenerate grid: zero nodes");
  }
  return dom;
}

namespace {

// Cell key for the grid-block partition, per space.
struct CellKey {
  long long k0;
  long long k1;
  bool operator<(const CellKey& o) const {
    return k0 != o.k0 ? k0 < o.k0 : k1 < o.k1;
  }
};

CellKey cell_key(const SampledDomain& domain, const Point& p, double r) {
  switch (domain.space.tag()) {
    case Space::Euclidean2D:
      return {static_cast<long long>(std::floor(p.c0 / r)),
              static_cast<long long>(std::floor(p.c1 / r))};
    case Space::AffineGroup: {
      // Bands in u = log a of height r; within a band, b-blocks of width
      // r * (band minimum of a), which keeps the metric diameter bounded.
      const double u = std::log(p.c0);
      const long long band = static_cast<long long>(std::floor(u / r));
      const double a_min = std::exp(static_cast<double>(band) * r);
      return {band, static_cast<long long>(std::floor(p.c1 / (r * a_min)))};
    }
    case Space::BergmanDisc: {
      const double rho = std::hypot(p.c0, p.c1);
      const double s = std::atanh(std::min(rho, 1.0 - 1e-16));
      const long long band = static_cast<long long>(std::floor(s / r));
      const double s_hi = (static_cast<double>(band) + 1.0) * r;
      const int m = std::max(1, static_cast<int>(std::ceil(kPi * std::sinh(2.0 * s_hi) / r)));
      double theta = std::atan2(p.c1, p.c0);
      if (theta < 0) theta += 2.0 * kPi;
      long long sector = static_cast<long long>(std::floor(theta / (2.0 * kPi / m)));
      sector = std::min<long long>(sector, m - 1);
      return {band, sector};
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Cover build_cover(const SampledDomain& domain, double r) {
  if (r <= 0.0) throw std::invalid_argument("cover radius must be positive");
  if (domain.nodes.empty()) throw std::invalid_argument("empty domain");

  Cover cover;
  cover.r = r;
  cover.resolution_warning = r < domain.resolution;

  if (r >= 2.0 * domain.truncation_radius) {
    // Everything fits in one cell of diameter <= 2 * truncation <= r.
    cover.cells.emplace_back(domain.size());
    std::iota(cover.cells[0].begin(), cover.cells[0].end(), 0);
    cover.expansions = cover.cells;
    cover.overlap_N = 1;
    double max_diam = 0.0;
    for (int a = 0; a < domain.size(); ++a) {
      for (int b = a + 1; b < domain.size(); ++b) {
        max_diam = std::max(max_diam, domain.distance(a, b));
      }
    }
    cover.diameter_K = max_diam / r;
    return cover;
  }

  std::map<CellKey, std::vector<int>> blocks;
  for (int i = 0; i < domain.size(); ++i) {
    blocks[cell_key(domain, domain.nodes[i], r)].push_back(i);
  }
  for (auto& [key, idx] : blocks) cover.cells.push_back(std::move(idx));

  const Eigen::MatrixXd dist = distance_matrix(domain);

  cover.expansions.resize(cover.cells.size());
  std::vector<int> membership(domain.size(), 0);
  for (std::size_t j = 0; j < cover.cells.size(); ++j) {
    for (int i = 0; i < domain.size(); ++i) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int c : cover.cells[j]) dmin = std::min(dmin, dist(i, c));
      if (dmin <= r + 1e-12) {
        cover.expansions[j].push_back(i);
        ++membership[i];
      }
    }
  }
  cover.overlap_N = *std::max_element(membership.begin(), membership.end());

  double max_diam = 0.0;
  for (const auto& cell : cover.cells) {
    for (std::size_t a = 0; a < cell.size(); ++a) {
      for (std::size_t b = a + 1; b < cell.size(); ++b) {
        max_diam = std::max(max_diam, dist(cell[a], cell[b]));
      }
    }
  }
  cover.diameter_K = max_diam / r;
  return cover;
}

CoverReport verify_cover(const Cover& cover, const SampledDomain& domain) {
  CoverReport rep;
  const int n = domain.size();
  std::vector<int> seen(n, 0);
  for (const auto& cell : cover.cells) {
    for (int i : cell) {
      if (i < 0 || i >= n) return rep;  // is_partition stays false
      ++seen[i];
    }
  }
  rep.is_partition =
      std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });

  const Eigen::MatrixXd dist = distance_matrix(domain);
  std::vector<int> membership(n, 0);
  for (const auto& cell : cover.cells) {
    double diam = 0.0;
    for (std::size_t a = 0; a < cell.size(); ++a) {
      for (std::size_t b = a + 1; b < cell.size(); ++b) {
        diam = std::max(diam, dist(cell[a], cell[b]));
      }
    }
    rep.max_cell_diameter = std::max(rep.max_cell_diameter, diam);
    for (int i = 0; i < n; ++i) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int c : cell) dmin = std::min(dmin, dist(i, c));
      if (dmin <= cover.r + 1e-12) ++membership[i];
    }
  }
  rep.max_overlap = *std::max_element(membership.begin(), membership.end());
  return rep;
}

double ball_measure_sup(const SampledDomain& domain, double r) {
  if (r <= 0.0) throw std::invalid_argument("radius must be positive");
  const int n = domain.size();
  const Eigen::MatrixXd dist = distance_matrix(domain);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      if (dist(i, j) <= r) mass += domain.weights[j];
    }
    best = std::max(best, mass);
  }
  return best;
}

Eigen::MatrixXd distance_matrix(const SampledDomain& domain) {
  const int n = domain.size();
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = domain.distance(i, j);
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

double ball_measure_exact(Space space, double r) {
  switch (space) {
    case Space::Euclidean2D: return kPi * r * r;
    case Space::AffineGroup: return 2.0 * kPi * (std::cosh(r) - 1.0);
    case Space::BergmanDisc: return std::sinh(r) * std::sinh(r);
  }
  throw std::logic_error("unreachable");
}

}  // namespace wloc
