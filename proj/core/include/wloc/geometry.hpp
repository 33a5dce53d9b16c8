#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wloc {

/// The three concrete index spaces supported by the toolkit.
enum class Space { Euclidean2D, AffineGroup, BergmanDisc };

std::string space_name(Space s);

/// A point of one of the index spaces.
///
/// Coordinate meaning per space:
///   Euclidean2D: (x, xi), the time-frequency plane
///   AffineGroup: (a, b) with a > 0, scale-translation coordinates
///   BergmanDisc: (re z, im z) with |z| < 1
struct Point {
  Space space = Space::Euclidean2D;
  double c0 = 0.0;
  double c1 = 0.0;
};

bool point_is_valid(const Point& p);
void require_valid(const Point& p);

/// Metric measure space (distance + measure density + basepoint) for one
/// of the three settings.  All members are closed-form.
class MetricMeasureSpace {
 public:
  static MetricMeasureSpace euclidean2d();
  static MetricMeasureSpace affine_group();
  static MetricMeasureSpace bergman_disc();

  Space tag() const { return tag_; }
  const Point& basepoint() const { return basepoint_; }

  /// Closed-form distance.  Throws on mismatched space tags or invalid
  /// coordinates.
  double distance(const Point& x, const Point& y) const;

  /// Density of the reference measure against coordinate Lebesgue measure.
  double measure_density(const Point& x) const;

  /// Group product y * x for the group-structured spaces (Euclidean2D as
  /// the additive plane group, AffineGroup as the ax+b group).  Throws for
  /// BergmanDisc.
  Point group_product(const Point& y, const Point& x) const;

 private:
  explicit MetricMeasureSpace(Space tag, Point basepoint)
      : tag_(tag), basepoint_(basepoint) {}
  Space tag_;
  Point basepoint_;
};

/// Finite node set with quadrature weights truncated to a metric ball
/// around the basepoint.
struct SampledDomain {
  MetricMeasureSpace space;
  std::vector<Point> nodes;
  std::vector<double> weights;
  double truncation_radius = 0.0;
  double resolution = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }
  double distance(int i, int j) const {
    return space.distance(nodes[i], nodes[j]);
  }
  /// Distance of node i to the basepoint.
  double radius_of(int i) const {
    return space.distance(nodes[i], space.basepoint());
  }
};

/// Structured quadrature grid on the ball of radius `truncation_radius`.
///
/// Euclidean2D: uniform lattice of spacing `resolution`, weight h^2.
/// AffineGroup: uniform lattice in (log a, b/a), weight h^2 (the Haar
///   measure da db / a^2 is Lebesgue in these coordinates).
/// BergmanDisc: polar shells uniform in hyperbolic radial distance, with
///   per-shell angle counts keeping cells roughly metrically square.
SampledDomain sample_grid(const MetricMeasureSpace& space, double resolution,
                          double truncation_radius);

/// Disjoint partition {F_j} of node indices together with the r-expansions
/// G_j = { x : d(x, F_j) <= r } and the observed overlap/diameter constants.
struct Cover {
  double r = 0.0;
  std::vector<std::vector<int>> cells;       // F_j, pairwise disjoint
  std::vector<std::vector<int>> expansions;  // G_j
  int overlap_N = 0;                         // max #G_j containing a node
  double diameter_K = 0.0;                   // max_j diam(F_j) / r
  bool resolution_warning = false;           // r below the grid resolution
};

Cover build_cover(const SampledDomain& domain, double r);

struct CoverReport {
  int max_overlap = 0;
  double max_cell_diameter = 0.0;
  bool is_partition = false;
};

/// Recomputes the cover constants from scratch.
CoverReport verify_cover(const Cover& cover, const SampledDomain& domain);

/// Discrete surrogate for sup_x lambda(D(x, r)): max over nodes of the
/// quadrature mass of the ball of radius r.
double ball_measure_sup(const SampledDomain& domain, double r);

/// Full pairwise distance matrix (symmetric, zero diagonal).
Eigen::MatrixXd distance_matrix(const SampledDomain& domain);

/// Closed-form measure of the ball of radius r around the basepoint.
/// Euclidean2D: pi r^2; AffineGroup: 2 pi (cosh r - 1); BergmanDisc: sinh^2 r.
double ball_measure_exact(Space space, double r);

}  // namespace wloc
