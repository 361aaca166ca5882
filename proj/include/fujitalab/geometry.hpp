#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fujitalab {

enum class ManifoldKind { Euclidean, Sphere, Hyperbolic, Circle, Cylinder };

std::string to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& s);

/// A point in the normal-coordinate chart at the canonical base point z0.
/// For Cylinder the first dim-sphere_factor_dim coordinates are the flat
/// factor, the rest are normal coordinates on the sphere factor.
struct Point {
  std::vector<double> x;
  int chart = 0;

  Point() = default;
  explicit Point(std::vector<double> coords, int chart_id = 0)
      : x(std::move(coords)), chart(chart_id) {}
};

struct ThresholdRadii {
  double rho_T;
  double rho_inf;
};

/// One of the closed-form model spaces of the problem class: constant
/// curvature (Euclidean, Sphere, Hyperbolic, Circle = 1-sphere) or a flat x
/// sphere product (Cylinder). Immutable after construction; all member
/// queries are pure.
class ModelManifold {
 public:
  static ModelManifold make(ManifoldKind kind, int dim, double curvature_scale,
                            int sphere_factor_dim = 0);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double curvature_scale() const { return kappa_; }
  double injectivity_radius() const { return inj_; }
  int sphere_factor_dim() const { return sphere_factor_dim_; }

  /// Geodesic diameter (+inf for non-compact models).
  double diameter() const;
  bool compact() const { return std::isfinite(diameter()); }

  double geodesic_distance(const Point& a, const Point& b) const;

  /// sqrt(det g_ij) at radius r in the normal chart (isotropic models only).
  double volume_density(double r) const;

  /// Vol(B(x,r)); closed forms for N <= 3, quadrature of the density above.
  double ball_volume(double r) const;

  /// Laplacian of the distance function at radius r from the chart center.
  double laplacian_distance(double r) const;

  ThresholdRadii threshold_radii(double T) const;
  double rho_infinity() const { return threshold_radii(std::numeric_limits<double>::infinity()).rho_inf; }

  /// Point on the minimal geodesic from a towards b at arclength s from a.
  Point geodesic_point(const Point& a, const Point& b, double s) const;

  /// Signed exponential-map sanity: maps chart coordinates to a Point.
  Point chart_point(const std::vector<double>& coords) const { return Point(coords); }

  double pi_over_4_sqrt_kappa() const;

 private:
  ModelManifold(ManifoldKind kind, int dim, double kappa, double inj, int ell)
      : kind_(kind), dim_(dim), kappa_(kappa), inj_(inj), sphere_factor_dim_(ell) {}

  void require_isotropic(const char* op) const;

  ManifoldKind kind_;
  int dim_;
  double kappa_;
  double inj_;
  int sphere_factor_dim_;
};

ModelManifold make_manifold(ManifoldKind kind, int dim, double curvature_scale,
                            int sphere_factor_dim = 0);

/// Point at signed radius r along a coordinate axis of the chart.
inline Point axis_point(int dim, double r, int axis = 0) {
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  v[static_cast<std::size_t>(axis)] = r;
  return Point(std::move(v));
}

/// Area of the unit sphere S^{N-1} in R^N.
double unit_sphere_area(int N);
/// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

/// Fujita exponent (N+2)/N.
inline double fujita_exponent(int N) { return (N + 2.0) / N; }

/// One row of the Appendix A comparison sweep.
struct ComparisonRow {
  double r;
  std::string bound_name;
  double lhs;
  double rhs;
  bool pass;
  bool in_range;  // sample inside the bound's validity range
  double slack;   // rhs - lhs (>= 0 when pass)
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool all_in_range_pass() const;
  std::string to_csv() const;  // columns: r,bound_name,lhs,rhs,pass
};

/// Checks prep1 (Laplacian), prep2/prep4 (density), prep3/prep5 (ball
/// volume) at the given radii, and prep6/prep7 (distance comparison) on
/// deterministic chart-coordinate pairs derived from the radii.
ComparisonReport comparison_report(const ModelManifold& M, const std::vector<double>& r_samples);

}  // namespace fujitalab
