#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fujitalab/geometry.hpp"
#include "fujitalab/numerics.hpp"

namespace fujitalab {

class RadonMeasure;  // measures.hpp

struct KernelTruncation {
  int max_terms = 200000;
  double tail_tol = 1e-14;
};

/// Heat kernel K(x,y,t) on a model space. K depends on (d(x,y), t) only;
/// evaluation is pure and the evaluator is immutable.
///
/// Realizations: Gaussian on R^N, image sum / eigenseries on the circle,
/// spherical-harmonic series on S^2 and S^3, the McKean integral on H^2 and
/// the closed form on H^3.
class HeatKernelEvaluator {
 public:
  explicit HeatKernelEvaluator(ModelManifold manifold, KernelTruncation trunc = {},
                               double small_time_switch = 1e-3);

  const ModelManifold& manifold() const { return M_; }
  const KernelTruncation& truncation() const { return trunc_; }
  double small_time_switch() const { return small_time_switch_; }

  /// K at geodesic distance d; strictly positive for t > 0.
  double kernel_radial(double d, double t) const;

  double kernel_eval(const Point& x, const Point& y, double t) const;

  /// Distance beyond which K(d,t) < tail_tol * K(0,t) (diameter on compacts).
  double effective_radius(double t) const;

  /// integral of K(x,.,t) over M by radial quadrature; = 1 on all models.
  double kernel_mass(double t, double rel_tol = 1e-9) const;

  /// |K(x,y,s+t) - int K(x,z,s)K(z,y,t) dV(z)| at distance d = d(x,y).
  double semigroup_defect(double d, double s, double t, double rel_tol = 1e-9) const;

  /// K(x,y,t)/K(x,z,2t); requires d(y,z) <= sqrt(t) (and t < pi^2/kappa).
  double harnack_ratio(const Point& x, const Point& y, const Point& z, double t) const;

  /// K(a xi', a eta', b t) / K(xi', eta', b t / (9 a^2)) in chart coords.
  double scaling_ratio(const std::vector<double>& xi, const std::vector<double>& eta,
                       double alpha, double beta, double t) const;

  /// d -> K(d, t), table-backed where a single evaluation is expensive.
  std::function<double(double)> radial_functor(double t) const;

 private:
  double sphere_series(double d, double t) const;     // S^2/S^3, unit curvature inputs
  double sphere3_images(double d, double t) const;    // exact S^3 image sum
  double circle_kernel(double d, double t) const;     // unit radius inputs
  double h2_mckean(double d, double t) const;         // unit curvature inputs
  ModelManifold M_;
  KernelTruncation trunc_;
  double small_time_switch_;
};

/// Dense table of log K(d,t) for fast interpolation at fixed t.
class RadialKernelTable {
 public:
  RadialKernelTable() = default;
  RadialKernelTable(const HeatKernelEvaluator& E, double t, int nodes = 1024);
  double operator()(double d) const;
  double t() const { return t_; }

 private:
  double t_ = 0.0;
  double d_max_ = 0.0;
  CubicSpline log_k_;
};

struct GaussianBoundCheck {
  bool upper_ok;
  bool lower_ok;
  double upper_ratio;  // K / (t^{-N/2} exp(-d^2/(4.5 t)))
  double lower_ratio;  // K / (t^{-N/2} exp(-d^2/(2 t)))
};

/// Ratios against the prep9/prep10 Gaussian envelopes; the booleans compare
/// against the supplied fitted constants.
GaussianBoundCheck gaussian_bounds_check(const HeatKernelEvaluator& E, double d, double t,
                                         double T_horizon, double fitted_upper_c,
                                         double fitted_lower_c);

struct KernelBoundRow {
  std::string bound_id;
  double d;
  double t;
  double lhs;
  double rhs;
  double ratio;
};

struct KernelBoundReport {
  std::vector<KernelBoundRow> rows;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  std::string to_csv() const;  // columns: bound_id,d,t,lhs,rhs,ratio
};

/// Observed supremum of the prep8 Harnack-type ratio on a (x,y,z,t) grid.
KernelBoundReport harnack_sweep(const HeatKernelEvaluator& E, int grid_points_per_axis,
                                const std::vector<double>& t_samples);

/// Observed envelope constants for prep9 (upper) and prep10 (lower) on a
/// (d,t) grid valid for the bounds' stated ranges.
KernelBoundReport gaussian_bounds_sweep(const HeatKernelEvaluator& E,
                                        const std::vector<double>& d_samples,
                                        const std::vector<double>& t_samples,
                                        double T_horizon);

/// Observed infimum of the prep11 scaling ratio on chart grids.
KernelBoundReport scaling_sweep(const HeatKernelEvaluator& E, const std::vector<double>& alphas,
                                const std::vector<double>& t_samples);

/// sup over t_samples (and over kernel centers) of
///   [int K(x,y,t) dmu(y)] * t^{N/2} / sup_z mu(B(z, sqrt t)).
/// Throws if the measure is identically zero.
double linheat_constant(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                        const std::vector<double>& t_samples);

/// Heat potential (L mu)(x,t) = int K(x,y,t) dmu(y).
double measure_heat_potential(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                              const Point& x, double t, double rel_tol = 1e-8);

}  // namespace fujitalab
