#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fujitalab/geometry.hpp"
#include "fujitalab/heat_kernel.hpp"
#include "fujitalab/measures.hpp"

namespace fujitalab {

/// Spatial grid with volume-form quadrature weights. Dimension one uses a
/// full coordinate grid (line segment or the whole circle); higher
/// dimensions are radial about the chart origin for radially symmetric
/// problems.
struct Grid {
  enum class Kind { Line, Circle, Radial };
  Kind kind;
  ModelManifold M;
  std::vector<double> nodes;    // coordinates (Line/Circle) or radii (Radial)
  std::vector<double> weights;  // integrate f(node) * weight over the region
  double extent;                // half-extent (Line), pi R (Circle), r_max (Radial)

  static Grid line(const ModelManifold& M, double half_extent, int n);
  static Grid circle(const ModelManifold& M, int n);
  static Grid radial(const ModelManifold& M, double r_max, int n);

  Point point(std::size_t i) const;
  double covered_volume() const;
  std::size_t size() const { return nodes.size(); }
};

struct Field {
  std::vector<double> values;
  double time = 0.0;
};

/// Dense kernel-propagator for one time offset tau on a fixed grid; row i
/// approximates integration of K(x_i, ., tau) against nodal values.
class KernelMatrix {
 public:
  KernelMatrix(const HeatKernelEvaluator& E, const Grid& g, double tau);
  void apply(const std::vector<double>& in, std::vector<double>& out) const;
  std::vector<double> apply(const std::vector<double>& in) const;
  double tau() const { return tau_; }
  double row_sum(std::size_t i) const;

 private:
  std::size_t n_;
  double tau_;
  std::vector<double> a_;  // row-major, includes quadrature weights
};

struct IterationConfig {
  int max_iters = 40;
  double tolerance = 1e-9;
  double ceiling = 1e8;
  int time_levels = 64;     // per horizon, graded toward both ends
  double dt_floor = 1e-12;  // splitting floor
};

/// Geometrically graded time levels on (0, T], refined toward 0 and T.
std::vector<double> graded_time_levels(double T, int levels);

Field linear_evolve(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                    double t);

/// Psi[u](., t_k) for every level; u given at the same levels.
std::vector<Field> duhamel_apply(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                                 const Grid& g, const std::vector<double>& levels,
                                 const std::vector<Field>& u, double p);

/// Same with the linear part already evaluated at the levels.
std::vector<Field> duhamel_apply_with_linear(const HeatKernelEvaluator& E,
                                             const std::vector<Field>& linear,
                                             const Grid& g,
                                             const std::vector<double>& levels,
                                             const std::vector<Field>& u, double p);

enum class PicardStatus { Converged, CeilingHit, MaxIters };

struct PicardResult {
  PicardStatus status;
  int iterations = 0;
  double final_change = 0.0;
  double monotonicity_defect = 0.0;  // most negative pointwise increment
  std::vector<double> levels;
  std::vector<Field> solution;  // last iterate at every level
  std::vector<double> sup_history;
};

PicardResult picard_solve(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                          double p, double T, const IterationConfig& cfg = {});

/// min over nodes/levels of (u_bar - Psi[u_bar]); >= 0 certifies a
/// supersolution at grid resolution.
double supersolution_check(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                           const std::vector<double>& levels, const std::vector<Field>& u_bar,
                           double p);

struct BlowupResult {
  bool blew_up = false;
  double blow_time = 0.0;   // meaningful when blew_up
  double horizon = 0.0;
  double final_sup = 0.0;
};

/// Operator splitting with the exact reaction substep
/// u -> (u^{1-p} - (p-1) dt)^{-1/(p-1)}.
BlowupResult blowup_probe(const HeatKernelEvaluator& E, const Field& u0, const Grid& g,
                          double p, double horizon, int steps,
                          const IterationConfig& cfg = {});

struct ThresholdResult {
  double C_lo = 0.0;  // survives
  double C_hi = 0.0;  // blows up
  std::vector<std::pair<double, bool>> trajectory;  // (C, blew_up), ordered by C
  bool monotone = true;
};

ThresholdResult threshold_bisect(const std::function<Field(double)>& family,
                                 const HeatKernelEvaluator& E, const Grid& g, double p,
                                 double horizon, int steps, double C_lo_init,
                                 double C_hi_init, double rel_width = 1e-2,
                                 const IterationConfig& cfg = {});

/// Pairings integral of psi * u(., t_k) dV along the fields' times.
std::vector<double> trace_pairings(const Grid& g, const std::vector<Field>& fields,
                                   const std::function<double(const Point&)>& psi);

/// Pairing of psi against the measure itself (the trace target).
double measure_pairing(const RadonMeasure& mu, const ModelManifold& M,
                       const std::function<double(const Point&)>& psi);

struct TestFunctionDefect {
  double lhs = 0.0;      // int phi(.,0)^{2p/(p-1)} dmu
  double rhs_raw = 0.0;  // the space-time integral without the constant
  double rhs = 0.0;      // C(p) * rhs_raw
  bool pass = false;     // lhs <= rhs
};

/// Young-inequality constant of the weak-form test; depends only on p.
double test_function_constant(double p);

/// The weak-form test-function inequality with Phi = rho^2/(d^2+t) - 1 about
/// the chart origin; derivatives are the closed forms against
/// laplacian_distance.
TestFunctionDefect test_function_defect(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                                        double rho, double T, double p);

}  // namespace fujitalab
