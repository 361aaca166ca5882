#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fujitalab/cantor.hpp"
#include "fujitalab/geometry.hpp"

namespace fujitalab {

// --- smooth cutoffs -------------------------------------------------------

/// C^2 quintic smoothstep: 0 at u<=0, 1 at u>=1, monotone.
double smoothstep_quintic(double u);
double smoothstep_quintic_d1(double u);
double smoothstep_quintic_d2(double u);

/// eta with eta=0 for tau<=0 and eta=1 for tau>=1 (test-function shape).
double cutoff_rise(double tau);
double cutoff_rise_d1(double tau);
double cutoff_rise_d2(double tau);

/// eta with eta=1 for z<=1/2 and eta=0 for z>=1 (profile shape).
double cutoff_profile(double z);

// --- log weight -----------------------------------------------------------

/// phi(rho) = (log(e + 1/rho))^{-1/(p-1)}.
double phi_log(double rho, double p);

/// log phi given log rho; stable for log rho ~ -1e6.
double log_phi_log(double log_rho, double p);

/// phi(R)^{p-1} = 1 / log(e + 1/R) given L = log(1/R).
double phi_pow_pm1_from_L(double L);

/// Checks the four monotonicity bullets of the log weight on a sampled
/// grid; returns an offending rho or 0 when all hold.
struct LogWeightExponents {
  double alpha;  // in (0, 2/(p-1)): rho^-alpha phi decreasing
  double beta;   // in (0, N-2/(p-1)) for p > p_F: rho^beta phi increasing
};
LogWeightExponents default_log_weight_exponents(int N, double p);
double log_weight_monotonicity_witness(int N, double p, const LogWeightExponents& e);

// --- the auxiliary convex pair h / h^{-1} ----------------------------------

/// h(z) = z^alpha for p > p_F, h(z) = z (log(A+z))^beta for p = p_F.
class HPair {
 public:
  static HPair make(double p, int N, double alpha_or_beta, double log_offset_a);
  static HPair make_default(double p, int N);

  double operator()(double z) const;
  double inverse(double y) const;
  bool critical() const { return critical_; }
  double exponent() const { return exponent_; }
  double log_offset_a() const { return log_offset_a_; }

 private:
  bool critical_ = false;
  double p_ = 0.0;
  double exponent_ = 0.0;      // alpha or beta
  double log_offset_a_ = 0.0;  // A
};

// --- Radon measures ---------------------------------------------------------

enum class MeasureVariant { Atomic, Radial, Grid, Cantor };

struct Atom {
  Point position;
  double weight;
};

struct GridCell {
  Point center;
  double weight;  // cell volume (with volume form)
  double value;   // density value
};

/// Nonnegative initial datum: point masses, a radial density about the
/// chart origin, a grid density, or a Cantor product density on the chart
/// cube Q_a. Immutable once built.
class RadonMeasure {
 public:
  static RadonMeasure zero();
  static RadonMeasure atomic(std::vector<Atom> atoms);
  static RadonMeasure dirac(Point at, double mass);
  static RadonMeasure radial(std::function<double(double)> profile, double cutoff,
                             bool decreasing = false, std::string name = "radial");
  static RadonMeasure lebesgue();
  static RadonMeasure uniform(double density, double cutoff);
  static RadonMeasure grid(std::vector<GridCell> cells);
  static RadonMeasure cantor(const CantorSet& set, int level, const ModelManifold& M);

  MeasureVariant variant() const { return variant_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<GridCell>& grid_cells() const { return cells_; }
  double radial_profile(double r) const;
  double radial_cutoff() const { return cutoff_; }
  bool radial_decreasing() const { return decreasing_; }
  const std::string& name() const { return name_; }

  // Cantor accessors.
  const std::vector<std::vector<CantorInterval>>& cantor_axes() const { return cantor_axes_; }
  double cantor_scale() const { return cantor_scale_; }
  int cantor_level() const { return cantor_level_; }
  /// Product cells of the (representable) Cantor support, for quadrature.
  std::vector<GridCell> cantor_cells() const;

  bool is_zero() const;
  double total_mass_hint() const;
  std::vector<Point> candidate_centers(const ModelManifold& M) const;

 private:
  MeasureVariant variant_ = MeasureVariant::Atomic;
  std::vector<Atom> atoms_;
  std::vector<GridCell> cells_;
  std::function<double(double)> profile_;
  double cutoff_ = 0.0;
  bool decreasing_ = false;
  std::vector<std::vector<CantorInterval>> cantor_axes_;
  double cantor_scale_ = 0.0;
  int cantor_level_ = 0;
  int dim_ = 1;
  std::string name_;
};

/// f~ of the critical construction: r^{-2/(p-1)} eta(r/rho_T) for p > p_F,
/// the log-corrected profile for p = p_F. Throws for p < p_F.
RadonMeasure critical_profile(const ModelManifold& M, double p, double T);

/// C d^{-2/(p-1)} (resp. the critical log form) inside B(z0, rho_inf),
/// extended by its boundary value outside.
RadonMeasure singular_profile(const ModelManifold& M, double p, double C);

// --- mass functionals -------------------------------------------------------

double ball_mass(const RadonMeasure& mu, const ModelManifold& M, const Point& z, double rho,
                 double rel_tol = 1e-9);

struct SupBallMass {
  double value = 0.0;
  Point argmax;
  double resolution = 0.0;  // center-search resolution used
};

SupBallMass sup_ball_mass(const RadonMeasure& mu, const ModelManifold& M, double rho,
                          int scan_points = 96);

/// sup_z ( int_{B(z,rho)} u0^q dV )^{1/q} for a density measure u0.
double uloc_norm(const RadonMeasure& u0, double q, double rho, const ModelManifold& M,
                 int scan_points = 64);

// --- growth classification --------------------------------------------------

struct GrowthRow {
  double rho;
  std::string bound_name;
  double mass;
  double bound_value;  // the bound shape at this rho (with C = 1)
  double fitted_C;     // mass / bound_value
};

struct GrowthVerdict {
  std::vector<GrowthRow> rows;
  double C_subcritical = 0.0;    // (i), single radius rho_T
  double C_critical = 0.0;       // (ii)
  double C_supercritical = 0.0;  // (iii)
  double C_suf = 0.0;
  double C_nex = 0.0;
  bool critical_finite = true;
  bool supercritical_finite = true;
  bool suf_finite = true;
  bool nex_finite = true;
  std::string to_csv() const;  // rho,bound_name,mass,bound_value,fitted_C
};

/// Fits the smallest constants for the growth bounds over a
/// log-spaced rho grid; the *_finite flags report whether the fitted C is
/// stable as rho -> 0 (divergence heuristic: the constant is attained at
/// the smallest decade and exceeds 10x the median).
GrowthVerdict growth_classify(const RadonMeasure& mu, const ModelManifold& M, double p,
                              double T, double eps_suf = 0.1, int rho_samples = 48);

struct LumuReport {
  std::vector<double> rho;
  std::vector<double> mass;   // ball mass at the profile center
  std::vector<double> shape;  // the bracket shape at this rho
  std::vector<double> ratio;  // mass / shape
  double C_lower = 0.0;       // min ratio
  double C_upper = 0.0;       // max ratio
  double C_tightest = 0.0;    // max(C_upper, 1/C_lower)
  bool bracket_ok = false;    // 0 < C_lower <= C_upper < inf
  std::string to_csv() const;  // rho,bound_name,mass,bound_value,fitted_C
};

/// Verifies the two-sided bracket for the critical-profile measure.
LumuReport lumu_bracket_check(const RadonMeasure& mu_f, const ModelManifold& M, double p,
                              double T, int rho_samples = 40, double rho_min = 1e-4);

}  // namespace fujitalab
