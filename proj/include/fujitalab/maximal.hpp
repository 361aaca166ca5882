#pragma once

#include <string>
#include <vector>

#include "fujitalab/cantor.hpp"
#include "fujitalab/geometry.hpp"
#include "fujitalab/measures.hpp"

namespace fujitalab {

/// Product of per-axis interval-union indicators times a scale; the
/// density family the maximal-operator machinery uses (f_n, cube
/// indicators).
struct ProductIndicator {
  double scale = 1.0;
  std::vector<std::vector<CantorInterval>> axes;  // disjoint, sorted per axis
};

ProductIndicator unit_cube_indicator(int N, double a);
ProductIndicator cantor_indicator(const CantorSet& S, int level, double a);

/// Integral of f over the box prod (lo_i, hi_i).
double box_mass(const ProductIndicator& f, const std::vector<double>& lo,
                const std::vector<double>& hi);

struct MaximalConfig {
  double a = 1.0;            // chart cube side, min(rho_inf,1)/sqrt(N)
  double r_bar = 0.25;       // Cantor ratio bound, box aspect (1-2 r_bar)
  int p_grid = 48;           // per-axis log grid for the P supremum
  double p_min_frac = 1e-6;  // smallest rho_i as a fraction of a
};

/// Discretized sup over boxes D_P; a lower estimate of the true supremum.
double maximal_eval(const ProductIndicator& f, double p, const std::vector<double>& x,
                    const MaximalConfig& cfg);

struct MorreyConfig {
  double p = 3.0;
  int rho_samples = 48;
  int center_samples = 64;
  double rho_min_frac = 1e-5;  // smallest rho as a fraction of rho_inf (or 1)
};

/// Sampled Morrey norm sup_x sup_rho phi(rho)^{-1} rho^{-(N-2/(p-1))}
/// mu(B(x,rho)); a lower estimate, reported at the sampled resolution.
double morrey_norm(const RadonMeasure& f, const ModelManifold& M, const MorreyConfig& cfg);

/// Certified log-space upper bound of ||f_n||_Y via per-level cluster
/// counting; valid at every level including those far below double range.
double cantor_y_norm_log_upper(const CantorSet& S, const ModelManifold& M, int n,
                               double lambda_du = 0.25);

/// Certified log-space lower bound of ||H f_n||_{L^p(chart cube)}^p from the
/// canonical-box sampling of the level-j regions.
double cantor_hf_lp_log_lower(const CantorSet& S, const ModelManifold& M, int n,
                              int s_grid = 240);

struct RatioCurve {
  std::vector<int> n;
  std::vector<double> ratio;        // lower estimates of ||H f_n||_p / ||f_n||_Y
  std::vector<double> log_ratio_p;  // log ratio^p (stable at any level)
  std::vector<double> lower_sums;   // the eq-level partial sums
  std::vector<double> log_num;      // log ||H f_n||_p^p lower bound
  std::vector<double> log_y_up;     // log ||f_n||_Y upper bound
  double fitted_c = 0.0;            // ratio^p >= fitted_c * lower_sum - fitted_C
  double fitted_C = 0.0;
  int s_grid = 0;
  std::string to_csv() const;  // n,ratio,lower_sum,fitted_c,fitted_C
};

RatioCurve ratio_curve(const CantorSet& S, const ModelManifold& M, int n_max,
                       int s_grid = 240, double lambda_du = 0.25);

/// sum_{j<n} phi(R_j)^{p-1} (p > p_F) or with log(R_j/R_{j+1}) factors (p_F).
double lower_sum(const CantorSet& S, int n);

/// int_{2^-k}^1 eta^{-1} phi(eta)^{p-1} d eta; increasing and unbounded in k.
double divergence_partial(double p, int k);

}  // namespace fujitalab
