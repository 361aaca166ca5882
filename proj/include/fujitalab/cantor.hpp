#pragma once

#include <string>
#include <vector>

namespace fujitalab {

struct CantorInterval {
  double a;
  double b;
};

struct CantorLevelInfo {
  double log_R;             // natural log of R_n
  double R;                 // 0 when below the double range
  double ratio;             // r_n = R_n / R_{n-1} (1 at level 0)
  double identity_residual; // |2^{Nn} R_n^{N-2/(p-1)} phi(R_n)/phi(1/2) - 1|
};

/// Levels, ratios and interval families of the F(R)=0 construction.
///
/// R_n solves 2^{Nn} R^{N-2/(p-1)} phi(R) = phi(1/2). For p = p_F the
/// exponent vanishes and R_n decays doubly exponentially, far below the
/// double range, so every level stores log R_n; interval endpoints are only
/// materialized while R_n is large enough for positions to resolve in
/// double arithmetic.
class CantorSet {
 public:
  int N = 1;
  double p = 3.0;
  int n_max = 0;
  std::vector<CantorLevelInfo> levels;                // size n_max + 1
  double r_bar = 0.0;                                  // max_n r_n (< 1/2)
  double r_lower = 0.0;                                // min_n r_n (p > p_F), else 0
  int representable_levels = 0;                        // deepest level with endpoints
  std::vector<std::vector<CantorInterval>> intervals;  // level -> sorted intervals

  double log_R(int n) const { return levels.at(n).log_R; }
  double R(int n) const { return levels.at(n).R; }

  /// Levels and (when representable) intervals as decimal strings.
  std::string to_json() const;
};

/// Builds the Cantor set for p >= p_F; root-finding is bisection in
/// L = log(1/R) for p > p_F and the explicit log-domain inversion when the
/// exponent N - 2/(p-1) vanishes.
CantorSet cantor_levels(int N, double p, int n_max);

/// log R_n alone (same solver as cantor_levels).
double cantor_log_R(int N, double p, int n);

/// Residual of the defining identity at log R, as |ratio - 1|.
double cantor_identity_residual(int N, double p, int n, double log_R);

}  // namespace fujitalab
