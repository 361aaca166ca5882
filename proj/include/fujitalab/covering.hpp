#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fujitalab/geometry.hpp"

namespace fujitalab {

struct Ball {
  Point center;
  double radius;
};

using BallFamily = std::vector<Ball>;

/// Volume-ratio ceiling 2^{2N-2} 5^N on packing/cover counts.
double packing_count_bound(int N);

/// The appendix constant A(xi): 2 for kappa = 0 or N = 1, else
/// 2 sinh(sqrt(kappa) xi)/(sqrt(kappa) xi).
double rauch_constant_A(const ModelManifold& M, double xi);

/// Radius threshold R' under which half-ball covers are certified.
double cover_radius_limit(const ModelManifold& M);

struct DisResult {
  int count = 0;
  std::vector<std::vector<double>> points;  // on the unit sphere in R^N
  double min_pairwise = 0.0;
};

/// Greedy maximal w-separated set on S^{N-1} (chordal distance), best of
/// `restarts` deterministic restarts; a lower estimate of Dis(N, w) except
/// N = 1 where it is exact (= 2).
DisResult dis_greedy(int N, double w, int restarts = 8, int candidates = 4096,
                     std::uint64_t seed = 0);

struct PackingResult {
  std::vector<Point> centers;
  double separation = 0.0;    // required pairwise distance (rho/2)
  double min_pairwise = 0.0;  // certificate
  int count = 0;
};

/// Greedy maximal subset of B(a, rho) with pairwise distances >= rho/2
/// (equivalently disjoint rho/4-balls).
PackingResult pac_greedy(const ModelManifold& M, const Point& a, double rho,
                         int candidates = 8192, int restarts = 8, std::uint64_t seed = 0);

struct CoverResult {
  std::vector<Point> centers;
  int count = 0;
  int samples_checked = 0;
  bool covered = true;       // every sample within rho/2 of some center
  double worst_gap = 0.0;    // max over samples of distance to nearest center
};

/// Packing-derived half-ball cover of B(a, rho), repaired to maximality
/// against quasi-random probes and then verified on fresh samples.
CoverResult half_ball_cover(const ModelManifold& M, const Point& a, double rho,
                            int samples = 10000, std::uint64_t seed = 0);

struct BesicovitchResult {
  std::vector<int> subfamily_of;  // per ball; -1 = not selected
  std::vector<bool> selected;     // center-greedy Besicovitch selection
  bool centers_covered = false;   // selected balls cover every center
  int n_subfamilies = 0;
  int zeta = 0;             // Dis(N, eta/A) estimate used in the 2 zeta + 1 bound
  int bound_2zeta_1 = 0;
  bool bound_asserted = false;  // exact only for N = 1
  bool disjoint_ok = true;      // within-subfamily pairwise disjointness
};

/// Besicovitch-type partition: a center-greedy selection pass (largest
/// radius first, keep a ball only if its center is uncovered) followed by a
/// first-fit coloring of the selected balls into pairwise-disjoint
/// subfamilies; ties broken lexicographically. The selected balls cover
/// every center and the subfamily count is compared against 2 zeta + 1.
BesicovitchResult besicovitch_partition(const ModelManifold& M, const BallFamily& F,
                                        double xi, double eta);

/// Width functional: d(x, c)/d(a, c) at the point x on the geodesic from a
/// towards b at arclength d(a, c). Requires d(a,b) >= d(a,c) > 0.
double width_eval(const ModelManifold& M, const Point& a, const Point& b, const Point& c);

}  // namespace fujitalab
