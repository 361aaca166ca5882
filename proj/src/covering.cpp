#include "fujitalab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

double chordal(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> sphere_candidates(int N, int count, std::uint64_t seed) {
  std::vector<std::vector<double>> pts;
  if (N == 1) {
    pts.push_back({1.0});
    pts.push_back({-1.0});
    return pts;
  }
  if (N == 2) {
    // multiple of 840 so every regular m-gon with m | 840 sits on the grid
    const int m = ((count + 839) / 840) * 840;
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * M_PI * i / m;
      pts.push_back({std::cos(th), std::sin(th)});
    }
    return pts;
  }
  std::mt19937_64 rng(seed + 12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    std::vector<double> v(N);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int d = 0; d < N; ++d) {
        v[d] = gauss(rng);
        norm += v[d] * v[d];
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (int d = 0; d < N; ++d) v[d] /= norm;
    pts.push_back(std::move(v));
  }
  return pts;
}

}  // namespace

double packing_count_bound(int N) { return std::pow(2.0, 2 * N - 2) * std::pow(5.0, N); }

double rauch_constant_A(const ModelManifold& M, double xi) {
  const double kappa = M.curvature_scale();
  if (kappa == 0.0 || M.dim() == 1) return 2.0;
  const double s = std::sqrt(kappa) * xi;
  return 2.0 * std::sinh(s) / s;
}

double cover_radius_limit(const ModelManifold& M) {
  const double inj = M.injectivity_radius();
  if (M.dim() == 1) return 0.8 * inj;
  const double kappa = M.curvature_scale();
  const double cap = kappa > 0.0 ? M_PI / (2.0 * std::sqrt(kappa))
                                 : std::numeric_limits<double>::infinity();
  return 0.8 * std::min(inj, cap);
}

DisResult dis_greedy(int N, double w, int restarts, int candidates, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("dis_greedy: N >= 1");
  if (!(w > 0.0) || w > 2.0) throw std::invalid_argument("dis_greedy: w in (0, 2]");
  DisResult best;
  if (N == 1) {
    best.count = 2;
    best.points = {{1.0}, {-1.0}};
    best.min_pairwise = 2.0;
    return best;
  }
  const double w_eff = w * (1.0 - 1e-9);  // admit configurations at exact w
  for (int r = 0; r < restarts; ++r) {
    auto pts = sphere_candidates(N, candidates, seed + 7919 * r);
    if (r > 0) {
      std::mt19937_64 rng(seed + 104729 * r);
      std::shuffle(pts.begin(), pts.end(), rng);
    }
    std::vector<std::vector<double>> chosen;
    for (const auto& c : pts) {
      bool ok = true;
      for (const auto& q : chosen)
        if (chordal(c, q) < w_eff) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(c);
    }
    if (static_cast<int>(chosen.size()) > best.count) {
      best.count = static_cast<int>(chosen.size());
      best.points = chosen;
    }
  }
  best.min_pairwise = 4.0;
  for (std::size_t i = 0; i < best.points.size(); ++i)
    for (std::size_t j = i + 1; j < best.points.size(); ++j)
      best.min_pairwise = std::min(best.min_pairwise, chordal(best.points[i], best.points[j]));
  if (best.points.size() < 2) best.min_pairwise = 0.0;
  return best;
}

namespace {

std::vector<Point> ball_candidates(const ModelManifold& M, const Point& a, double rho,
                                   int count) {
  // Halton points of the enclosing chart cube, kept when inside the metric ball.
  std::vector<Point> pts;
  const int N = M.dim();
  pts.push_back(a);
  for (int i = 0; pts.size() < static_cast<std::size_t>(count) && i < count * 8; ++i) {
    auto h = halton_point(static_cast<std::size_t>(i), N);
    Point q = a;
    bool chart_ok = true;
    double nrm = 0.0;
    for (int d = 0; d < N; ++d) {
      q.x[d] = a.x[d] + (2.0 * h[d] - 1.0) * 2.0 * rho;
      nrm += q.x[d] * q.x[d];
    }
    if (std::sqrt(nrm) >= 0.999 * M.injectivity_radius()) chart_ok = false;
    if (!chart_ok) continue;
    if (M.geodesic_distance(a, q) < rho) pts.push_back(q);
  }
  return pts;
}

bool lex_less(const std::vector<Point>& A, const std::vector<Point>& B) {
  auto key = [](const std::vector<Point>& v) {
    std::vector<std::vector<double>> k;
    for (const auto& p : v) k.push_back(p.x);
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(A) < key(B);
}

}  // namespace

PackingResult pac_greedy(const ModelManifold& M, const Point& a, double rho, int candidates,
                         int restarts, std::uint64_t seed) {
  if (!(rho > 0.0) || rho > cover_radius_limit(M))
    throw std::invalid_argument("pac_greedy: requires 0 < rho <= R'");
  const double sep = 0.5 * rho;
  auto base = ball_candidates(M, a, rho, candidates);
  PackingResult best;
  for (int r = 0; r < restarts; ++r) {
    auto pts = base;
    if (r > 0) {
      std::mt19937_64 rng(seed + 31337 * r);
      std::shuffle(pts.begin() + 1, pts.end(), rng);  // keep the center first
    }
    std::vector<Point> chosen;
    for (const auto& c : pts) {
      bool ok = true;
      for (const auto& q : chosen)
        if (M.geodesic_distance(c, q) < sep) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(c);
    }
    if (static_cast<int>(chosen.size()) > best.count ||
        (static_cast<int>(chosen.size()) == best.count &&
         (best.centers.empty() || lex_less(chosen, best.centers)))) {
      best.count = static_cast<int>(chosen.size());
      best.centers = chosen;
    }
  }
  // Repair pass: grow to maximality against a fresh probe stream, so no
  // point of a fine grid in B(a, rho) can be added without violating the
  // separation.
  for (int i = 0; static_cast<int>(best.centers.size()) < 4096 && i < candidates * 4; ++i) {
    auto h = halton_point(static_cast<std::size_t>(i) + 500009, M.dim());
    Point q = a;
    double nrm = 0.0;
    for (int d = 0; d < M.dim(); ++d) {
      q.x[d] = a.x[d] + (2.0 * h[d] - 1.0) * 2.0 * rho;
      nrm += q.x[d] * q.x[d];
    }
    if (std::sqrt(nrm) >= 0.999 * M.injectivity_radius()) continue;
    if (M.geodesic_distance(a, q) >= rho) continue;
    bool addable = true;
    for (const auto& cpt : best.centers)
      if (M.geodesic_distance(q, cpt) < sep) {
        addable = false;
        break;
      }
    if (addable) best.centers.push_back(q);
  }
  best.count = static_cast<int>(best.centers.size());
  best.separation = sep;
  best.min_pairwise = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < best.centers.size(); ++i)
    for (std::size_t j = i + 1; j < best.centers.size(); ++j)
      best.min_pairwise =
          std::min(best.min_pairwise, M.geodesic_distance(best.centers[i], best.centers[j]));
  if (best.centers.size() < 2) best.min_pairwise = 0.0;
  return best;
}

CoverResult half_ball_cover(const ModelManifold& M, const Point& a, double rho, int samples,
                            std::uint64_t seed) {
  if (!(rho > 0.0) || rho >= cover_radius_limit(M))
    throw std::invalid_argument("half_ball_cover: requires 0 < rho < R'");
  PackingResult pack = pac_greedy(M, a, rho, 8192, 4, seed);
  std::vector<Point> centers = pack.centers;
  const double sep = 0.5 * rho;
  const int N = M.dim();

  auto probe_points = [&](int count, std::size_t offset) {
    std::vector<Point> pts;
    for (std::size_t i = offset; pts.size() < static_cast<std::size_t>(count); ++i) {
      auto h = halton_point(i, N);
      Point q = a;
      for (int d = 0; d < N; ++d) q.x[d] = a.x[d] + (2.0 * h[d] - 1.0) * 2.0 * rho;
      double nrm = 0.0;
      for (int d = 0; d < N; ++d) nrm += q.x[d] * q.x[d];
      if (std::sqrt(nrm) >= 0.999 * M.injectivity_radius()) continue;
      if (M.geodesic_distance(a, q) < rho) pts.push_back(q);
      if (i > offset + 40u * static_cast<std::size_t>(count)) break;
    }
    return pts;
  };

  // Repair pass: any probe farther than rho/2 from every center is itself a
  // valid packing point, so add it (greedy maximality against the probes).
  for (const auto& q : probe_points(samples, 0)) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) nearest = std::min(nearest, M.geodesic_distance(q, c));
    if (nearest >= sep) centers.push_back(q);
  }

  CoverResult out;
  out.centers = centers;
  out.count = static_cast<int>(centers.size());
  out.worst_gap = 0.0;
  auto fresh = probe_points(samples, 1000003);
  out.samples_checked = static_cast<int>(fresh.size());
  for (const auto& q : fresh) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) nearest = std::min(nearest, M.geodesic_distance(q, c));
    out.worst_gap = std::max(out.worst_gap, nearest);
    if (nearest >= sep) out.covered = false;
  }
  if (!out.covered)
    throw std::logic_error("half_ball_cover: coverage verification failed after repair");
  return out;
}

BesicovitchResult besicovitch_partition(const ModelManifold& M, const BallFamily& F,
                                        double xi, double eta) {
  if (!(xi > 0.0) || !(xi < 0.5 * M.injectivity_radius()))
    throw std::invalid_argument("besicovitch_partition: requires xi < inj(M)/2");
  if (!(eta > 0.0) || eta > 1.0 / 3.0)
    throw std::invalid_argument("besicovitch_partition: requires eta <= 1/3");
  for (const auto& b : F)
    if (!(b.radius > 0.0) || b.radius >= 0.5 * xi)
      throw std::invalid_argument("besicovitch_partition: radii must satisfy r < xi/2");

  std::vector<std::size_t> order(F.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (F[i].radius != F[j].radius) return F[i].radius > F[j].radius;
    return F[i].center.x < F[j].center.x;
  });

  BesicovitchResult res;
  res.subfamily_of.assign(F.size(), -1);
  // Selection pass: keep a ball only when its center is not yet covered by a
  // previously selected (larger) ball. The selected subfamily still covers
  // every center and carries the bounded-overlap structure the 2 zeta + 1
  // coloring needs.
  std::vector<std::size_t> selected;
  for (std::size_t idx : order) {
    bool covered = false;
    for (std::size_t s : selected)
      if (M.geodesic_distance(F[idx].center, F[s].center) < F[s].radius) {
        covered = true;
        break;
      }
    if (!covered) selected.push_back(idx);
  }
  res.selected.assign(F.size(), false);
  for (std::size_t s : selected) res.selected[s] = true;
  res.centers_covered = true;
  for (const auto& b : F) {
    bool covered = false;
    for (std::size_t s : selected)
      if (M.geodesic_distance(b.center, F[s].center) < F[s].radius + 1e-15) {
        covered = true;
        break;
      }
    res.centers_covered = res.centers_covered && covered;
  }
  // First-fit coloring of the selected balls by decreasing radius.
  std::vector<std::vector<std::size_t>> families;
  for (std::size_t idx : selected) {
    bool placed = false;
    for (std::size_t f = 0; f < families.size() && !placed; ++f) {
      bool disjoint = true;
      for (std::size_t other : families[f]) {
        if (M.geodesic_distance(F[idx].center, F[other].center) <=
            F[idx].radius + F[other].radius) {
          disjoint = false;
          break;
        }
      }
      if (disjoint) {
        families[f].push_back(idx);
        res.subfamily_of[idx] = static_cast<int>(f);
        placed = true;
      }
    }
    if (!placed) {
      families.push_back({idx});
      res.subfamily_of[idx] = static_cast<int>(families.size()) - 1;
    }
  }
  res.n_subfamilies = static_cast<int>(families.size());

  const double A = rauch_constant_A(M, xi);
  res.zeta = dis_greedy(M.dim(), std::min(2.0, eta / A)).count;
  res.bound_2zeta_1 = 2 * res.zeta + 1;
  res.bound_asserted = M.dim() == 1;

  for (const auto& fam : families)
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j)
        if (M.geodesic_distance(F[fam[i]].center, F[fam[j]].center) <=
            F[fam[i]].radius + F[fam[j]].radius)
          res.disjoint_ok = false;
  return res;
  // (unselected balls keep subfamily index -1; their centers are covered)
}

double width_eval(const ModelManifold& M, const Point& a, const Point& b, const Point& c) {
  const double dab = M.geodesic_distance(a, b);
  const double dac = M.geodesic_distance(a, c);
  if (!(dac > 0.0) || dab < dac)
    throw std::invalid_argument("width_eval: requires d(a,b) >= d(a,c) > 0");
  const Point x = M.geodesic_point(a, b, dac);
  return M.geodesic_distance(x, c) / dac;
}

}  // namespace fujitalab
