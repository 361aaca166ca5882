#include "fujitalab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

double circle_wrap(double u, double circumference) {
  u = std::fmod(std::abs(u), circumference);
  return std::min(u, circumference - u);
}

double radial_lambda(const ModelManifold& M, double r) {
  const double kappa = M.curvature_scale();
  switch (M.kind()) {
    case ManifoldKind::Euclidean:
      return r;
    case ManifoldKind::Sphere:
    case ManifoldKind::Circle:
      return std::sin(std::sqrt(kappa) * r) / std::sqrt(kappa);
    case ManifoldKind::Hyperbolic:
      return std::sinh(std::sqrt(kappa) * r) / std::sqrt(kappa);
    default:
      throw std::invalid_argument("Grid: unsupported manifold");
  }
}

double third_side(const ModelManifold& M, double r, double d, double theta) {
  const double kappa = M.curvature_scale();
  switch (M.kind()) {
    case ManifoldKind::Euclidean:
      return std::sqrt(std::max(0.0, r * r + d * d - 2.0 * r * d * std::cos(theta)));
    case ManifoldKind::Sphere: {
      const double s = std::sqrt(kappa);
      const double c = std::cos(s * r) * std::cos(s * d) +
                       std::sin(s * r) * std::sin(s * d) * std::cos(theta);
      return std::acos(std::clamp(c, -1.0, 1.0)) / s;
    }
    case ManifoldKind::Hyperbolic: {
      const double s = std::sqrt(kappa);
      const double c = std::cosh(s * r) * std::cosh(s * d) -
                       std::sinh(s * r) * std::sinh(s * d) * std::cos(theta);
      return std::acosh(std::max(c, 1.0)) / s;
    }
    default:
      throw std::invalid_argument("third_side: unsupported manifold");
  }
}

}  // namespace

Grid Grid::line(const ModelManifold& M, double half_extent, int n) {
  if (M.dim() != 1 || M.kind() != ManifoldKind::Euclidean)
    throw std::invalid_argument("Grid::line: 1-d Euclidean only");
  if (n < 4) throw std::invalid_argument("Grid::line: need n >= 4");
  Grid g{Kind::Line, M, {}, {}, half_extent};
  const double h = 2.0 * half_extent / (n - 1);
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(-half_extent + i * h);
    g.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
  }
  return g;
}

Grid Grid::circle(const ModelManifold& M, int n) {
  if (M.kind() != ManifoldKind::Circle)
    throw std::invalid_argument("Grid::circle: circle manifolds only");
  if (n < 4) throw std::invalid_argument("Grid::circle: need n >= 4");
  const double R = 1.0 / std::sqrt(M.curvature_scale());
  Grid g{Kind::Circle, M, {}, {}, M_PI * R};
  const double h = 2.0 * M_PI * R / n;
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(-M_PI * R + i * h);
    g.weights.push_back(h);
  }
  return g;
}

Grid Grid::radial(const ModelManifold& M, double r_max, int n) {
  if (M.dim() < 2) throw std::invalid_argument("Grid::radial: use line/circle for N = 1");
  if (M.kind() == ManifoldKind::Cylinder)
    throw std::invalid_argument("Grid::radial: unsupported manifold");
  if (n < 8) throw std::invalid_argument("Grid::radial: need n >= 8");
  const double diam = M.diameter();
  if (std::isfinite(diam)) r_max = std::min(r_max, diam * (1.0 - 1e-9));
  Grid g{Kind::Radial, M, {}, {}, r_max};
  const int N = M.dim();
  const double area = unit_sphere_area(N);
  // Graded radial mesh, clustering toward r = 0 where data may be singular.
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    r[i] = r_max * u * u;
  }
  r[0] = 1e-9 * r_max;
  for (int i = 0; i < n; ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (r[i - 1] + r[i]);
    const double hi = i == n - 1 ? r_max : 0.5 * (r[i] + r[i + 1]);
    const double w = integrate(
        [&](double s) { return area * std::pow(radial_lambda(M, s), N - 1); }, lo, hi, 1e-10);
    g.nodes.push_back(r[i]);
    g.weights.push_back(w);
  }
  return g;
}

Point Grid::point(std::size_t i) const {
  if (kind == Kind::Radial) return axis_point(M.dim(), nodes[i]);
  return Point({nodes[i]});
}

double Grid::covered_volume() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

KernelMatrix::KernelMatrix(const HeatKernelEvaluator& E, const Grid& g, double tau)
    : n_(g.size()), tau_(tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("KernelMatrix: tau > 0");
  a_.assign(n_ * n_, 0.0);
  const ModelManifold& M = g.M;
  const int N = M.dim();
  // Interior rows integrate the full kernel, so their exact sum is 1; rows
  // losing mass through a truncated boundary keep their true deficit.
  auto normalize_rows = [&]() {
    for (std::size_t i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n_; ++j) sum += a_[i * n_ + j];
      if (sum > 0.9)
        for (std::size_t j = 0; j < n_; ++j) a_[i * n_ + j] /= sum;
    }
  };
  if (g.kind == Grid::Kind::Line) {
    parallel_for(n_, [&](std::size_t i) {
      for (std::size_t j = 0; j < n_; ++j)
        a_[i * n_ + j] = E.kernel_radial(std::abs(g.nodes[i] - g.nodes[j]), tau) * g.weights[j];
    });
    normalize_rows();
    return;
  }
  if (g.kind == Grid::Kind::Circle) {
    const double circ = 2.0 * g.extent;
    parallel_for(n_, [&](std::size_t i) {
      for (std::size_t j = 0; j < n_; ++j)
        a_[i * n_ + j] =
            E.kernel_radial(circle_wrap(g.nodes[i] - g.nodes[j], circ), tau) * g.weights[j];
    });
    normalize_rows();
    return;
  }
  // Radial: ring-averaged kernel via fixed Gauss-Legendre in the polar
  // angle; a table makes the n^2 x 64 kernel lookups cheap for any model.
  const RadialKernelTable table(E, tau);
  std::vector<double> qn, qw;
  gauss_legendre_rule(64, qn, qw);
  const double ring = unit_sphere_area(N - 1);
  const double full = unit_sphere_area(N);
  parallel_for(n_, [&](std::size_t i) {
    const double ri = g.nodes[i];
    for (std::size_t j = 0; j < n_; ++j) {
      const double rj = g.nodes[j];
      double avg = 0.0;
      for (std::size_t q = 0; q < qn.size(); ++q) {
        const double theta = 0.5 * M_PI * (qn[q] + 1.0);
        const double w = third_side(M, ri, rj, theta);
        const double sn = N == 2 ? 1.0 : std::sin(theta);
        avg += qw[q] * table(w) * std::pow(sn, N - 2);
      }
      avg *= 0.5 * M_PI;  // map [-1,1] -> [0,pi]
      // ring / full normalizes the angular average against the grid weight,
      // which already carries the full sphere area.
      a_[i * n_ + j] = (ring / full) * avg * g.weights[j];
    }
  });
  normalize_rows();
}

void KernelMatrix::apply(const std::vector<double>& in, std::vector<double>& out) const {
  if (in.size() != n_) throw std::invalid_argument("KernelMatrix::apply: size mismatch");
  out.assign(n_, 0.0);
  parallel_for(n_, [&](std::size_t i) {
    double s = 0.0;
    const double* row = &a_[i * n_];
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * in[j];
    out[i] = s;
  });
}

std::vector<double> KernelMatrix::apply(const std::vector<double>& in) const {
  std::vector<double> out;
  apply(in, out);
  return out;
}

double KernelMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j];
  return s;
}

std::vector<double> graded_time_levels(double T, int levels) {
  if (!(T > 0.0)) throw std::invalid_argument("graded_time_levels: T > 0");
  levels = std::max(levels, 8);
  // Symmetric geometric grading: half the levels accumulate at 0, half at T.
  const int half = levels / 2;
  const double q = std::pow(1e-6, 1.0 / half);
  std::vector<double> out;
  for (int k = half; k >= 1; --k) out.push_back(0.5 * T * std::pow(q, k - 1));
  for (int k = 1; k <= half; ++k) out.push_back(T - 0.5 * T * std::pow(q, k - 1));
  out.push_back(T);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Field linear_evolve(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                    double t) {
  Field f;
  f.time = t;
  f.values.assign(g.size(), 0.0);
  if (mu.is_zero()) return f;
  parallel_for(g.size(), [&](std::size_t i) {
    f.values[i] = measure_heat_potential(E, mu, g.point(i), t, 1e-8);
  });
  return f;
}

std::vector<Field> duhamel_apply(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                                 const Grid& g, const std::vector<double>& levels,
                                 const std::vector<Field>& u, double p) {
  std::vector<Field> linear(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k)
    linear[k] = linear_evolve(E, mu, g, levels[k]);
  return duhamel_apply_with_linear(E, linear, g, levels, u, p);
}

std::vector<Field> duhamel_apply_with_linear(const HeatKernelEvaluator& E,
                                             const std::vector<Field>& linear,
                                             const Grid& g,
                                             const std::vector<double>& levels,
                                             const std::vector<Field>& u, double p) {
  if (levels.size() != u.size() || levels.size() != linear.size())
    throw std::invalid_argument("duhamel_apply: level mismatch");
  const std::size_t nt = levels.size();
  const std::size_t nx = g.size();
  std::vector<Field> out(nt);
  // Nonlinear sources at every level.
  std::vector<std::vector<double>> up(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    up[k].resize(nx);
    for (std::size_t i = 0; i < nx; ++i) up[k][i] = std::pow(u[k].values[i], p);
  }
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = levels[k];
    out[k].time = t;
    out[k].values = linear[k].values;
    // Trapezoid in s over the available levels below t; the s = t endpoint
    // applies the kernel at lag 0, i.e. the identity.
    std::vector<std::vector<double>> integrand(k + 1);
    for (std::size_t m = 0; m <= k; ++m) {
      const double lag = t - levels[m];
      if (lag <= 0.0) {
        integrand[m] = up[m];
      } else {
        KernelMatrix A(E, g, lag);
        integrand[m] = A.apply(up[m]);
      }
    }
    for (std::size_t m = 0; m + 1 <= k; ++m) {
      const double ds = levels[m + 1] - levels[m];
      for (std::size_t i = 0; i < nx; ++i)
        out[k].values[i] += 0.5 * ds * (integrand[m][i] + integrand[m + 1][i]);
    }
    // Leading segment (0, levels[0]): rectangle with the first available slice.
    if (k + 1 >= 1) {
      const double ds0 = levels[0];
      for (std::size_t i = 0; i < nx; ++i) out[k].values[i] += ds0 * integrand[0][i];
    }
  }
  return out;
}

PicardResult picard_solve(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                          double p, double T, const IterationConfig& cfg) {
  PicardResult res;
  res.levels = graded_time_levels(T, cfg.time_levels);
  const std::size_t nt = res.levels.size();
  std::vector<Field> lin(nt);
  for (std::size_t k = 0; k < nt; ++k) lin[k] = linear_evolve(E, mu, g, res.levels[k]);
  std::vector<Field> u = lin;
  res.status = PicardStatus::MaxIters;
  res.monotonicity_defect = 0.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    std::vector<Field> next = duhamel_apply_with_linear(E, lin, g, res.levels, u, p);
    double change = 0.0, sup = 0.0, worst_drop = 0.0;
    for (std::size_t k = 0; k < nt; ++k)
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = next[k].values[i] - u[k].values[i];
        change = std::max(change, std::abs(d));
        worst_drop = std::min(worst_drop, d);
        sup = std::max(sup, next[k].values[i]);
      }
    res.monotonicity_defect = std::min(res.monotonicity_defect, worst_drop);
    if (worst_drop < -100.0 * cfg.tolerance)
      throw std::logic_error("picard_solve: monotone iteration dropped by " +
                             std::to_string(worst_drop) + "; quadrature inconsistency");
    res.sup_history.push_back(sup);
    u = std::move(next);
    res.iterations = it;
    res.final_change = change;
    if (sup > cfg.ceiling) {
      res.status = PicardStatus::CeilingHit;
      break;
    }
    if (change < cfg.tolerance) {
      res.status = PicardStatus::Converged;
      break;
    }
  }
  res.solution = std::move(u);
  return res;
}

double supersolution_check(const HeatKernelEvaluator& E, const RadonMeasure& mu, const Grid& g,
                           const std::vector<double>& levels, const std::vector<Field>& u_bar,
                           double p) {
  const std::vector<Field> psi = duhamel_apply(E, mu, g, levels, u_bar, p);
  double min_defect = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < levels.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i)
      min_defect = std::min(min_defect, u_bar[k].values[i] - psi[k].values[i]);
  return min_defect;
}

BlowupResult blowup_probe(const HeatKernelEvaluator& E, const Field& u0, const Grid& g,
                          double p, double horizon, int steps, const IterationConfig& cfg) {
  BlowupResult res;
  res.horizon = horizon;
  double dt = horizon / steps;
  KernelMatrix A(E, g, dt);
  std::vector<double> u = u0.values;
  double t = 0.0;
  const double pm1 = p - 1.0;
  while (t < horizon - 1e-15 * horizon) {
    // Diffusion substep.
    u = A.apply(u);
    // Exact reaction substep; a singularity inside dt means blow-up between
    // t and t+dt: refine dt down to the floor to localize it.
    double local_dt = dt;
    bool singular = false;
    for (double v : u)
      if (v > 0.0 && std::pow(v, -pm1) <= pm1 * local_dt) singular = true;
    if (singular) {
      double t_local = 0.0;
      while (local_dt > cfg.dt_floor) {
        local_dt *= 0.5;
        bool hit = false;
        for (double& v : u) {
          if (v <= 0.0) continue;
          const double base = std::pow(v, -pm1) - pm1 * local_dt;
          if (base <= 0.0) {
            hit = true;
            break;
          }
        }
        if (!hit) {
          for (double& v : u)
            if (v > 0.0) v = std::pow(std::pow(v, -pm1) - pm1 * local_dt, -1.0 / pm1);
          t_local += local_dt;
        }
      }
      res.blew_up = true;
      res.blow_time = t + t_local;
      res.final_sup = *std::max_element(u.begin(), u.end());
      return res;
    }
    for (double& v : u)
      if (v > 0.0) v = std::pow(std::pow(v, -pm1) - pm1 * dt, -1.0 / pm1);
    t += dt;
    const double sup = *std::max_element(u.begin(), u.end());
    if (sup > cfg.ceiling) {
      res.blew_up = true;
      res.blow_time = t;
      res.final_sup = sup;
      return res;
    }
  }
  res.blew_up = false;
  res.final_sup = *std::max_element(u.begin(), u.end());
  return res;
}

ThresholdResult threshold_bisect(const std::function<Field(double)>& family,
                                 const HeatKernelEvaluator& E, const Grid& g, double p,
                                 double horizon, int steps, double C_lo_init,
                                 double C_hi_init, double rel_width,
                                 const IterationConfig& cfg) {
  auto probe = [&](double C) {
    return blowup_probe(E, family(C), g, p, horizon, steps, cfg).blew_up;
  };
  double lo = C_lo_init, hi = C_hi_init;
  ThresholdResult res;
  bool lo_blows = probe(lo);
  bool hi_blows = probe(hi);
  res.trajectory.push_back({lo, lo_blows});
  res.trajectory.push_back({hi, hi_blows});
  int guard = 0;
  while (lo_blows && guard++ < 40) {
    lo *= 0.5;
    lo_blows = probe(lo);
    res.trajectory.push_back({lo, lo_blows});
  }
  guard = 0;
  while (!hi_blows && guard++ < 40) {
    hi *= 2.0;
    hi_blows = probe(hi);
    res.trajectory.push_back({hi, hi_blows});
  }
  if (lo_blows || !hi_blows)
    throw std::runtime_error("threshold_bisect: could not bracket the threshold");
  while ((hi - lo) / lo > rel_width) {
    const double mid = std::sqrt(lo * hi);
    const bool blows = probe(mid);
    res.trajectory.push_back({mid, blows});
    if (blows)
      hi = mid;
    else
      lo = mid;
  }
  res.C_lo = lo;
  res.C_hi = hi;
  std::sort(res.trajectory.begin(), res.trajectory.end());
  for (std::size_t i = 1; i < res.trajectory.size(); ++i)
    if (res.trajectory[i - 1].second && !res.trajectory[i].second) res.monotone = false;
  return res;
}

std::vector<double> trace_pairings(const Grid& g, const std::vector<Field>& fields,
                                   const std::function<double(const Point&)>& psi) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += psi(g.point(i)) * f.values[i] * g.weights[i];
    out.push_back(s);
  }
  return out;
}

double measure_pairing(const RadonMeasure& mu, const ModelManifold& M,
                       const std::function<double(const Point&)>& psi) {
  const int N = M.dim();
  switch (mu.variant()) {
    case MeasureVariant::Atomic: {
      double s = 0.0;
      for (const auto& a : mu.atoms()) s += a.weight * psi(a.position);
      return s;
    }
    case MeasureVariant::Radial: {
      const double diam = M.diameter();
      double cut = mu.radial_cutoff();
      if (std::isfinite(diam)) cut = std::min(cut, diam);
      if (!std::isfinite(cut))
        throw std::invalid_argument("measure_pairing: unbounded radial support");
      if (N == 1) {
        const bool circle = M.kind() == ManifoldKind::Circle;
        const double hi = circle ? std::min(cut, M_PI / std::sqrt(M.curvature_scale())) : cut;
        return integrate(
                   [&](double y) {
                     return psi(Point({y})) * mu.radial_profile(std::abs(y));
                   },
                   -hi, 0.0, 1e-9, 1e-300) +
               integrate(
                   [&](double y) {
                     return psi(Point({y})) * mu.radial_profile(std::abs(y));
                   },
                   0.0, hi, 1e-9, 1e-300);
      }
      // psi assumed radial for N >= 2 pairings.
      const double area = unit_sphere_area(N);
      return integrate(
          [&](double r) {
            return psi(axis_point(N, r)) * mu.radial_profile(r) * area *
                   std::pow(radial_lambda(M, r), N - 1);
          },
          0.0, cut, 1e-9, 1e-300);
    }
    case MeasureVariant::Grid:
    case MeasureVariant::Cantor: {
      const auto cells =
          mu.variant() == MeasureVariant::Grid ? mu.grid_cells() : mu.cantor_cells();
      double s = 0.0;
      for (const auto& c : cells) s += c.weight * c.value * psi(c.center);
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

double test_function_constant(double p) {
  // Young split of u phi^{(p+1)/(p-1)} k g <= u^p phi^{2p/(p-1)} + C (phi g)^{p'}
  // with k = 2p/(p-1): C = k^{p'} p^{-p'/p} / p'.
  const double pp = p / (p - 1.0);  // conjugate exponent
  const double k = 2.0 * p / (p - 1.0);
  return std::pow(k, pp) * std::pow(p, -pp / p) / pp;
}

TestFunctionDefect test_function_defect(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                                        double rho, double T, double p) {
  const ModelManifold& M = E.manifold();
  const int N = M.dim();
  const double rho_T = M.threshold_radii(T).rho_T;
  if (!(rho > 0.0) || !(rho < rho_T))
    throw std::invalid_argument("test_function_defect: need 0 < rho < rho_T");
  const double q = 2.0 * p / (p - 1.0);

  auto phi0 = [&](double d) {
    const double Phi = rho * rho / (d * d) - 1.0;
    return cutoff_rise(Phi);
  };
  double lhs = 0.0;
  switch (mu.variant()) {
    case MeasureVariant::Atomic: {
      for (const auto& a : mu.atoms()) {
        const double d = M.geodesic_distance(a.position, axis_point(N, 0.0));
        const double v = d == 0.0 ? 1.0 : phi0(d);
        lhs += a.weight * std::pow(v, q);
      }
      break;
    }
    case MeasureVariant::Radial: {
      const double cut = std::min(rho, mu.radial_cutoff());
      if (N == 1) {
        lhs = 2.0 * integrate([&](double r) { return std::pow(phi0(r), q) *
                                                     mu.radial_profile(r); },
                              0.0, cut, 1e-9, 1e-300);
      } else {
        const double area = unit_sphere_area(N);
        lhs = integrate(
            [&](double r) {
              return std::pow(phi0(r), q) * mu.radial_profile(r) * area *
                     std::pow(radial_lambda(M, r), N - 1);
            },
            0.0, cut, 1e-9, 1e-300);
      }
      break;
    }
    default: {
      const auto cells =
          mu.variant() == MeasureVariant::Grid ? mu.grid_cells() : mu.cantor_cells();
      for (const auto& c : cells) {
        const double d = M.geodesic_distance(c.center, axis_point(N, 0.0));
        lhs += c.weight * c.value * std::pow(d == 0.0 ? 1.0 : phi0(d), q);
      }
    }
  }

  // Space-time integral of phi^{p'} ((phi_t + Delta phi)^-)^{p'} over the
  // transition shell rho^2/2 < d^2 + t < rho^2.
  const double pp = p / (p - 1.0);
  auto negative_part_term = [&](double d, double t) {
    const double w = d * d + t;
    const double Phi = rho * rho / w - 1.0;
    const double e1 = cutoff_rise_d1(Phi);
    const double e2 = cutoff_rise_d2(Phi);
    if (e1 == 0.0 && e2 == 0.0) return 0.0;
    const double Phi_t = -rho * rho / (w * w);
    const double grad2 = 4.0 * std::pow(rho, 4) * d * d / std::pow(w, 4);
    const double lap_d = N >= 2 && d > 0.0 ? M.laplacian_distance(d) : 0.0;
    const double lap_Phi =
        8.0 * rho * rho * d * d / std::pow(w, 3) -
        2.0 * rho * rho / (w * w) - 2.0 * rho * rho / (w * w) * d * lap_d;
    const double heat = e1 * Phi_t + e2 * grad2 + e1 * lap_Phi;
    const double neg = std::max(-heat, 0.0);
    if (neg == 0.0) return 0.0;
    const double phi = cutoff_rise(Phi);
    return std::pow(phi, pp) * std::pow(neg, pp);
  };
  const double area = N == 1 ? 2.0 : unit_sphere_area(N);
  auto space_integral = [&](double t) {
    if (t >= rho * rho) return 0.0;
    const double d_hi = std::sqrt(rho * rho - t);
    return integrate(
        [&](double d) {
          const double vol = N == 1 ? 1.0 : std::pow(radial_lambda(M, d), N - 1);
          return negative_part_term(d, t) * area * vol;
        },
        0.0, d_hi, 1e-8, 1e-300);
  };
  const double rhs_raw = integrate(space_integral, 0.0, rho * rho, 1e-7, 1e-300);

  TestFunctionDefect out;
  out.lhs = lhs;
  out.rhs_raw = rhs_raw;
  out.rhs = test_function_constant(p) * rhs_raw;
  out.pass = out.lhs <= out.rhs;
  return out;
}

}  // namespace fujitalab
