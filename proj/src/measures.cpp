#include "fujitalab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

// Polar angle of the cap {theta : dist(z_at_d, point_at(r,theta)) < rho}
// around the axis through z; returns 0 (empty) .. pi (full circle of
// directions).
double cap_angle(const ModelManifold& M, double r, double d, double rho) {
  if (d <= 0.0) return r < rho ? M_PI : 0.0;
  if (r <= 0.0) return d < rho ? M_PI : 0.0;
  const double kappa = M.curvature_scale();
  double c;  // cos(theta*)
  switch (M.kind()) {
    case ManifoldKind::Euclidean:
      c = (r * r + d * d - rho * rho) / (2.0 * r * d);
      break;
    case ManifoldKind::Sphere: {
      const double s = std::sqrt(kappa);
      const double den = std::sin(s * r) * std::sin(s * d);
      if (den == 0.0) return std::abs(r - d) < rho ? M_PI : 0.0;
      c = (std::cos(s * r) * std::cos(s * d) - std::cos(s * rho)) / den;
      break;
    }
    case ManifoldKind::Hyperbolic: {
      const double s = std::sqrt(kappa);
      const double den = std::sinh(s * r) * std::sinh(s * d);
      if (den == 0.0) return std::abs(r - d) < rho ? M_PI : 0.0;
      c = (std::cosh(s * r) * std::cosh(s * d) - std::cosh(s * rho)) / den;
      break;
    }
    default:
      throw std::invalid_argument("cap_angle: unsupported manifold");
  }
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return M_PI;
  return std::acos(c);
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
      throw std::invalid_argument("radial_lambda: unsupported manifold");
  }
}

// integral over (0, theta*) of sin^{N-2}
double cap_measure(int N, double theta_star) {
  if (N == 2) return theta_star;
  if (N == 3) return 1.0 - std::cos(theta_star);
  return integrate([&](double t) { return std::pow(std::sin(t), N - 2); }, 0.0, theta_star,
                   1e-10);
}

// Overlap length of [a,b] with [lo,hi].
double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace

// --- cutoffs ---------------------------------------------------------------

double smoothstep_quintic(double u) {
  u = clamp01(u);
  return clamp01(u * u * u * (10.0 + u * (-15.0 + 6.0 * u)));
}

double smoothstep_quintic_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

double smoothstep_quintic_d2(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

double cutoff_rise(double tau) { return smoothstep_quintic(tau); }
double cutoff_rise_d1(double tau) { return smoothstep_quintic_d1(tau); }
double cutoff_rise_d2(double tau) { return smoothstep_quintic_d2(tau); }

double cutoff_profile(double z) { return 1.0 - smoothstep_quintic(2.0 * z - 1.0); }

// --- log weight --------------------------------------------------------------

double phi_log(double rho, double p) {
  if (!(rho > 0.0)) throw std::domain_error("phi_log: rho > 0");
  if (!(p > 1.0)) throw std::domain_error("phi_log: p > 1");
  return std::pow(std::log(M_E + 1.0 / rho), -1.0 / (p - 1.0));
}

double log_phi_log(double log_rho, double p) {
  // log(e + e^{-log rho}) computed stably.
  const double L = -log_rho;
  double inner;
  if (L > 1.0)
    inner = L + std::log1p(std::exp(1.0 - L));
  else
    inner = std::log(M_E + std::exp(L));
  return -std::log(inner) / (p - 1.0);
}

double phi_pow_pm1_from_L(double L) {
  double inner;
  if (L > 1.0)
    inner = L + std::log1p(std::exp(1.0 - L));
  else
    inner = std::log(M_E + std::exp(L));
  return 1.0 / inner;
}

LogWeightExponents default_log_weight_exponents(int N, double p) {
  LogWeightExponents e;
  e.alpha = 1.0 / (p - 1.0);  // in (0, 2/(p-1))
  const double expo = N - 2.0 / (p - 1.0);
  e.beta = expo > 0.0 ? 0.5 * expo : 0.0;
  return e;
}

double log_weight_monotonicity_witness(int N, double p, const LogWeightExponents& e) {
  const double expo = N - 2.0 / (p - 1.0);
  double prev_phi = 0.0, prev_a = 0.0, prev_b = 0.0, prev_c = 0.0;
  bool first = true;
  for (int i = 0; i <= 240; ++i) {
    const double rho = std::pow(10.0, -6.0 + 12.0 * i / 240.0);
    const double f = phi_log(rho, p);
    const double a = std::pow(rho, expo) * f;        // increasing
    const double b = std::pow(rho, -e.alpha) * f;    // decreasing
    const double c = e.beta > 0.0 ? std::pow(rho, e.beta) * f : 1.0;  // increasing
    if (!first) {
      if (f <= prev_phi) return rho;
      if (a <= prev_a) return rho;
      if (b >= prev_b) return rho;
      if (e.beta > 0.0 && c <= prev_c) return rho;
    }
    prev_phi = f;
    prev_a = a;
    prev_b = b;
    prev_c = c;
    first = false;
  }
  return 0.0;
}

// --- HPair --------------------------------------------------------------------

HPair HPair::make(double p, int N, double alpha_or_beta, double log_offset_a) {
  const double p_F = fujita_exponent(N);
  if (p < p_F - 1e-12) throw std::invalid_argument("HPair: requires p >= p_F");
  HPair h;
  h.p_ = p;
  if (p > p_F + 1e-12) {
    if (!(alpha_or_beta > 1.0) || !(alpha_or_beta < p))
      throw std::invalid_argument("HPair: alpha must satisfy 1 < alpha < p");
    h.critical_ = false;
    h.exponent_ = alpha_or_beta;
    return h;
  }
  const double beta = alpha_or_beta;
  if (!(beta > 0.0) || !(beta < 0.5 * N))
    throw std::invalid_argument("HPair: beta must satisfy 0 < beta < N/2");
  if (!(log_offset_a > std::exp(static_cast<double>(N))))
    throw std::invalid_argument("HPair: logOffsetA must exceed e^N");
  // z^{p-1} (log(A+z))^{-beta} must be strictly increasing.
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double z = std::pow(10.0, -6.0 + 12.0 * i / 200.0);
    const double val = (p - 1.0) * std::log(z) - beta * std::log(std::log(log_offset_a + z));
    if (i > 0 && val <= prev) {
      std::ostringstream os;
      os << "HPair: z^{p-1}(log(A+z))^{-beta} not increasing; witness z = " << z;
      throw std::invalid_argument(os.str());
    }
    prev = val;
  }
  h.critical_ = true;
  h.exponent_ = beta;
  h.log_offset_a_ = log_offset_a;
  return h;
}

HPair HPair::make_default(double p, int N) {
  const double p_F = fujita_exponent(N);
  if (p > p_F + 1e-12) {
    // alpha must also keep h(f~) locally integrable: alpha < N(p-1)/2.
    const double cap = std::min(p, 0.5 * N * (p - 1.0));
    return make(p, N, 0.5 * (1.0 + cap), 0.0);
  }
  const double beta = 0.25 * N;
  const double A = std::max(std::exp(static_cast<double>(N)) * 1.0001,
                            std::exp(beta / (p - 1.0)) * M_E);
  return make(p, N, beta, A);
}

double HPair::operator()(double z) const {
  if (z < 0.0) throw std::domain_error("HPair: z >= 0");
  if (!critical_) return std::pow(z, exponent_);
  if (z == 0.0) return 0.0;
  return z * std::pow(std::log(log_offset_a_ + z), exponent_);
}

double HPair::inverse(double y) const {
  if (y < 0.0) throw std::domain_error("HPair::inverse: y >= 0");
  if (!critical_) return std::pow(y, 1.0 / exponent_);
  if (y == 0.0) return 0.0;
  // h(z) >= z log(A)^beta >= z, so the root lies in (0, y].
  auto g = [&](double z) { return (*this)(z)-y; };
  double hi = std::max(y, 1e-300);
  if (g(hi) < 0.0) {
    while (g(hi) < 0.0) hi *= 2.0;
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// --- RadonMeasure ------------------------------------------------------------

RadonMeasure RadonMeasure::zero() {
  RadonMeasure m;
  m.variant_ = MeasureVariant::Atomic;
  m.name_ = "zero";
  return m;
}

RadonMeasure RadonMeasure::atomic(std::vector<Atom> atoms) {
  for (const auto& a : atoms)
    if (a.weight < 0.0) throw std::invalid_argument("atomic: weights >= 0");
  RadonMeasure m;
  m.variant_ = MeasureVariant::Atomic;
  m.atoms_ = std::move(atoms);
  m.name_ = "atomic";
  if (!m.atoms_.empty()) m.dim_ = static_cast<int>(m.atoms_[0].position.x.size());
  return m;
}

RadonMeasure RadonMeasure::dirac(Point at, double mass) {
  return atomic({Atom{std::move(at), mass}});
}

RadonMeasure RadonMeasure::radial(std::function<double(double)> profile, double cutoff,
                                  bool decreasing, std::string name) {
  RadonMeasure m;
  m.variant_ = MeasureVariant::Radial;
  m.profile_ = std::move(profile);
  m.cutoff_ = cutoff;
  m.decreasing_ = decreasing;
  m.name_ = std::move(name);
  return m;
}

RadonMeasure RadonMeasure::lebesgue() {
  return radial([](double) { return 1.0; }, kInf, false, "lebesgue");
}

RadonMeasure RadonMeasure::uniform(double density, double cutoff) {
  if (density < 0.0) throw std::invalid_argument("uniform: density >= 0");
  return radial([density](double) { return density; }, cutoff, false, "uniform");
}

RadonMeasure RadonMeasure::grid(std::vector<GridCell> cells) {
  for (const auto& c : cells)
    if (c.value < 0.0 || c.weight < 0.0)
      throw std::invalid_argument("grid: values and weights >= 0");
  RadonMeasure m;
  m.variant_ = MeasureVariant::Grid;
  m.cells_ = std::move(cells);
  m.name_ = "grid";
  if (!m.cells_.empty()) m.dim_ = static_cast<int>(m.cells_[0].center.x.size());
  return m;
}

RadonMeasure RadonMeasure::cantor(const CantorSet& set, int level, const ModelManifold& M) {
  if (level < 0 || level > set.representable_levels)
    throw std::invalid_argument(
        "cantor: level must be representable (deeper levels only exist in log form)");
  const int N = M.dim();
  if (N != set.N) throw std::invalid_argument("cantor: dimension mismatch");
  const double rho_inf = M.rho_infinity();
  const double a = std::min(std::isfinite(rho_inf) ? rho_inf : 1.0, 1.0) / std::sqrt(N);
  if (!(a > 0.0)) throw std::invalid_argument("cantor: chart too small");
  RadonMeasure m;
  m.variant_ = MeasureVariant::Cantor;
  m.cantor_scale_ = a;
  m.cantor_level_ = level;
  m.dim_ = N;
  m.name_ = "cantor_f" + std::to_string(level);
  std::vector<CantorInterval> scaled;
  for (const auto& iv : set.intervals[level]) scaled.push_back({iv.a * a, iv.b * a});
  m.cantor_axes_.assign(N, scaled);
  return m;
}

double RadonMeasure::radial_profile(double r) const {
  if (variant_ != MeasureVariant::Radial)
    throw std::logic_error("radial_profile: not a radial measure");
  if (r > cutoff_) return 0.0;
  return profile_(std::max(r, 1e-300));
}

std::vector<GridCell> RadonMeasure::cantor_cells() const {
  if (variant_ != MeasureVariant::Cantor) throw std::logic_error("cantor_cells: wrong variant");
  std::vector<GridCell> cells;
  const int N = dim_;
  if (N == 1) {
    for (const auto& iv : cantor_axes_[0]) {
      GridCell c;
      c.center = Point({0.5 * (iv.a + iv.b)});
      c.weight = iv.b - iv.a;
      c.value = 1.0;
      cells.push_back(c);
    }
    return cells;
  }
  for (const auto& ix : cantor_axes_[0]) {
    for (const auto& iy : cantor_axes_[1]) {
      GridCell c;
      c.center = Point({0.5 * (ix.a + ix.b), 0.5 * (iy.a + iy.b)});
      c.weight = (ix.b - ix.a) * (iy.b - iy.a);
      c.value = 1.0;
      cells.push_back(c);
    }
  }
  return cells;
}

bool RadonMeasure::is_zero() const {
  switch (variant_) {
    case MeasureVariant::Atomic: {
      for (const auto& a : atoms_)
        if (a.weight > 0.0) return false;
      return true;
    }
    case MeasureVariant::Radial: {
      const double hi = std::isfinite(cutoff_) ? cutoff_ : 1.0;
      for (int i = 0; i <= 32; ++i) {
        const double r = hi * std::pow(10.0, -8.0 * (1.0 - i / 32.0));
        if (radial_profile(r) > 0.0) return false;
      }
      return true;
    }
    case MeasureVariant::Grid: {
      for (const auto& c : cells_)
        if (c.value > 0.0 && c.weight > 0.0) return false;
      return true;
    }
    case MeasureVariant::Cantor:
      return cantor_axes_.empty() || cantor_axes_[0].empty();
  }
  return true;
}

double RadonMeasure::total_mass_hint() const {
  switch (variant_) {
    case MeasureVariant::Atomic: {
      double s = 0.0;
      for (const auto& a : atoms_) s += a.weight;
      return s;
    }
    case MeasureVariant::Radial:
      return is_zero() ? 0.0 : 1.0;
    case MeasureVariant::Grid: {
      double s = 0.0;
      for (const auto& c : cells_) s += c.weight * c.value;
      return s;
    }
    case MeasureVariant::Cantor: {
      double s = 1.0;
      for (const auto& axis : cantor_axes_) {
        double len = 0.0;
        for (const auto& iv : axis) len += iv.b - iv.a;
        s *= len;
      }
      return s;
    }
  }
  return 0.0;
}

std::vector<Point> RadonMeasure::candidate_centers(const ModelManifold& M) const {
  std::vector<Point> out;
  const int N = M.dim();
  switch (variant_) {
    case MeasureVariant::Atomic:
      for (const auto& a : atoms_) out.push_back(a.position);
      if (out.empty()) out.push_back(axis_point(N, 0.0));
      break;
    case MeasureVariant::Radial: {
      out.push_back(axis_point(N, 0.0));
      const double hi = std::isfinite(cutoff_) ? cutoff_ : 1.0;
      out.push_back(axis_point(N, 0.25 * hi));
      out.push_back(axis_point(N, 0.5 * hi));
      break;
    }
    case MeasureVariant::Grid: {
      const std::size_t stride = std::max<std::size_t>(1, cells_.size() / 16);
      for (std::size_t i = 0; i < cells_.size(); i += stride) out.push_back(cells_[i].center);
      break;
    }
    case MeasureVariant::Cantor: {
      for (const auto& iv : cantor_axes_[0]) {
        if (N == 1) {
          out.push_back(Point({iv.a}));
          out.push_back(Point({0.5 * (iv.a + iv.b)}));
        } else {
          out.push_back(Point({iv.a, cantor_axes_[1].front().a}));
          out.push_back(Point({0.5 * (iv.a + iv.b), 0.5 * (cantor_axes_[1].front().a +
                                                           cantor_axes_[1].front().b)}));
        }
        if (out.size() > 64) break;
      }
      break;
    }
  }
  return out;
}

// --- profiles ----------------------------------------------------------------

RadonMeasure critical_profile(const ModelManifold& M, double p, double T) {
  const int N = M.dim();
  const double p_F = fujita_exponent(N);
  if (p < p_F - 1e-12) throw std::invalid_argument("critical_profile: requires p >= p_F");
  const double rho_T = M.threshold_radii(T).rho_T;
  if (p > p_F + 1e-12) {
    const double expo = 2.0 / (p - 1.0);
    return RadonMeasure::radial(
        [expo, rho_T](double r) {
          return std::pow(r, -expo) * cutoff_profile(r / rho_T);
        },
        rho_T, true, "critical_profile");
  }
  return RadonMeasure::radial(
      [N, rho_T](double r) {
        const double q = rho_T / r;
        return std::pow(q, N) * std::pow(std::log(M_E * M_E + q), -0.5 * N - 1.0) *
               cutoff_profile(r / rho_T);
      },
      rho_T, true, "critical_profile");
}

RadonMeasure singular_profile(const ModelManifold& M, double p, double C) {
  const int N = M.dim();
  const double p_F = fujita_exponent(N);
  if (p < p_F - 1e-12) throw std::invalid_argument("singular_profile: requires p >= p_F");
  if (!(C > 0.0) && C != 0.0) throw std::invalid_argument("singular_profile: C >= 0");
  const double rho_inf = M.rho_infinity();
  const double diam = M.diameter();
  const double cut = std::isfinite(diam) ? diam : kInf;
  auto core = [N, p, p_F](double d) {
    if (p > p_F + 1e-12) return std::pow(d, -2.0 / (p - 1.0));
    return std::pow(d, -static_cast<double>(N)) *
           std::pow(std::log(M_E + 1.0 / d), -0.5 * N - 1.0);
  };
  return RadonMeasure::radial(
      [core, C, rho_inf](double d) {
        if (std::isfinite(rho_inf) && d >= rho_inf) return C * core(rho_inf);
        return C * core(d);
      },
      cut, true, "singular_profile");
}

// --- ball mass -----------------------------------------------------------------

double ball_mass(const RadonMeasure& mu, const ModelManifold& M, const Point& z, double rho,
                 double rel_tol) {
  if (!(rho > 0.0)) throw std::invalid_argument("ball_mass: rho > 0");
  const int N = M.dim();
  switch (mu.variant()) {
    case MeasureVariant::Atomic: {
      double s = 0.0;
      for (const auto& a : mu.atoms())
        if (M.geodesic_distance(z, a.position) < rho) s += a.weight;
      return s;
    }
    case MeasureVariant::Radial: {
      const double d0 = M.geodesic_distance(z, axis_point(N, 0.0));
      const double diam = M.diameter();
      double cut = std::min(mu.radial_cutoff(), d0 + rho);
      if (std::isfinite(diam)) cut = std::min(cut, diam);
      const double lo = std::max(0.0, d0 - rho);
      if (lo >= cut) return 0.0;
      if (N == 1) {
        // Line or circle: the ball around z covers (z-rho, z+rho); split by sign.
        const double zc = z.x[0];
        double mass = 0.0;
        if (M.kind() == ManifoldKind::Circle) {
          const double R = 1.0 / std::sqrt(M.curvature_scale());
          const double half = std::min(rho, M_PI * R);
          auto f = [&](double y) {
            double w = std::fmod(std::abs(y), 2.0 * M_PI * R);
            w = std::min(w, 2.0 * M_PI * R - w);
            return mu.radial_profile(w);
          };
          mass = integrate(f, zc - half, zc + half, rel_tol, 1e-300);
        } else {
          auto f = [&](double y) { return mu.radial_profile(std::abs(y)); };
          const double a = zc - rho, b = zc + rho;
          // split at 0 where the profile may be singular
          if (a < 0.0 && b > 0.0)
            mass = integrate(f, a, 0.0, rel_tol, 1e-300) + integrate(f, 0.0, b, rel_tol, 1e-300);
          else
            mass = integrate(f, a, b, rel_tol, 1e-300);
        }
        return mass;
      }
      const double ring = unit_sphere_area(N - 1);
      auto f = [&](double r) {
        const double prof = mu.radial_profile(r);
        if (prof == 0.0) return 0.0;
        const double theta = cap_angle(M, r, d0, rho);
        if (theta <= 0.0) return 0.0;
        return prof * std::pow(radial_lambda(M, r), N - 1) * ring * cap_measure(N, theta);
      };
      return integrate(f, lo, cut, rel_tol, 1e-300);
    }
    case MeasureVariant::Grid: {
      double s = 0.0;
      for (const auto& c : mu.grid_cells())
        if (M.geodesic_distance(z, c.center) < rho) s += c.weight * c.value;
      return s;
    }
    case MeasureVariant::Cantor: {
      if (N == 1) {
        // Exact interval overlap; volume density is 1 in dimension one.
        const double zc = z.x[0];
        double s = 0.0;
        for (const auto& iv : mu.cantor_axes()[0]) s += overlap(iv.a, iv.b, zc - rho, zc + rho);
        return s;
      }
      // Product cells against the metric ball, subdivided for resolution.
      double s = 0.0;
      for (const auto& cell : mu.cantor_cells()) {
        const int sub = 4;
        const double wx = std::sqrt(cell.weight);  // cells are squares per axis pair
        const double hx = wx / sub;
        for (int i = 0; i < sub; ++i)
          for (int j = 0; j < sub; ++j) {
            Point q({cell.center.x[0] + (i - (sub - 1) * 0.5) * hx,
                     cell.center.x[1] + (j - (sub - 1) * 0.5) * hx});
            if (M.geodesic_distance(z, q) < rho)
              s += hx * hx * M.volume_density(std::max(
                                1e-12, M.geodesic_distance(q, axis_point(N, 0.0))));
          }
      }
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

SupBallMass sup_ball_mass(const RadonMeasure& mu, const ModelManifold& M, double rho,
                          int scan_points) {
  if (!(rho > 0.0)) throw std::invalid_argument("sup_ball_mass: rho > 0");
  const int N = M.dim();
  SupBallMass out;
  out.argmax = axis_point(N, 0.0);
  if (mu.is_zero()) return out;

  std::vector<Point> candidates = mu.candidate_centers(M);
  // Structured scan along the first axis at the scale of rho and of the support.
  double span = rho;
  if (mu.variant() == MeasureVariant::Radial)
    span = std::min(std::isfinite(mu.radial_cutoff()) ? mu.radial_cutoff() : 4.0 * rho,
                    4.0 * rho);
  if (mu.variant() == MeasureVariant::Cantor) span = mu.cantor_scale();
  const double diam = M.diameter();
  if (std::isfinite(diam)) span = std::min(span, 0.5 * diam);
  for (int i = 0; i <= scan_points; ++i) {
    const double c = -span + 2.0 * span * i / scan_points;
    candidates.push_back(axis_point(N, c));
  }
  out.resolution = 2.0 * span / scan_points;

  double best = -1.0;
  Point best_pt = out.argmax;
  for (const auto& cand : candidates) {
    const double v = ball_mass(mu, M, cand, rho, 1e-8);
    if (v > best) {
      best = v;
      best_pt = cand;
    }
  }
  // Local refinement around the best center.
  double step = out.resolution;
  for (int pass = 0; pass < 12; ++pass) {
    bool moved = false;
    for (int axis = 0; axis < std::min(N, 2); ++axis) {
      for (double dir : {-1.0, 1.0}) {
        Point q = best_pt;
        q.x[axis] += dir * step;
        if (std::isfinite(diam) && std::abs(q.x[axis]) > 0.999 * M.injectivity_radius())
          continue;
        const double v = ball_mass(mu, M, q, rho, 1e-8);
        if (v > best) {
          best = v;
          best_pt = q;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
    out.resolution = std::min(out.resolution, step);
  }
  out.value = std::max(best, 0.0);
  out.argmax = best_pt;
  return out;
}

double uloc_norm(const RadonMeasure& u0, double q, double rho, const ModelManifold& M,
                 int scan_points) {
  if (!(q >= 1.0)) throw std::invalid_argument("uloc_norm: q >= 1");
  if (u0.is_zero()) return 0.0;
  RadonMeasure powered = u0;
  switch (u0.variant()) {
    case MeasureVariant::Radial: {
      powered = RadonMeasure::radial(
          [&u0, q](double r) { return std::pow(u0.radial_profile(r), q); }, u0.radial_cutoff(),
          u0.radial_decreasing(), u0.name() + "^q");
      break;
    }
    case MeasureVariant::Grid: {
      auto cells = u0.grid_cells();
      for (auto& c : cells) c.value = std::pow(c.value, q);
      powered = RadonMeasure::grid(std::move(cells));
      break;
    }
    case MeasureVariant::Cantor:
      break;  // indicator: u0^q = u0
    case MeasureVariant::Atomic:
      throw std::invalid_argument("uloc_norm: atomic measures are not densities");
  }
  return std::pow(sup_ball_mass(powered, M, rho, scan_points).value, 1.0 / q);
}

// --- growth classification -----------------------------------------------------

namespace {

struct FitResult {
  double C;
  bool finite;
};

FitResult fit_constant(const std::vector<double>& rhos, const std::vector<double>& ratios) {
  FitResult out{0.0, true};
  if (ratios.empty()) return out;
  double cmax = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i)
    if (ratios[i] > cmax) {
      cmax = ratios[i];
      arg = i;
    }
  out.C = cmax;
  // Diverging as rho -> 0: the constant is attained in the smallest decade
  // and is still climbing there (vs. one decade up). rhos sorted increasing.
  std::size_t decade_up = rhos.size() - 1;
  for (std::size_t i = 0; i < rhos.size(); ++i)
    if (rhos[i] >= rhos.front() * 10.0) {
      decade_up = i;
      break;
    }
  const bool smallest_decade = rhos[arg] <= rhos.front() * 10.0;
  if (smallest_decade && ratios[decade_up] > 0.0 &&
      ratios.front() > 2.0 * ratios[decade_up])
    out.finite = false;
  return out;
}

}  // namespace

std::string GrowthVerdict::to_csv() const {
  std::ostringstream os;
  os << "rho,bound_name,mass,bound_value,fitted_C\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.rho << ',' << r.bound_name << ',' << r.mass << ',' << r.bound_value << ','
       << r.fitted_C << '\n';
  return os.str();
}

GrowthVerdict growth_classify(const RadonMeasure& mu, const ModelManifold& M, double p,
                              double T, double eps_suf, int rho_samples) {
  if (!(p > 1.0)) throw std::invalid_argument("growth_classify: p > 1");
  GrowthVerdict v;
  const int N = M.dim();
  const double expo = N - 2.0 / (p - 1.0);
  const auto tr = M.threshold_radii(T);
  const double rho_T = tr.rho_T;
  const double rho_inf = tr.rho_inf;

  if (mu.is_zero()) {
    v.C_subcritical = v.C_critical = v.C_supercritical = v.C_suf = v.C_nex = 0.0;
    return v;
  }

  // (i): single radius rho_T.
  const double mass_T = sup_ball_mass(mu, M, rho_T).value;
  v.C_subcritical = mass_T / std::pow(rho_T, expo);
  v.rows.push_back({rho_T, "nec_i", mass_T, std::pow(rho_T, expo), v.C_subcritical});

  std::vector<double> rhos, r_ii, r_iii, r_suf, r_nex;
  const double lo = rho_T * 1e-4;
  for (int i = 0; i < rho_samples; ++i) {
    const double rho = lo * std::pow(rho_T * 0.999 / lo, i / (rho_samples - 1.0));
    const double mass = sup_ball_mass(mu, M, rho, 48).value;
    rhos.push_back(rho);
    const double shape_ii = std::pow(std::log(M_E + rho_T / rho), -0.5 * N);
    const double shape_iii = std::pow(rho, expo);
    const double shape_suf =
        std::pow(rho, expo) * std::pow(std::log(M_E + rho_T / rho), -1.0 / (p - 1.0) - eps_suf);
    r_ii.push_back(mass / shape_ii);
    r_iii.push_back(mass / shape_iii);
    r_suf.push_back(mass / shape_suf);
    v.rows.push_back({rho, "nec_ii", mass, shape_ii, r_ii.back()});
    v.rows.push_back({rho, "nec_iii", mass, shape_iii, r_iii.back()});
    v.rows.push_back({rho, "suf", mass, shape_suf, r_suf.back()});
    if (rho < rho_inf) {
      const double shape_nex =
          std::pow(rho, expo) * std::pow(std::log(M_E + 1.0 / rho), -1.0 / (p - 1.0));
      r_nex.push_back(mass / shape_nex);
      v.rows.push_back({rho, "nex", mass, shape_nex, r_nex.back()});
    }
  }
  auto fii = fit_constant(rhos, r_ii);
  auto fiii = fit_constant(rhos, r_iii);
  auto fsuf = fit_constant(rhos, r_suf);
  auto fnex = fit_constant(rhos, r_nex);
  v.C_critical = fii.C;
  v.critical_finite = fii.finite;
  v.C_supercritical = fiii.C;
  v.supercritical_finite = fiii.finite;
  v.C_suf = fsuf.C;
  v.suf_finite = fsuf.finite;
  v.C_nex = fnex.C;
  v.nex_finite = fnex.finite;
  return v;
}

LumuReport lumu_bracket_check(const RadonMeasure& mu_f, const ModelManifold& M, double p,
                              double T, int rho_samples, double rho_min) {
  LumuReport rep;
  const int N = M.dim();
  const double p_F = fujita_exponent(N);
  const double rho_T = M.threshold_radii(T).rho_T;
  const double expo = N - 2.0 / (p - 1.0);
  double lo = kInf, hi = 0.0;
  for (int i = 0; i < rho_samples; ++i) {
    const double rho = rho_min * std::pow(rho_T * 0.999 / rho_min, i / (rho_samples - 1.0));
    // The profile is radially decreasing, so the sup over centers is attained
    // at the profile center; cross-checked against perturbed centers in tests.
    const double mass = ball_mass(mu_f, M, axis_point(N, 0.0), rho);
    double shape;
    if (p > p_F + 1e-12)
      shape = std::pow(rho, expo);
    else
      shape = std::pow(rho_T, N) * std::pow(std::log(M_E + rho_T / rho), -0.5 * N);
    const double ratio = mass / shape;
    rep.rho.push_back(rho);
    rep.mass.push_back(mass);
    rep.shape.push_back(shape);
    rep.ratio.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  rep.C_lower = lo;
  rep.C_upper = hi;
  rep.C_tightest = std::max(hi, lo > 0.0 ? 1.0 / lo : kInf);
  rep.bracket_ok = lo > 0.0 && std::isfinite(hi);
  return rep;
}

std::string LumuReport::to_csv() const {
  std::ostringstream os;
  os << "rho,bound_name,mass,bound_value,fitted_C\n";
  os.precision(17);
  for (std::size_t i = 0; i < rho.size(); ++i)
    os << rho[i] << ",profile_bracket," << mass[i] << ',' << shape[i] << ',' << ratio[i]
       << '\n';
  return os.str();
}

}  // namespace fujitalab
