#include "fujitalab/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fujitalab/measures.hpp"

namespace fujitalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gaussian_kernel(int N, double d, double t) {
  return std::pow(4.0 * M_PI * t, -0.5 * N) * std::exp(-d * d / (4.0 * t));
}

// Distance from the pole-axis configuration: z at polar radius r and angle
// theta from the axis through y, with y at radius d from the pole.
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

double radial_scale(const ModelManifold& M, double r) {
  // lambda(r): r, sin(sqrt(k) r)/sqrt(k), sinh(sqrt(k) r)/sqrt(k)
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
      throw std::invalid_argument("radial_scale: unsupported manifold");
  }
}

}  // namespace

HeatKernelEvaluator::HeatKernelEvaluator(ModelManifold manifold, KernelTruncation trunc,
                                         double small_time_switch)
    : M_(std::move(manifold)), trunc_(trunc), small_time_switch_(small_time_switch) {
  if (trunc_.tail_tol <= 0.0) throw std::invalid_argument("tail_tol must be > 0");
  const ManifoldKind k = M_.kind();
  const int N = M_.dim();
  const bool supported =
      k == ManifoldKind::Euclidean || k == ManifoldKind::Circle ||
      (k == ManifoldKind::Sphere && (N == 2 || N == 3)) ||
      (k == ManifoldKind::Hyperbolic && (N == 2 || N == 3));
  if (!supported)
    throw std::invalid_argument("heat kernel unsupported for (" + to_string(k) + ", N=" +
                                std::to_string(N) + ")");
}

double HeatKernelEvaluator::circle_kernel(double d, double t) const {
  // Unit-radius circle; d in [0, pi].
  if (t <= 1.0) {
    // Image sum around the circle.
    double sum = 0.0;
    const int kmax = 2 + static_cast<int>(std::ceil((55.0 * std::sqrt(t) + d) / (2.0 * M_PI)));
    for (int k = -kmax; k <= kmax; ++k) {
      const double s = d + 2.0 * M_PI * k;
      sum += std::exp(-s * s / (4.0 * t));
    }
    return sum / std::sqrt(4.0 * M_PI * t);
  }
  // Eigenfunction expansion for large times.
  double sum = 1.0;
  for (int m = 1; m <= trunc_.max_terms; ++m) {
    const double term = 2.0 * std::exp(-static_cast<double>(m) * m * t) * std::cos(m * d);
    sum += term;
    if (2.0 * std::exp(-static_cast<double>(m) * m * t) < trunc_.tail_tol) break;
  }
  return sum / (2.0 * M_PI);
}

double HeatKernelEvaluator::sphere_series(double d, double t) const {
  // Unit-curvature S^N, N in {2,3}; d in [0, pi].
  const int N = M_.dim();
  if (t < small_time_switch_) {
    if (N == 3) return sphere3_images(d, t);
    // Leading small-time approximation with the Van Vleck factor.
    const double vv = d < 1e-8 ? 1.0 : std::sqrt(d / std::sin(d));
    return std::pow(4.0 * M_PI * t, -1.0) * vv * std::exp(-d * d / (4.0 * t)) *
           std::exp(t / 4.0);
  }
  const double c = std::cos(d);
  if (N == 2) {
    double p_prev = 1.0, p_cur = c;
    double sum = 1.0 / (4.0 * M_PI);  // l = 0
    double abs_sum = sum;
    if (trunc_.max_terms > 1) {
      sum += 3.0 / (4.0 * M_PI) * std::exp(-2.0 * t) * c;
      abs_sum += 3.0 / (4.0 * M_PI) * std::exp(-2.0 * t);
    }
    for (int l = 2; l <= trunc_.max_terms; ++l) {
      const double p_next = ((2.0 * l - 1.0) * c * p_cur - (l - 1.0) * p_prev) / l;
      p_prev = p_cur;
      p_cur = p_next;
      const double decay = std::exp(-static_cast<double>(l) * (l + 1.0) * t);
      sum += (2.0 * l + 1.0) / (4.0 * M_PI) * decay * p_cur;
      abs_sum += (2.0 * l + 1.0) / (4.0 * M_PI) * decay;
      if ((2.0 * l + 1.0) * decay < trunc_.tail_tol) break;
    }
    // Far below the cancellation noise the series carries no information;
    // the Van Vleck leading term is positive and right to O(t) relative.
    if (sum < 64.0 * 1e-16 * abs_sum) {
      const double dc = std::min(d, M_PI - 0.05);
      const double vv = dc < 1e-8 ? 1.0 : std::sqrt(dc / std::sin(dc));
      return std::pow(4.0 * M_PI * t, -1.0) * vv * std::exp(-d * d / (4.0 * t)) *
             std::exp(t / 4.0);
    }
    return sum;
  }
  // N == 3: Gegenbauer C_l^1(cos d) = sin((l+1)d)/sin(d).
  const double sd = std::sin(d);
  double sum = 0.0, abs_sum = 0.0;
  const double geg_cap = d > 1e-7 ? 1.0 / std::abs(sd) : 1.0;
  for (int l = 0; l <= trunc_.max_terms; ++l) {
    const double decay = std::exp(-static_cast<double>(l) * (l + 2.0) * t);
    double geg;
    if (d < 1e-7) {
      geg = l + 1.0;
    } else {
      geg = std::sin((l + 1.0) * d) / sd;
    }
    sum += (l + 1.0) / (2.0 * M_PI * M_PI) * decay * geg;
    abs_sum += (l + 1.0) / (2.0 * M_PI * M_PI) * decay * std::max(geg_cap, l + 1.0);
    if ((l + 1.0) * decay < trunc_.tail_tol) break;
  }
  if (sum < 64.0 * 1e-16 * abs_sum) return sphere3_images(d, t);
  return sum;
}

double HeatKernelEvaluator::sphere3_images(double d, double t) const {
  // Exact image representation on the unit S^3.
  auto f_prime = [&](double s) {
    return std::exp(-s * s / (4.0 * t)) * (1.0 - s * s / (2.0 * t));
  };
  double ratio;
  if (d < 1e-6) {
    // limit of the paired images at the pole
    ratio = std::exp(-d * d / (4.0 * t));
    for (int n = 1; n <= 3; ++n) ratio += 2.0 * f_prime(2.0 * M_PI * n);
  } else if (d > M_PI - 1e-6) {
    // antipodal limit; images cancel pairwise to first order
    ratio = 0.0;
    for (int m = 1; m <= 5; m += 2) ratio += -2.0 * f_prime(m * M_PI);
  } else {
    const double sd = std::sin(d);
    double sum = 0.0;
    for (int n = -3; n <= 3; ++n) {
      const double s = d + 2.0 * M_PI * n;
      sum += s * std::exp(-s * s / (4.0 * t));
    }
    ratio = sum / sd;
  }
  return std::exp(t) * std::pow(4.0 * M_PI * t, -1.5) * ratio;
}

double HeatKernelEvaluator::h2_mckean(double d, double t) const {
  // Unit-curvature H^2. McKean's formula with the substitution s = d + u^2;
  // cosh s - cosh d = 2 sinh((s+d)/2) sinh((s-d)/2) keeps the integrand stable.
  const double pref = std::sqrt(2.0) * std::pow(4.0 * M_PI * t, -1.5) * std::exp(-t / 4.0);
  const double s_max = d + 56.0 * std::sqrt(t) + 4.0 * t;
  const double u_max = std::sqrt(std::max(s_max - d, 1e-4));
  auto integrand = [&](double u) {
    const double s = d + u * u;
    const double den =
        std::sqrt(2.0 * std::sinh(0.5 * (s + d)) * std::sinh(0.5 * (s - d)));
    if (den == 0.0) return 0.0;
    return 2.0 * u * s * std::exp(-s * s / (4.0 * t)) / den;
  };
  const double val = integrate(integrand, 0.0, u_max, 1e-11, 1e-320);
  return pref * val;
}

double HeatKernelEvaluator::kernel_radial(double d, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_radial: t must be > 0");
  d = std::abs(d);
  const int N = M_.dim();
  const double kappa = M_.curvature_scale();
  switch (M_.kind()) {
    case ManifoldKind::Euclidean:
      return gaussian_kernel(N, d, t);
    case ManifoldKind::Circle: {
      const double R = 1.0 / std::sqrt(kappa);
      return circle_kernel(d / R, t / (R * R)) / R;
    }
    case ManifoldKind::Sphere:
      return std::pow(kappa, 0.5 * N) * sphere_series(std::sqrt(kappa) * d, kappa * t);
    case ManifoldKind::Hyperbolic: {
      const double du = std::sqrt(kappa) * d, tu = kappa * t;
      if (N == 2) return kappa * h2_mckean(du, tu);
      // N == 3 closed form.
      const double ratio = du < 1e-8 ? 1.0 : du / std::sinh(du);
      return std::pow(kappa, 1.5) * std::pow(4.0 * M_PI * tu, -1.5) * ratio *
             std::exp(-tu - du * du / (4.0 * tu));
    }
    default:
      throw std::invalid_argument("kernel_radial: unsupported manifold");
  }
}

double HeatKernelEvaluator::kernel_eval(const Point& x, const Point& y, double t) const {
  return kernel_radial(M_.geodesic_distance(x, y), t);
}

std::function<double(double)> HeatKernelEvaluator::radial_functor(double t) const {
  // Only the McKean integral is expensive per evaluation.
  if (M_.kind() == ManifoldKind::Hyperbolic && M_.dim() == 2) {
    auto table = std::make_shared<RadialKernelTable>(*this, t);
    return [table](double d) { return (*table)(d); };
  }
  return [this, t](double d) { return kernel_radial(d, t); };
}

double HeatKernelEvaluator::effective_radius(double t) const {
  const double diam = M_.diameter();
  const double drift = M_.kind() == ManifoldKind::Hyperbolic
                           ? (M_.dim() - 1) * std::sqrt(M_.curvature_scale()) * t
                           : 0.0;
  return std::min(diam, 14.0 * std::sqrt(t) + 2.0 * drift + 1e-3);
}

double HeatKernelEvaluator::kernel_mass(double t, double rel_tol) const {
  const int N = M_.dim();
  const double r_max = effective_radius(t);
  if (N == 1) {
    return 2.0 * integrate([&](double r) { return kernel_radial(r, t); }, 0.0, r_max,
                           rel_tol * 0.1);
  }
  const double area = unit_sphere_area(N);
  const auto kt = radial_functor(t);
  return area * integrate(
                    [&](double r) {
                      return kt(r) * std::pow(radial_scale(M_, r), N - 1);
                    },
                    0.0, r_max, rel_tol * 0.1);
}

double HeatKernelEvaluator::semigroup_defect(double d, double s, double t,
                                             double rel_tol) const {
  if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("semigroup_defect: s,t > 0");
  const int N = M_.dim();
  const double direct = kernel_radial(d, s + t);
  double conv = 0.0;
  if (N == 1) {
    if (M_.kind() == ManifoldKind::Circle) {
      const double R = 1.0 / std::sqrt(M_.curvature_scale());
      auto wrap = [&](double u) {
        u = std::fmod(std::abs(u), 2.0 * M_PI * R);
        return std::min(u, 2.0 * M_PI * R - u);
      };
      conv = integrate(
          [&](double u) { return kernel_radial(wrap(u), s) * kernel_radial(wrap(u - d), t); },
          -M_PI * R, M_PI * R, rel_tol * 0.1);
    } else {
      const double lo = -effective_radius(s);
      const double hi = d + effective_radius(t);
      conv = integrate(
          [&](double u) { return kernel_radial(std::abs(u), s) * kernel_radial(std::abs(u - d), t); },
          lo, hi, rel_tol * 0.1);
    }
  } else {
    const auto ks = radial_functor(s);
    const auto kt = radial_functor(t);
    const double r_max = std::min(M_.diameter(), effective_radius(s) + d + effective_radius(t));
    const double ring = unit_sphere_area(N - 1);
    const double floor_abs = direct * rel_tol * 1e-3;
    auto inner = [&](double r) {
      const double weight =
          ring * r_max * std::max(std::pow(radial_scale(M_, r), N - 1) * ks(r), 1e-280);
      return integrate(
          [&](double theta) {
            const double w = third_side(M_, r, d, theta);
            const double sn = N == 2 ? 1.0 : std::sin(theta);
            return kt(w) * std::pow(sn, N - 2);
          },
          0.0, M_PI, rel_tol * 0.05, floor_abs / weight, 30);
    };
    conv = ring * integrate(
                      [&](double r) {
                        return ks(r) * std::pow(radial_scale(M_, r), N - 1) * inner(r);
                      },
                      0.0, r_max, rel_tol * 0.1, floor_abs / ring, 30);
  }
  return std::abs(conv - direct);
}

double HeatKernelEvaluator::harnack_ratio(const Point& x, const Point& y, const Point& z,
                                          double t) const {
  const double dyz = M_.geodesic_distance(y, z);
  if (dyz > std::sqrt(t) * (1.0 + 1e-12))
    throw std::invalid_argument("harnack_ratio: requires d(y,z) <= sqrt(t)");
  const double kappa = M_.curvature_scale();
  if (kappa > 0.0 && M_.dim() >= 2 && t >= M_PI * M_PI / kappa)
    throw std::invalid_argument("harnack_ratio: requires t < pi^2/kappa");
  return kernel_eval(x, y, t) / kernel_eval(x, z, 2.0 * t);
}

double HeatKernelEvaluator::scaling_ratio(const std::vector<double>& xi,
                                          const std::vector<double>& eta, double alpha,
                                          double beta, double t) const {
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("scaling_ratio: alpha in (0,1]");
  if (!(beta > 0.0)) throw std::invalid_argument("scaling_ratio: beta > 0");
  const double rho_inf = M_.rho_infinity();
  auto nrm = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double c : v) sum += c * c;
    return std::sqrt(sum);
  };
  if (nrm(xi) >= rho_inf || nrm(eta) >= rho_inf)
    throw std::invalid_argument("scaling_ratio: chart points must lie in B(0, rho_inf)");
  const double limit = std::min(M_.injectivity_radius(), M_.pi_over_4_sqrt_kappa());
  if (!(std::sqrt(t) < limit))
    throw std::invalid_argument("scaling_ratio: sqrt(t) outside the valid range");
  std::vector<double> axi(xi), aeta(eta);
  for (auto& c : axi) c *= alpha;
  for (auto& c : aeta) c *= alpha;
  const double num = kernel_eval(Point(axi), Point(aeta), beta * t);
  const double den = kernel_eval(Point(xi), Point(eta), beta * t / (9.0 * alpha * alpha));
  return num / den;
}

RadialKernelTable::RadialKernelTable(const HeatKernelEvaluator& E, double t, int nodes)
    : t_(t) {
  const double diam = E.manifold().diameter();
  double d_max = std::min(diam, 53.0 * std::sqrt(t) + 1e-3);
  d_max_ = d_max;
  std::vector<double> xs(nodes), ys(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double d = d_max * i / (nodes - 1.0);
    xs[i] = d;
    const double k = E.kernel_radial(d, t);
    ys[i] = std::log(std::max(k, 1e-320));
  }
  log_k_ = CubicSpline(std::move(xs), std::move(ys));
}

double RadialKernelTable::operator()(double d) const {
  d = std::abs(d);
  if (d >= d_max_) {
    // Gaussian tail below the table resolution.
    const double edge = std::exp(log_k_(d_max_));
    return edge * std::exp(-(d * d - d_max_ * d_max_) / (4.0 * t_));
  }
  return std::exp(log_k_(d));
}

GaussianBoundCheck gaussian_bounds_check(const HeatKernelEvaluator& E, double d, double t,
                                         double T_horizon, double fitted_upper_c,
                                         double fitted_lower_c) {
  const int N = E.manifold().dim();
  const double limit =
      std::min(E.manifold().injectivity_radius(), E.manifold().pi_over_4_sqrt_kappa());
  if (!(std::sqrt(t) < limit))
    throw std::invalid_argument("gaussian_bounds_check: sqrt(t) outside prep9 range");
  if (!(t < T_horizon))
    throw std::invalid_argument("gaussian_bounds_check: t outside prep10 horizon");
  const double k = E.kernel_radial(d, t);
  const double upper_env = std::pow(t, -0.5 * N) * std::exp(-d * d / (4.5 * t));
  const double lower_env = std::pow(t, -0.5 * N) * std::exp(-d * d / (2.0 * t));
  GaussianBoundCheck out;
  out.upper_ratio = k / upper_env;
  out.lower_ratio = k / lower_env;
  out.upper_ok = k <= fitted_upper_c * upper_env * (1.0 + 1e-9);
  out.lower_ok = k >= fitted_lower_c * lower_env * (1.0 - 1e-9);
  return out;
}

std::string KernelBoundReport::to_csv() const {
  std::ostringstream os;
  os << "bound_id,d,t,lhs,rhs,ratio\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.bound_id << ',' << r.d << ',' << r.t << ',' << r.lhs << ',' << r.rhs << ','
       << r.ratio << '\n';
  return os.str();
}

KernelBoundReport harnack_sweep(const HeatKernelEvaluator& E, int g,
                                const std::vector<double>& t_samples) {
  KernelBoundReport rep;
  rep.sup_ratio = 0.0;
  rep.inf_ratio = kInf;
  const int N = E.manifold().dim();
  const double diam = E.manifold().diameter();
  for (double t : t_samples) {
    const double rt = std::sqrt(t);
    for (int i = 0; i < g; ++i) {
      const double dx = 2.0 * rt * i / (g - 1.0);
      for (int j = 0; j < g; ++j) {
        const double dy = 3.0 * rt * j / (g - 1.0);
        for (int k = 0; k < g; ++k) {
          const double delta = rt * (2.0 * k / (g - 1.0) - 1.0);
          const double zpos = dy + delta;
          const double span = std::max({std::abs(dx), std::abs(dy), std::abs(zpos)});
          if (std::isfinite(diam) && span >= 0.49 * diam) continue;
          const Point x = axis_point(N, -dx);
          const Point y = axis_point(N, dy);
          const Point z = axis_point(N, zpos);
          const double ratio = E.harnack_ratio(x, y, z, t);
          rep.sup_ratio = std::max(rep.sup_ratio, ratio);
          rep.inf_ratio = std::min(rep.inf_ratio, ratio);
          rep.rows.push_back({"prep8", dy + dx, t, ratio, 0.0, ratio});
        }
      }
    }
  }
  return rep;
}

KernelBoundReport gaussian_bounds_sweep(const HeatKernelEvaluator& E,
                                        const std::vector<double>& d_samples,
                                        const std::vector<double>& t_samples,
                                        double T_horizon) {
  KernelBoundReport rep;
  rep.sup_ratio = 0.0;        // fitted prep9 constant
  rep.inf_ratio = kInf;       // fitted prep10 constant
  const int N = E.manifold().dim();
  const double limit =
      std::min(E.manifold().injectivity_radius(), E.manifold().pi_over_4_sqrt_kappa());
  const double diam = E.manifold().diameter();
  for (double t : t_samples) {
    if (!(std::sqrt(t) < limit) || !(t < T_horizon)) continue;
    for (double d : d_samples) {
      if (std::isfinite(diam) && d > diam) continue;
      const double k = E.kernel_radial(d, t);
      const double upper_env = std::pow(t, -0.5 * N) * std::exp(-d * d / (4.5 * t));
      const double lower_env = std::pow(t, -0.5 * N) * std::exp(-d * d / (2.0 * t));
      const double up = k / upper_env;
      const double lo = k / lower_env;
      rep.sup_ratio = std::max(rep.sup_ratio, up);
      rep.inf_ratio = std::min(rep.inf_ratio, lo);
      rep.rows.push_back({"prep9", d, t, k, upper_env, up});
      rep.rows.push_back({"prep10", d, t, k, lower_env, lo});
    }
  }
  return rep;
}

KernelBoundReport scaling_sweep(const HeatKernelEvaluator& E, const std::vector<double>& alphas,
                                const std::vector<double>& t_samples) {
  KernelBoundReport rep;
  rep.sup_ratio = 0.0;
  rep.inf_ratio = kInf;
  const int N = E.manifold().dim();
  const double rho_inf = E.manifold().rho_infinity();
  const double span = std::isfinite(rho_inf) ? 0.8 * rho_inf : 1.0;
  const std::vector<double> offsets = {0.0, 0.35, 0.7};
  for (double t : t_samples) {
    for (double alpha : alphas) {
      for (double ox : offsets) {
        for (double oy : offsets) {
          std::vector<double> xi(N, 0.0), eta(N, 0.0);
          xi[0] = span * ox;
          eta[0] = -span * oy;
          double ratio;
          try {
            ratio = E.scaling_ratio(xi, eta, alpha, 1.0, t);
          } catch (const std::invalid_argument&) {
            continue;
          }
          rep.sup_ratio = std::max(rep.sup_ratio, ratio);
          rep.inf_ratio = std::min(rep.inf_ratio, ratio);
          rep.rows.push_back({"prep11", span * (ox + oy), t, ratio, 0.0, ratio});
        }
      }
    }
  }
  return rep;
}

double measure_heat_potential(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                              const Point& x, double t, double rel_tol) {
  const ModelManifold& M = E.manifold();
  const int N = M.dim();
  switch (mu.variant()) {
    case MeasureVariant::Atomic: {
      double sum = 0.0;
      const auto& atoms = mu.atoms();
      for (const auto& a : atoms) sum += a.weight * E.kernel_eval(x, a.position, t);
      return sum;
    }
    case MeasureVariant::Radial: {
      const double rho_x = M.geodesic_distance(x, axis_point(N, 0.0));
      double cut = std::min(mu.radial_cutoff(), rho_x + E.effective_radius(t));
      if (std::isfinite(M.diameter())) cut = std::min(cut, M.diameter());
      if (!(cut > 0.0)) return 0.0;
      if (N == 1) {
        if (M.kind() == ManifoldKind::Circle) {
          const double R = 1.0 / std::sqrt(M.curvature_scale());
          auto wrap = [&](double u) {
            u = std::fmod(std::abs(u), 2.0 * M_PI * R);
            return std::min(u, 2.0 * M_PI * R - u);
          };
          const double hi = std::min(cut, M_PI * R);
          return integrate(
                     [&](double y) {
                       return E.kernel_radial(wrap(y - rho_x), t) * mu.radial_profile(std::abs(y));
                     },
                     -hi, 0.0, rel_tol * 0.1, 1e-320) +
                 integrate(
                     [&](double y) {
                       return E.kernel_radial(wrap(y - rho_x), t) * mu.radial_profile(std::abs(y));
                     },
                     0.0, hi, rel_tol * 0.1, 1e-320);
        }
        auto f = [&](double y) {
          return E.kernel_radial(std::abs(y - rho_x), t) * mu.radial_profile(std::abs(y));
        };
        // Split at the profile singularity (0) and the kernel peak (rho_x).
        double acc = integrate(f, -cut, 0.0, rel_tol * 0.1, 1e-320);
        if (rho_x > 0.0 && rho_x < cut) {
          acc += integrate(f, 0.0, rho_x, rel_tol * 0.1, 1e-320);
          acc += integrate(f, rho_x, cut, rel_tol * 0.1, 1e-320);
        } else {
          acc += integrate(f, 0.0, cut, rel_tol * 0.1, 1e-320);
        }
        return acc;
      }
      // A per-call table makes the nested quadrature cheap on every model.
      const RadialKernelTable table(E, t);
      const auto kt = [&table](double d) { return table(d); };
      const double ring = unit_sphere_area(N - 1);
      // Coarse product-rule scale estimate seeds the absolute tolerances so
      // the nested adaptivity never refines negligible regions.
      double scale0 = 0.0;
      {
        std::vector<double> qn, qw;
        gauss_legendre_rule(32, qn, qw);
        for (int i = 0; i < 32; ++i) {
          const double r = 0.5 * cut * (qn[i] + 1.0);
          const double f = mu.radial_profile(r);
          if (f == 0.0) continue;
          double in = 0.0;
          for (int q = 0; q < 32; ++q) {
            const double theta = 0.5 * M_PI * (qn[q] + 1.0);
            const double sn = N == 2 ? 1.0 : std::sin(theta);
            in += qw[q] * kt(third_side(M, r, rho_x, theta)) * std::pow(sn, N - 2);
          }
          scale0 += qw[i] * f * std::pow(radial_scale(M, r), N - 1) * in;
        }
        scale0 *= 0.25 * cut * M_PI * ring;
      }
      const double floor_abs = std::max(std::abs(scale0), 1e-280) * rel_tol * 1e-2;
      return ring * integrate(
                        [&](double r) {
                          const double f = mu.radial_profile(r);
                          if (f == 0.0) return 0.0;
                          const double weight =
                              ring * cut *
                              std::max(f * std::pow(radial_scale(M, r), N - 1), 1e-280);
                          const double inner = integrate(
                              [&](double theta) {
                                const double w = third_side(M, r, rho_x, theta);
                                const double sn = N == 2 ? 1.0 : std::sin(theta);
                                return kt(w) * std::pow(sn, N - 2);
                              },
                              0.0, M_PI, rel_tol * 0.05, floor_abs / weight, 28);
                          return f * std::pow(radial_scale(M, r), N - 1) * inner;
                        },
                        0.0, cut, rel_tol * 0.1, floor_abs, 28);
    }
    case MeasureVariant::Grid: {
      double sum = 0.0;
      const auto& g = mu.grid_cells();
      for (const auto& c : g)
        sum += c.weight * c.value * E.kernel_eval(x, c.center, t);
      return sum;
    }
    case MeasureVariant::Cantor: {
      // Representable shallow levels only; integrate the indicator cells.
      const auto cells = mu.cantor_cells();
      double sum = 0.0;
      for (const auto& c : cells) sum += c.weight * c.value * E.kernel_eval(x, c.center, t);
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

double linheat_constant(const HeatKernelEvaluator& E, const RadonMeasure& mu,
                        const std::vector<double>& t_samples) {
  const ModelManifold& M = E.manifold();
  const int N = M.dim();
  if (mu.total_mass_hint() <= 0.0)
    throw std::invalid_argument("linheat_constant: zero measure");
  double sup = 0.0;
  for (double t : t_samples) {
    const double rho_inf = M.rho_infinity();
    if (std::isfinite(rho_inf) && !(t < 16.0 * rho_inf * rho_inf))
      throw std::invalid_argument("linheat_constant: t must be < 16 rho_inf^2");
    const double denom = sup_ball_mass(mu, M, std::sqrt(t)).value;
    if (denom <= 0.0) continue;
    // Candidate evaluation points: measure center(s) plus chart offsets.
    std::vector<Point> candidates = mu.candidate_centers(M);
    candidates.push_back(axis_point(N, std::sqrt(t)));
    candidates.push_back(axis_point(N, 2.0 * std::sqrt(t)));
    double best = 0.0;
    for (const auto& x : candidates)
      best = std::max(best, measure_heat_potential(E, mu, x, t));
    sup = std::max(sup, best * std::pow(t, 0.5 * N) / denom);
  }
  return sup;
}

}  // namespace fujitalab
