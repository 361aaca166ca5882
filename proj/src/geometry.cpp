#include "fujitalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

// Distance on the sphere of radius R between points given in normal
// coordinates at a common center, via the unit-sphere embedding.
double sphere_chart_distance(const std::vector<double>& a, std::size_t lo, std::size_t hi,
                             const std::vector<double>& b, double R) {
  const double ra = norm2(a, lo, hi) / R;
  const double rb = norm2(b, lo, hi) / R;
  // cos(angle) = cos ra cos rb + sin ra sin rb * <a_hat, b_hat>
  double dot = 0.0;
  const double na = ra * R, nb = rb * R;
  if (na > 0.0 && nb > 0.0) {
    for (std::size_t i = lo; i < hi; ++i) dot += a[i] * b[i];
    dot /= (na * nb);
    dot = std::clamp(dot, -1.0, 1.0);
  }
  const double c = std::cos(ra) * std::cos(rb) + std::sin(ra) * std::sin(rb) * dot;
  return R * std::acos(std::clamp(c, -1.0, 1.0));
}

double hyperbolic_chart_distance(const std::vector<double>& a, const std::vector<double>& b,
                                 double R) {
  const double ra = norm2(a, 0, a.size()) / R;
  const double rb = norm2(b, 0, b.size()) / R;
  double dot = 0.0;
  const double na = ra * R, nb = rb * R;
  if (na > 0.0 && nb > 0.0) {
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    dot /= (na * nb);
    dot = std::clamp(dot, -1.0, 1.0);
  }
  // Minkowski inner product of the hyperboloid embeddings.
  const double c = std::cosh(ra) * std::cosh(rb) - std::sinh(ra) * std::sinh(rb) * dot;
  return R * std::acosh(std::max(c, 1.0));
}

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  if (t > M_PI) t -= 2.0 * M_PI;
  if (t <= -M_PI) t += 2.0 * M_PI;
  return t;
}

}  // namespace

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::Hyperbolic: return "hyperbolic";
    case ManifoldKind::Circle: return "circle";
    case ManifoldKind::Cylinder: return "cylinder";
  }
  return "?";
}

ManifoldKind manifold_kind_from_string(const std::string& s) {
  if (s == "euclidean") return ManifoldKind::Euclidean;
  if (s == "sphere") return ManifoldKind::Sphere;
  if (s == "hyperbolic") return ManifoldKind::Hyperbolic;
  if (s == "circle") return ManifoldKind::Circle;
  if (s == "cylinder") return ManifoldKind::Cylinder;
  throw std::invalid_argument("unknown manifold kind: " + s);
}

ModelManifold ModelManifold::make(ManifoldKind kind, int dim, double kappa,
                                  int sphere_factor_dim) {
  if (dim < 1) throw std::invalid_argument("manifold dimension must be >= 1");
  if (kappa < 0.0) throw std::invalid_argument("curvature scale must be >= 0");
  switch (kind) {
    case ManifoldKind::Euclidean:
      if (kappa != 0.0) throw std::invalid_argument("Euclidean space has kappa = 0");
      return ModelManifold(kind, dim, 0.0, kInf, 0);
    case ManifoldKind::Sphere:
      if (kappa <= 0.0) throw std::invalid_argument("Sphere needs kappa > 0");
      if (dim == 1) return ModelManifold(ManifoldKind::Circle, 1, kappa, M_PI / std::sqrt(kappa), 0);
      return ModelManifold(kind, dim, kappa, M_PI / std::sqrt(kappa), 0);
    case ManifoldKind::Circle:
      if (kappa <= 0.0) throw std::invalid_argument("Circle needs kappa > 0");
      if (dim != 1) throw std::invalid_argument("Circle has dim 1");
      return ModelManifold(kind, 1, kappa, M_PI / std::sqrt(kappa), 0);
    case ManifoldKind::Hyperbolic:
      if (kappa <= 0.0) throw std::invalid_argument("Hyperbolic space needs kappa > 0");
      return ModelManifold(kind, dim, kappa, kInf, 0);
    case ManifoldKind::Cylinder:
      if (kappa <= 0.0) throw std::invalid_argument("Cylinder needs kappa > 0 on the sphere factor");
      if (sphere_factor_dim < 1 || sphere_factor_dim >= dim)
        throw std::invalid_argument("Cylinder needs 1 <= sphere_factor_dim < dim");
      return ModelManifold(kind, dim, kappa, M_PI / std::sqrt(kappa), sphere_factor_dim);
  }
  throw std::invalid_argument("unknown manifold kind");
}

ModelManifold make_manifold(ManifoldKind kind, int dim, double curvature_scale,
                            int sphere_factor_dim) {
  return ModelManifold::make(kind, dim, curvature_scale, sphere_factor_dim);
}

double ModelManifold::diameter() const {
  const double R = kappa_ > 0.0 ? 1.0 / std::sqrt(kappa_) : 0.0;
  switch (kind_) {
    case ManifoldKind::Sphere:
    case ManifoldKind::Circle:
      return M_PI * R;
    default:
      return kInf;
  }
}

double ModelManifold::pi_over_4_sqrt_kappa() const {
  // Interpreted as +inf when kappa = 0 or N = 1.
  if (kappa_ == 0.0 || dim_ == 1) return kInf;
  return M_PI / (4.0 * std::sqrt(kappa_));
}

double ModelManifold::geodesic_distance(const Point& a, const Point& b) const {
  if (a.chart != b.chart) throw std::invalid_argument("geodesic_distance: chart mismatch");
  if (a.x.size() != static_cast<std::size_t>(dim_) || b.x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("geodesic_distance: wrong coordinate count");
  const double R = kappa_ > 0.0 ? 1.0 / std::sqrt(kappa_) : 0.0;
  switch (kind_) {
    case ManifoldKind::Euclidean: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
      return std::sqrt(s);
    }
    case ManifoldKind::Circle:
      return R * std::abs(wrap_angle((a.x[0] - b.x[0]) / R));
    case ManifoldKind::Sphere:
      return sphere_chart_distance(a.x, 0, a.x.size(), b.x, R);
    case ManifoldKind::Hyperbolic:
      return hyperbolic_chart_distance(a.x, b.x, R);
    case ManifoldKind::Cylinder: {
      const std::size_t flat = static_cast<std::size_t>(dim_ - sphere_factor_dim_);
      double s = 0.0;
      for (std::size_t i = 0; i < flat; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
      double ds;
      if (sphere_factor_dim_ == 1) {
        ds = R * std::abs(wrap_angle((a.x[flat] - b.x[flat]) / R));
      } else {
        std::vector<double> as(a.x.begin() + flat, a.x.end());
        std::vector<double> bs(b.x.begin() + flat, b.x.end());
        ds = sphere_chart_distance(as, 0, as.size(), bs, R);
      }
      return std::sqrt(s + ds * ds);
    }
  }
  throw std::logic_error("unreachable");
}

void ModelManifold::require_isotropic(const char* op) const {
  if (kind_ == ManifoldKind::Cylinder)
    throw std::invalid_argument(std::string(op) + ": not defined for product manifolds");
}

double ModelManifold::volume_density(double r) const {
  require_isotropic("volume_density");
  if (!(r > 0.0)) throw std::domain_error("volume_density: r must be > 0");
  if (r >= inj_) throw std::domain_error("volume_density: r outside the normal chart");
  if (dim_ == 1) return 1.0;
  const double sr = std::sqrt(kappa_) * r;
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return 1.0;
    case ManifoldKind::Sphere:
      return std::pow(std::sin(sr) / sr, dim_ - 1);
    case ManifoldKind::Hyperbolic:
      return std::pow(std::sinh(sr) / sr, dim_ - 1);
    default:
      return 1.0;
  }
}

double ModelManifold::ball_volume(double r) const {
  require_isotropic("ball_volume");
  if (!(r > 0.0)) throw std::domain_error("ball_volume: r must be > 0");
  if (r > inj_) throw std::domain_error("ball_volume: r outside the normal chart");
  const double A = unit_sphere_area(dim_);
  const double sk = std::sqrt(kappa_);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return unit_ball_volume(dim_) * std::pow(r, dim_);
    case ManifoldKind::Circle:
      return 2.0 * r;
    case ManifoldKind::Sphere: {
      if (dim_ == 2) return 2.0 * M_PI * (1.0 - std::cos(sk * r)) / (sk * sk);
      if (dim_ == 3) return M_PI * (2.0 * sk * r - std::sin(2.0 * sk * r)) / (sk * sk * sk);
      break;
    }
    case ManifoldKind::Hyperbolic: {
      if (dim_ == 2) return 2.0 * M_PI * (std::cosh(sk * r) - 1.0) / (sk * sk);
      if (dim_ == 3) return M_PI * (std::sinh(2.0 * sk * r) - 2.0 * sk * r) / (sk * sk * sk);
      break;
    }
    default:
      break;
  }
  // N >= 4: radial quadrature of the density.
  return A * integrate([&](double s) { return volume_density(s) * std::pow(s, dim_ - 1); },
                       0.0, r, 1e-10);
}

double ModelManifold::laplacian_distance(double r) const {
  require_isotropic("laplacian_distance");
  if (!(r > 0.0)) throw std::domain_error("laplacian_distance: r must be > 0");
  if (r >= inj_) throw std::domain_error("laplacian_distance: r outside the normal chart");
  if (dim_ == 1) return 0.0;
  const double sk = std::sqrt(kappa_);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return (dim_ - 1) / r;
    case ManifoldKind::Sphere:
      return (dim_ - 1) * sk / std::tan(sk * r);
    case ManifoldKind::Hyperbolic:
      return (dim_ - 1) * sk / std::tanh(sk * r);
    default:
      throw std::logic_error("unreachable");
  }
}

ThresholdRadii ModelManifold::threshold_radii(double T) const {
  if (!(T > 0.0)) throw std::invalid_argument("threshold_radii: T must be > 0");
  const double rho_inf = std::min(inj_ / 4.0, pi_over_4_sqrt_kappa());
  const double rho_T = std::min(std::sqrt(T), rho_inf);
  return {rho_T, rho_inf};
}

Point ModelManifold::geodesic_point(const Point& a, const Point& b, double s) const {
  const double dab = geodesic_distance(a, b);
  if (dab <= 0.0) throw std::invalid_argument("geodesic_point: a and b coincide");
  const double R = kappa_ > 0.0 ? 1.0 / std::sqrt(kappa_) : 0.0;
  switch (kind_) {
    case ManifoldKind::Euclidean: {
      Point p = a;
      for (int i = 0; i < dim_; ++i) p.x[i] = a.x[i] + s * (b.x[i] - a.x[i]) / dab;
      return p;
    }
    case ManifoldKind::Circle: {
      const double dir = wrap_angle((b.x[0] - a.x[0]) / R) >= 0.0 ? 1.0 : -1.0;
      return Point({a.x[0] + dir * s});
    }
    case ManifoldKind::Sphere: {
      // Slerp in the unit-sphere embedding, then back to normal coordinates.
      auto embed = [&](const Point& q) {
        const double r = norm2(q.x, 0, q.x.size()) / R;
        std::vector<double> e(dim_ + 1, 0.0);
        e[0] = std::cos(r);
        if (r > 0.0) {
          const double f = std::sin(r) / (r * R);
          for (int i = 0; i < dim_; ++i) e[i + 1] = q.x[i] * f * R;
        }
        return e;
      };
      auto ea = embed(a), eb = embed(b);
      const double ang = dab / R;
      const double t = s / R;
      std::vector<double> u(dim_ + 1);
      const double sa = std::sin(ang);
      for (int i = 0; i <= dim_; ++i)
        u[i] = (std::sin(ang - t) * ea[i] + std::sin(t) * eb[i]) / sa;
      // Log map at the chart center e0.
      const double c0 = std::clamp(u[0], -1.0, 1.0);
      const double r = std::acos(c0);
      std::vector<double> coords(dim_, 0.0);
      const double tail = norm2(u, 1, u.size());
      if (tail > 0.0)
        for (int i = 0; i < dim_; ++i) coords[i] = R * r * u[i + 1] / tail;
      return Point(coords);
    }
    case ManifoldKind::Hyperbolic: {
      auto embed = [&](const Point& q) {
        const double r = norm2(q.x, 0, q.x.size()) / R;
        std::vector<double> e(dim_ + 1, 0.0);
        e[0] = std::cosh(r);
        if (r > 0.0) {
          const double f = std::sinh(r) / r;
          for (int i = 0; i < dim_; ++i) e[i + 1] = q.x[i] * f / R;
        }
        return e;
      };
      auto ea = embed(a), eb = embed(b);
      const double ang = dab / R;
      const double t = s / R;
      const double sh = std::sinh(ang);
      std::vector<double> u(dim_ + 1);
      for (int i = 0; i <= dim_; ++i)
        u[i] = (std::sinh(ang - t) * ea[i] + std::sinh(t) * eb[i]) / sh;
      const double r = std::acosh(std::max(u[0], 1.0));
      std::vector<double> coords(dim_, 0.0);
      const double tail = norm2(u, 1, u.size());
      if (tail > 0.0)
        for (int i = 0; i < dim_; ++i) coords[i] = R * r * u[i + 1] / tail;
      return Point(coords);
    }
    default:
      throw std::invalid_argument("geodesic_point: unsupported on product manifolds");
  }
}

double unit_sphere_area(int N) {
  if (N < 1) throw std::invalid_argument("unit_sphere_area: N >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

double unit_ball_volume(int N) { return unit_sphere_area(N) / N; }

bool ComparisonReport::all_in_range_pass() const {
  for (const auto& row : rows)
    if (row.in_range && !row.pass) return false;
  return true;
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream os;
  os << "r,bound_name,lhs,rhs,pass\n";
  os.precision(17);
  for (const auto& row : rows)
    os << row.r << ',' << row.bound_name << ',' << row.lhs << ',' << row.rhs << ','
       << (row.pass ? 1 : 0) << '\n';
  return os.str();
}

ComparisonReport comparison_report(const ModelManifold& M, const std::vector<double>& r_samples) {
  ComparisonReport rep;
  const int N = M.dim();
  const double range = std::min(M.pi_over_4_sqrt_kappa(), M.injectivity_radius());
  const double rho_inf = M.rho_infinity();
  auto push = [&](double r, const std::string& name, double lhs, double rhs, bool in_range) {
    ComparisonRow row;
    row.r = r;
    row.bound_name = name;
    row.lhs = lhs;
    row.rhs = rhs;
    row.in_range = in_range;
    row.pass = lhs <= rhs;
    row.slack = rhs - lhs;
    rep.rows.push_back(row);
  };
  for (double r : r_samples) {
    if (!(r > 0.0)) continue;
    const bool ok = r < range;
    if (r < M.injectivity_radius()) {
      // prep1: Delta r * r <= 2(N-1)
      push(r, "prep1_laplacian", M.laplacian_distance(r) * r, 2.0 * (N - 1), ok);
      const double dens = M.volume_density(r);
      push(r, "prep2_density_upper", dens, std::pow(2.0, N - 1), ok);
      push(r, "prep4_density_lower", std::pow(2.0, 1 - N), dens, ok);
      const double vol = M.ball_volume(r);
      const double a = unit_sphere_area(N) / N * std::pow(r, N);
      push(r, "prep3_volume_upper", vol, std::pow(2.0, N - 1) * a, ok);
      push(r, "prep5_volume_lower", std::pow(2.0, 1 - N) * a, vol, ok);
    }
    // prep6/prep7 on chart pairs a' = r*e1, b' = -r*e1 and b' = r*e2 (clipped
    // to the rho_inf chart ball).
    if (M.kind() != ManifoldKind::Cylinder && r < rho_inf) {
      std::vector<double> av(N, 0.0), bv(N, 0.0);
      av[0] = r;
      bv[0] = -r;
      for (int variant = 0; variant < 2; ++variant) {
        if (variant == 1) {
          if (N < 2) break;
          bv.assign(N, 0.0);
          bv[1] = r;
        }
        const Point a(av), b(bv);
        const double d = M.geodesic_distance(a, b);
        double diff = 0.0;
        for (int i = 0; i < N; ++i) diff += (av[i] - bv[i]) * (av[i] - bv[i]);
        diff = std::sqrt(diff);
        const std::string tag = variant == 0 ? "_antipodal_pair" : "_orthogonal_pair";
        push(r, "prep6_distance_upper" + tag, d, 2.0 * diff, true);
        push(r, "prep7_distance_lower" + tag, 0.5 * diff, d, true);
      }
    }
  }
  return rep;
}

}  // namespace fujitalab
