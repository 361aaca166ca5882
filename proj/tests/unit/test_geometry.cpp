#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fujitalab/geometry.hpp"

using namespace fujitalab;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("make_manifold populates injectivity radii") {
  const auto e2 = make_manifold(ManifoldKind::Euclidean, 2, 0.0);
  CHECK(std::isinf(e2.injectivity_radius()));
  CHECK(std::isinf(e2.rho_infinity()));
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  CHECK(s2.injectivity_radius() == doctest::Approx(M_PI));
  const auto h2 = make_manifold(ManifoldKind::Hyperbolic, 2, 1.0);
  CHECK(std::isinf(h2.injectivity_radius()));
  CHECK_THROWS_AS(make_manifold(ManifoldKind::Sphere, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_manifold(ManifoldKind::Euclidean, 0, 0.0), std::invalid_argument);
}

TEST_CASE("geodesic distances match closed forms") {
  const auto e1 = make_manifold(ManifoldKind::Euclidean, 1, 0.0);
  CHECK(e1.geodesic_distance(Point({0.0}), Point({3.0})) == doctest::Approx(3.0));
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  // antipodal pair
  CHECK(s2.geodesic_distance(Point({0.0, 0.0}), Point({M_PI, 0.0})) == doctest::Approx(M_PI));
  CHECK(s2.geodesic_distance(Point({0.3, -0.2}), Point({0.3, -0.2})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(s2.geodesic_distance(Point({0.0, 0.0}, 0), Point({0.0, 0.0}, 1)),
                  std::invalid_argument);
  // circle wraps
  const auto s1 = make_manifold(ManifoldKind::Circle, 1, 1.0);
  CHECK(s1.geodesic_distance(Point({-3.0}), Point({3.0})) ==
        doctest::Approx(2.0 * M_PI - 6.0));
}

TEST_CASE("triangle inequality on random triples") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (auto kind : {ManifoldKind::Sphere, ManifoldKind::Hyperbolic, ManifoldKind::Euclidean}) {
    const auto M = make_manifold(kind, 2, kind == ManifoldKind::Euclidean ? 0.0 : 1.0);
    for (int it = 0; it < 200; ++it) {
      const Point a({u(rng), u(rng)}), b({u(rng), u(rng)}), c({u(rng), u(rng)});
      const double ab = M.geodesic_distance(a, b);
      const double bc = M.geodesic_distance(b, c);
      const double ac = M.geodesic_distance(a, c);
      CHECK(ac <= ab + bc + 1e-12);
    }
  }
}

TEST_CASE("cylinder distance is the product-metric combination") {
  const auto cyl = make_manifold(ManifoldKind::Cylinder, 2, 1.0, 1);
  const Point a({0.0, 0.0}), b({3.0, 1.0});
  CHECK(cyl.geodesic_distance(a, b) == doctest::Approx(std::sqrt(9.0 + 1.0)));
  // sphere factor wraps
  const Point c({0.0, 2.0 * M_PI - 0.5});
  CHECK(cyl.geodesic_distance(a, c) == doctest::Approx(0.5));
}

TEST_CASE("volume density closed forms") {
  const auto e3 = make_manifold(ManifoldKind::Euclidean, 3, 0.0);
  CHECK(e3.volume_density(0.77) == doctest::Approx(1.0));
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  CHECK(s2.volume_density(M_PI / 4) == doctest::Approx(std::sin(M_PI / 4) / (M_PI / 4)));
  const auto h2 = make_manifold(ManifoldKind::Hyperbolic, 2, 1.0);
  CHECK(h2.volume_density(M_PI / 4) == doctest::Approx(std::sinh(M_PI / 4) / (M_PI / 4)));
  CHECK_THROWS_AS(e3.volume_density(0.0), std::domain_error);
}

TEST_CASE("ball volumes: closed forms and quadrature agree") {
  const auto e2 = make_manifold(ManifoldKind::Euclidean, 2, 0.0);
  CHECK(e2.ball_volume(1.0) == doctest::Approx(M_PI));
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  CHECK(s2.ball_volume(M_PI / 2) == doctest::Approx(2.0 * M_PI));
  const auto h2 = make_manifold(ManifoldKind::Hyperbolic, 2, 1.0);
  CHECK(h2.ball_volume(1.0) == doctest::Approx(2.0 * M_PI * (std::cosh(1.0) - 1.0)));
  // N=4 goes through quadrature; compare with the hyperbolic closed form
  // Vol = Area(S^3) int_0^r sinh^3 s ds = Area(S^3) (cosh^3 r/3 - cosh r + 2/3).
  const auto h4 = make_manifold(ManifoldKind::Hyperbolic, 4, 1.0);
  const double r = 0.8;
  const double c = std::cosh(r);
  const double exact = unit_sphere_area(4) * (c * c * c / 3.0 - c + 2.0 / 3.0);
  CHECK(h4.ball_volume(r) == doctest::Approx(exact).epsilon(1e-9));
  // monotone in r
  CHECK(s2.ball_volume(0.4) < s2.ball_volume(0.8));
}

TEST_CASE("laplacian of distance") {
  const auto e3 = make_manifold(ManifoldKind::Euclidean, 3, 0.0);
  CHECK(e3.laplacian_distance(2.0) == doctest::Approx(1.0));
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  CHECK(s2.laplacian_distance(M_PI / 4) == doctest::Approx(1.0));
  const auto h2 = make_manifold(ManifoldKind::Hyperbolic, 2, 1.0);
  CHECK(h2.laplacian_distance(M_PI / 4) == doctest::Approx(1.0 / std::tanh(M_PI / 4)));
  const auto s1 = make_manifold(ManifoldKind::Circle, 1, 1.0);
  CHECK(s1.laplacian_distance(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(e3.laplacian_distance(0.0), std::domain_error);
}

TEST_CASE("threshold radii") {
  const auto s2 = make_manifold(ManifoldKind::Sphere, 2, 1.0);
  const auto tr = s2.threshold_radii(100.0);
  CHECK(tr.rho_T == doctest::Approx(M_PI / 4));
  CHECK(tr.rho_inf == doctest::Approx(M_PI / 4));
  const auto e3 = make_manifold(ManifoldKind::Euclidean, 3, 0.0);
  CHECK(e3.threshold_radii(4.0).rho_T == doctest::Approx(2.0));
  CHECK(std::isinf(e3.threshold_radii(4.0).rho_inf));
  const auto h2 = make_manifold(ManifoldKind::Hyperbolic, 2, 1.0);
  CHECK(h2.rho_infinity() == doctest::Approx(M_PI / 4));
  // N=1 drops the curvature cap
  const auto s1 = make_manifold(ManifoldKind::Circle, 1, 4.0);
  CHECK(s1.rho_infinity() == doctest::Approx(s1.injectivity_radius() / 4.0));
}

TEST_CASE("comparison report passes on the model spaces") {
  for (int dim : {2, 3}) {
    for (auto kind : {ManifoldKind::Sphere, ManifoldKind::Hyperbolic}) {
      const auto M = make_manifold(kind, dim, 1.0);
      std::vector<double> rs;
      for (int i = 1; i <= 40; ++i) rs.push_back(M.pi_over_4_sqrt_kappa() * i / 41.0);
      const auto rep = comparison_report(M, rs);
      CHECK(rep.all_in_range_pass());
    }
  }
  // Euclidean densities have slack exactly 2^{N-1} - 1
  const auto e2 = make_manifold(ManifoldKind::Euclidean, 2, 0.0);
  const auto rep = comparison_report(e2, {0.5, 1.0});
  for (const auto& row : rep.rows)
    if (row.bound_name == "prep2_density_upper") CHECK(row.slack == doctest::Approx(1.0));
  CHECK(rep.to_csv().rfind("r,bound_name", 0) == 0);
}

TEST_CASE("hyperbolic density stays within the prep bracket at the range edge") {
  const auto h3 = make_manifold(ManifoldKind::Hyperbolic, 3, 1.0);
  const double r = M_PI / 4;
  const double dens = h3.volume_density(r);
  CHECK(dens == doctest::Approx(std::pow(std::sinh(r) / r, 2)));
  CHECK(dens <= 4.0);
}

TEST_CASE("chart distance comparison on random pairs") {
  // prep6/prep7: |a'-b'|/2 <= d(a,b) <= 2|a'-b'| inside B(z0, rho_inf)
  std::mt19937 rng(11);
  for (auto kind : {ManifoldKind::Sphere, ManifoldKind::Hyperbolic}) {
    const auto M = make_manifold(kind, 3, 1.0);
    const double rho_inf = M.rho_infinity();
    std::uniform_real_distribution<double> u(-rho_inf / 2.0, rho_inf / 2.0);
    for (int it = 0; it < 300; ++it) {
      const Point a({u(rng), u(rng), u(rng)}), b({u(rng), u(rng), u(rng)});
      double diff = 0.0;
      for (int i = 0; i < 3; ++i) diff += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
      diff = std::sqrt(diff);
      const double d = M.geodesic_distance(a, b);
      CHECK(d <= 2.0 * diff + 1e-14);
      CHECK(d >= 0.5 * diff - 1e-14);
    }
  }
}

TEST_CASE("geodesic_point interpolates distances") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere, ManifoldKind::Hyperbolic}) {
    const auto M = make_manifold(kind, 2, kind == ManifoldKind::Euclidean ? 0.0 : 1.0);
    const Point a({0.1, -0.2}), b({0.6, 0.4});
    const double d = M.geodesic_distance(a, b);
    const Point mid = M.geodesic_point(a, b, 0.5 * d);
    CHECK(M.geodesic_distance(a, mid) == doctest::Approx(0.5 * d).epsilon(1e-9));
    CHECK(M.geodesic_distance(mid, b) == doctest::Approx(0.5 * d).epsilon(1e-9));
  }
}

TEST_SUITE_END();
