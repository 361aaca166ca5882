#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fujitalab {

/// Adaptive Gauss-Legendre quadrature of f on [a,b].
/// Subdivides until the (G7,K15)-style two-estimate difference is below
/// rel_tol * |integral| + abs_tol on every panel.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-300,
                 int max_depth = 48);

/// Fixed-order Gauss-Legendre rule on [a,b] (n in {8,16,32,64}).
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1,1].
void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Bisection root of a monotone continuous f on [lo,hi] with f(lo), f(hi) of
/// opposite sign. Converges to rel_tol on the root location.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-14, int max_iter = 300);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// log(sum_i exp(v_i)); -inf for an empty list.
double log_sum_exp(const std::vector<double>& v);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  bool empty() const { return x_.empty(); }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

/// Deterministic Halton sequence point (index i >= 0, dimension dim <= 6).
std::vector<double> halton_point(std::size_t i, int dim);

/// Runs fn(i) for i in [0,n) on up to FUJITALAB_THREADS threads.
/// Results must be written to per-index slots by the caller; the call
/// returns once all indices completed, so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fujitalab
