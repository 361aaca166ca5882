#include "fujitalab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace fujitalab {

namespace {

// Kronrod-15 / Gauss-7 pair on [-1,1].
const double kK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
const double kK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
const double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelResult {
  double k15;
  double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 15; ++i) fv[i] = f(c + h * kK15Nodes[i]);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < 15; ++i) k15 += kK15Weights[i] * fv[i];
  for (int i = 0; i < 7; ++i) g7 += kG7Weights[i] * fv[2 * i + 1];
  k15 *= h;
  g7 *= h;
  return {k15, std::abs(k15 - g7)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  struct Panel {
    double a, b, k15, err;
    int depth;
  };
  PanelResult first = gk15(f, a, b);
  const double scale = std::abs(first.k15);
  std::vector<Panel> work{{a, b, first.k15, first.err, 0}};
  std::vector<Panel> done;
  // Worst-first refinement under a hard panel budget; negligible panels are
  // retired by the absolute term so nested integrals cannot spin.
  const std::size_t budget = 4000;
  while (!work.empty() && done.size() + work.size() < budget) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < work.size(); ++i)
      if (work[i].err > work[worst].err) worst = i;
    Panel p = work[worst];
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(worst));
    const double tol = rel_tol * std::max(std::abs(p.k15), scale) + abs_tol;
    if (p.err <= tol || p.depth >= max_depth) {
      done.push_back(p);
      continue;
    }
    const double c = 0.5 * (p.a + p.b);
    PanelResult left = gk15(f, p.a, c);
    PanelResult right = gk15(f, c, p.b);
    work.push_back({p.a, c, left.k15, left.err, p.depth + 1});
    work.push_back({c, p.b, right.k15, right.err, p.depth + 1});
  }
  double sum = 0.0;
  for (const auto& p : done) sum += p.k15;
  for (const auto& p : work) sum += p.k15;
  return sum;
}

void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n with the Chebyshev-based initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
  std::vector<double> x, w;
  gauss_legendre_rule(n, x, w);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
  return s * h;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(const std::vector<double>& v) {
  double acc = -std::numeric_limits<double>::infinity();
  for (double x : v) acc = log_add_exp(acc, x);
  return acc;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("CubicSpline: need >= 2 matching nodes");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0;
    b[i] = 2.0 * (h0 + h1);
    c[i] = h1;
    d[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Thomas solve with natural end conditions m_0 = m_{n-1} = 0.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = x_.size();
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  std::size_t j = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
  if (j == 0) j = 1;
  if (j >= n) j = n - 1;
  const std::size_t i = j - 1;
  const double h = x_[j] - x_[i];
  const double t = (x - x_[i]) / h;
  const double u = 1.0 - t;
  return u * y_[i] + t * y_[j] +
         h * h / 6.0 * ((u * u * u - u) * m_[i] + (t * t * t - t) * m_[j]);
}

std::vector<double> halton_point(std::size_t i, int dim) {
  static const int primes[6] = {2, 3, 5, 7, 11, 13};
  if (dim < 1 || dim > 6) throw std::invalid_argument("halton_point: dim in [1,6]");
  std::vector<double> p(dim, 0.0);
  for (int d = 0; d < dim; ++d) {
    const int base = primes[d];
    double f = 1.0, r = 0.0;
    std::size_t k = i + 1;
    while (k > 0) {
      f /= base;
      r += f * static_cast<double>(k % base);
      k /= base;
    }
    p[d] = r;
  }
  return p;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t threads = 1;
  if (const char* env = std::getenv("FUJITALAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 1) threads = static_cast<std::size_t>(v);
  }
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fujitalab
