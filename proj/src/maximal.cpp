#include "fujitalab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double chart_cube_side(const ModelManifold& M) {
  const double rho_inf = M.rho_infinity();
  return std::min(std::isfinite(rho_inf) ? rho_inf : 1.0, 1.0) / std::sqrt(M.dim());
}

double overlap_len(const CantorInterval& iv, double lo, double hi) {
  return std::max(0.0, std::min(iv.b, hi) - std::max(iv.a, lo));
}

}  // namespace

ProductIndicator unit_cube_indicator(int N, double a) {
  ProductIndicator f;
  f.axes.assign(N, {CantorInterval{0.0, a}});
  return f;
}

ProductIndicator cantor_indicator(const CantorSet& S, int level, double a) {
  if (level < 0 || level > S.representable_levels)
    throw std::invalid_argument("cantor_indicator: level not representable in doubles");
  ProductIndicator f;
  std::vector<CantorInterval> axis;
  for (const auto& iv : S.intervals[level]) axis.push_back({iv.a * a, iv.b * a});
  f.axes.assign(S.N, axis);
  return f;
}

double box_mass(const ProductIndicator& f, const std::vector<double>& lo,
                const std::vector<double>& hi) {
  double prod = f.scale;
  for (std::size_t i = 0; i < f.axes.size(); ++i) {
    double len = 0.0;
    for (const auto& iv : f.axes[i]) len += overlap_len(iv, lo[i], hi[i]);
    prod *= len;
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double maximal_eval(const ProductIndicator& f, double p, const std::vector<double>& x,
                    const MaximalConfig& cfg) {
  const int N = static_cast<int>(f.axes.size());
  if (static_cast<int>(x.size()) != N) throw std::invalid_argument("maximal_eval: bad point");
  for (int i = 0; i < N; ++i)
    if (x[i] < 0.0 || x[i] > cfg.a)
      throw std::invalid_argument("maximal_eval: point outside the chart cube");
  const double expo = N * (1.0 - 2.0 / (N * p));
  std::vector<double> rho(cfg.p_grid);
  for (int i = 0; i < cfg.p_grid; ++i)
    rho[i] = cfg.a * cfg.p_min_frac *
             std::pow((1.0 - 1e-9) / cfg.p_min_frac, i / (cfg.p_grid - 1.0));

  auto axis_mass = [&](int axis, double r) {
    double len = 0.0;
    const double lo = x[axis] + (1.0 - 2.0 * cfg.r_bar) * r;
    const double hi = x[axis] + r;
    for (const auto& iv : f.axes[axis]) len += overlap_len(iv, lo, hi);
    return len;
  };

  double best = 0.0;
  if (N == 1) {
    for (double r : rho) {
      const double v = f.scale * axis_mass(0, r) * std::pow(r, -expo);
      best = std::max(best, v);
    }
    return best;
  }
  // N == 2: the per-axis masses factor; |P| couples the axes.
  std::vector<double> m0(rho.size()), m1(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    m0[i] = axis_mass(0, rho[i]);
    m1[i] = axis_mass(1, rho[i]);
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (m0[i] == 0.0) continue;
    for (std::size_t j = 0; j < rho.size(); ++j) {
      if (m1[j] == 0.0) continue;
      const double pn = std::sqrt(rho[i] * rho[i] + rho[j] * rho[j]);
      best = std::max(best, f.scale * m0[i] * m1[j] * std::pow(pn, -expo));
    }
  }
  return best;
}

double morrey_norm(const RadonMeasure& f, const ModelManifold& M, const MorreyConfig& cfg) {
  const int N = M.dim();
  const double expo = N - 2.0 / (cfg.p - 1.0);
  const double rho_inf = M.rho_infinity();
  const double rho_hi = (std::isfinite(rho_inf) ? rho_inf : 1.0) * (1.0 - 1e-9);
  const double rho_lo = rho_hi * cfg.rho_min_frac;
  double best = 0.0;
  for (int i = 0; i < cfg.rho_samples; ++i) {
    const double rho = rho_lo * std::pow(rho_hi / rho_lo, i / (cfg.rho_samples - 1.0));
    const double mass = sup_ball_mass(f, M, rho, cfg.center_samples).value;
    best = std::max(best, mass / (phi_log(rho, cfg.p) * std::pow(rho, expo)));
  }
  return best;
}

double cantor_y_norm_log_upper(const CantorSet& S, const ModelManifold& M, int n,
                               double lambda_du) {
  if (n < 0 || n > S.n_max) throw std::invalid_argument("cantor_y_norm_log_upper: bad level");
  const int N = S.N;
  const double p = S.p;
  const double expo = N - 2.0 / (p - 1.0);
  const double a = chart_cube_side(M);
  const double ln2 = std::log(2.0);
  const double log_total = n * N * ln2 + N * S.log_R(n);  // log |I_n|^N ... per axis 2^n R_n

  // log of the per-axis maximal window mass bound at window length w:
  //   min(w, min_j count_j(w) * m_j),  m_j = 2^{n-j} R_n.
  auto log_window_bound = [&](double log_w) {
    double best = log_w;  // chi <= 1
    for (int j = 0; j <= n; ++j) {
      const double log_m = (n - j) * ln2 + S.log_R(n);
      double log_cnt = 0.0;
      if (j >= 1) {
        const double log_D = S.log_R(j - 1) + std::log1p(-S.levels[j].ratio);
        const double log_w_plus_R = log_add_exp(log_w, S.log_R(j));
        log_cnt = log_add_exp(log_w_plus_R - log_D, 0.0);
      }
      best = std::min(best, log_cnt + log_m);
    }
    return best;
  };

  // Scan lambda = 4 rho / a on a log grid; the weight is decreasing and the
  // window bound nondecreasing, so weight(left) * bound(right) certifies
  // each cell.
  const double rho_inf = M.rho_infinity();
  const double u_min = S.log_R(n) - 7.0;
  double u_max;
  if (std::isfinite(rho_inf))
    u_max = std::log(4.0 * rho_inf / a) - 1e-12;
  else
    u_max = std::log(8.0 * std::max(1.0, 1.0 / a));
  auto log_weight = [&](double u) {
    const double log_rho = std::log(0.25 * a) + u;
    return -expo * log_rho - log_phi_log(log_rho, p);
  };
  double best = kNegInf;
  const std::size_t cells =
      static_cast<std::size_t>(std::ceil((u_max - u_min) / lambda_du)) + 1;
  double u = u_min;
  for (std::size_t k = 0; k < cells && u < u_max; ++k) {
    const double u_next = std::min(u + lambda_du, u_max);
    const double cell = log_weight(u) + N * log_window_bound(ln2 + u_next);
    best = std::max(best, cell);
    u = u_next;
  }
  // lambda -> infinity limit when the sup range is unbounded (kappa = 0 case).
  if (!std::isfinite(rho_inf)) {
    const double tail = -expo * (std::log(0.25 * a) + u_max) -
                        (expo > 1e-12 ? log_phi_log(std::log(0.25 * a) + u_max, p) : 0.0) +
                        N * std::min(log_total, log_window_bound(ln2 + u_max));
    best = std::max(best, tail);
  }
  return (N - 1) * ln2 + N * std::log(a) + best;
}

double cantor_hf_lp_log_lower(const CantorSet& S, const ModelManifold& M, int n, int s_grid) {
  if (n < 0 || n > S.n_max) throw std::invalid_argument("cantor_hf_lp_log_lower: bad level");
  const int N = S.N;
  const double p = S.p;
  const double a = chart_cube_side(M);
  const double ln2 = std::log(2.0);
  const double expo = N * (1.0 - 2.0 / (N * p));  // |P|-normalization power
  const double r_bar = S.r_bar;
  const double log_1m2r = std::log1p(-2.0 * r_bar);
  const double prefix = (1 - N) * ln2 + (N - 2.0 * N * p + 2.0) * std::log(a);

  if (n == 0) {
    // Windows anchored at the right edge: per-axis capture 2 r_bar s with
    // rho = s, s = 1 - zeta.
    if (N == 1) {
      // integral of (2 r_bar s * s^{-(1-2/p)})^p ds = (2 r_bar)^p / 3
      return prefix + p * std::log(2.0 * r_bar) - std::log(3.0);
    }
    // N == 2: numeric log-accumulation on a product log grid.
    std::vector<double> terms;
    const double u_lo = std::log(1e-6), u_hi = 0.0;
    const double du = (u_hi - u_lo) / s_grid;
    for (int i = 0; i < s_grid; ++i) {
      const double ui = u_lo + i * du;
      const double si = std::exp(ui + du);  // right endpoint: value decreasing in s
      for (int j = 0; j < s_grid; ++j) {
        const double uj = u_lo + j * du;
        const double sj = std::exp(uj + du);
        const double log_P2 = std::log(si * si + sj * sj);
        const double log_val =
            std::log(2.0 * r_bar * si) + std::log(2.0 * r_bar * sj) - 0.5 * expo * log_P2;
        const double log_ds = ui + std::log(std::expm1(du)) + uj + std::log(std::expm1(du));
        terms.push_back(p * log_val + log_ds);
      }
    }
    return prefix + log_sum_exp(terms);
  }

  const double q = p * expo;  // canonical-box integrand power in w = s - R_{j+1}
  std::vector<double> level_terms;
  for (int j = 0; j < n; ++j) {
    // s ranges over ((2 r_bar)^{-1} R_{j+1}, R_j - R_{j+1}), capped so that
    // the canonical box stays inside Q_1: s < (1-2 r_bar) + R_{j+1}.
    const double log_s_lo = S.log_R(j + 1) - std::log(2.0 * r_bar);
    double log_s_hi = S.log_R(j) + std::log1p(-S.levels[j + 1].ratio);
    log_s_hi = std::min(
        log_s_hi, log_add_exp(std::log(0.999) + log_1m2r, S.log_R(j + 1)));
    if (!(log_s_hi > log_s_lo)) continue;
    const double log_m = (n - j - 1) * ln2 + S.log_R(n);  // captured mass per axis
    // w = s - R_{j+1} in (w0, W): endpoints in log form.
    const double log_w0 =
        log_s_lo + std::log1p(-std::exp(S.log_R(j + 1) - log_s_lo));
    const double log_W =
        log_s_hi + std::log1p(-std::exp(S.log_R(j + 1) - log_s_hi));
    const double delta = log_W - log_w0;
    if (!(delta > 0.0)) continue;
    double log_int;  // log of the exact s-integral of the minorant^p
    if (N == 1) {
      // integral of w^{-q} dw: q = p - 2 here.
      if (std::abs(q - 1.0) < 1e-9) {
        log_int = std::log(delta);
      } else if (q < 1.0) {
        log_int = (1.0 - q) * log_W + std::log1p(-std::exp((1.0 - q) * (-delta))) -
                  std::log(1.0 - q);
      } else {
        log_int = (1.0 - q) * log_w0 + std::log1p(-std::exp((1.0 - q) * delta)) -
                  std::log(q - 1.0);
      }
      level_terms.push_back(j * ln2 + p * (log_m + expo * log_1m2r) + log_int);
    } else {
      // Two axes at the same level: restrict to the triangle w2 <= w1 where
      // (rho1^2 + rho2^2)^{-q/2} >= 2^{-q/2} rho1^{-q}, then integrate
      // 2 * w1^{-q} (w1 - w0) exactly. q = 2p - 2 >= 2 for p >= p_F(2).
      double bracket;
      if (std::abs(q - 2.0) < 1e-9) {
        bracket = delta - 1.0 + std::exp(-delta);  // integral of (1/w - w0/w^2)
        log_int = (2.0 - q) * log_w0 + std::log(bracket);
      } else {
        bracket = 1.0 / (q - 2.0) - 1.0 / (q - 1.0) -
                  std::exp((2.0 - q) * delta) / (q - 2.0) +
                  std::exp((1.0 - q) * delta) / (q - 1.0);
        log_int = (2.0 - q) * log_w0 + std::log(std::max(bracket, 1e-300));
      }
      const double log_pref = std::log(2.0) - 0.5 * q * ln2;  // triangle + |P| split
      level_terms.push_back(2 * j * ln2 + p * (2.0 * log_m + expo * log_1m2r) +
                            log_pref + log_int);
    }
  }
  if (level_terms.empty()) return kNegInf;
  return prefix + log_sum_exp(level_terms);
}

double lower_sum(const CantorSet& S, int n) {
  if (n < 0 || n > S.n_max) throw std::invalid_argument("lower_sum: bad level");
  const int N = S.N;
  const double p = S.p;
  const double p_F = fujita_exponent(N);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double phi_pm1 = phi_pow_pm1_from_L(-S.log_R(j));
    if (p > p_F + 1e-12)
      sum += phi_pm1;
    else
      sum += phi_pm1 * (S.log_R(j) - S.log_R(j + 1));
  }
  return sum;
}

double divergence_partial(double p, int k) {
  if (k < 1) throw std::invalid_argument("divergence_partial: k >= 1");
  if (!(p > 1.0)) throw std::invalid_argument("divergence_partial: p > 1");
  // substitve eta = e^{-u}: integral of (log(e + e^u))^{-1} du on (0, k ln 2)
  // raised to the power p-1 times -1/(p-1) ... phi^{p-1} = 1/log(e+1/eta).
  return integrate(
      [&](double u) {
        const double inner = u > 1.0 ? u + std::log1p(std::exp(1.0 - u))
                                     : std::log(M_E + std::exp(u));
        return 1.0 / inner;
      },
      0.0, k * std::log(2.0), 1e-11);
}

std::string RatioCurve::to_csv() const {
  std::ostringstream os;
  os << "n,ratio,lower_sum,fitted_c,fitted_C\n";
  os.precision(17);
  for (std::size_t i = 0; i < n.size(); ++i)
    os << n[i] << ',' << ratio[i] << ',' << lower_sums[i] << ',' << fitted_c << ','
       << fitted_C << '\n';
  return os.str();
}

RatioCurve ratio_curve(const CantorSet& S, const ModelManifold& M, int n_max, int s_grid,
                       double lambda_du) {
  if (n_max > S.n_max) throw std::invalid_argument("ratio_curve: n_max exceeds the set depth");
  RatioCurve out;
  out.s_grid = s_grid;
  for (int n = 0; n <= n_max; ++n) {
    const double log_num = cantor_hf_lp_log_lower(S, M, n, s_grid);
    const double log_y = cantor_y_norm_log_upper(S, M, n, lambda_du);
    out.n.push_back(n);
    out.log_num.push_back(log_num);
    out.log_y_up.push_back(log_y);
    const double lrp = log_num - S.p * log_y;
    out.log_ratio_p.push_back(lrp);
    out.ratio.push_back(std::exp(lrp / S.p));
    out.lower_sums.push_back(lower_sum(S, n));
  }
  // Least-squares slope of ratio^p against lower_sum over n >= 1, then the
  // smallest shift making the affine minorant valid at every n.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int cnt = 0;
  for (std::size_t i = 1; i < out.n.size(); ++i) {
    const double x = out.lower_sums[i];
    const double y = std::exp(out.log_ratio_p[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2 && sxx * cnt - sx * sx > 0.0) {
    out.fitted_c = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    if (out.fitted_c < 0.0) out.fitted_c = 0.0;
    double shift = 0.0;
    for (std::size_t i = 0; i < out.n.size(); ++i)
      shift = std::max(shift,
                       out.fitted_c * out.lower_sums[i] - std::exp(out.log_ratio_p[i]));
    out.fitted_C = shift;
  }
  return out;
}

}  // namespace fujitalab
