#include "fujitalab/cantor.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fujitalab/measures.hpp"
#include "fujitalab/numerics.hpp"

namespace fujitalab {

namespace {

// log(e + e^L), stable for large L.
double log_e_plus_exp(double L) {
  if (L > 1.0) return L + std::log1p(std::exp(1.0 - L));
  return std::log(M_E + std::exp(L));
}

// log phi(R)^{... } pieces: log phi(e^{-L}) = -(1/(p-1)) log(log(e + e^L)).
double log_phi_from_L(double L, double p) {
  return -std::log(log_e_plus_exp(L)) / (p - 1.0);
}

}  // namespace

double cantor_identity_residual(int N, double p, int n, double log_R) {
  const double expo = N - 2.0 / (p - 1.0);
  const double L = -log_R;
  const double lhs = N * n * std::log(2.0) + expo * log_R + log_phi_from_L(L, p);
  const double rhs = std::log(phi_log(0.5, p));
  return std::abs(std::expm1(lhs - rhs));
}

double cantor_log_R(int N, double p, int n) {
  if (N < 1) throw std::invalid_argument("cantor_log_R: N >= 1");
  const double p_F = fujita_exponent(N);
  if (p < p_F - 1e-12) throw std::invalid_argument("cantor_log_R: requires p >= p_F");
  if (n == 0) return 0.0;
  const double expo = N - 2.0 / (p - 1.0);
  const double ln2 = std::log(2.0);
  if (std::abs(expo) < 1e-9) {
    // Critical case: phi(R_n) = phi(1/2) 2^{-Nn} inverts explicitly,
    //   log(e + 1/R_n) = log(e+2) * 2^{Nn(p-1)}.
    const double W = std::log(M_E + 2.0) * std::exp2(N * n * (p - 1.0));
    const double corr = W > 700.0 ? 0.0 : std::log1p(-M_E * std::exp(-W));
    return -(W + corr);
  }
  // p > p_F: G(L) = Nn log2 - expo*L + log phi(e^{-L}) - log phi(1/2) is
  // strictly decreasing in L on (log 2, inf) with G(log 2) > 0.
  auto G = [&](double L) {
    return N * n * ln2 - expo * L + log_phi_from_L(L, p) - std::log(phi_log(0.5, p));
  };
  double lo = ln2;
  double hi = std::max(2.0 * N * n * ln2 / expo + 10.0, lo + 1.0);
  while (G(hi) > 0.0) hi *= 2.0;  // cannot loop for long: G ~ -expo*L
  const double L = bisect(G, lo, hi, 1e-15, 400);
  return -L;
}

CantorSet cantor_levels(int N, double p, int n_max) {
  if (n_max < 1) throw std::invalid_argument("cantor_levels: n_max >= 1");
  CantorSet S;
  S.N = N;
  S.p = p;
  S.n_max = n_max;
  S.levels.resize(n_max + 1);
  S.levels[0] = {0.0, 1.0, 1.0, 0.0};
  double r_bar = 0.0;
  double r_lower = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    const double lr = cantor_log_R(N, p, n);
    CantorLevelInfo info;
    info.log_R = lr;
    info.R = lr > -700.0 ? std::exp(lr) : 0.0;
    info.ratio = std::exp(lr - S.levels[n - 1].log_R);
    info.identity_residual = cantor_identity_residual(N, p, n, lr);
    if (!(info.ratio < 0.5))
      throw std::logic_error("cantor_levels: ratio bound r_n < 1/2 violated");
    r_bar = std::max(r_bar, info.ratio);
    r_lower = std::min(r_lower, info.ratio);
    S.levels[n] = info;
  }
  S.r_bar = r_bar;
  const double p_F = fujita_exponent(N);
  S.r_lower = p > p_F + 1e-12 ? r_lower : 0.0;

  // Interval endpoints while positions resolve in double arithmetic.
  S.intervals.clear();
  S.intervals.push_back({{0.0, 1.0}});
  S.representable_levels = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double Rn = S.levels[n].R;
    if (!(Rn > 1e-13) || S.intervals.back().size() > (1u << 20)) break;
    const auto& prev = S.intervals.back();
    std::vector<CantorInterval> cur;
    cur.reserve(prev.size() * 2);
    for (const auto& iv : prev) {
      cur.push_back({iv.a, iv.a + Rn});
      cur.push_back({iv.b - Rn, iv.b});
    }
    S.intervals.push_back(std::move(cur));
    S.representable_levels = n;
  }
  return S;
}

std::string CantorSet::to_json() const {
  std::ostringstream os;
  os.precision(30);
  os << "{\n  \"N\": " << N << ",\n  \"p\": " << p << ",\n  \"n_max\": " << n_max
     << ",\n  \"r_bar\": " << r_bar << ",\n  \"r_lower\": " << r_lower
     << ",\n  \"levels\": [\n";
  for (std::size_t n = 0; n < levels.size(); ++n) {
    os << "    {\"n\": " << n << ", \"log_R\": " << levels[n].log_R
       << ", \"R\": " << levels[n].R << ", \"ratio\": " << levels[n].ratio
       << ", \"identity_residual\": " << levels[n].identity_residual << "}"
       << (n + 1 < levels.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"representable_levels\": " << representable_levels
     << ",\n  \"intervals\": [\n";
  for (std::size_t n = 0; n < intervals.size(); ++n) {
    os << "    [";
    for (std::size_t l = 0; l < intervals[n].size(); ++l) {
      os << "[\"" << intervals[n][l].a << "\", \"" << intervals[n][l].b << "\"]"
         << (l + 1 < intervals[n].size() ? ", " : "");
    }
    os << "]" << (n + 1 < intervals.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace fujitalab
