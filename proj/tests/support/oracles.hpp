#pragma once

// Reference evaluations written independently of the library: long double,
// different algebraic forms, series instead of libm special functions.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using ld = long double;

inline ld coverage_upper(ld n, ld k, ld rho, ld eps) {
  return 2.0L * (rho + std::log(n) - std::log(eps)) / (1.0L - std::exp(-k / (2.0L * n)));
}

inline ld coverage_lower(ld n, ld k, ld rho, ld eps) {
  const ld d = 2.0L * n * (1.0L - 1.0L / std::log(n));
  return 2.0L * (rho + std::log(n) - std::log(eps)) / (1.0L - std::exp(-3.0L * k / d));
}

struct Params {
  ld n, N, T, p_max, p_n, rho, alpha, e_minus;
};

inline ld log_budget(const Params& p) { return p.rho + (p.alpha + 1.0L) * std::log(p.n); }

inline ld closed_timeout(const Params& p) {
  return std::sqrt(4.0L * p.T * p.N * log_budget(p) /
                   (p.n * p.p_max * p.p_n * (1.0L - p.e_minus)));
}

// Newton on f(t) = t (1 - e^{-ct}) - 2 budget, from the saturated guess.
inline ld implicit_timeout(const Params& p) {
  const ld c = p.n * p.p_max * p.p_n * (1.0L - p.e_minus) / (2.0L * p.T * p.N);
  const ld target = 2.0L * log_budget(p);
  ld t = target + 1.0L / c;
  for (int i = 0; i < 200; ++i) {
    const ld e = std::exp(-c * t);
    const ld f = t * (1.0L - e) - target;
    const ld df = (1.0L - e) + t * c * e;
    const ld next = t - f / df;
    if (std::fabs(next - t) <= 1e-18L * t) return next;
    t = next;
  }
  return t;
}

// Maclaurin series of erf for |x| <= 3, continued fraction tail beyond.
inline ld normal_cdf(ld x) {
  const ld z = x / std::sqrt(2.0L);
  const ld pi = 3.14159265358979323846264338327950288L;
  if (std::fabs(z) <= 3.0L) {
    ld term = z, sum = z;
    for (int n = 1; n < 200; ++n) {
      term *= -z * z / n;
      const ld add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-22L) break;
    }
    return 0.5L + sum / std::sqrt(pi);
  }
  // erfc(a) = e^{-a^2}/sqrt(pi) * 1/(a + 1/2/(a + 1/(a + 3/2/(a + ...))))
  const ld a = std::fabs(z);
  ld frac = a;
  for (int k = 60; k >= 1; --k) frac = a + (k / 2.0L) / frac;
  const ld tail = std::exp(-a * a) / std::sqrt(pi) / frac / 2.0L;
  return x > 0 ? 1.0L - tail : tail;
}

inline ld p_tilde(ld ttl, ld rho, ld k, ld p_n) {
  const ld ps = 1.0L - std::exp(-k * p_n / 2.0L);
  const ld v = std::exp(rho - ttl * ps) * std::pow(ttl * ps / rho, rho);
  return v > 1.0L ? 1.0L : (v < 0.0L ? 0.0L : v);
}

inline ld attack_bound(ld ttl, ld rho, ld k, ld n, ld p_n, ld eps) {
  const ld pt = p_tilde(ttl, rho, k, p_n);
  if (pt <= 0.0L) return eps > 0.0L ? 0.0L : 1.0L;
  if (pt >= 1.0L) return 1.0L;
  return 1.0L - normal_cdf(std::sqrt(n) * (eps - pt) / std::sqrt(pt * (1.0L - pt)));
}

inline ld lambda_tilde(const Params& p, ld lambda_t) {
  const ld ln = std::log(p.n);
  const ld ex = 1.5L * p.p_n / ((1.0L - 1.0L / ln) * (1.0L - p.p_n - 1.0L / p.n));
  const ld v = 2.0L * log_budget(p) / (1.0L - std::exp(-ex));
  return v < lambda_t ? v : lambda_t;
}

inline ld max_load(const Params& p, ld lambda_t, ld lambda_m) {
  const ld lt = lambda_tilde(p, lambda_t);
  return p.n * p.p_max * p.p_n * (1.0L - p.e_minus) * lt * lt * lambda_m /
         (16.0L * log_budget(p));
}

// Binomial(m, q) pmf by log-gamma.
inline ld binom_pmf(int m, ld q, int k) {
  return std::exp(std::lgamma(ld(m + 1)) - std::lgamma(ld(k + 1)) - std::lgamma(ld(m - k + 1)) +
                  k * std::log(q) + (m - k) * std::log1p(-q));
}

inline ld truncated_binomial_mean(int m, ld q, int lo, int hi) {
  ld mass = 0, first = 0;
  for (int k = lo; k <= hi; ++k) {
    const ld w = binom_pmf(m, q, k);
    mass += w;
    first += k * w;
  }
  return first / mass;
}

// Distribution of the arc count of directed G(n, q) conditioned on every in-
// and out-degree lying in [lo, hi], by enumerating all 2^(n(n-1)) graphs.
inline std::vector<ld> conditioned_arc_law(int n, ld q, int lo, int hi) {
  const int pairs = n * (n - 1);
  std::vector<ld> law(pairs + 1, 0.0L);
  std::vector<int> in(n), out(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    std::fill(in.begin(), in.end(), 0);
    std::fill(out.begin(), out.end(), 0);
    int bit = 0, arcs = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        if (mask >> bit & 1) {
          ++out[u];
          ++in[v];
          ++arcs;
        }
        ++bit;
      }
    }
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      ok = in[v] >= lo && in[v] <= hi && out[v] >= lo && out[v] <= hi;
    }
    if (ok) law[arcs] += std::pow(q, arcs) * std::pow(1.0L - q, pairs - arcs);
  }
  ld total = 0;
  for (ld w : law) total += w;
  for (ld& w : law) w /= total;
  return law;
}

}  // namespace oracle
