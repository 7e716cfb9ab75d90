#pragma once

// Coefficient families of the singular expansion: q_m, l_r, q~_m, c_r, a_n
// and Noerlund's g_n.
//
// Long tables are built in factorial-scaled form (x_r / r!) so that several
// hundred terms fit in double precision; the unscaled public arrays are
// capped at max_public_order.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gamma.hpp"
#include "params.hpp"
#include "poly.hpp"

namespace deltah {

enum class Route { recurrence, explicit_sum, determinant };
enum class ARoute { stirling, noerlund };

inline const char* to_string(Route r) {
  switch (r) {
  case Route::recurrence: return "recurrence";
  case Route::explicit_sum: return "explicit";
  case Route::determinant: return "determinant";
  }
  return "?";
}
inline const char* to_string(ARoute r) { return r == ARoute::stirling ? "stirling" : "noerlund"; }

namespace detail {

// beta * x^{-m}, kept finite when x^{-m} alone would overflow
inline double scaled_term(double beta, double x, int m) {
  if (beta == 0) return 0;
  const double mag = std::exp(std::log(std::abs(beta)) - m * std::log(x));
  return beta < 0 ? -mag : mag;
}

inline std::vector<double> log_factorials(int n) {
  std::vector<double> lf(n + 1);
  for (int k = 0; k <= n; ++k) lf[k] = std::lgamma(k + 1.0);
  return lf;
}

// x_r = (1/r) sum_m y_m x_{r-m} on factorial-scaled sequences:
// x'_r = (1/r) sum_m y'_m x'_{r-m} / C(r, m)
inline std::vector<double> scaled_exp_recurrence(const std::vector<double>& y, int n) {
  const auto lf = log_factorials(n);
  std::vector<double> x(n + 1, 0.0);
  x[0] = 1;
  for (int r = 1; r <= n; ++r) {
    accumulator acc;
    for (int m = 1; m <= r; ++m) {
      if (y[m] == 0 || x[r - m] == 0) continue;
      acc.add(y[m] * x[r - m] * std::exp(lf[m] + lf[r - m] - lf[r]));
    }
    x[r] = acc.value() / r;
    if (!std::isfinite(x[r])) throw convergence_error("coefficient recurrence overflowed");
  }
  return x;
}

inline void check_max_index(int n) {
  if (n < 0) throw domain_error("negative coefficient index");
  check_public_order(n);
}

} // namespace detail

//! q_m / m!, m = 0..n (entry 0 unused, set to 0)
inline std::vector<double> q_scaled(const ParameterSet& ps, int n) {
  validate(ps);
  std::vector<double> q(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    detail::accumulator acc;
    for (std::size_t k = 0; k < ps.p(); ++k)
      acc.add(detail::scaled_term(bernoulli_poly_scaled(m + 1, ps.a[k]), ps.A[k], m));
    for (std::size_t j = 0; j < ps.q(); ++j)
      acc.add(-detail::scaled_term(bernoulli_poly_scaled(m + 1, ps.b[j]), ps.B[j], m));
    q[m] = (m % 2 == 1 ? 1.0 : -1.0) * acc.value();
  }
  return q;
}

//! q~_m / m!
inline std::vector<double> q_tilde_scaled(const ParameterSet& ps, double theta, int n) {
  auto q = q_scaled(ps, n);
  const double mu = derive(ps).mu;
  for (int m = 1; m <= n; ++m)
    q[m] += (m % 2 == 1 ? 1.0 : -1.0) *
            (bernoulli_poly_scaled(m + 1, theta + mu) - bernoulli_poly_scaled(m + 1, theta + 1));
  return q;
}

inline std::vector<double> l_scaled(const ParameterSet& ps, int n) {
  return detail::scaled_exp_recurrence(q_scaled(ps, n), n);
}

inline std::vector<double> c_scaled(const ParameterSet& ps, double theta, int n) {
  return detail::scaled_exp_recurrence(q_tilde_scaled(ps, theta, n), n);
}

inline double compute_q(const ParameterSet& ps, int m) {
  if (m < 1) throw domain_error("compute_q: m must be at least 1");
  detail::check_max_index(m);
  return q_scaled(ps, m)[m] * detail::factorial(m);
}

inline double compute_q_tilde(const ParameterSet& ps, double theta, int m) {
  if (m < 1) throw domain_error("compute_q_tilde: m must be at least 1");
  detail::check_max_index(m);
  return q_tilde_scaled(ps, theta, m)[m] * detail::factorial(m);
}

namespace detail {
inline std::vector<double> unscale(std::vector<double> v) {
  for (std::size_t r = 0; r < v.size(); ++r) v[r] *= factorial(int(r));
  return v;
}
} // namespace detail

inline std::vector<double> compute_l(const ParameterSet& ps, int r_max) {
  detail::check_max_index(r_max);
  return detail::unscale(l_scaled(ps, r_max));
}

inline std::vector<double> compute_c(const ParameterSet& ps, double theta, int r_max) {
  detail::check_max_index(r_max);
  return detail::unscale(c_scaled(ps, theta, r_max));
}

inline constexpr int max_explicit_order = 20;
inline constexpr int max_determinant_order = 15;

//! sum over partitions k_1 + 2k_2 + ... + r k_r = r of prod (q_i/i)^{k_i} / k_i!
inline double compute_l_explicit(const ParameterSet& ps, int r) {
  if (r < 0) throw domain_error("negative order");
  if (r > max_explicit_order) throw domain_error("compute_l_explicit: r > 20 refused");
  if (r == 0) return 1;
  std::vector<double> w(r + 1, 0.0);
  for (int i = 1; i <= r; ++i) w[i] = compute_q(ps, i) / i;

  // parts chosen in decreasing size; the multiplicity of each size contributes 1/k!
  std::function<double(int, int)> rec = [&](int remaining, int largest) -> double {
    if (remaining == 0) return 1;
    double total = 0;
    for (int i = std::min(largest, remaining); i >= 1; --i) {
      double term = 1;
      for (int k = 1; k * i <= remaining; ++k) {
        term *= w[i] / k;
        total += term * rec(remaining - k * i, i - 1);
      }
    }
    return total;
  };
  return rec(r, r);
}

//! det(Omega_r)/r!
inline double compute_l_nair(const ParameterSet& ps, int r) {
  if (r < 0) throw domain_error("negative order");
  if (r > max_determinant_order) throw domain_error("compute_l_nair: r > 15 refused");
  if (r == 0) return 1;
  std::vector<double> q(r + 1);
  for (int m = 1; m <= r; ++m) q[m] = compute_q(ps, m);
  std::vector<std::vector<double>> M(r, std::vector<double>(r, 0.0));
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      if (i >= j)
        M[i - 1][j - 1] = q[i - j + 1] * detail::factorial(i - 1) / detail::factorial(j - 1);
      else if (i == j - 1)
        M[i - 1][j - 1] = -1;
    }
  double det = 1;
  for (int col = 0; col < r; ++col) {
    int piv = col;
    for (int i = col + 1; i < r; ++i)
      if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
    if (M[piv][col] == 0) return 0;
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det *= M[col][col];
    for (int i = col + 1; i < r; ++i) {
      const double f = M[i][col] / M[col][col];
      for (int j = col; j < r; ++j) M[i][j] -= f * M[col][j];
    }
  }
  return det / detail::factorial(r);
}

/*! Coefficients e_n of
      H(rho t) = t^{theta+1} (1-t)^{mu-1} sum_n e_n (1-t)^n,
    e_n = a_n n!/Gamma(n+mu), with 1/Gamma = 0 at the poles. */
inline std::vector<double> series_coefficients(const ParameterSet& ps, double theta, int n_max,
                                               ARoute route) {
  const auto d = derive(ps);
  std::vector<double> e(n_max + 1, 0.0);
  if (route == ARoute::stirling) {
    const auto c = c_scaled(ps, theta, n_max);
    ScaledStirlingRows rows(theta + d.mu);
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) rows.advance();
      detail::accumulator acc;
      const auto& s = rows.row();
      for (int r = 0; r <= n; ++r) acc.add(c[r] * s[r]);
      e[n] = d.nu * acc.value() * factorial_over_gamma(n, d.mu);
    }
  } else {
    const auto l = l_scaled(ps, n_max);
    std::vector<double> lw(n_max + 1);
    for (int r = 0; r <= n_max; ++r) lw[r] = l[r] * factorial_over_gamma(r, d.mu);
    for (int n = 0; n <= n_max; ++n) {
      const auto nb = noerlund_row_scaled(n, n + d.mu, -theta);
      detail::accumulator acc;
      for (int r = 0; r <= n; ++r) {
        const int k = n - r;
        acc.add((k % 2 == 0 ? 1.0 : -1.0) * lw[r] * nb[k]);
      }
      e[n] = d.nu * acc.value();
    }
  }
  for (double v : e)
    if (!std::isfinite(v)) throw convergence_error("series coefficients overflowed");
  return e;
}

inline std::vector<double> compute_a(const ParameterSet& ps, double theta, int n_max, ARoute route) {
  if (n_max < 0) throw domain_error("negative order");
  const auto d = derive(ps);
  std::vector<double> a(n_max + 1);
  if (route == ARoute::stirling) {
    const auto c = c_scaled(ps, theta, n_max);
    ScaledStirlingRows rows(theta + d.mu);
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) rows.advance();
      detail::accumulator acc;
      for (int r = 0; r <= n; ++r) acc.add(c[r] * rows.row()[r]);
      a[n] = d.nu * acc.value();
    }
    return a;
  }
  if (detail::is_nonpositive_integer(d.mu))
    throw pole_error("compute_a: the Noerlund form of a_n carries Gamma(n+mu), which has poles "
                     "for mu a non-positive integer; use series_coefficients instead");
  const auto e = series_coefficients(ps, theta, n_max, route);
  for (int n = 0; n <= n_max; ++n) a[n] = e[n] / factorial_over_gamma(n, d.mu);
  return a;
}

struct CoefficientTable {
  std::vector<double> q, l, q_tilde, c, a_coeffs;
  double theta = 0;
  int max_index = 0;
  Route l_route = Route::recurrence;
  ARoute a_route = ARoute::stirling;
};

inline CoefficientTable build_table(const ParameterSet& ps, double theta, int max_index,
                                    Route l_route = Route::recurrence,
                                    ARoute a_route = ARoute::stirling) {
  detail::check_max_index(max_index);
  CoefficientTable t;
  t.theta = theta;
  t.max_index = max_index;
  t.l_route = l_route;
  t.a_route = a_route;
  t.q = detail::unscale(q_scaled(ps, max_index));
  t.q[0] = 0;
  t.q_tilde = detail::unscale(q_tilde_scaled(ps, theta, max_index));
  t.q_tilde[0] = 0;
  switch (l_route) {
  case Route::recurrence: t.l = compute_l(ps, max_index); break;
  case Route::explicit_sum:
    for (int r = 0; r <= max_index; ++r) t.l.push_back(compute_l_explicit(ps, r));
    break;
  case Route::determinant:
    for (int r = 0; r <= max_index; ++r) t.l.push_back(compute_l_nair(ps, r));
    break;
  }
  t.c = compute_c(ps, theta, max_index);
  t.a_coeffs = compute_a(ps, theta, max_index, a_route);
  return t;
}

inline AsymptoticExpansion make_asymptotic(const ParameterSet& ps, int M) {
  const auto d = derive(ps);
  return {d.nu, d.rho, d.mu, compute_l(ps, M), M};
}

/*! Noerlund's g_n for G_{p,p}^{p,0}, stored as g_n/n!.
    `removed` is the 0-based index of the excluded a_k. */
struct NoerlundGTable {
  int p = 0;
  int removed = 0;
  std::vector<double> a_vec, b_vec;
  std::vector<double> g_scaled;

  double g(int n) const { return g_scaled.at(n) * detail::factorial(n); }
};

/*! g_n/n! from the nested-sum formula, as a chain of p-1 convolutions.
    kept_a has length len(b) - 1. */
inline std::vector<double> noerlund_g_scaled(const std::vector<double>& kept_a,
                                             const std::vector<double>& b, int n_max) {
  const std::size_t p = b.size();
  if (kept_a.size() + 1 != p) throw invalid_parameters("noerlund_g: need len(a) = len(b) - 1");
  std::vector<double> v(n_max + 1, 0.0);
  v[0] = 1;
  if (p == 1) return v;
  double psi = 0;
  for (std::size_t m = 1; m < p; ++m) {
    psi += b[m - 1] - kept_a[m - 1];
    const double beta = b[m] - kept_a[m - 1];
    std::vector<double> next(n_max + 1, 0.0);
    for (int i = 0; i <= n_max; ++i) {
      if (v[i] == 0) continue;
      // (psi+i)_d (beta)_d / (d! (i+1)_d)
      double T = 1;
      for (int d = 0; i + d <= n_max; ++d) {
        if (d > 0) T *= (psi + i + d - 1) * (beta + d - 1) / (d * double(i + d));
        next[i + d] += v[i] * T;
      }
    }
    v = std::move(next);
  }
  return v;
}

inline NoerlundGTable compute_g(const std::vector<double>& a, const std::vector<double>& b,
                                int removed, int n_max) {
  if (a.size() != b.size() || a.empty()) throw invalid_parameters("compute_g: need len(a) = len(b) >= 1");
  if (removed < 0 || removed >= int(a.size())) throw domain_error("compute_g: removed index out of range");
  NoerlundGTable t;
  t.p = int(a.size());
  t.removed = removed;
  t.a_vec = a;
  t.b_vec = b;
  std::vector<double> kept;
  for (int k = 0; k < t.p; ++k)
    if (k != removed) kept.push_back(a[k]);
  t.g_scaled = noerlund_g_scaled(kept, b, n_max);
  return t;
}

} // namespace deltah
