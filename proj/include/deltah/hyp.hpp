#pragma once

// pFq by forward summation, plus the G_{1,1} and G_{2,2} closed forms.

#include <cmath>
#include <limits>
#include <vector>

#include "gamma.hpp"
#include "params.hpp"
#include "poly.hpp"

namespace deltah {

struct HypSeriesSpec {
  std::vector<double> upper, lower;
  double argument = 0;
  int max_terms = 200000;
  double tail_tol = 1e-17;
};

struct HypSeriesResult {
  double value = 0;
  int terms = 0;
};

namespace detail {

// Smallest n with upper parameter -n, or -1.
inline int termination_index(const std::vector<double>& upper) {
  int best = -1;
  for (double u : upper)
    if (is_nonpositive_integer(u) && u > -1e9) {
      const int n = int(-u);
      if (best < 0 || n < best) best = n;
    }
  return best;
}

// Sums t_n from n = n0 on, with t_{n+1}/t_n = prod(u+n) z / (prod(l+n) (n+1)).
inline HypSeriesResult sum_series(double t0, int n0, int n_end, const std::vector<double>& upper,
                                  const std::vector<double>& lower, double z, int max_terms,
                                  double tail_tol) {
  accumulator acc;
  double t = t0;
  int terms = 0;
  for (int n = n0;; ++n) {
    acc.add(t);
    ++terms;
    if (n_end >= 0 && n >= n_end) break;
    double ratio = z / (n + 1);
    for (double u : upper) ratio *= u + n;
    for (double l : lower) ratio /= l + n;
    const double next = t * ratio;
    if (n_end < 0) {
      const double r = std::max(std::abs(ratio), std::abs(z));
      if (r < 1 && std::abs(next) / (1 - r) <= tail_tol * std::max(1.0, std::abs(acc.value()))) {
        acc.add(next);
        ++terms;
        break;
      }
    }
    if (terms >= max_terms) throw convergence_error("pfq: term budget exhausted");
    t = next;
  }
  return {acc.value(), terms};
}

} // namespace detail

inline HypSeriesResult pfq_detailed(const HypSeriesSpec& s) {
  const int n_end = detail::termination_index(s.upper);
  for (double l : s.lower)
    if (detail::is_nonpositive_integer(l) && (n_end < 0 || n_end > int(-l)))
      throw pole_error("pfq: lower parameter hits a pole before the series terminates");
  if (n_end < 0 && std::abs(s.argument) >= 1)
    throw domain_error("pfq: non-terminating series needs |z| < 1");
  if (n_end < 0 && s.upper.size() > s.lower.size() + 1)
    throw domain_error("pfq: divergent series (p > q + 1)");
  return detail::sum_series(1.0, 0, n_end, s.upper, s.lower, s.argument, s.max_terms, s.tail_tol);
}

inline double pfq(const HypSeriesSpec& s) { return pfq_detailed(s).value; }

inline double pfq(std::vector<double> upper, std::vector<double> lower, double z) {
  return pfq(HypSeriesSpec{std::move(upper), std::move(lower), z});
}

//! 2F1(a, b; c; z)/Gamma(c), finite for every c.
inline double hyp2f1_regularized(double a, double b, double c, double z) {
  if (std::abs(z) >= 1) throw domain_error("hyp2f1_regularized: needs |z| < 1");
  int n0 = 0;
  double t0 = rgamma(c);
  if (detail::is_nonpositive_integer(c)) {
    n0 = int(-c) + 1;
    t0 = pochhammer(a, n0) * pochhammer(b, n0) * detail::pow_over_factorial(z, n0);
  }
  const int n_end = detail::termination_index({a, b});
  if (n_end >= 0 && n_end < n0) return 0;
  if (t0 == 0) return 0;
  // shifted lower parameter c + n0 - n0 reproduces Gamma(c+n) in the ratio
  return detail::sum_series(t0, n0, n_end, {a, b}, {c}, z, 200000, 1e-17).value;
}

//! G_{1,1}^{1,0}(z | b; a) = z^a (1-z)^{b-a-1} / Gamma(b-a)
inline double g11_closed(double a, double b, double z) {
  if (!(z > 0 && z < 1)) throw domain_error("g11_closed: z must lie in (0,1)");
  const double r = rgamma(b - a);
  if (r == 0) return 0;
  return std::pow(z, a) * std::pow(1 - z, b - a - 1) * r;
}

//! G_{2,2}^{2,0}: z^{a2} (1-z)^{psi-1} 2F1(b1-a1, b2-a1; psi; 1-z)/Gamma(psi)
inline double g22_closed(double a1, double a2, double b1, double b2, double z) {
  if (!(z > 0 && z < 1)) throw domain_error("g22_closed: z must lie in (0,1)");
  const double psi = b1 + b2 - a1 - a2;
  return std::pow(z, a2) * std::pow(1 - z, psi - 1) * hyp2f1_regularized(b1 - a1, b2 - a1, psi, 1 - z);
}

} // namespace deltah
