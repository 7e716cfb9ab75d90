#pragma once

// Log-gamma, digamma and the gamma ratio W(s).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "params.hpp"
#include "poly.hpp"

namespace deltah {

using cplx = std::complex<double>;

namespace detail {

inline constexpr double pi = std::numbers::pi;

inline bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

inline bool is_pole(cplx z) { return z.imag() == 0 && is_nonpositive_integer(z.real()); }

// B_{2k} / (2k (2k-1)), k = 1..
inline constexpr double stirling_coeffs[] = {
    1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188,
    -691.0 / 360360, 1.0 / 156, -3617.0 / 122400, 43867.0 / 244188, -174611.0 / 125400};

inline cplx log_gamma_stirling(cplx z) {
  const cplx w = 1.0 / z, w2 = w * w;
  cplx series = 0, pw = w;
  for (double c : stirling_coeffs) {
    series += c * pw;
    pw *= w2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) + series;
}

inline cplx log1p(cplx u) {
  const double x = u.real(), y = u.imag();
  return {0.5 * std::log1p(2 * x + x * x + y * y), std::atan2(y, 1 + x)};
}

// Branch of log sin(pi z) continuous on Im z >= 0.
inline cplx log_sin_pi_upper(cplx z) {
  const cplx i(0, 1);
  return -i * pi * z - std::log(2.0) + i * (pi / 2) + log1p(-std::exp(2.0 * i * pi * z));
}

inline cplx cot_pi_upper(cplx z) {
  const cplx i(0, 1);
  const cplx w = std::exp(2.0 * i * pi * z);
  return i * (1.0 + w) / (w - 1.0);
}

} // namespace detail

//! Principal branch of log Gamma(z).
inline cplx log_gamma(cplx z) {
  using namespace detail;
  if (is_pole(z)) throw pole_error("log_gamma: pole at a non-positive integer");
  if (z.imag() < 0) return std::conj(log_gamma(std::conj(z)));
  if (z.real() < 0.5) return std::log(pi) - log_sin_pi_upper(z) - log_gamma(1.0 - z);
  if (std::abs(z) >= 12 && z.real() >= 0) return log_gamma_stirling(z);
  cplx shift = 0;
  while (z.real() < 12) {
    shift += std::log(z);
    z += 1.0;
  }
  return log_gamma_stirling(z) - shift;
}

inline cplx digamma(cplx z) {
  using namespace detail;
  if (is_pole(z)) throw pole_error("digamma: pole at a non-positive integer");
  if (z.imag() < 0) return std::conj(digamma(std::conj(z)));
  if (z.real() < 0.5) return digamma(1.0 - z) - pi * cot_pi_upper(z);
  cplx shift = 0;
  while (std::abs(z) < 12 || z.real() < 6) {
    shift += 1.0 / z;
    z += 1.0;
  }
  // log z - 1/(2z) - sum B_{2k}/(2k z^{2k})
  static constexpr double c[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132,
                                 -691.0 / 32760, 1.0 / 12, -3617.0 / 8160};
  const cplx w2 = 1.0 / (z * z);
  cplx series = 0, pw = w2;
  for (double ck : c) {
    series += ck * pw;
    pw *= w2;
  }
  return std::log(z) - 0.5 / z - series - shift;
}

inline double digamma(double x) {
  if (detail::is_nonpositive_integer(x)) throw pole_error("digamma: pole at a non-positive integer");
  return boost::math::digamma(x);
}

//! sign of Gamma(x), x not a pole
inline double gamma_sign(double x) {
  if (x > 0) return 1;
  return static_cast<long long>(std::ceil(-x)) % 2 == 1 ? -1 : 1;
}

//! 1/Gamma(x), zero at the poles of Gamma.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0;
  if (x > -170 && x < 170) return 1 / std::tgamma(x);
  return gamma_sign(x) * std::exp(-std::lgamma(x));
}

//! n!/Gamma(n + mu), zero when n + mu is a pole of Gamma.
inline double factorial_over_gamma(int n, double mu) {
  const double z = n + mu;
  if (detail::is_nonpositive_integer(z)) return 0;
  if (z > 0) return 1 / boost::math::tgamma_delta_ratio(z, 1 - mu);
  return std::tgamma(n + 1.0) * rgamma(z);
}

//! psi(z)/Gamma(z), continued to its limit (-1)^{j+1} j! at z = -j.
inline double psi_over_gamma(double z) {
  if (detail::is_nonpositive_integer(z)) {
    const int j = int(-z);
    return (j % 2 == 0 ? -1.0 : 1.0) * std::tgamma(j + 1.0);
  }
  return digamma(z) * rgamma(z);
}

//! log W(s); returns -inf real part when a denominator factor sits on a pole.
inline cplx log_W(const ParameterSet& ps, cplx s) {
  cplx acc = 0;
  for (std::size_t k = 0; k < ps.p(); ++k) {
    const cplx z = ps.A[k] * s + ps.a[k];
    if (detail::is_pole(z)) throw pole_error("W: numerator gamma factor at a pole");
    acc += log_gamma(z);
  }
  for (std::size_t j = 0; j < ps.q(); ++j) {
    const cplx z = ps.B[j] * s + ps.b[j];
    if (detail::is_pole(z)) return {-INFINITY, 0};
    acc -= log_gamma(z);
  }
  return acc;
}

inline cplx W(const ParameterSet& ps, cplx s) {
  const cplx l = log_W(ps, s);
  if (std::isinf(l.real())) return 0;
  return std::exp(l);
}

inline double W(const ParameterSet& ps, double s) {
  double lg = 0, sign = 1;
  for (std::size_t k = 0; k < ps.p(); ++k) {
    const double z = ps.A[k] * s + ps.a[k];
    if (detail::is_nonpositive_integer(z)) throw pole_error("W: numerator gamma factor at a pole");
    lg += std::lgamma(z);
    sign *= gamma_sign(z);
  }
  for (std::size_t j = 0; j < ps.q(); ++j) {
    const double z = ps.B[j] * s + ps.b[j];
    if (detail::is_nonpositive_integer(z)) return 0;
    lg -= std::lgamma(z);
    sign *= gamma_sign(z);
  }
  return sign * std::exp(lg);
}

//! nu rho^z z^{-mu} sum_{r<=M} l_r z^{-r}
struct AsymptoticExpansion {
  double nu = 1, rho = 1, mu = 0;
  std::vector<double> l;
  int M = 0;
};

inline constexpr double asymptotic_sector_margin = 0.1;

inline cplx W_asymptotic(const AsymptoticExpansion& e, cplx z, int M) {
  if (M < 0 || M > e.M) throw domain_error("W_asymptotic: order outside the stored expansion");
  if (std::abs(z) < 5) throw domain_error("W_asymptotic: |z| < 5");
  if (std::abs(std::arg(z)) >= detail::pi - asymptotic_sector_margin)
    throw domain_error("W_asymptotic: z outside the sector |arg z| < pi - 0.1");
  const cplx w = 1.0 / z;
  cplx sum = 0, pw = 1;
  for (int r = 0; r <= M; ++r) {
    sum += e.l[r] * pw;
    pw *= w;
  }
  return e.nu * std::exp(z * std::log(e.rho) - e.mu * std::log(z)) * sum;
}

} // namespace deltah
