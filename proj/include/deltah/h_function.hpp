#pragma once

// The delta-neutral H function H_{q,p}^{p,0}: Mellin-Barnes quadrature,
// the singular expansion about x = rho, and a dispatcher between them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "gamma.hpp"
#include "hyp.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace deltah {

enum class ContourShape { vertical, bent };
enum class Method { contour_vertical, contour_bent, series, closed_form, compact_support };

inline const char* to_string(Method m) {
  switch (m) {
  case Method::contour_vertical: return "contour_vertical";
  case Method::contour_bent: return "contour_bent";
  case Method::series: return "series";
  case Method::closed_form: return "closed_form";
  case Method::compact_support: return "compact_support";
  }
  return "?";
}

inline constexpr long default_max_nodes = 2'000'000;
inline constexpr double pole_clearance = 0.05;

struct ContourSpec {
  double c = std::numeric_limits<double>::quiet_NaN(); // NaN: chosen from x and the poles
  ContourShape shape = ContourShape::bent;
  double bend_angle = 0.35;
  double tail_tol = 1e-12;
  long max_nodes = default_max_nodes;
};

struct EvaluationResult {
  double value = 0;
  double abs_error_estimate = 0;
  Method method = Method::closed_form;
  long nodes_or_terms = 0;
};

struct SeriesSpec {
  double theta = 0;
  int n_max = 600;
  ARoute route = ARoute::stirling;
  double tail_tol = 1e-16;
};

namespace detail {

inline void check_x(double x, double rho) {
  if (!(x > 0) || !std::isfinite(x)) throw domain_error("H is evaluated for finite x > 0 only");
  if (std::abs(x / rho - 1) <= 1e-14) throw domain_error("x = rho is the singular point of H");
}

// (1/2 pi i) int F(s) x^{-s} ds over the rays s = c + r e^{+-i phi}, phi = pi - eps,
// for F real on the real axis: (1/pi) int_0^inf Im[F(s) x^{-s} e^{i phi}] dr.
// logF returns log F(s); -inf real part means F(s) = 0.
template <class LogF>
EvaluationResult bent_integral(LogF logF, double gamma_pole, double rho, double x, const ContourSpec& spec) {
  const double L = std::log(rho / x);
  double c = spec.c;
  if (std::isnan(c)) c = gamma_pole + std::clamp(2.0 / L, pole_clearance + 0.01, 0.5);
  if (!(c > gamma_pole + pole_clearance)) throw domain_error("contour abscissa too close to the poles");
  if (!(spec.bend_angle > 0 && spec.bend_angle < std::numbers::pi / 2))
    throw domain_error("bend angle must lie in (0, pi/2)");
  const double phi = std::numbers::pi - spec.bend_angle;
  const cplx dir = std::polar(1.0, phi);
  const double lx = std::log(x);
  auto integrand = [&](double r) {
    const cplx s = c + r * dir;
    const cplx lf = logF(s);
    if (std::isinf(lf.real())) return 0.0;
    return (std::exp(lf - s * lx) * dir).imag();
  };
  const double decay = L * std::cos(spec.bend_angle);
  auto tail = [&](double r) {
    const cplx s = c + r * dir;
    const cplx lf = logF(s);
    if (std::isinf(lf.real())) return 0.0;
    return std::exp((lf - s * lx).real()) * (1 + r) / decay;
  };
  const double h = std::clamp(4.0 / decay, 0.5, 64.0);
  auto q = semi_infinite_panels(integrand, tail, h, spec.tail_tol, spec.max_nodes);
  return {q.value / std::numbers::pi, q.error / std::numbers::pi, Method::contour_bent, q.nodes};
}

inline EvaluationResult contour_bent(const ParameterSet& ps, const DerivedConstants& d, double x,
                                     const ContourSpec& spec) {
  return bent_integral([&](cplx s) { return log_W(ps, s); }, d.gamma_pole, d.rho, x, spec);
}

/* Vertical line Re s = c > max(gamma, 0). The first M+1 terms of the
   asymptotic expansion are removed from W and inverted in closed form:
   (1/2 pi i) int rho^s s^{-beta} x^{-s} ds = L^{beta-1}/Gamma(beta), L = log(rho/x). */
inline EvaluationResult contour_vertical(const ParameterSet& ps, const DerivedConstants& d, double x,
                                         const ContourSpec& spec, int subtract_m) {
  const double L = std::log(d.rho / x);
  double c = spec.c;
  if (std::isnan(c)) c = std::max(d.gamma_pole, 0.0) + 0.5;
  if (!(c > d.gamma_pole + pole_clearance) || !(c > 0))
    throw domain_error("vertical contour needs c > max(gamma_pole + 0.05, 0)");
  int M = std::max(subtract_m + 1, 0);
  while (d.mu + M + 1 < 7 && M < 30) ++M;
  const auto l = compute_l(ps, M + 1);

  double closed = 0;
  for (int r = 0; r <= M; ++r) {
    const double beta = d.mu + r;
    const double g = rgamma(beta);
    if (g != 0) closed += l[r] * std::exp((beta - 1) * std::log(L)) * g;
  }
  closed *= d.nu;

  const double lx = std::log(x), lrho = std::log(d.rho);
  auto remainder = [&](double y) {
    const cplx s(c, y);
    const cplx ls = std::log(s);
    cplx asym = 0;
    for (int r = M; r >= 0; --r) asym = asym / s + l[r];
    asym *= d.nu * std::exp(s * lrho - d.mu * ls);
    return (W(ps, s) - asym) * std::exp(-s * lx);
  };
  auto integrand = [&](double y) { return remainder(y).real(); };
  const double power = d.mu + M + 1;
  // |remainder| ~ nu (rho/x)^c |l_{M+1}| |s|^{-power}; past the cutoff W - asym is roundoff, which grows like |s|^{-mu}
  const double lead = d.nu * std::exp(c * L) * std::max(std::abs(l[M + 1]), 1e-300);
  auto tail = [&](double y) { return lead * std::pow(std::max(y, 1.0), 1 - power) / (power - 1); };
  const double scale = std::max(std::abs(closed), 1e-300);
  const double cutoff = std::max(64.0, std::pow(lead / ((power - 1) * spec.tail_tol * scale), 1 / (power - 1)));
  const double h = std::clamp(std::numbers::pi / std::max(L, 1e-3), 2.0, 64.0);
  auto q = semi_infinite_panels(integrand, tail, h, spec.tail_tol, spec.max_nodes, cutoff);
  const double pi = std::numbers::pi;
  return {closed + q.value / pi, q.error / pi + 1e-15 * std::abs(closed), Method::contour_vertical,
          q.nodes};
}

} // namespace detail

inline EvaluationResult eval_contour(const ParameterSet& ps, double x, const ContourSpec& spec = {},
                                     int subtract_m = -1) {
  const auto d = derive(ps);
  if (subtract_m < -1) throw domain_error("subtract_m must be >= -1");
  if (subtract_m >= 0 && std::abs(d.mu + subtract_m) > 1e-10 * std::max(1.0, std::abs(d.mu)))
    throw domain_error("polynomial subtraction of order m needs mu = -m");
  if (spec.shape == ContourShape::vertical && subtract_m == -1 && !(d.mu > 1))
    throw domain_error("vertical contour without subtraction needs mu > 1 for absolute convergence");
  if (!(x > 0)) throw domain_error("H is evaluated for x > 0 only");
  if (x > d.rho && std::abs(x / d.rho - 1) > 1e-14) return {0, 0, Method::compact_support, 0};
  detail::check_x(x, d.rho);
  // the subtracted terms are entire times rho^s and integrate to zero on the bent contour
  if (spec.shape == ContourShape::bent) return detail::contour_bent(ps, d, x, spec);
  return detail::contour_vertical(ps, d, x, spec, subtract_m);
}

/*! The expansion H(rho t) = t^{theta+1} (1-t)^{mu-1} sum_n e_n (1-t)^n.
    Coefficients are computed once; evaluation is const and thread-safe. */
class SeriesExpansion {
public:
  SeriesExpansion(const ParameterSet& ps, const SeriesSpec& spec = {})
      : d_(derive(ps)), spec_(spec), e_(series_coefficients(ps, spec.theta, spec.n_max, spec.route)) {}

  const std::vector<double>& coefficients() const { return e_; }
  const DerivedConstants& constants() const { return d_; }
  const SeriesSpec& spec() const { return spec_; }

  struct Sum {
    double value, error;
    long terms;
  };

  //! sum_{n >= n0} e_n w^{n - n0} with a tail estimate
  Sum partial_sum(double w, int n0 = 0) const {
    if (!(w > 0 && w < 1)) throw domain_error("series needs 0 < 1 - t < 1");
    detail::accumulator acc;
    double pw = 1, abs_sum = 0, recent = 0;
    const int n_max = int(e_.size()) - 1;
    for (int n = n0; n <= n_max; ++n) {
      const double term = e_[n] * pw;
      acc.add(term);
      abs_sum += std::abs(term);
      recent = std::max(recent * w, std::abs(term));
      pw *= w;
      if (n >= n0 + 8 && recent * w / (1 - w) <= spec_.tail_tol * abs_sum)
        return {acc.value(), recent * w / (1 - w) + 4e-16 * abs_sum, n + 1};
      if (pw == 0) return {acc.value(), 4e-16 * abs_sum, n + 1};
    }
    const double tail = recent * w / (1 - w);
    if (tail > 1e-9 * std::max(abs_sum, 1e-300))
      throw convergence_error("series tail not converged within n_max = " + std::to_string(n_max) +
                              " terms at 1 - t = " + std::to_string(w));
    return {acc.value(), tail + 4e-16 * abs_sum, n_max + 1};
  }

  //! H(rho (1 - w))
  EvaluationResult at_complement(double w) const {
    // for integer mu <= 0 the first 1 - mu coefficients vanish; fold them into the power of w
    const int n0 = leading_zeros();
    const auto s = partial_sum(w, n0);
    const double pre = std::exp((spec_.theta + 1) * std::log1p(-w) + (d_.mu - 1 + n0) * std::log(w));
    return {pre * s.value, pre * s.error, Method::series, s.terms};
  }

  EvaluationResult at(double t) const {
    if (!(t > 0 && t < 1)) throw domain_error("series evaluation needs t in (0,1)");
    return at_complement(1 - t);
  }

  int leading_zeros() const {
    if (d_.mu <= 0 && d_.mu == std::floor(d_.mu)) return int(1 - d_.mu);
    return 0;
  }

private:
  DerivedConstants d_;
  SeriesSpec spec_;
  std::vector<double> e_;
};

inline EvaluationResult eval_series(const ParameterSet& ps, double t, const SeriesSpec& spec = {}) {
  if (!(t > 0 && t < 1)) throw domain_error("series evaluation needs t in (0,1)");
  return SeriesExpansion(ps, spec).at(t);
}

struct HOptions {
  double series_threshold = 0.5; // series used for 1 - x/rho below this
  double closed_form_limit = 0.98; // 2F1 closed form used for 1 - z below this
  ContourSpec contour{};
  SeriesSpec series{0.0, 240, ARoute::stirling, 1e-16};
};

//! Region dispatcher with cached series coefficients.
class HFunction {
public:
  explicit HFunction(ParameterSet ps, HOptions opts = {})
      : ps_(std::move(ps)), d_(derive(ps_)), opts_(opts), series_(ps_, opts.series) {}

  const ParameterSet& params() const { return ps_; }
  const DerivedConstants& constants() const { return d_; }
  const SeriesExpansion& series() const { return series_; }

  EvaluationResult operator()(double x) const {
    if (!(x > 0)) throw domain_error("H is evaluated for x > 0 only");
    if (x > d_.rho && std::abs(x / d_.rho - 1) > 1e-14) return {0, 0, Method::compact_support, 0};
    detail::check_x(x, d_.rho);
    const double t = x / d_.rho;
    return dispatch(t, 1 - t);
  }

  //! H(rho (1 - w)) for w in (0, 1), accurate for tiny w
  EvaluationResult near_rho(double w) const {
    if (!(w > 0 && w < 1)) throw domain_error("near_rho needs 0 < w < 1");
    return dispatch(1 - w, w);
  }

private:
  EvaluationResult dispatch(double t, double w) const {
    if (auto cf = closed_form(t, w)) return *cf;
    if (w < opts_.series_threshold) return series_.at_complement(w);
    return eval_contour(ps_, d_.rho * t, opts_.contour);
  }

  std::optional<EvaluationResult> closed_form(double z, double w) const {
    if (!d_.is_g_case || ps_.p() > 2) return std::nullopt;
    if (ps_.p() == 1) {
      const double a = ps_.a[0], b = ps_.b[0];
      const double r = rgamma(b - a);
      const double v = r == 0 ? 0.0 : std::pow(z, a) * std::exp((b - a - 1) * std::log(w)) * r;
      return EvaluationResult{v, 4e-16 * std::abs(v), Method::closed_form, 1};
    }
    if (w > opts_.closed_form_limit) return std::nullopt;
    const double a1 = ps_.a[0], a2 = ps_.a[1], b1 = ps_.b[0], b2 = ps_.b[1];
    const double psi = b1 + b2 - a1 - a2;
    if (detail::is_nonpositive_integer(psi) && w < opts_.series_threshold) return std::nullopt;
    const double v = std::pow(z, a2) * std::exp((psi - 1) * std::log(w)) *
                     hyp2f1_regularized(b1 - a1, b2 - a1, psi, w);
    return EvaluationResult{v, 1e-14 * std::abs(v), Method::closed_form, 1};
  }

  ParameterSet ps_;
  DerivedConstants d_;
  HOptions opts_;
  SeriesExpansion series_;
};

inline EvaluationResult eval_auto(const ParameterSet& ps, double x) { return HFunction(ps)(x); }

struct BranchReport {
  double mu = 0;
  double fitted_exponent = 0;
  double expected_exponent = 0;
  bool integer_mu = false;
  bool finite_limit = false;
  double limit_value = 0;   // H(rho t) as t -> 1-, from the coefficients
  double derivative_spread = 0; // integer mu: drift of sampled 1st/2nd differences
  std::vector<double> w, values;
};

/*! Local behaviour of H(rho t) at t -> 1-: samples at 1 - t = side_epsilon 2^{-j},
    least-squares slope of log|H| against log(1 - t). */
inline BranchReport branch_probe(const ParameterSet& ps, double side_epsilon = 1e-2, int samples = 10) {
  if (!(side_epsilon > 0 && side_epsilon < 0.5)) throw domain_error("side_epsilon must lie in (0, 0.5)");
  SeriesExpansion ser(ps, SeriesSpec{0.0, 200, ARoute::stirling, 1e-16});
  const auto& d = ser.constants();
  BranchReport rep;
  rep.mu = d.mu;
  rep.expected_exponent = d.mu - 1;
  rep.integer_mu = std::abs(d.mu - std::round(d.mu)) < 1e-12;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = 0; j < samples; ++j) {
    const double w = side_epsilon * std::ldexp(1.0, -j);
    const double v = ser.at_complement(w).value;
    rep.w.push_back(w);
    rep.values.push_back(v);
    const double X = std::log(w), Y = std::log(std::abs(v));
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  const double n = samples;
  rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  if (rep.integer_mu) {
    const int m = int(std::round(d.mu));
    const auto& e = ser.coefficients();
    rep.limit_value = (1 - m >= 0) ? e[1 - m] : 0.0;
    rep.finite_limit = std::isfinite(rep.limit_value);
    // divided differences of the samples should settle, not blow up
    double spread = 0;
    for (std::size_t j = 0; j + 3 < rep.w.size(); ++j) {
      auto first = [&](std::size_t i) {
        return (rep.values[i] - rep.values[i + 1]) / (rep.w[i] - rep.w[i + 1]);
      };
      const double d1a = first(j), d1b = first(j + 1), d1c = first(j + 2);
      const double d2a = (d1a - d1b) / (rep.w[j] - rep.w[j + 2]);
      const double d2b = (d1b - d1c) / (rep.w[j + 1] - rep.w[j + 3]);
      spread = std::max({spread, std::abs(d1a - d1b) / (1 + std::abs(d1b)),
                         std::abs(d2a - d2b) / (1 + std::abs(d2b))});
    }
    rep.derivative_spread = spread;
    rep.finite_limit = rep.finite_limit && std::isfinite(spread) && spread < 1;
  } else {
    rep.limit_value = d.mu > 1 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.finite_limit = d.mu > 1;
  }
  return rep;
}

/*! int_0^rho f(x) H(x) dx. Bent contour (or closed form) on x < rho/2,
    the singular expansion above, with (1-t)^{mu-1} removed by v = (1-t)^mu. */
template <class F>
QuadratureResult integrate_against(const HFunction& h, F f, double tol = 1e-11) {
  const auto& d = h.constants();
  const bool int_mu = d.mu == std::floor(d.mu);
  if (d.mu <= 0 && !int_mu) throw domain_error("H is not integrable at rho for negative non-integer mu");
  const double t0 = 0.5;
  auto lower = detail::tanh_sinh(
      [&](double t) {
        if (t <= 0) return 0.0;
        return f(d.rho * t) * h(d.rho * t).value;
      },
      0.0, t0, tol);

  QuadratureResult upper;
  const auto& ser = h.series();
  const double theta = ser.spec().theta;
  if (d.mu > 0) {
    // (1-t)^{mu-1} dt = -(1/mu) dv
    const double vmax = std::pow(1 - t0, d.mu);
    upper = detail::tanh_sinh(
        [&](double v) {
          const double w = v > 0 ? std::pow(v, 1 / d.mu) : 0.0;
          if (w <= 0) return f(d.rho) * ser.coefficients()[0];
          return f(d.rho * (1 - w)) * std::pow(1 - w, theta + 1) * ser.partial_sum(w).value;
        },
        0.0, vmax, tol);
    upper.value /= d.mu;
    upper.error /= d.mu;
    upper.l1 /= d.mu;
  } else {
    upper = detail::tanh_sinh2(
        [&](double t, double tc) {
          const double w = tc > 0 ? tc : 1 - t;
          if (w <= 0) return f(d.rho) * h.near_rho(1e-300).value;
          return f(d.rho * (1 - w)) * h.near_rho(w).value;
        },
        t0, 1.0, tol);
  }
  QuadratureResult r;
  r.value = d.rho * (lower.value + upper.value);
  r.error = d.rho * (lower.error + upper.error);
  r.l1 = d.rho * (lower.l1 + upper.l1);
  r.nodes = lower.nodes + upper.nodes;
  return r;
}

//! int_0^rho x^{s-1} H(x) dx
inline QuadratureResult mellin_moment(const HFunction& h, double s, double tol = 1e-11) {
  if (!(s > h.constants().gamma_pole)) throw domain_error("Mellin moment needs s > gamma_pole");
  return integrate_against(h, [s](double x) { return std::pow(x, s - 1); }, tol);
}

} // namespace deltah
