#pragma once

// Numerical checks of the Mellin, Bernstein, weak-limit and integral
// identities satisfied by delta-neutral H and G functions.

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "gamma.hpp"
#include "h_function.hpp"
#include "hyp.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace deltah {

struct VerificationReport {
  std::string identity_id;
  ParameterSet parameter_set;
  std::vector<double> sample_points;
  std::vector<double> residuals; // absolute
  std::vector<double> references; // magnitude used for the relative residual
  double max_residual = 0;
  double max_rel_residual = 0;
  double tolerance = 0;
  bool relative = false; // compare max_rel_residual instead of max_residual
  bool passed = false;
  long runtime_ms = 0;
  std::string notes;
};

namespace detail {

inline VerificationReport make_report(std::string id, ParameterSet ps = {}) {
  VerificationReport r;
  r.identity_id = std::move(id);
  r.parameter_set = std::move(ps);
  return r;
}

class report_timer {
public:
  report_timer() : start_(std::chrono::steady_clock::now()) {}
  long ms() const {
    return long(std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
                    .count());
  }

private:
  std::chrono::steady_clock::time_point start_;
};

inline void add_sample(VerificationReport& r, double point, double lhs, double rhs) {
  r.sample_points.push_back(point);
  r.residuals.push_back(std::abs(lhs - rhs));
  r.references.push_back(std::max(std::abs(lhs), std::abs(rhs)));
}

inline VerificationReport& finish(VerificationReport& r, const report_timer& t) {
  r.max_residual = 0;
  r.max_rel_residual = 0;
  bool ok = !r.residuals.empty();
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    const double res = r.residuals[i];
    const double rel = r.references[i] > 0 ? res / r.references[i] : res;
    if (!(res <= r.max_residual)) r.max_residual = res; // NaN sticks
    if (!(rel <= r.max_rel_residual)) r.max_rel_residual = rel;
    ok = ok && ((r.relative ? rel : res) <= r.tolerance);
  }
  r.passed = ok;
  r.runtime_ms = t.ms();
  return r;
}

inline bool is_integer(double x) { return x == std::floor(x); }

inline void require_nonnegative_shifts(const ParameterSet& ps) {
  for (double v : ps.a)
    if (v < 0) throw domain_error("identity requires a >= 0");
  for (double v : ps.b)
    if (v < 0) throw domain_error("identity requires b >= 0");
}

// n! psi(mu+n)/Gamma(mu+n), continued through the poles of Gamma
inline double psi_factorial_over_gamma(int n, double mu) {
  const double z = mu + n;
  if (is_nonpositive_integer(z)) return std::tgamma(n + 1.0) * psi_over_gamma(z);
  return factorial_over_gamma(n, mu) * digamma(z);
}

} // namespace detail

/*! Q(u) = sum u^{a/A}/(1 - u^{1/A}) - sum u^{b/B}/(1 - u^{1/B}), given u and 1 - u.
    Close to u = 1 the expansion in v = -log u is used; its constant term is mu. */
inline double Q_kernel(const ParameterSet& ps, double u, double one_minus_u) {
  if (!(u > 0 && one_minus_u > 0)) throw domain_error("Q_kernel needs u in (0,1)");
  const double lu = one_minus_u < 0.5 ? std::log1p(-one_minus_u) : std::log(u);
  if (one_minus_u >= 1e-3) {
    detail::accumulator acc;
    for (std::size_t k = 0; k < ps.p(); ++k)
      acc.add(std::exp(ps.a[k] / ps.A[k] * lu) / -std::expm1(lu / ps.A[k]));
    for (std::size_t j = 0; j < ps.q(); ++j)
      acc.add(-std::exp(ps.b[j] / ps.B[j] * lu) / -std::expm1(lu / ps.B[j]));
    return acc.value();
  }
  // u^{a/A}/(1-u^{1/A}) = sum_n beta_n(1-a) v^{n-1}/A^{n-1}, the n = 0 parts cancel
  const double v = -lu;
  double total = 0;
  for (int n = 10; n >= 1; --n) {
    double c = 0;
    for (std::size_t k = 0; k < ps.p(); ++k)
      c += bernoulli_poly_scaled(n, 1 - ps.a[k]) * std::pow(ps.A[k], 1 - n);
    for (std::size_t j = 0; j < ps.q(); ++j)
      c -= bernoulli_poly_scaled(n, 1 - ps.b[j]) * std::pow(ps.B[j], 1 - n);
    total = total * v + c;
  }
  return total;
}

inline double Q_kernel(const ParameterSet& ps, double u) { return Q_kernel(ps, u, 1 - u); }

enum class Axis { laplace_t, mellin_x };
enum class MuCase { positive, zero };

struct MeasureRepresentation {
  double atom_location = 0;
  double atom_weight = 0;
  Axis axis = Axis::mellin_x;
  std::shared_ptr<const HFunction> density;
};

//! Representing measure of W: an atom at rho (weight nu rho on the x-axis, nu on the t-axis) plus H.
inline MeasureRepresentation make_measure(const ParameterSet& ps, Axis axis) {
  auto h = std::make_shared<const HFunction>(ps);
  const auto& d = h->constants();
  if (d.mu < 0) throw domain_error("no Bernstein representation for mu < 0");
  MeasureRepresentation m;
  m.axis = axis;
  m.density = h;
  const double weight = d.mu == 0 ? d.nu : 0.0;
  if (axis == Axis::laplace_t) {
    m.atom_location = -std::log(d.rho);
    m.atom_weight = weight;
  } else {
    m.atom_location = d.rho;
    m.atom_weight = weight * d.rho;
  }
  return m;
}

//! int_0^rho x^{s-1} H dx = W(s) - nu rho^s sum_k l_{m-k} s^k for mu = -m
inline VerificationReport verify_mellin_negative_mu(const ParameterSet& ps, const std::vector<double>& s_grid,
                                                    double tolerance = 1e-5) {
  detail::report_timer timer;
  const HFunction h(ps);
  const auto& d = h.constants();
  if (d.mu > 0 || !detail::is_integer(d.mu))
    throw domain_error("Mellin transform with polynomial correction needs mu a non-positive integer");
  const int m = int(-d.mu);
  const auto l = compute_l(ps, m);
  auto r = detail::make_report("mellin_negative_mu", ps);
  r.tolerance = tolerance;
  for (double s : s_grid) {
    const double lhs = mellin_moment(h, s).value;
    double poly = 0;
    for (int k = m; k >= 0; --k) poly = poly * s + l[m - k];
    const double rhs = W(ps, s) - d.nu * std::pow(d.rho, s) * poly;
    detail::add_sample(r, s, lhs, rhs);
  }
  r.notes = "m = " + std::to_string(m) + "; moment by tanh-sinh on contour and series pieces";
  return detail::finish(r, timer);
}

namespace detail {

inline void require_g_negative_psi(const std::vector<double>& a, const std::vector<double>& b, int& m) {
  if (a.size() != b.size() || a.empty()) throw invalid_parameters("need len(a) = len(b) >= 1");
  const double psi = derive(g_params(a, b)).mu;
  if (psi > 0 || !is_integer(psi)) throw domain_error("q(s) needs psi a non-positive integer");
  m = int(-psi);
}

} // namespace detail

//! q(s) = sum_{j=0}^m g_{m-j}(a_[k]; b) (s + a_k - j)_j for the removed index k
inline double noerlund_q(const std::vector<double>& a, const std::vector<double>& b, int removed, double s) {
  int m = 0;
  detail::require_g_negative_psi(a, b, m);
  const auto g = compute_g(a, b, removed, m);
  double total = 0;
  for (int j = 0; j <= m; ++j) total += g.g(m - j) * pochhammer(s + a[removed] - j, j);
  return total;
}

inline VerificationReport verify_noerlund_mellin(const std::vector<double>& a, const std::vector<double>& b,
                                              const std::vector<double>& s_grid, double tolerance = 1e-6) {
  detail::report_timer timer;
  int m = 0;
  detail::require_g_negative_psi(a, b, m);
  const auto ps = g_params(a, b);
  const HFunction h(ps);
  auto r = detail::make_report("noerlund_mellin_q", ps);
  r.tolerance = tolerance;
  for (double s : s_grid) {
    const double lhs = mellin_moment(h, s).value;
    const double rhs = W(ps, s) - noerlund_q(a, b, int(a.size()) - 1, s);
    detail::add_sample(r, s, lhs, rhs);
  }
  r.notes = "psi = " + std::to_string(-m);
  return detail::finish(r, timer);
}

//! q(s) from every removed index k, compared with k = last
inline VerificationReport verify_q_k_independence(const std::vector<double>& a, const std::vector<double>& b,
                                                    const std::vector<double>& s_grid, double tolerance = 1e-10) {
  detail::report_timer timer;
  auto r = detail::make_report("noerlund_q_k_independence", g_params(a, b));
  r.tolerance = tolerance;
  const int p = int(a.size());
  for (double s : s_grid) {
    const double ref = noerlund_q(a, b, p - 1, s);
    for (int k = 0; k + 1 < p; ++k) detail::add_sample(r, s, noerlund_q(a, b, k, s), ref);
  }
  if (p == 1) r.notes = "p = 1: a single removed index";
  return detail::finish(r, timer);
}

//! q(s) against nu rho^s sum l_{m-k} s^k (nu = rho = 1 for G)
inline VerificationReport verify_q_polynomial(const std::vector<double>& a, const std::vector<double>& b,
                                              const std::vector<double>& s_grid, double tolerance = 1e-9) {
  detail::report_timer timer;
  int m = 0;
  detail::require_g_negative_psi(a, b, m);
  const auto ps = g_params(a, b);
  const auto d = derive(ps);
  const auto l = compute_l(ps, m);
  auto r = detail::make_report("noerlund_q_vs_polynomial", ps);
  r.tolerance = tolerance;
  for (double s : s_grid) {
    double poly = 0;
    for (int k = m; k >= 0; --k) poly = poly * s + l[m - k];
    detail::add_sample(r, s, noerlund_q(a, b, int(a.size()) - 1, s), d.nu * std::pow(d.rho, s) * poly);
  }
  return detail::finish(r, timer);
}

/*! W(x) = atom + int e^{-tx} H(e^{-t}) dt (t-axis) or atom + int u^{x-1} H(u) du (x-axis).
    The atom is nu rho^x when mu = 0 and absent when mu > 0. Relative residuals. */
inline VerificationReport verify_bernstein(const ParameterSet& ps, Axis axis, const std::vector<double>& x_grid,
                                           double tolerance = 1e-6) {
  detail::report_timer timer;
  const auto meas = make_measure(ps, axis);
  const HFunction& h = *meas.density;
  const auto& d = h.constants();
  if (axis == Axis::laplace_t && d.rho > 1) throw domain_error("t-axis form needs rho <= 1");
  auto r = detail::make_report(axis == Axis::laplace_t ? "bernstein_laplace" : "bernstein_mellin", ps);
  r.tolerance = tolerance;
  r.relative = true;
  for (double x : x_grid) {
    double integral = 0;
    if (axis == Axis::mellin_x) {
      integral = mellin_moment(h, x).value;
    } else {
      // t = -log rho + tau; the singular end tau -> 0 is handled by the series in w = 1 - e^{-tau}
      const double cut = std::log(2.0);
      auto near = detail::tanh_sinh2(
          [&](double tau, double tc) {
            const double tt = tc < 0 ? -tc : tau;
            if (tt <= 0) return 0.0;
            return std::exp(-tt * x) * h.near_rho(-std::expm1(-tt)).value;
          },
          0.0, cut, 1e-11);
      auto far = detail::exp_sinh(
          [&](double tau) {
            const double u = d.rho * std::exp(-tau);
            return u > 0 ? std::exp(-tau * x) * h(u).value : 0.0;
          },
          cut, 1e-11);
      integral = std::pow(d.rho, x) * (near.value + far.value);
    }
    const double atom = meas.atom_weight * std::pow(meas.atom_location, axis == Axis::mellin_x ? x - 1 : 0.0) *
                        (axis == Axis::laplace_t ? std::exp(-meas.atom_location * x) : 1.0);
    detail::add_sample(r, x, W(ps, x), atom + integral);
  }
  r.notes = d.mu == 0 ? "mu = 0: atom of weight nu at rho" : "mu > 0: no atom";
  return detail::finish(r, timer);
}

/*! Weak limit b_j -> b_j + eps of a mu* = 0 set.
    Returns three reports: the moment identities for each eps, the linear
    rate at which the moment defect approaches the atom, and a family of
    continuous test functions.
    perturbed < 0 picks the b_j with the largest |digamma(b_j + 1)|: the defect is
    -eps digamma(b_j + n + 1) W*(n + 1) to first order, and a near-zero digamma hides the linear term. */
inline std::vector<VerificationReport> verify_weak_limit_moments(const ParameterSet& limit,
                                                                 const std::vector<double>& eps_schedule,
                                                                 int n_max, double tolerance = 1e-6,
                                                                 int perturbed = 0) {
  detail::report_timer timer;
  const HFunction hstar(limit);
  const auto& ds = hstar.constants();
  if (ds.mu != 0) throw domain_error("weak limit check needs mu* = 0");
  detail::require_nonnegative_shifts(limit);
  if (eps_schedule.size() < 2) throw domain_error("need at least two perturbation sizes");
  if (perturbed >= int(limit.q())) throw domain_error("perturbed index out of range");
  if (perturbed < 0) {
    perturbed = 0;
    for (int j = 1; j < int(limit.q()); ++j)
      if (std::abs(digamma(limit.b[j] + 1)) > std::abs(digamma(limit.b[perturbed] + 1))) perturbed = j;
  }

  auto moments = detail::make_report("weak_limit_moments", limit);
  moments.tolerance = tolerance;
  auto rate = detail::make_report("weak_limit_defect_rate", limit);
  rate.tolerance = 0.3;
  auto tests = detail::make_report("weak_limit_test_functions", limit);
  tests.tolerance = 0; // filled below: residuals must shrink with eps

  std::vector<double> star_moment(n_max + 1);
  for (int n = 0; n <= n_max; ++n) star_moment[n] = mellin_moment(hstar, n + 1).value;

  const std::vector<std::pair<std::string, std::function<double(double)>>> fns = {
      {"1", [](double) { return 1.0; }},
      {"x", [](double x) { return x; }},
      {"x^2", [](double x) { return x * x; }},
      {"exp", [](double x) { return std::exp(x); }},
      {"cos", [](double x) { return std::cos(x); }}};
  std::vector<double> star_tests;
  for (auto& [name, f] : fns)
    star_tests.push_back(ds.nu * ds.rho * f(ds.rho) + integrate_against(hstar, f).value);

  std::vector<std::vector<double>> defects(n_max + 1), test_err(fns.size());
  for (double eps : eps_schedule) {
    auto pe = limit;
    pe.b[perturbed] += eps;
    const HFunction he(pe);
    for (int n = 0; n <= n_max; ++n) {
      const double mom = mellin_moment(he, n + 1).value;
      detail::add_sample(moments, eps, mom, W(pe, double(n + 1)));
      defects[n].push_back(std::abs(mom - star_moment[n] - ds.nu * std::pow(ds.rho, n + 1)));
    }
    for (std::size_t i = 0; i < fns.size(); ++i)
      test_err[i].push_back(std::abs(integrate_against(he, fns[i].second).value - star_tests[i]));
  }

  // slope of log defect against log eps, per n
  std::string slopes;
  for (int n = 0; n <= n_max; ++n) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(eps_schedule.size());
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      const double X = std::log(eps_schedule[i]), Y = std::log(defects[n][i]);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    rate.sample_points.push_back(n);
    rate.residuals.push_back(std::abs(slope - 1));
    rate.references.push_back(1);
    slopes += (n ? ", " : "") + std::to_string(slope);
  }
  rate.notes = "b[" + std::to_string(perturbed) + "] perturbed; fitted slopes " + slopes;

  // test functions: error at the smallest eps must be below the largest-eps error and below 0.2 * eps
  bool shrinking = true;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    tests.sample_points.push_back(double(i));
    tests.residuals.push_back(test_err[i].back());
    tests.references.push_back(test_err[i].front());
    shrinking = shrinking && test_err[i].back() < test_err[i].front();
  }
  tests.notes = "functions 1, x, x^2, exp, cos; residual = |int f dv_eps - int f dv*| at the smallest eps, "
                "reference = same at the largest eps";
  tests.relative = true;
  tests.tolerance = std::sqrt(eps_schedule.back() / eps_schedule.front());

  std::vector<VerificationReport> out{detail::finish(moments, timer), detail::finish(rate, timer),
                                      detail::finish(tests, timer)};
  out[2].passed = out[2].passed && shrinking;
  return out;
}

/*! log(rho/x) H(x) = nu Q(x/rho) [mu = 0] + int_x^rho H(u) Q(x/u) du/u.
    The sum over gamma factors stays inside the integrand. */
inline VerificationReport verify_integral_equation(const ParameterSet& ps, const std::vector<double>& x_grid,
                                                   MuCase mu_case, double tolerance = 1e-6) {
  detail::report_timer timer;
  detail::require_nonnegative_shifts(ps);
  const HFunction h(ps);
  const auto& d = h.constants();
  if (d.rho > 1 + 1e-15) throw domain_error("integral equation needs rho <= 1");
  if (mu_case == MuCase::positive && !(d.mu > 0)) throw domain_error("positive case needs mu > 0");
  if (mu_case == MuCase::zero && d.mu != 0) throw domain_error("zero case needs mu = 0");
  auto r = detail::make_report(mu_case == MuCase::zero ? "integral_equation_mu0" : "integral_equation_mu_pos", ps);
  r.tolerance = tolerance;
  for (double x : x_grid) {
    if (!(x > 0 && x < d.rho)) throw domain_error("integral equation is checked on (0, rho)");
    const double lhs = std::log(d.rho / x) * h(x).value;
    auto q = detail::tanh_sinh2(
        [&](double u, double uc) {
          // uc < 0: distance from x; uc > 0: distance from rho
          const double one_minus = uc < 0 ? -uc / u : (u - x) / u;
          const double hv = uc > 0 ? h.near_rho(uc / d.rho).value : h(u).value;
          if (one_minus <= 0) return hv * d.mu / u;
          return hv * Q_kernel(ps, x / u, one_minus) / u;
        },
        x, d.rho, 1e-11);
    double rhs = q.value;
    if (mu_case == MuCase::zero) rhs += d.nu * Q_kernel(ps, x / d.rho, 1 - x / d.rho);
    detail::add_sample(r, x, lhs, rhs);
  }
  return detail::finish(r, timer);
}

namespace detail {

// sum_n g_n(a; c, b) psi(mu+n)/Gamma(mu+n) w^n, scaled g and the pole limit of psi/Gamma.
// regular = true drops terms where mu + n is a pole of Gamma.
inline double psi_weighted_series(const std::vector<double>& a, double c, const std::vector<double>& b, double mu,
                                  double w, bool regular, int n_max = 1500) {
  std::vector<double> upper{c};
  upper.insert(upper.end(), b.begin(), b.end());
  const auto g = noerlund_g_scaled(a, upper, n_max);
  accumulator acc;
  double pw = 1, recent = 0, abs_sum = 0;
  for (int n = 0; n <= n_max; ++n) {
    const bool pole = is_nonpositive_integer(mu + n);
    const double term = (regular && pole) ? 0.0 : g[n] * psi_factorial_over_gamma(n, mu) * pw;
    acc.add(term);
    abs_sum += std::abs(term);
    recent = std::max(recent * w, std::abs(term));
    if (n > 10 && recent * w / (1 - w) < 1e-17 * abs_sum) return acc.value();
    pw *= w;
  }
  throw convergence_error("digamma-weighted series did not converge");
}

// G-hat for the duplicated parameter c: (log x - log(1-x)) G + x^c (1-x)^{mu-1} sum(...)
inline double g_hat(const std::vector<double>& a, const std::vector<double>& b, double c, double x, double G,
                    double mu, bool regular) {
  const double w = 1 - x;
  return (std::log(x) - std::log1p(-x)) * G +
         std::pow(x, c) * std::pow(w, mu - 1) * psi_weighted_series(a, c, b, mu, w, regular);
}

} // namespace detail

/*! log(1/x) G(x) = [mu = 0: sum (x^a - x^b)/(1-x)] + sum_k (G-hat(b_k) - G-hat(a_k)).
    For mu = 0 the n = 0 term of each G-hat series, where psi/Gamma has a pole
    limit, is left out: it reproduces the boundary term exactly. */
inline VerificationReport verify_digamma_identity(const std::vector<double>& a, const std::vector<double>& b,
                                          const std::vector<double>& x_grid, MuCase mu_case,
                                          double tolerance = 1e-6) {
  detail::report_timer timer;
  const auto ps = g_params(a, b);
  detail::require_nonnegative_shifts(ps);
  const HFunction h(ps);
  const double mu = h.constants().mu;
  if (mu_case == MuCase::positive && !(mu > 0)) throw domain_error("positive case needs mu > 0");
  if (mu_case == MuCase::zero && mu != 0) throw domain_error("zero case needs mu = 0");
  const bool zero = mu_case == MuCase::zero;
  auto r = detail::make_report(zero ? "digamma_identity_mu0" : "digamma_identity_mu_pos", ps);
  r.tolerance = tolerance;
  for (double x : x_grid) {
    if (!(x > 0 && x < 1)) throw domain_error("x must lie in (0,1)");
    const double G = h(x).value;
    double rhs = 0;
    if (zero)
      for (std::size_t k = 0; k < a.size(); ++k) rhs += (std::pow(x, a[k]) - std::pow(x, b[k])) / (1 - x);
    for (std::size_t k = 0; k < a.size(); ++k)
      rhs += detail::g_hat(a, b, b[k], x, G, mu, zero) - detail::g_hat(a, b, a[k], x, G, mu, zero);
    detail::add_sample(r, x, std::log(1 / x) * G, rhs);
  }
  r.notes = zero ? "series route; pole terms at n = 0 removed and the boundary sum added once" : "series route";
  return detail::finish(r, timer);
}

//! (1/2 pi i) int W(s) sum_k (psi(b_k+s) - psi(a_k+s)) x^{-s} ds on the bent contour
inline EvaluationResult digamma_contour(const ParameterSet& ps, double x, const ContourSpec& spec = {}) {
  const auto d = derive(ps);
  if (!(x > 0 && x < d.rho)) throw domain_error("digamma contour needs 0 < x < rho");
  auto logF = [&](cplx s) {
    const cplx lw = log_W(ps, s);
    if (std::isinf(lw.real())) return lw;
    cplx sum = 0;
    for (std::size_t k = 0; k < ps.p(); ++k) sum += digamma(ps.b[k] + s) - digamma(ps.a[k] + s);
    return lw + std::log(sum);
  };
  return detail::bent_integral(logF, d.gamma_pole, d.rho, x, spec);
}

//! log(1/x) G(x) against the digamma-weighted contour integral, no boundary term
inline VerificationReport verify_digamma_contour(const std::vector<double>& a, const std::vector<double>& b,
                                                  const std::vector<double>& x_grid, double tolerance = 1e-5) {
  detail::report_timer timer;
  const auto ps = g_params(a, b);
  const HFunction h(ps);
  auto r = detail::make_report("digamma_identity_contour", ps);
  r.tolerance = tolerance;
  double boundary_gap = 0;
  for (double x : x_grid) {
    const double lhs = std::log(1 / x) * h(x).value;
    const double rhs = digamma_contour(ps, x).value;
    detail::add_sample(r, x, lhs, rhs);
    if (h.constants().mu == 0) {
      double bd = 0;
      for (std::size_t k = 0; k < a.size(); ++k) bd += (std::pow(x, a[k]) - std::pow(x, b[k])) / (1 - x);
      boundary_gap = std::max(boundary_gap, std::abs(bd));
    }
  }
  if (h.constants().mu == 0)
    r.notes = "mu = 0: the contour integral alone equals log(1/x) G; adding the boundary sum on top of it "
              "would be off by up to " + std::to_string(boundary_gap);
  return detail::finish(r, timer);
}

/*! log(1/x) G(x) = (1-x)^{mu-1} sum_n psi(mu+n)/Gamma(mu+n) (1-x)^n
                    sum_k (x^{b_k} g_n(a; b_k, b) - x^{a_k} g_n(a; a_k, b)), mu > 0. */
inline VerificationReport verify_final_expansion(const std::vector<double>& a, const std::vector<double>& b,
                                                 const std::vector<double>& x_grid, double tolerance = 1e-6) {
  detail::report_timer timer;
  const auto ps = g_params(a, b);
  detail::require_nonnegative_shifts(ps);
  const HFunction h(ps);
  const double mu = h.constants().mu;
  if (!(mu > 0)) throw domain_error("final expansion needs mu > 0");
  auto r = detail::make_report("digamma_expansion", ps);
  r.tolerance = tolerance;
  for (double x : x_grid) {
    if (!(x > 0 && x < 1)) throw domain_error("series needs 0 < x < 1");
    const double w = 1 - x;
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
      s += std::pow(x, b[k]) * detail::psi_weighted_series(a, b[k], b, mu, w, false) -
           std::pow(x, a[k]) * detail::psi_weighted_series(a, a[k], b, mu, w, false);
    detail::add_sample(r, x, std::log(1 / x) * h(x).value, std::pow(w, mu - 1) * s);
  }
  return detail::finish(r, timer);
}

/*! p = 2: closed forms of the coefficients in the expansion above,
      g_n(a; a_1, b) = (b_1-a_2)_n (b_2-a_2)_n / n!
      g_n(a; b_1, b) = ((mu)_n^2 / n!) 3F2(-n, b_2-a_1, b_2-a_2; mu, mu; 1)
    and the same with 1 <-> 2. Relative residuals against the nested-sum g_n. */
inline VerificationReport reconstruct_p2_expansion(const std::vector<double>& a, const std::vector<double>& b,
                                                   int n_max = 12, double tolerance = 1e-10) {
  detail::report_timer timer;
  if (a.size() != 2 || b.size() != 2) throw invalid_parameters("reconstruction is for p = 2");
  const double mu = b[0] + b[1] - a[0] - a[1];
  auto r = detail::make_report("p2_expansion_reconstruction", g_params(a, b));
  r.tolerance = tolerance;
  r.relative = true;
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    const auto ga = noerlund_g_scaled(a, {a[i], b[0], b[1]}, n_max);
    const auto gb = noerlund_g_scaled(a, {b[i], b[0], b[1]}, n_max);
    for (int n = 0; n <= n_max; ++n) {
      // everything divided by n!
      const double fa = pochhammer(b[0] - a[o], n) * pochhammer(b[1] - a[o], n) / std::pow(std::tgamma(n + 1.0), 2);
      const double fb = std::pow(pochhammer(mu, n) / std::tgamma(n + 1.0), 2) *
                        pfq({double(-n), b[o] - a[0], b[o] - a[1]}, {mu, mu}, 1.0);
      detail::add_sample(r, n, ga[n], fa);
      detail::add_sample(r, n, gb[n], fb);
    }
  }
  r.notes = "x^{a_k} term uses shifts b - a_{other}; x^{b_k} term uses the 3F2 with b_{other}";
  return detail::finish(r, timer);
}

} // namespace deltah
