#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltah {

// Errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct invalid_parameters : error {
  using error::error;
};
struct not_delta_neutral : invalid_parameters {
  using invalid_parameters::invalid_parameters;
};
struct pole_error : error {
  using error::error;
};
struct domain_error : error {
  using error::error;
};
struct convergence_error : error {
  using error::error;
};

//! Weights and shifts of W(s) = prod Gamma(A s + a) / prod Gamma(B s + b).
struct ParameterSet {
  std::vector<double> A, a;
  std::vector<double> B, b;

  std::size_t p() const { return A.size(); }
  std::size_t q() const { return B.size(); }

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

struct DerivedConstants {
  double delta = 0;
  double mu = 0;
  double rho = 1;
  double nu = 1;
  double gamma_pole = 0;
  bool is_g_case = false;
};

inline constexpr double delta_tolerance = 1e-12;

inline double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

inline const ParameterSet& validate(const ParameterSet& ps) {
  if (ps.A.size() != ps.a.size())
    throw invalid_parameters("A and a differ in length");
  if (ps.B.size() != ps.b.size())
    throw invalid_parameters("B and b differ in length");
  if (ps.A.empty()) throw invalid_parameters("need at least one gamma factor in the numerator");
  auto check = [](const std::vector<double>& v, const char* name, bool positive) {
    for (double x : v) {
      if (!std::isfinite(x)) throw invalid_parameters(std::string("non-finite entry in ") + name);
      if (positive && !(x > 0)) throw invalid_parameters(std::string("non-positive entry in ") + name);
    }
  };
  check(ps.A, "A", true);
  check(ps.B, "B", true);
  check(ps.a, "a", false);
  check(ps.b, "b", false);
  const double sa = sum(ps.A), sb = sum(ps.B);
  if (std::abs(sb - sa) > delta_tolerance * std::max(1.0, sa))
    throw not_delta_neutral("sum(B) - sum(A) = " + std::to_string(sb - sa) +
                            " is not zero; only delta-neutral sets are supported");
  return ps;
}

inline DerivedConstants derive(const ParameterSet& ps) {
  validate(ps);
  DerivedConstants d;
  const double p = double(ps.p()), q = double(ps.q());
  d.delta = sum(ps.B) - sum(ps.A);
  d.mu = sum(ps.b) - sum(ps.a) + (p - q) / 2;
  if (std::abs(d.mu - std::round(d.mu)) <= 1e-12 * std::max(1.0, std::abs(d.mu))) d.mu = std::round(d.mu);

  double log_rho = 0, log_nu = (p - q) / 2 * std::log(2 * std::numbers::pi);
  for (std::size_t k = 0; k < ps.p(); ++k) {
    const double lA = std::log(ps.A[k]);
    log_rho += ps.A[k] * lA;
    log_nu += (ps.a[k] - 0.5) * lA;
  }
  for (std::size_t j = 0; j < ps.q(); ++j) {
    const double lB = std::log(ps.B[j]);
    log_rho -= ps.B[j] * lB;
    log_nu += (0.5 - ps.b[j]) * lB;
  }
  d.rho = std::exp(log_rho);
  d.nu = std::exp(log_nu);

  double m = ps.a[0] / ps.A[0];
  for (std::size_t k = 1; k < ps.p(); ++k) m = std::min(m, ps.a[k] / ps.A[k]);
  d.gamma_pole = -m;

  auto unit = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; });
  };
  d.is_g_case = ps.p() == ps.q() && unit(ps.A) && unit(ps.B);
  return d;
}

//! Meijer G_{p,p}^{p,0} as a parameter set (unit weights).
inline ParameterSet g_params(std::vector<double> a, std::vector<double> b) {
  ParameterSet ps;
  ps.A.assign(a.size(), 1.0);
  ps.B.assign(b.size(), 1.0);
  ps.a = std::move(a);
  ps.b = std::move(b);
  return ps;
}

} // namespace deltah
