#pragma once

// Bernoulli, Bernoulli-Noerlund and non-central Stirling numbers.
//
// Internally everything is kept divided by a factorial ("scaled"):
// beta_n(x) = B_n(x)/n!, which stays bounded where B_n(x) itself overflows.
// The unscaled entry points are capped at max_public_order.

#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "params.hpp"

namespace deltah {

inline constexpr int max_public_order = 64;

namespace detail {

// Neumaier-compensated sum.
struct accumulator {
  double s = 0, c = 0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

inline void check_public_order(int n) {
  if (n < 0) throw domain_error("negative order");
  if (n > max_public_order)
    throw domain_error("order " + std::to_string(n) + " exceeds the cap of " +
                       std::to_string(max_public_order));
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// u^k / k!, without overflowing the intermediate power or factorial.
inline double pow_over_factorial(double u, int k) {
  if (k == 0) return 1;
  if (u == 0) return 0;
  const double mag = std::exp(k * std::log(std::abs(u)) - std::lgamma(k + 1.0));
  return (u < 0 && (k & 1)) ? -mag : mag;
}

} // namespace detail

//! Append-only table of B_k/k!. Readers take a shared lock, extension a unique one.
class BernoulliCache {
public:
  explicit BernoulliCache(int initial = 128) { extend(initial); }

  int max_order() const {
    std::shared_lock lock(mutex_);
    return int(scaled_.size()) - 1;
  }

  //! B_k / k!
  double scaled(int k) const {
    {
      std::shared_lock lock(mutex_);
      if (k < int(scaled_.size())) return scaled_[k];
    }
    extend(std::max(k, 2 * max_order()));
    std::shared_lock lock(mutex_);
    return scaled_[k];
  }

  //! First n+1 scaled numbers, copied out under one lock.
  std::vector<double> scaled_row(int n) const {
    if (n > max_order()) extend(n);
    std::shared_lock lock(mutex_);
    return {scaled_.begin(), scaled_.begin() + n + 1};
  }

  double number(int k) const {
    detail::check_public_order(k);
    return scaled(k) * detail::factorial(k);
  }

  void extend(int order) const {
    std::unique_lock lock(mutex_);
    for (int k = int(scaled_.size()); k <= order; ++k) scaled_.push_back(compute(k));
  }

private:
  // B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}
  static double compute(int k) {
    if (k == 0) return 1;
    if (k == 1) return -0.5;
    if (k & 1) return 0;
    const double mag = 2 * boost::math::zeta(double(k)) *
                       std::exp(-k * std::log(2 * std::numbers::pi));
    return (k / 2) % 2 == 1 ? mag : -mag;
  }

  mutable std::shared_mutex mutex_;
  mutable std::vector<double> scaled_;
};

inline BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

//! B_n(x)/n!
inline double bernoulli_poly_scaled(int n, double x) {
  if (n < 0) throw domain_error("negative order");
  if (x < 0) return (n & 1 ? -1.0 : 1.0) * bernoulli_poly_scaled(n, 1 - x);
  const double k = std::floor(x);
  const double y = x - k;
  const auto beta = bernoulli_cache().scaled_row(n);
  detail::accumulator acc;
  double pw = 1; // y^m/m!
  for (int m = 0; m <= n; ++m) {
    acc.add(beta[n - m] * pw);
    pw *= y / (m + 1);
  }
  // beta_n(u+1) = beta_n(u) + u^{n-1}/(n-1)!
  if (n >= 1)
    for (double i = 0; i < k; ++i) acc.add(detail::pow_over_factorial(y + i, n - 1));
  return acc.value();
}

inline double bernoulli_number(int n) { return bernoulli_cache().number(n); }

inline double bernoulli_poly(int n, double x) {
  detail::check_public_order(n);
  return bernoulli_poly_scaled(n, x) * detail::factorial(n);
}

/*! B_k^{(sigma)}(x)/k! for k = 0..kmax.
    The coefficients of (t/(e^t-1))^sigma come from the power recurrence
    f_k = (1/k) sum_j ((sigma+1) j - k) beta_j f_{k-j}, then e^{xt} is folded in. */
inline std::vector<double> noerlund_row_scaled(int kmax, double sigma, double x) {
  const auto beta = bernoulli_cache().scaled_row(kmax);
  std::vector<double> f(kmax + 1, 0.0), out(kmax + 1, 0.0);
  f[0] = 1;
  for (int k = 1; k <= kmax; ++k) {
    detail::accumulator acc;
    for (int j = 1; j <= k; ++j)
      if (beta[j] != 0) acc.add(((sigma + 1) * j - k) * beta[j] * f[k - j]);
    f[k] = acc.value() / k;
  }
  std::vector<double> ex(kmax + 1); // x^m/m!
  ex[0] = 1;
  for (int m = 1; m <= kmax; ++m) ex[m] = ex[m - 1] * x / m;
  for (int k = 0; k <= kmax; ++k) {
    detail::accumulator acc;
    for (int j = 0; j <= k; ++j) acc.add(f[j] * ex[k - j]);
    out[k] = acc.value();
  }
  return out;
}

inline double noerlund_poly(int k, double sigma, double x) {
  detail::check_public_order(k);
  return noerlund_row_scaled(k, sigma, x)[k] * detail::factorial(k);
}

//! Coefficients of x^l in (sigma + x)_n, l = 0..n.
inline std::vector<double> stirling_row(double sigma, int n) {
  if (n < 0) throw domain_error("negative order");
  std::vector<double> row{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t l = 0; l < row.size(); ++l) {
      next[l] += (sigma + i) * row[l];
      next[l + 1] += row[l];
    }
    row = std::move(next);
  }
  return row;
}

inline double stirling_noncentral(double sigma, int n, int l) {
  if (n < 0 || l < 0 || l > n) throw domain_error("index outside the Stirling triangle");
  return stirling_row(sigma, n)[l];
}

/*! Rows of s_sigma(n, r) r!/n!, advanced one n at a time.
    Bounded for all n, unlike s_sigma(n, r) itself. */
class ScaledStirlingRows {
public:
  explicit ScaledStirlingRows(double sigma) : sigma_(sigma), row_{1.0} {}

  int n() const { return int(row_.size()) - 1; }
  const std::vector<double>& row() const { return row_; }

  void advance() {
    const int n = this->n();
    std::vector<double> next(n + 2, 0.0);
    for (int r = 0; r <= n + 1; ++r) {
      double v = 0;
      if (r <= n) v += (sigma_ + n) * row_[r];
      if (r >= 1) v += r * row_[r - 1];
      next[r] = v / (n + 1);
    }
    row_ = std::move(next);
  }

private:
  double sigma_;
  std::vector<double> row_;
};

inline double pochhammer(double alpha, int n) {
  if (n < 0) throw domain_error("negative order");
  double r = 1;
  for (int i = 0; i < n; ++i) r *= alpha + i;
  return r;
}

} // namespace deltah
