#pragma once

// Thin layer over Boost.Math quadrature: node counting, semi-infinite
// panel sweeps, and per-thread tanh-sinh instances.

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "params.hpp"

namespace deltah {

struct QuadratureResult {
  double value = 0;
  double error = 0;
  double l1 = 0;
  long nodes = 0;
};

namespace detail {

template <class F>
QuadratureResult gauss_kronrod(F f, double a, double b, double tol, int max_depth = 10) {
  QuadratureResult r;
  auto counted = [&](double x) -> double {
    ++r.nodes;
    return f(x);
  };
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(counted, a, b, max_depth, tol,
                                                                          &r.error, &r.l1);
  return r;
}

/*! Integral over [0, inf) as panels [0,h], [h,2h], [2h,4h], ...
    Stops once a panel and the estimated remainder are below tol relative
    to the accumulated L1 norm. `tail(r)` bounds the integral beyond r.
    With a finite `cutoff` the last panel ends there and tail(cutoff) is added to the error. */
template <class F, class Tail>
QuadratureResult semi_infinite_panels(F f, Tail tail, double h, double tol, long max_nodes,
                                      double cutoff = std::numeric_limits<double>::infinity()) {
  QuadratureResult total;
  double lo = 0, hi = std::min(h, cutoff);
  int quiet = 0;
  for (int panel = 0; panel < 80; ++panel) {
    auto r = gauss_kronrod(f, lo, hi, std::max(tol, 1e-11));
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
    total.nodes += r.nodes;
    if (!std::isfinite(total.value)) throw convergence_error("quadrature produced a non-finite value");
    if (total.nodes > max_nodes)
      throw convergence_error("quadrature node budget of " + std::to_string(max_nodes) + " exhausted");
    const double scale = std::max(total.l1, std::numeric_limits<double>::min());
    const double rest = tail(hi);
    if (hi >= cutoff) {
      total.error += rest;
      return total;
    }
    if (std::abs(r.value) <= tol * scale && rest <= tol * scale) {
      if (++quiet >= 2) {
        total.error += rest;
        return total;
      }
    } else {
      quiet = 0;
    }
    lo = hi;
    hi = std::min(2 * hi, cutoff);
  }
  throw convergence_error("semi-infinite quadrature did not settle");
}

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_instance() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  return integrator;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_instance() {
  thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  return integrator;
}

//! f(x, xc) with xc the signed distance to the nearer endpoint
template <class F>
QuadratureResult tanh_sinh2(F f, double a, double b, double tol) {
  QuadratureResult r;
  std::size_t levels = 0;
  auto counted = [&](double x, double xc) -> double {
    ++r.nodes;
    return f(x, xc);
  };
  r.value = tanh_sinh_instance().integrate(counted, a, b, tol, &r.error, &r.l1, &levels);
  return r;
}

template <class F>
QuadratureResult tanh_sinh(F f, double a, double b, double tol) {
  return tanh_sinh2([&](double x, double) -> double { return f(x); }, a, b, tol);
}

template <class F>
QuadratureResult exp_sinh(F f, double a, double tol) {
  QuadratureResult r;
  std::size_t levels = 0;
  auto counted = [&](double x) -> double {
    ++r.nodes;
    return f(x);
  };
  r.value = exp_sinh_instance().integrate(counted, a, std::numeric_limits<double>::infinity(), tol,
                                          &r.error, &r.l1, &levels);
  return r;
}

} // namespace detail
} // namespace deltah
