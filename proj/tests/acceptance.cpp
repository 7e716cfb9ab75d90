// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <deltah/deltah.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace deltah;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rel_err(double x, double y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0 ? 0 : std::abs(x - y) / s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> grid10() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.05 + 0.9 * (i + 1) / 11);
  return t;
}

const SeriesSpec stirling_spec{0.0, 800, ARoute::stirling, 1e-16};
const SeriesSpec noerlund_spec{0.0, 800, ARoute::noerlund, 1e-16};

// worst relative error of bent contour and both series routes against a closed form
double dual_route_worst(const ParameterSet& ps, const std::function<double(double)>& closed) {
  const SeriesExpansion s1(ps, stirling_spec), s2(ps, noerlund_spec);
  double worst = 0;
  for (double x : grid10()) {
    const double ref = closed(x);
    worst = std::max({worst, rel_err(eval_contour(ps, x).value, ref), rel_err(s1.at(x).value, ref),
                      rel_err(s2.at(x).value, ref)});
  }
  return worst;
}

Outcome c1() {
  Outcome o;
  const std::pair<double, double> cases[] = {{0, 1}, {0.3, 1.5}, {0.7, 0.7 + 2.4}};
  for (auto [a, b] : cases) {
    const double w = dual_route_worst(g_params({a}, {b}), [&](double x) { return g11_closed(a, b, x); });
    o.pass = o.pass && w <= 1e-8;
    o.detail += fmt("%.2e ", w);
  }
  o.detail = "max rel err per (a,b): " + o.detail + "(tol 1e-8)";
  return o;
}

Outcome c2() {
  Outcome o;
  const double a1 = 0.3, a2 = 0.8, b1 = 0.5, b2 = 1.1;
  const auto ps = g_params({a1, a2}, {b1, b2});
  const double w = dual_route_worst(ps, [&](double x) { return g22_closed(a1, a2, b1, b2, x); });
  // the other pairing: z^{a1} with shifts b - a1
  double mismatch = 0;
  for (double x : grid10()) {
    const double wrong = std::pow(x, a1) * std::pow(1 - x, b1 + b2 - a1 - a2 - 1) *
                         hyp2f1_regularized(b1 - a1, b2 - a1, b1 + b2 - a1 - a2, 1 - x);
    mismatch = std::max(mismatch, rel_err(wrong, eval_contour(ps, x).value));
  }
  o.pass = w <= 1e-7 && mismatch > 1e-3;
  o.detail = "z^{a2} with b - a1: " + fmt("%.2e", w) + " (tol 1e-7); z^{a1} with b - a1: " + fmt("%.2e", mismatch) +
             " (rejected)";
  return o;
}

ParameterSet random_set(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_real_distribution<double> w(0.5, 2.0), sh(0.0, 1.5);
  ParameterSet ps;
  const int p = len(rng), q = len(rng);
  double sa = 0, sb = 0;
  for (int i = 0; i < p; ++i) {
    ps.A.push_back(w(rng));
    ps.a.push_back(sh(rng));
    sa += ps.A.back();
  }
  for (int j = 0; j < q; ++j) {
    ps.B.push_back(w(rng));
    ps.b.push_back(sh(rng));
    sb += ps.B.back();
  }
  for (double& v : ps.B) v *= sa / sb;
  // exact balance after rescaling
  double s = 0;
  for (std::size_t j = 0; j + 1 < ps.B.size(); ++j) s += ps.B[j];
  ps.B.back() = sa - s;
  return ps;
}

Outcome c3() {
  std::mt19937 rng(20240517);
  double worst = 0;
  for (int k = 0; k < 5; ++k) {
    const auto ps = random_set(rng);
    const auto l = compute_l(ps, 10);
    for (int r = 0; r <= 10; ++r)
      worst = std::max({worst, rel_err(l[r], compute_l_explicit(ps, r)), rel_err(l[r], compute_l_nair(ps, r))});
  }
  return {worst <= 1e-9, "max rel spread over 5 sets, r <= 10: " + fmt("%.2e", worst) + " (tol 1e-9)"};
}

ParameterSet true_h(double b1, double b2) { return ParameterSet{{0.5, 1.5}, {0.3, 0.7}, {1, 1}, {b1, b2}}; }

Outcome c4() {
  double worst_a = 0, worst_f = 0;
  const std::pair<double, double> mus[] = {{0.7, 0.8}, {1.0, 1.0}, {1.1, 2.2}}; // mu = 0.5, 1, 2.3
  for (auto [b1, b2] : mus) {
    const auto ps = true_h(b1, b2);
    std::vector<double> ref_vals;
    for (double theta : {0.0, 0.5, 2.0}) {
      const auto s = compute_a(ps, theta, 20, ARoute::stirling);
      const auto n = compute_a(ps, theta, 20, ARoute::noerlund);
      for (int i = 0; i <= 20; ++i) worst_a = std::max(worst_a, rel_err(s[i], n[i]));
      int j = 0;
      for (double t : {0.3, 0.6, 0.85}) {
        const double v = eval_series(ps, t, SeriesSpec{theta, 800, ARoute::stirling, 1e-16}).value;
        if (theta == 0) ref_vals.push_back(v);
        else worst_f = std::max(worst_f, rel_err(v, ref_vals[j]));
        ++j;
      }
    }
  }
  return {worst_a <= 1e-9 && worst_f <= 1e-8,
          "a_n routes " + fmt("%.2e", worst_a) + " (tol 1e-9); theta spread " + fmt("%.2e", worst_f) + " (tol 1e-8)"};
}

Outcome c5() {
  double worst = 0;
  for (auto ps : {true_h(1.0, 1.2), true_h(0.7, 0.8)}) {
    const auto d = derive(ps);
    for (double t : {0.3, 0.6, 0.85})
      worst = std::max(worst, std::abs(eval_contour(ps, t * d.rho).value - eval_series(ps, t, stirling_spec).value));
  }
  return {worst <= 1e-7, "max |series - contour| " + fmt("%.2e", worst) + " (tol 1e-7)"};
}

const ParameterSet mu_minus_one{{0.5, 1.5}, {0.6, 0.9}, {1, 1}, {0.2, 0.3}};
const ParameterSet mu_zero_h{{1, 1}, {0.4, 0.9}, {0.5, 1.5}, {0.5, 0.8}};

Outcome c6() {
  const std::vector<double> s{1, 2, 3};
  const auto g = verify_mellin_negative_mu(g_params({0.3, 0.8}, {0.5, 0.6}), s, 1e-5);
  const auto h = verify_mellin_negative_mu(mu_minus_one, s, 1e-5);
  const auto triv = verify_mellin_negative_mu(g_params({0.4}, {0.4}), s, 0.0);
  return {g.passed && h.passed && triv.passed, "G mu=0 " + fmt("%.2e", g.max_residual) + ", H mu=-1 " +
                                                    fmt("%.2e", h.max_residual) + " (tol 1e-5); a=b " +
                                                    fmt("%.1e", triv.max_residual) + " (exact)"};
}

Outcome c7() {
  const std::vector<double> s{1, 2, 3};
  bool pass = true;
  double ki = 0, th = 0;
  const std::pair<std::vector<double>, std::vector<double>> sets[] = {{{0.5, 1.2}, {0.3, 0.4}},
                                                                      {{0.9, 1.4, 1.1}, {0.2, 0.5, 0.7}}};
  for (auto& [a, b] : sets) {
    const auto k = verify_q_k_independence(a, b, s, 1e-10);
    const auto t = verify_q_polynomial(a, b, s, 1e-9);
    const auto m = verify_noerlund_mellin(a, b, s, 1e-6);
    pass = pass && k.passed && t.passed && m.passed;
    ki = std::max(ki, k.max_residual);
    th = std::max(th, t.max_residual);
  }
  return {pass, "k-independence " + fmt("%.2e", ki) + " (tol 1e-10); vs polynomial " + fmt("%.2e", th) +
                    " (tol 1e-9); Mellin transform checked too"};
}

Outcome c8() {
  const std::vector<double> x{1, 2, 5};
  const auto h = verify_bernstein(mu_zero_h, Axis::mellin_x, x, 1e-6);
  const auto ht = verify_bernstein(mu_zero_h, Axis::laplace_t, x, 1e-6);
  const auto g = verify_bernstein(g_params({0.3, 0.8}, {0.5, 0.6}), Axis::mellin_x, x, 1e-6);
  return {h.passed && ht.passed && g.passed,
          "rel residual H(rho<1) " + fmt("%.2e", std::max(h.max_rel_residual, ht.max_rel_residual)) + ", G " +
              fmt("%.2e", g.max_rel_residual) + " (tol 1e-6)"};
}

Outcome c9() {
  const auto r = verify_weak_limit_moments(g_params({0.3, 0.8}, {0.9, 0.2}), {0.2, 0.1, 0.05}, 2, 1e-6);
  return {r[0].passed && r[1].passed,
          "moments " + fmt("%.2e", r[0].max_residual) + " (tol 1e-6); " + r[1].notes + " (within 30% of 1); test functions " +
              (r[2].passed ? "converge" : "do not converge")};
}

Outcome c10() {
  const std::vector<double> x{0.2, 0.5, 0.8};
  double worst = 0;
  bool pass = true;
  auto run = [&](const ParameterSet& ps, MuCase mc, double tol) {
    std::vector<double> xs;
    const double rho = derive(ps).rho;
    for (double v : x) xs.push_back(v * rho);
    const auto r = verify_integral_equation(ps, xs, mc, tol);
    pass = pass && r.passed;
    worst = std::max(worst, r.max_residual);
  };
  run(g_params({0.3}, {1.4}), MuCase::positive, 1e-6);
  run(g_params({0.3, 0.8}, {0.5, 1.1}), MuCase::positive, 1e-6);
  run(g_params({0.3}, {0.3}), MuCase::zero, 1e-6);
  run(g_params({0.3, 0.8}, {0.5, 0.6}), MuCase::zero, 1e-6);
  run(mu_zero_h, MuCase::zero, 1e-5);
  return {pass, "max residual " + fmt("%.2e", worst) + " (tol 1e-6 for G, 1e-5 for H)"};
}

Outcome c11() {
  const std::vector<double> x{0.2, 0.5, 0.8};
  const auto z = verify_digamma_identity({0.3, 0.8}, {0.5, 0.6}, x, MuCase::zero, 1e-6);
  const auto p = verify_digamma_identity({0.3, 0.8}, {0.5, 1.1}, x, MuCase::positive, 1e-6);
  const auto f = verify_final_expansion({0.3, 0.8}, {0.5, 1.1}, x, 1e-6);
  const auto c = verify_digamma_contour({0.3, 0.8}, {0.5, 1.1}, {0.6}, 1e-5);
  const auto c0 = verify_digamma_contour({0.3, 0.8}, {0.5, 0.6}, {0.6}, 1e-5);
  const double series = std::max({z.max_residual, p.max_residual, f.max_residual});
  return {z.passed && p.passed && f.passed && c.passed && c0.passed,
          "series " + fmt("%.2e", series) + " (tol 1e-6); contour " +
              fmt("%.2e", std::max(c.max_residual, c0.max_residual)) + " (tol 1e-5)"};
}

Outcome c12() {
  const auto ps = true_h(1.0, 1.2);
  const auto e = make_asymptotic(ps, 5);
  Outcome o;
  for (int M = 0; M <= 4; ++M) {
    auto err = [&](double z) { return std::abs(W_asymptotic(e, z, M) / W(ps, cplx(z)) - 1.0); };
    const double ratio = err(80) / err(40) / std::ldexp(1.0, -(M + 1));
    o.pass = o.pass && ratio >= 0.5 && ratio <= 2;
    o.detail += fmt("%.3f ", ratio);
  }
  o.detail = "observed/expected ratio for M = 0..4: " + o.detail + "(within [0.5, 2])";
  return o;
}

Outcome c13() {
  Outcome o;
  for (auto [b1, b2] : {std::pair{0.7, 0.8}, std::pair{1.2, 1.3}}) { // mu = 0.5, 1.5
    const auto r = branch_probe(true_h(b1, b2));
    o.pass = o.pass && std::abs(r.fitted_exponent - r.expected_exponent) <= 0.05;
    o.detail += "mu " + fmt("%.1f", r.mu) + " slope " + fmt("%.4f", r.fitted_exponent) + "; ";
  }
  for (auto [b1, b2] : {std::pair{1.0, 1.0}, std::pair{1.5, 1.5}}) { // mu = 1, 2
    const auto r = branch_probe(true_h(b1, b2));
    o.pass = o.pass && r.finite_limit && std::isfinite(r.limit_value);
    o.detail += "mu " + fmt("%.0f", r.mu) + " limit " + fmt("%.6g", r.limit_value) + "; ";
  }
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"closed form, p = 1", c1},        {"closed form, p = 2", c2},
      {"l_r three routes", c3},          {"a_n two routes", c4},
      {"true H series vs contour", c5},  {"Mellin transform, mu <= 0", c6},
      {"q(s) consistency", c7},          {"Bernstein form with atom", c8},
      {"weak limit moments", c9},        {"integral equations", c10},
      {"digamma identities", c11},       {"asymptotic order", c12},
      {"branch behaviour", c13}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sec > 30) {
      o.pass = false;
      o.detail += " [over 30 s]";
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s  %-26s %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
