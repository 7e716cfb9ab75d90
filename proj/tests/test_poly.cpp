#include <deltah/poly.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace deltah;

namespace {

// B_0..B_20 as exact rationals
const double bernoulli_table[] = {1.0,           -1.0 / 2,       1.0 / 6,   0, -1.0 / 30, 0, 1.0 / 42, 0,
                                  -1.0 / 30,     0,              5.0 / 66,  0, -691.0 / 2730, 0, 7.0 / 6, 0,
                                  -3617.0 / 510, 0,              43867.0 / 798, 0, -174611.0 / 330};

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

double bernoulli_oracle(int n, double x) {
  double s = 0;
  for (int k = 0; k <= n; ++k) s += binom(n, k) * bernoulli_table[k] * std::pow(x, n - k);
  return s;
}

// Taylor coefficients of (t/(e^t-1))^sigma e^{xt} via log and exp of power series
std::vector<double> noerlund_taylor(int N, double sigma, double x) {
  std::vector<double> f(N + 1), lg(N + 1, 0.0), h(N + 1), e(N + 1, 0.0);
  double fact = 1;
  for (int k = 0; k <= N; ++k) {
    fact *= (k + 1);
    f[k] = 1 / fact; // (e^t - 1)/t
  }
  // lg = log f, from f' = f lg'
  for (int k = 1; k <= N; ++k) {
    double s = k * f[k];
    for (int j = 1; j < k; ++j) s -= j * lg[j] * f[k - j];
    lg[k] = s / k;
  }
  for (int k = 0; k <= N; ++k) h[k] = -sigma * lg[k];
  h[1] += x;
  e[0] = 1;
  for (int k = 1; k <= N; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * h[j] * e[k - j];
    e[k] = s / k;
  }
  return e;
}

} // namespace

TEST(Bernoulli, NumbersMatchTable) {
  for (int n = 0; n <= 20; ++n) EXPECT_NEAR(bernoulli_number(n), bernoulli_table[n], 1e-14 * std::max(1.0, std::abs(bernoulli_table[n]))) << n;
}

TEST(Bernoulli, PolynomialsMatchBinomialExpansion) {
  for (int n = 0; n <= 14; ++n)
    for (double x : {-2.3, -0.4, 0.0, 0.25, 0.5, 1.0, 1.7, 3.2}) {
      const double ref = bernoulli_oracle(n, x);
      EXPECT_NEAR(bernoulli_poly(n, x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << n << " " << x;
    }
}

TEST(Bernoulli, ShiftAndReflection) {
  for (int n = 1; n <= 12; ++n) {
    const double x = 0.37;
    EXPECT_NEAR(bernoulli_poly(n, x + 1) - bernoulli_poly(n, x), n * std::pow(x, n - 1), 1e-12);
    EXPECT_NEAR(bernoulli_poly(n, 1 - x), (n % 2 ? -1 : 1) * bernoulli_poly(n, x), 1e-13);
  }
}

TEST(Bernoulli, OrderCap) {
  EXPECT_THROW(bernoulli_poly(65, 0.5), domain_error);
  EXPECT_NO_THROW(bernoulli_poly(64, 0.5));
}

TEST(Noerlund, MatchesTaylorOracle) {
  for (double sigma : {-1.5, 0.0, 0.7, 1.0, 3.3, 12.0})
    for (double x : {-0.8, 0.0, 0.4, 2.1}) {
      const auto t = noerlund_taylor(16, sigma, x);
      const auto r = noerlund_row_scaled(16, sigma, x);
      for (int k = 0; k <= 16; ++k) EXPECT_NEAR(r[k], t[k], std::max(1e-15, 1e-10 * std::abs(t[k]))) << sigma << " " << x << " " << k;
    }
}

TEST(Noerlund, OrderOneIsBernoulli) {
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(noerlund_poly(k, 1, 0.3), bernoulli_poly(k, 0.3), 1e-12);
}

TEST(Noerlund, DiagonalIsFallingProduct) {
  // B_n^{(n+1)}(x) = (x-1)(x-2)...(x-n)
  for (int n = 0; n <= 10; ++n) {
    double prod = 1;
    for (int i = 1; i <= n; ++i) prod *= 1.6 - i;
    EXPECT_NEAR(noerlund_poly(n, n + 1, 1.6), prod, 1e-11 * std::max(1.0, std::abs(prod))) << n;
  }
}

TEST(Noerlund, AdditionTheorem) {
  // B_n^{(s+t)}(x+y) = sum_k C(n,k) B_k^{(s)}(x) B_{n-k}^{(t)}(y)
  const double s = 0.8, t = 2.3, x = 0.35, y = -1.2;
  for (int n = 0; n <= 10; ++n) {
    double rhs = 0;
    for (int k = 0; k <= n; ++k) rhs += binom(n, k) * noerlund_poly(k, s, x) * noerlund_poly(n - k, t, y);
    EXPECT_NEAR(noerlund_poly(n, s + t, x + y), rhs, 1e-10 * std::max(1.0, std::abs(rhs))) << n;
  }
}

TEST(Stirling, RowExpandsRisingFactorial) {
  for (double sigma : {0.0, 0.5, -1.25, 3.0})
    for (int n = 0; n <= 8; ++n) {
      const auto row = stirling_row(sigma, n);
      for (double x : {-0.7, 0.3, 1.9}) {
        double poly = 0;
        for (int l = n; l >= 0; --l) poly = poly * x + row[l];
        EXPECT_NEAR(poly, pochhammer(sigma + x, n), 1e-11 * std::max(1.0, std::abs(poly)));
      }
    }
}

TEST(Stirling, CentralCaseIsUnsignedFirstKind) {
  // s_0(n, l) = |s(n, l)|
  EXPECT_EQ(stirling_noncentral(0, 5, 1), 24);
  EXPECT_EQ(stirling_noncentral(0, 5, 2), 50);
  EXPECT_EQ(stirling_noncentral(0, 5, 3), 35);
  EXPECT_EQ(stirling_noncentral(0, 5, 4), 10);
  EXPECT_THROW(stirling_noncentral(0, 5, 6), domain_error);
}

TEST(Stirling, ScaledRowsMatchUnscaled) {
  ScaledStirlingRows rows(1.7);
  for (int n = 1; n <= 20; ++n) {
    rows.advance();
    const auto full = stirling_row(1.7, n);
    for (int r = 0; r <= n; ++r) {
      const double ref = full[r] * std::tgamma(r + 1.0) / std::tgamma(n + 1.0);
      EXPECT_NEAR(rows.row()[r], ref, 1e-13 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(Pochhammer, Values) {
  EXPECT_EQ(pochhammer(3, 0), 1);
  EXPECT_EQ(pochhammer(3, 4), 3 * 4 * 5 * 6);
  EXPECT_EQ(pochhammer(-2, 3), 0);
  EXPECT_THROW(pochhammer(1, -1), domain_error);
}
