#include <deltah/params.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace deltah;

TEST(Params, GCaseHasUnitRadius) {
  const auto d = derive(g_params({0.2, 0.7, 1.1}, {0.9, 1.3, 0.4}));
  EXPECT_DOUBLE_EQ(d.rho, 1.0);
  EXPECT_TRUE(d.is_g_case);
  EXPECT_DOUBLE_EQ(d.gamma_pole, -0.2);
}

TEST(Params, RadiusOfHalfThreeHalves) {
  const auto d = derive(ParameterSet{{0.5, 1.5}, {0.3, 0.7}, {1, 1}, {1.0, 1.2}});
  // (1/2)^{1/2} (3/2)^{3/2}
  EXPECT_NEAR(d.rho, std::sqrt(0.5) * std::pow(1.5, 1.5), 1e-15);
  EXPECT_NEAR(d.rho, 1.29904, 1e-5);
  EXPECT_FALSE(d.is_g_case);
}

TEST(Params, TrivialBetaCase) {
  const auto d = derive(g_params({0}, {1}));
  EXPECT_EQ(d.mu, 1.0);
  EXPECT_EQ(d.nu, 1.0);
  EXPECT_EQ(d.gamma_pole, 0.0);
}

TEST(Params, NuFromProducts) {
  const ParameterSet ps{{2.0}, {0.3}, {0.5, 1.5}, {0.2, 0.9}};
  const auto d = derive(ps);
  const double nu = std::pow(2 * M_PI, -0.5) * std::pow(2.0, 0.3 - 0.5) * std::pow(0.5, 0.5 - 0.2) *
                    std::pow(1.5, 0.5 - 0.9);
  EXPECT_NEAR(d.nu, nu, 1e-15 * nu);
  EXPECT_NEAR(d.mu, 0.2 + 0.9 - 0.3 - 0.5, 1e-15);
}

TEST(Params, LogRadiusMatchesProduct) {
  const ParameterSet ps{{3.7, 0.4, 9.1}, {0, 0, 0}, {6.2, 7.0}, {0, 0}};
  const double prod = std::pow(3.7, 3.7) * std::pow(0.4, 0.4) * std::pow(9.1, 9.1) / std::pow(6.2, 6.2) /
                      std::pow(7.0, 7.0);
  EXPECT_NEAR(derive(ps).rho, prod, 1e-13 * prod);
}

TEST(Params, LargeWeightsDoNotOverflow) {
  const ParameterSet ps{{400, 400}, {0, 0}, {800}, {0}};
  const auto d = derive(ps);
  EXPECT_TRUE(std::isfinite(d.rho));
  EXPECT_NEAR(d.rho, std::pow(0.25, 400), 1e-12 * std::pow(0.25, 400));
}

TEST(Params, RejectsUnbalancedWeights) {
  EXPECT_THROW(derive(ParameterSet{{1, 1}, {0, 0}, {1, 1.5}, {0, 0}}), not_delta_neutral);
  EXPECT_NO_THROW(derive(ParameterSet{{0.1, 0.2}, {0, 0}, {0.3}, {0}}));
}

TEST(Params, RejectsMalformedSets) {
  EXPECT_THROW(validate(ParameterSet{{1}, {0, 1}, {1}, {0}}), invalid_parameters);
  EXPECT_THROW(validate(ParameterSet{{}, {}, {}, {}}), invalid_parameters);
  EXPECT_THROW(validate(ParameterSet{{-1, 2}, {0, 0}, {1}, {0}}), invalid_parameters);
  EXPECT_THROW(validate(ParameterSet{{1}, {NAN}, {1}, {0}}), invalid_parameters);
}

TEST(Params, SnapsNearIntegerMu) {
  const auto d = derive(g_params({0.1, 0.2}, {0.15, 0.15 + 1e-14}));
  EXPECT_EQ(d.mu, 0.0);
  const auto e = derive(g_params({0.1}, {0.1 + 1e-6}));
  EXPECT_NE(e.mu, 0.0);
}

TEST(Params, DeriveIsDeterministic) {
  const ParameterSet ps{{0.5, 1.5}, {0.3, 0.7}, {1, 1}, {1.0, 1.2}};
  const auto d1 = derive(ps), d2 = derive(ps);
  EXPECT_EQ(d1.rho, d2.rho);
  EXPECT_EQ(d1.nu, d2.nu);
  EXPECT_EQ(d1.mu, d2.mu);
}
