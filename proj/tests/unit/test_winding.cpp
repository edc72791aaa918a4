#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wlqmc/models.hpp"
#include "wlqmc/winding.hpp"

using namespace wlqmc;

TEST(WindingLaw, ModeAtZeroAndSymmetric) {
  const auto law = equilibrium_winding_law(1.0, 1.0, 20.0);
  EXPECT_NEAR(law.mean(), 0.0, 1e-14);
  for (int n = 1; n <= law.n_max; ++n) {
    EXPECT_LT(law.prob(n), law.prob(n - 1));
    EXPECT_DOUBLE_EQ(law.prob(n), law.prob(-n));
  }
  EXPECT_EQ(law.prob(law.n_max + 5), 0.0);
  double total = 0;
  for (double p : law.p) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(WindingLaw, VarianceScalesWithBeta) {
  // Gaussian regime: variance beta / (m r^2 4 pi^2)
  const double m = 1.0, r = 0.5;
  for (double beta : {20.0, 40.0}) {
    const auto law = equilibrium_winding_law(m, r, beta);
    EXPECT_NEAR(law.variance(), beta / (m * r * r * 4 * std::numbers::pi * std::numbers::pi), 1e-6);
  }
  const double v1 = equilibrium_winding_law(m, r, 25.0).variance();
  const double v2 = equilibrium_winding_law(m, r, 50.0).variance();
  EXPECT_NEAR(v2 / v1, 2.0, 1e-6);
}

TEST(WindingLaw, ColdLimitIsADelta) {
  const auto law = equilibrium_winding_law(1.0, 5.0, 1.0);
  EXPECT_NEAR(law.prob(0), 1.0, 1e-12);
  EXPECT_THROW(equilibrium_winding_law(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(ExactWinding, ApproachesLawOnAFineRing) {
  // M = 32: lattice corrections to the winding law are O(a^2)
  const int M = 32;
  const double m = 1.0, r = 32 / (2 * std::numbers::pi) / 4;  // hopping 8
  const Model md = build_circle(m, r, 0.0, M);
  const double beta = 6.0;
  const auto exact = exact_winding_distribution(md.H, md.geometry, beta, 400);
  const auto law = equilibrium_winding_law(m, r, beta);
  EXPECT_NEAR(exact.mean(), 0.0, 1e-10);
  EXPECT_LT(total_variation(exact, law), 0.03);
  EXPECT_NEAR(exact.variance() / law.variance(), 1.0, 0.1);
}

TEST(ExactWinding, RejectsARingWithoutHopping) {
  const Model md = build_circle(std::numeric_limits<double>::infinity(), 1.0, 0.0, 8);
  EXPECT_THROW(exact_winding_distribution(md.H, md.geometry, 4.0, 10), std::invalid_argument);
}

TEST(Empirical, HistogramAndTotalVariation) {
  const auto e = empirical_winding({0, 0, 1, -1, 2, 0});
  EXPECT_EQ(e.n_max, 2);
  EXPECT_DOUBLE_EQ(e.prob(0), 0.5);
  EXPECT_DOUBLE_EQ(e.prob(2), 1.0 / 6);
  EXPECT_DOUBLE_EQ(e.prob(-2), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(e, e), 0.0);
  const auto d = empirical_winding({5});
  EXPECT_DOUBLE_EQ(total_variation(e, d), 1.0);
  const auto z = empirical_winding({0});
  EXPECT_NEAR(total_variation(e, z), 0.5, 1e-15);
}

TEST(Instanton, ClosedFormAgreesWithGoldenSection) {
  const double R = 2.0, m = 0.7, h = 0.3;
  for (double n : {1.0, 2.0, 3.0}) {
    const auto f = [&](double tau) { return instanton_action(n, R, m, h, tau); };
    double lo = 1e-3, hi = 100.0;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
      (f(a) < f(b) ? hi : lo) = (f(a) < f(b) ? b : a);
    }
    const auto inst = instanton_time(n, R, m, h);
    EXPECT_NEAR(inst.tau, (lo + hi) / 2, 1e-6);
    EXPECT_NEAR(inst.action, f(inst.tau), 1e-12);
    EXPECT_NEAR(inst.action, 2 * n * std::sqrt(m * R * R * R * h), 1e-12);
  }
}

TEST(Instanton, ScalingAndEdgeCases) {
  const auto one = instanton_time(1, 1.0, 1.0, 1.0);
  const auto two = instanton_time(2, 1.0, 1.0, 1.0);
  EXPECT_NEAR(two.action, 2 * one.action, 1e-12);
  EXPECT_NEAR(two.tau, 2 * one.tau, 1e-12);
  EXPECT_NEAR(instanton_time(1, 4.0, 1.0, 1.0).action, 8 * one.action, 1e-12);
  EXPECT_EQ(instanton_time(0, 1.0, 1.0, 1.0).action, 0.0);
  EXPECT_THROW(instanton_time(1, 1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(instanton_time(1, 1.0, 1.0, -1.0), std::invalid_argument);
}
