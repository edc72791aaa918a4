#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wlqmc/models.hpp"
#include "wlqmc/presets.hpp"
#include "wlqmc/spectral.hpp"

using namespace wlqmc;

TEST(Diagonalize, RingLaplacianClosedForm) {
  // unit-hopping ring: M=8, r_min chosen so the hopping is exactly 1
  const int M = 8;
  const double a = 2 * std::numbers::pi / M;
  const Model m = build_circle(1.0, 1.0 / (std::sqrt(2.0) * a), 0.0, M);
  EXPECT_NEAR(m.H.at(1, 0), -1.0, 1e-12);
  const auto rep = diagonalize(m.H);
  std::vector<double> expected;
  for (int k = 0; k < M; ++k) expected.push_back(2 - 2 * std::cos(2 * std::numbers::pi * k / M));
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(rep.eigenvalues.size(), 8u);
  for (int k = 0; k < M; ++k) EXPECT_NEAR(rep.eigenvalues[static_cast<std::size_t>(k)], expected[static_cast<std::size_t>(k)], 1e-12);
  EXPECT_NEAR(rep.gap, 2 - 2 * std::cos(2 * std::numbers::pi / M), 1e-12);
}

TEST(Diagonalize, TrivialAndSignConvention) {
  const auto one = diagonalize(assemble(ConfigSpace(1), {{0, 0, 3.0}}));
  EXPECT_DOUBLE_EQ(one.E0, 3.0);
  EXPECT_DOUBLE_EQ(one.gap, 0.0);
  EXPECT_DOUBLE_EQ(one.psi0(0), 1.0);
  const auto rep = diagonalize(build_bouquet(6, 0.3).H);
  EXPECT_GE(rep.psi0.sum(), 0.0);
  for (Eigen::Index i = 0; i < rep.psi0.size(); ++i) EXPECT_GT(rep.psi0(i), 0.0);  // Perron-Frobenius
  EXPECT_LT(rep.residual, 1e-9 * build_bouquet(6, 0.3).H.norm_inf());
}

TEST(Diagonalize, IterativePathAgreesWithDense) {
  const Model m = build_family("rogue", {{"M", 24}, {"t", 0.05}, {"E", 0.01}, {"h", 0.2}});
  const auto dense = diagonalize(m.H);
  DiagOptions opt;
  opt.force_iterative = true;
  const auto it = diagonalize(m.H, opt);
  EXPECT_FALSE(it.dense);
  EXPECT_NEAR(it.E0, dense.E0, 1e-9);
  EXPECT_NEAR(it.gap, dense.gap, 1e-8);
  EXPECT_NEAR(std::abs(it.psi0.dot(dense.psi0)), 1.0, 1e-8);
  EXPECT_LT(it.residual, 1e-9 * m.H.norm_inf());
}

TEST(Diagonalize, IterativeOnLargeTree) {
  const Model m = build_tree_cover(2, 7);
  ASSERT_GT(m.H.dim(), 4096u);
  const auto rep = diagonalize(m.H);
  EXPECT_FALSE(rep.dense);
  EXPECT_GE(rep.E0, tree_cover_bottom(2) - 1e-9);
  EXPECT_LT(rep.residual, 1e-9 * m.H.norm_inf());
}

TEST(GapScan, ConstantPathAndArgmin) {
  const auto H = build_bouquet(5).H;
  const auto flat = gap_along_schedule([&](double) { return H; }, 5);
  ASSERT_EQ(flat.samples.size(), 5u);
  for (const auto& s : flat.samples) EXPECT_NEAR(s.gap, flat.samples[0].gap, 1e-12);
  EXPECT_THROW(gap_along_schedule([&](double) { return H; }, 1), std::invalid_argument);
}

TEST(GapScan, DoubleWellClosesAtZeroTilt) {
  const auto scan = gap_along_schedule(
      [](double u) { return build_tilted_double_well(1.0, -8.0, -1.0 + 2.0 * u, {3.0, 0.05}).H; }, 21);
  EXPECT_NEAR(scan.argmin_u, 0.5, 1e-12);
  EXPECT_LT(scan.min_gap, 1e-3);
}

TEST(GapScan, RoguePresetHasPositiveMinimumAtTheCrossing) {
  const Preset ps = make_preset("rogue");
  const auto family = make_family(ps.family, ps.fixed);
  const auto scan = gap_along_schedule([&](double u) { return family(ps.schedule.evaluate(u)).H; }, 51);
  EXPECT_GT(scan.min_gap, 0.0);
  // The E ramp (second of five stages) ends at the avoided crossing.
  EXPECT_GT(scan.argmin_u, 0.2);
  EXPECT_LT(scan.argmin_u, 0.7);
}
