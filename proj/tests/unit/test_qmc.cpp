#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "wlqmc/presets.hpp"
#include "wlqmc/qmc.hpp"

using namespace wlqmc;

namespace {

SparseHamiltonian random_stoquastic(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < n; ++r) {
    t.push_back({static_cast<Index>(r), static_cast<Index>(r), 2 * u(rng)});
    for (std::size_t c = 0; c < r; ++c)
      if (c + 1 == r || u(rng) < 0.5) t.push_back({static_cast<Index>(r), static_cast<Index>(c), -(0.2 + u(rng))});
  }
  return assemble(ConfigSpace(n), t);
}

// Every periodic trajectory of length K over d states, slice 0 fastest.
std::vector<Trajectory> all_trajectories(std::size_t d, std::size_t K) {
  std::vector<Trajectory> out;
  std::vector<Index> s(K, 0);
  while (true) {
    out.push_back({s, Boundary::periodic});
    std::size_t i = 0;
    while (i < K && ++s[i] == static_cast<Index>(d)) s[i++] = 0;
    if (i == K) break;
  }
  return out;
}

// Full single-update kernel: pick slice uniformly, proposal uniformly among
// neighbors plus self, accept by acceptance_probability.
std::map<std::vector<Index>, double> kernel_from(const Trajectory& t, const LinkTable& table) {
  std::map<std::vector<Index>, double> out;
  const double K = static_cast<double>(t.K());
  for (std::size_t i = 0; i < t.K(); ++i) {
    const Index c = t.slices[i];
    const std::size_t np = table.proposals(c);
    for (std::size_t k = 0; k < np; ++k) {
      const Index d = table.proposal(c, k);
      const double p = acceptance_probability(t, i, d, table) / (K * static_cast<double>(np));
      auto next = t.slices;
      next[i] = d;
      out[next] += p;
      out[t.slices] += 1.0 / (K * static_cast<double>(np)) - p;
    }
  }
  return out;
}

}  // namespace

TEST(LinkWeight, Definition) {
  const auto H = assemble(ConfigSpace(2), {{0, 0, 1.0}, {1, 1, -1.0}, {1, 0, -0.5}});
  EXPECT_DOUBLE_EQ(link_weight(H, 2.0, 10, 0, 0), 1 - 0.2);
  EXPECT_DOUBLE_EQ(link_weight(H, 2.0, 10, 1, 1), 1 + 0.2);
  EXPECT_DOUBLE_EQ(link_weight(H, 2.0, 10, 0, 1), 0.1);
  const LinkTable t(H, 2.0, 10);
  EXPECT_DOUBLE_EQ(t.weight(1, 0), 0.1);
  EXPECT_DOUBLE_EQ(t.step(), 0.2);
}

TEST(LinkWeight, NegativeWeightsRejected) {
  const auto H = assemble(ConfigSpace(2), {{0, 0, 5.0}, {1, 0, -1.0}});
  EXPECT_THROW(LinkTable(H, 1.0, 4), NegativeWeightError);
  const auto S = assemble(ConfigSpace(2), {{1, 0, 0.5}});
  EXPECT_THROW(LinkTable(S, 1.0, 100), NegativeWeightError);
}

TEST(Slices, Rule) {
  EXPECT_EQ(slices_for(1.0, 1.0), 10u);
  EXPECT_EQ(slices_for(0.01, 0.01), 2u);
  EXPECT_EQ(slices_for(3.0, 0.55), 17u);
}

TEST(TrajectoryWeight, ProductOfLinks) {
  const auto H = assemble(ConfigSpace(2), {{0, 0, 1.0}, {1, 0, -0.5}});
  Trajectory t{{0, 1, 1}, Boundary::periodic};
  const double w = link_weight(H, 3.0, 3, 0, 1) * link_weight(H, 3.0, 3, 1, 1) * link_weight(H, 3.0, 3, 1, 0);
  EXPECT_DOUBLE_EQ(trajectory_weight(t, H, 3.0), w);
  t.boundary = Boundary::open;
  EXPECT_DOUBLE_EQ(trajectory_weight(t, H, 3.0), link_weight(H, 3.0, 3, 0, 1) * link_weight(H, 3.0, 3, 1, 1));
}

TEST(DetailedBalance, ExactOnEnumerableSystems) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto H = random_stoquastic(3, rng);
    const double beta = 1.5;
    const std::size_t K = 5;
    const LinkTable table(H, beta, K);
    std::map<std::vector<Index>, std::map<std::vector<Index>, double>> P;
    std::map<std::vector<Index>, double> w;
    for (const auto& t : all_trajectories(3, K)) {
      P[t.slices] = kernel_from(t, table);
      w[t.slices] = trajectory_weight(t, table);
    }
    double row_err = 0, db_err = 0;
    for (const auto& [x, row] : P) {
      double s = 0;
      for (const auto& [y, p] : row) {
        s += p;
        if (y == x) continue;
        const double back = P[y].count(x) ? P[y].at(x) : 0.0;
        db_err = std::max(db_err, std::abs(w[x] * p - w[y] * back));
      }
      row_err = std::max(row_err, std::abs(s - 1));
    }
    EXPECT_LT(row_err, 1e-12);
    EXPECT_LT(db_err, 1e-15);
  }
}

TEST(Acceptance, ZeroWeightTargetsNeverAccepted) {
  const auto H = assemble(ConfigSpace(3), {{1, 0, -1.0}, {2, 1, -1.0}});
  const LinkTable table(H, 1.0, 4);
  Trajectory t{{0, 0, 0, 0}, Boundary::periodic};
  // 2 is not adjacent to 0, so the links 0-2 have zero weight.
  EXPECT_EQ(acceptance_probability(t, 1, 2, table), 0.0);
  EXPECT_GT(acceptance_probability(t, 1, 1, table), 0.0);
  EXPECT_EQ(acceptance_probability(t, 1, 0, table), 1.0);
}

TEST(Sweep, KAttemptsAndDeterministic) {
  std::mt19937_64 g(22);
  const auto H = random_stoquastic(4, g);
  const LinkTable table(H, 2.0, 50);
  Trajectory a = Trajectory::constant(0, 50), b = a;
  Rng r1(5), r2(5);
  for (int i = 0; i < 20; ++i) {
    const auto s = sweep(a, table, r1);
    EXPECT_EQ(s.attempts, 50u);
    sweep(b, table, r2);
  }
  EXPECT_EQ(a.slices, b.slices);
  EXPECT_GT(trajectory_weight(a, table), 0.0);
}

TEST(Equilibrium, DiscreteReferenceMatchesEnumeration) {
  std::mt19937_64 rng(23);
  const auto H = random_stoquastic(3, rng);
  const double beta = 2.0;
  const std::size_t K = 7;
  const auto ref = discrete_thermal_diagonal(H, beta, K);
  std::vector<double> acc(3, 0.0);
  double Z = 0;
  for (const auto& t : all_trajectories(3, K)) {
    const double w = trajectory_weight(t, H, beta);
    Z += w;
    acc[static_cast<std::size_t>(t.slices[0])] += w;
  }
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(ref[c], acc[c] / Z, 1e-12);
}

TEST(Equilibrium, DiscreteReferenceApproachesThermal) {
  std::mt19937_64 rng(24);
  const auto H = random_stoquastic(4, rng);
  Eigen::MatrixXd A(4, 4);
  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 4; ++c) A(r, c) = H.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double beta = 3.0;
  const Eigen::MatrixXd rho =
      es.eigenvectors() * (-beta * es.eigenvalues().array()).exp().matrix().asDiagonal() * es.eigenvectors().transpose();
  const auto ref = discrete_thermal_diagonal(H, beta, 20000);
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(ref[static_cast<std::size_t>(c)], rho(c, c) / rho.trace(), 1e-4);
}

TEST(Equilibrium, SamplerWithinErrorBars) {
  std::mt19937_64 rng(25);
  int outliers = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto H = random_stoquastic(4, rng);
    const double beta = 4.0;
    const std::size_t K = slices_for(beta, H.norm_inf());
    const auto est = sample_equilibrium(H, beta, K, 20000, 1000, 100 + static_cast<std::uint64_t>(trial));
    const auto ref = discrete_thermal_diagonal(H, beta, K);
    EXPECT_EQ(est.replicas, 20u);
    for (std::size_t c = 0; c < 4; ++c) {
      const double sigma = std::max(est.stderr_[c], est.binomial_error(ref[c]));
      ASSERT_GT(sigma, 0.0);
      if (std::abs(est.mean[c] - ref[c]) > 3 * sigma) ++outliers;
      EXPECT_LT(std::abs(est.mean[c] - ref[c]), 5 * sigma);
    }
  }
  EXPECT_LE(outliers, 1);
}

TEST(Resample, ReproducesConditionalTrajectoryLaw) {
  const auto H = assemble(ConfigSpace(3), {{0, 0, 0.3}, {1, 0, -0.8}, {2, 1, -0.6}, {2, 0, -0.2}, {2, 2, -0.4}});
  const std::size_t K = 4;
  const double beta = 3.0;
  const LinkTable table(H, beta, K);
  std::map<std::vector<Index>, double> exact;
  double Z = 0;
  for (const auto& t : all_trajectories(3, K))
    if (t.slices[0] == 1) {
      const double w = trajectory_weight(t, table);
      exact[t.slices] = w;
      Z += w;
    }
  std::map<std::vector<Index>, double> seen;
  Rng rng(7);
  Trajectory t = Trajectory::constant(1, K);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    resample_trajectory(t, table, rng);
    ASSERT_EQ(t.slices[0], 1);
    seen[t.slices] += 1.0 / n;
  }
  double tv = 0;
  for (const auto& [s, w] : exact) tv += std::abs(w / Z - (seen.count(s) ? seen[s] : 0.0));
  EXPECT_LT(0.5 * tv, 0.01);
  for (const auto& [s, p] : seen) EXPECT_TRUE(exact.count(s) && exact[s] > 0);
}

TEST(Resample, OpenBoundary) {
  const auto H = assemble(ConfigSpace(2), {{1, 0, -1.0}, {1, 1, 0.5}});
  const LinkTable table(H, 2.0, 10);
  Trajectory t = Trajectory::constant(0, 10, Boundary::open);
  Rng rng(3);
  double last1 = 0;
  for (int i = 0; i < 2000; ++i) {
    resample_trajectory(t, table, rng);
    last1 += t.slices.back() == 1;
  }
  EXPECT_GT(last1, 0);
  EXPECT_LT(last1, 2000);
}

TEST(GrowBeta, RepeatsLastSlice) {
  const auto t = grow_beta(Trajectory{{0, 1, 2}, Boundary::open});
  EXPECT_EQ(t.slices, (std::vector<Index>{0, 1, 2, 2}));
  EXPECT_EQ(t.boundary, Boundary::open);
}

TEST(ChainSeed, DeterministicAndDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 1000; ++c) seen.insert(chain_seed(42, c));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(chain_seed(42, 3), chain_seed(42, 3));
  EXPECT_NE(chain_seed(42, 3), chain_seed(43, 3));
}

TEST(Annealing, RecordsEveryStepAndIsReproducible) {
  AnnealingSchedule s;
  s.set("h", {{0.0, 0.0}, {1.0, 0.5}});
  s.set_steps(5);
  const auto family = make_family("bouquet", {{"M", 4}});
  QmcParams p;
  p.beta = 2.0;
  p.sweeps_per_step = 3;
  p.burn_in_sweeps = 5;
  p.seed = 9;
  MeasureSpec m;
  m.marks = {"hub"};
  int hook_calls = 0;
  const auto r1 = run_annealing(family, s, p, m, [&](const ObservableRecord&, const Trajectory&, const Model&) { ++hook_calls; });
  const auto r2 = run_annealing(family, s, p, m);
  ASSERT_EQ(r1.records.size(), 6u);
  EXPECT_EQ(hook_calls, 6);
  EXPECT_EQ(r1.K, slices_for(2.0, build_family("bouquet", {{"M", 4}}).H.norm_inf()));
  for (std::size_t i = 0; i < r1.records.size(); ++i) {
    EXPECT_EQ(r1.records[i].sector, r2.records[i].sector);
    EXPECT_EQ(r1.records[i].mark_fractions, r2.records[i].mark_fractions);
    EXPECT_DOUBLE_EQ(r1.records[i].u, 0.2 * static_cast<double>(i));
    EXPECT_DOUBLE_EQ(r1.records[i].params.at("h"), 0.1 * static_cast<double>(i));
  }
  EXPECT_EQ(r1.final_trajectory.slices, r2.final_trajectory.slices);
}

TEST(Annealing, NegativeWeightSurfaces) {
  AnnealingSchedule s;
  s.set_constant("h", 0.0);
  const auto family = make_family("bouquet", {{"M", 4}});
  QmcParams p;
  p.beta = 10.0;
  p.K = 4;
  EXPECT_THROW(run_annealing(family, s, p, {}), NegativeWeightError);
}

TEST(Endpoints, ProductReferenceAndDefect) {
  const std::vector<double> psi{1.0, 1.0};
  std::vector<std::pair<Index, Index>> e{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_NEAR(measure_endpoint_joint(e, Boundary::open, psi).defect, 0.0, 1e-15);
  std::vector<std::pair<Index, Index>> diag{{0, 0}, {1, 1}};
  EXPECT_NEAR(measure_endpoint_joint(diag, Boundary::open, psi).defect, 0.5, 1e-15);
  EXPECT_THROW(measure_endpoint_joint(e, Boundary::periodic, psi), std::invalid_argument);
}
