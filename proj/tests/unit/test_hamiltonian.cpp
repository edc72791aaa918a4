#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "wlqmc/hamiltonian.hpp"

using namespace wlqmc;

namespace {

SparseHamiltonian random_symmetric(std::size_t n, double density, std::mt19937_64& rng, double sign = -1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < n; ++r) {
    t.push_back({static_cast<Index>(r), static_cast<Index>(r), 4 * u(rng) - 2});
    for (std::size_t c = 0; c < r; ++c)
      if (u(rng) < density) t.push_back({static_cast<Index>(r), static_cast<Index>(c), sign * (0.1 + u(rng))});
  }
  return assemble(ConfigSpace(n), t);
}

}  // namespace

TEST(ConfigSpace, LabelsAndLookup) {
  ConfigSpace s({"a", "b", "c"});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.find("b"), 1);
  EXPECT_EQ(s.find("z"), -1);
  EXPECT_EQ(ConfigSpace(4).label(2), "2");
  EXPECT_THROW(ConfigSpace({"a", "a"}), std::invalid_argument);
  EXPECT_THROW(ConfigSpace(0), std::invalid_argument);
  EXPECT_THROW(s.label(3), std::out_of_range);
}

TEST(Assemble, EitherTriangleAndDuplicatesSum) {
  const auto H = assemble(ConfigSpace(3), {{0, 1, -1.0}, {1, 0, -0.5}, {2, 2, 3.0}, {2, 2, 1.0}});
  EXPECT_DOUBLE_EQ(H.at(0, 1), -1.5);
  EXPECT_DOUBLE_EQ(H.at(1, 0), -1.5);
  EXPECT_DOUBLE_EQ(H.diag(2), 4.0);
  EXPECT_DOUBLE_EQ(H.at(0, 2), 0.0);
  EXPECT_EQ(H.degree(0), 1u);
  EXPECT_EQ(H.degree(2), 0u);
}

TEST(Assemble, CancelledEntriesAreNotNeighbors) {
  const auto H = assemble(ConfigSpace(2), {{1, 0, -1.0}, {0, 1, 1.0}});
  EXPECT_EQ(H.degree(0), 0u);
  EXPECT_EQ(H.nnz_offdiag(), 0u);
}

TEST(Assemble, RejectsOutOfRange) {
  EXPECT_THROW(assemble(ConfigSpace(2), {{2, 0, 1.0}}), std::exception);
}

TEST(SparseHamiltonian, ApplyMatchesDenseProduct) {
  std::mt19937_64 rng(3);
  const auto H = random_symmetric(12, 0.3, rng);
  std::vector<double> x(12), y(12);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(1.0 + static_cast<double>(i));
  H.apply(x, y);
  for (Index r = 0; r < 12; ++r) {
    double s = 0;
    for (Index c = 0; c < 12; ++c) s += H.at(r, c) * x[static_cast<std::size_t>(c)];
    EXPECT_NEAR(y[static_cast<std::size_t>(r)], s, 1e-12);
  }
}

TEST(SparseHamiltonian, NormInfAndNeighborsSorted) {
  std::mt19937_64 rng(4);
  const auto H = random_symmetric(10, 0.5, rng);
  double expected = 0;
  for (Index r = 0; r < 10; ++r) {
    double s = 0;
    for (Index c = 0; c < 10; ++c) s += std::abs(H.at(r, c));
    expected = std::max(expected, s);
    const auto nb = H.neighbors(r);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
  }
  EXPECT_DOUBLE_EQ(H.norm_inf(), expected);
}

TEST(SignCheck, ReportsPositiveOffDiagonals) {
  const auto ok = assemble(ConfigSpace(3), {{1, 0, -1.0}, {2, 1, -2.0}});
  EXPECT_TRUE(check_no_sign_problem(ok));
  const auto bad = assemble(ConfigSpace(3), {{1, 0, -1.0}, {2, 0, 0.5}});
  const auto chk = check_no_sign_problem(bad);
  ASSERT_FALSE(chk);
  ASSERT_EQ(chk.violations.size(), 1u);
  EXPECT_EQ(chk.violations[0], std::make_pair(Index{2}, Index{0}));
}

TEST(SignCheck, ToleranceAdmitsRoundoff) {
  const auto tiny = assemble(ConfigSpace(2), {{1, 0, 1e-14}});
  EXPECT_TRUE(check_no_sign_problem(tiny));
  EXPECT_FALSE(check_no_sign_problem(tiny, 0.0));
}

TEST(Triplets, RoundTripIsExact) {
  std::mt19937_64 rng(5);
  const auto H = random_symmetric(9, 0.4, rng);
  std::stringstream ss;
  write_triplets(ss, H);
  const auto G = read_triplets(ss);
  ASSERT_EQ(G.dim(), H.dim());
  for (Index r = 0; r < 9; ++r)
    for (Index c = 0; c < 9; ++c) EXPECT_EQ(G.at(r, c), H.at(r, c));
}

TEST(Triplets, BadInputThrows) {
  std::stringstream a("nonsense 3\n");
  EXPECT_THROW(read_triplets(a), std::invalid_argument);
  std::stringstream b("dim 2\n0 x 1\n");
  EXPECT_THROW(read_triplets(b), std::invalid_argument);
}
