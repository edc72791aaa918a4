#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wlqmc/experiment.hpp"

using namespace wlqmc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig load(const std::string& text) {
  std::istringstream in(text);
  return load_experiment(ConfigFile::parse(in, "test"));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("wlqmc_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmallAnneal =
    "[experiment]\nfamily = bouquet\nchains = 3\ngap_samples = 3\n"
    "[family]\nM = 4\n[schedule]\nh = 0:0, 1:0.5\nsteps = 4\n"
    "[qmc]\nbeta = 2\nK = 160\nsweeps = 2\nburn_in = 5\nseed = 11\n[measure]\nmarks = hub\n";

}  // namespace

TEST(Experiment, ThreadCountDoesNotChangeOutput) {
  auto a = load(kSmallAnneal);
  auto b = a;
  a.output = scratch("det_a").string();
  b.output = scratch("det_b").string();
  a.threads = 1;
  b.threads = 3;
  const auto ra = run_experiment(a);
  run_experiment(b);
  ASSERT_FALSE(ra.files.empty());
  for (const auto& f : ra.files) {
    const auto name = fs::path(f).filename();
    if (name == "manifest.txt") continue;
    EXPECT_EQ(slurp(f), slurp(fs::path(b.output) / name)) << name;
  }
  EXPECT_TRUE(fs::exists(fs::path(a.output) / "chain_002.csv"));
  EXPECT_TRUE(fs::exists(fs::path(a.output) / "gap.csv"));
}

TEST(Experiment, ManifestReproducesTheRun) {
  auto ex = load(kSmallAnneal);
  ex.output = scratch("manifest").string();
  const auto first = run_experiment(ex);
  const auto manifest = fs::path(ex.output) / "manifest.txt";
  const std::string text = slurp(manifest);
  EXPECT_NE(text.find("# seed 11"), std::string::npos);
  EXPECT_NE(text.find("# K 160"), std::string::npos);
  auto again = load_experiment(ConfigFile::load(manifest.string()));
  again.output = scratch("manifest_rerun").string();
  run_experiment(again);
  EXPECT_EQ(slurp(fs::path(ex.output) / "chain_000.csv"), slurp(fs::path(again.output) / "chain_000.csv"));
  EXPECT_EQ(first.chains.size(), 3u);
}

TEST(Experiment, SummaryMatchesChains) {
  auto ex = load(kSmallAnneal);
  const auto res = run_experiment(ex, false);
  EXPECT_TRUE(res.files.empty());
  EXPECT_EQ(res.K, 160u);
  int total = 0;
  for (const auto& [s, n] : res.at_end.sectors) total += n;
  EXPECT_EQ(total, 3);
  const auto& hub = res.at_end.marks.at("hub");
  EXPECT_GE(hub.fraction, 0.0);
  EXPECT_LE(hub.fraction, 1.0);
  EXPECT_GT(res.exact_mass.at("hub"), 0.0);
  EXPECT_EQ(res.gaps.samples.size(), 3u);
}

TEST(Experiment, SpectrumAndEquilibriumModes) {
  auto spec = load("[experiment]\nfamily = bouquet\nmode = spectrum\n[family]\nM = 3\n");
  spec.output = scratch("spectrum").string();
  run_experiment(spec);
  const std::string s = slurp(fs::path(spec.output) / "spectrum.csv");
  EXPECT_EQ(s.rfind("index,eigenvalue\n", 0), 0u);
  EXPECT_NE(s.find("\n4,"), std::string::npos);  // hub + 2 (M - 1)

  auto eq = load("[experiment]\nfamily = bouquet\nmode = equilibrium\nequilibrium_sweeps = 2000\n"
                 "[family]\nM = 3\nh = 0.3\n[qmc]\nbeta = 1\nK = 20\nburn_in = 100\n");
  eq.output = scratch("equilibrium").string();
  const auto res = run_experiment(eq);
  EXPECT_EQ(res.K, 20u);
  std::ifstream f(fs::path(eq.output) / "equilibrium.csv");
  std::string line;
  int rows = -1;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Validate, CleanPresetAndFamily) {
  EXPECT_TRUE(validate_experiment(load("[experiment]\npreset = rogue\n")).empty());
  EXPECT_TRUE(validate_experiment(load(kSmallAnneal)).empty());
}

TEST(Validate, FlagsSignAndSliceMargin) {
  const auto sign = validate_experiment(load("[experiment]\nfamily = gadget\nmode = spectrum\n[family]\nB = -0.02\n"));
  ASSERT_FALSE(sign.empty());
  EXPECT_EQ(sign.front().kind, "sign");
  EXPECT_NE(sign.front().detail.find("("), std::string::npos);

  const auto margin = validate_experiment(load(
      "[experiment]\nfamily = bouquet\n[family]\nM = 4\n[qmc]\nbeta = 10\nK = 20\n"));
  ASSERT_EQ(margin.size(), 1u);
  EXPECT_EQ(margin.front().kind, "k-margin");
  EXPECT_NE(margin.front().detail.find("need K >= "), std::string::npos);

  const auto mark = validate_experiment(load("[experiment]\nfamily = bouquet\n[measure]\nmarks = nosuch\n"));
  ASSERT_FALSE(mark.empty());
  EXPECT_EQ(mark.front().kind, "build");
}

TEST(Experiment, FormatNumberRoundTrips) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(std::stod(format_number(1.0 / 3)), 1.0 / 3);
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}
