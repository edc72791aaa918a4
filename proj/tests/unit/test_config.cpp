#include <gtest/gtest.h>

#include <sstream>

#include "wlqmc/config.hpp"
#include "wlqmc/presets.hpp"

using namespace wlqmc;

namespace {

ConfigFile parse(const std::string& text) {
  std::istringstream in(text);
  return ConfigFile::parse(in, "test");
}

}  // namespace

TEST(ConfigFile, SectionsKeysAndComments) {
  const auto cfg = parse("top = 1\n# comment\n[a]\n x = 2.5  # trailing\ny= hello world\n\n[b]\nz=3\n");
  EXPECT_EQ(cfg.get("", "top"), "1");
  EXPECT_DOUBLE_EQ(cfg.number("a", "x"), 2.5);
  EXPECT_EQ(cfg.get("a", "y"), "hello world");
  EXPECT_EQ(cfg.keys("a"), (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(cfg.has_section("b"));
  EXPECT_FALSE(cfg.has("b", "x"));
  EXPECT_EQ(cfg.get_or("b", "x", "dflt"), "dflt");
  EXPECT_DOUBLE_EQ(cfg.number_or("b", "x", 7), 7);
}

TEST(ConfigFile, SyntaxErrors) {
  EXPECT_THROW(parse("[a\nx=1\n"), ConfigError);
  EXPECT_THROW(parse("[a]\nnot an assignment\n"), ConfigError);
  EXPECT_THROW(parse("[a]\nx=1\nx=2\n"), ConfigError);
  EXPECT_THROW(parse("[a]\nx=abc\n").number("a", "x"), ConfigError);
  EXPECT_THROW(parse("[a]\n").get("a", "missing"), ConfigError);
  EXPECT_THROW(ConfigFile::load("/nonexistent/x.cfg"), ConfigError);
}

TEST(ConfigFile, CanonicalWriteRoundTrips) {
  auto cfg = parse("[experiment]\nname = x\n[qmc]\nbeta=4\nK = 10\n");
  cfg.set("qmc", "seed", "9");
  std::ostringstream a;
  cfg.write(a);
  const auto again = parse(a.str());
  std::ostringstream b;
  again.write(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(again.get("qmc", "seed"), "9");
}

TEST(Parsing, NumbersBoolsLists) {
  EXPECT_DOUBLE_EQ(parse_number(" -1.5e2 ", "v"), -150.0);
  EXPECT_THROW(parse_number("1.5x", "v"), ConfigError);
  EXPECT_THROW(parse_number("", "v"), ConfigError);
  EXPECT_TRUE(parse_bool("true", "b"));
  EXPECT_FALSE(parse_bool("0", "b"));
  EXPECT_THROW(parse_bool("maybe", "b"), ConfigError);
  EXPECT_EQ(split_list(" a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Parsing, Breakpoints) {
  const auto b = parse_breakpoints("0:0, 0.5:1, 1:0");
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b[1].u, 0.5);
  EXPECT_DOUBLE_EQ(b[1].value, 1.0);
  const auto constant = parse_breakpoints("1.5");
  ASSERT_EQ(constant.size(), 1u);
  EXPECT_DOUBLE_EQ(constant[0].value, 1.5);
  EXPECT_THROW(parse_breakpoints("0:0, x:1"), ConfigError);
  EXPECT_THROW(parse_breakpoints(""), ConfigError);
}

TEST(LoadExperiment, FamilyConfig) {
  const auto ex = load_experiment(parse(
      "[experiment]\nfamily = bouquet\nmode = anneal\nchains = 3\n"
      "[family]\nM = 4\n[schedule]\nh = 0:0, 1:0.5\nsteps = 6\n[qmc]\nbeta = 2\nK = 40\nseed = 5\n"
      "[measure]\nmarks = hub\n"));
  EXPECT_EQ(ex.family, "bouquet");
  EXPECT_EQ(ex.chains, 3);
  EXPECT_EQ(ex.schedule.steps(), 6);
  EXPECT_DOUBLE_EQ(ex.schedule.evaluate(1.0).at("h"), 0.5);
  EXPECT_EQ(ex.qmc.K, 40u);
  EXPECT_EQ(ex.qmc.seed, 5u);
  EXPECT_EQ(ex.measure.marks, (std::vector<std::string>{"hub"}));
}

TEST(LoadExperiment, PresetConfigMatchesPreset) {
  const auto ex = load_experiment(parse("[experiment]\npreset = rogue\n[preset]\nseed = 3\n"));
  const auto ps = make_preset("rogue", {{"seed", 3}});
  EXPECT_EQ(ex.family, ps.family);
  EXPECT_EQ(ex.qmc.seed, ps.qmc.seed);
  EXPECT_EQ(ex.schedule.steps(), ps.schedule.steps());
  EXPECT_DOUBLE_EQ(ex.qmc.beta, ps.qmc.beta);
}

TEST(LoadExperiment, Rejections) {
  const auto bad = [](const std::string& text) { EXPECT_THROW(load_experiment(parse(text)), ConfigError) << text; };
  bad("[experiment]\nfamily = bouquet\npreset = rogue\n");
  bad("[experiment]\n");
  bad("[experiment]\nfamily = nosuch\n");
  bad("[experiment]\nfamily = bouquet\n[family]\nwidth = 3\n");
  bad("[experiment]\nfamily = bouquet\n[unknown]\nx = 1\n");
  bad("[experiment]\nfamily = bouquet\nmode = sideways\n");
  bad("[experiment]\nfamily = bouquet\n[qmc]\nK = 1\n");
  bad("[experiment]\nfamily = bouquet\n[qmc]\nbeta = -1\n");
  bad("[experiment]\nfamily = bouquet\n[qmc]\nboundary = twisted\n");
  bad("[experiment]\nfamily = bouquet\n[family]\nh = 0\n[schedule]\nh = 0:0, 1:1\n");
  bad("[experiment]\npreset = rogue\n[family]\nM = 4\n");
  bad("[experiment]\npreset = rogue\n[preset]\nwidth = 4\n");
  bad("[experiment]\nfamily = bouquet\n[preset]\nM = 4\n");
  bad("[experiment]\nfamily = bouquet\ngap_samples = 1\n");
  bad("[experiment]\nfamily = bouquet\nmeasure_u = 2\n");
}
