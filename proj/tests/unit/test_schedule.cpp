#include <gtest/gtest.h>

#include <cmath>

#include "wlqmc/schedule.hpp"

using namespace wlqmc;

TEST(Schedule, PiecewiseLinear) {
  AnnealingSchedule s;
  s.set("h", {{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
  EXPECT_DOUBLE_EQ(s.evaluate("h", 0.25), 0.5);
  EXPECT_DOUBLE_EQ(s.evaluate("h", 0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.evaluate("h", 0.75), 0.5);
  EXPECT_DOUBLE_EQ(s.evaluate("h", 1.0), 0.0);
}

TEST(Schedule, ConstantAndEvaluateAll) {
  AnnealingSchedule s;
  s.set_constant("M", 8);
  s.set("t", {{0.0, 1.0}, {1.0, 3.0}});
  const auto p = s.evaluate(0.5);
  EXPECT_DOUBLE_EQ(p.at("M"), 8.0);
  EXPECT_DOUBLE_EQ(p.at("t"), 2.0);
  EXPECT_EQ(s.names(), (std::vector<std::string>{"M", "t"}));
}

TEST(Schedule, RejectsMalformedBreakpoints) {
  AnnealingSchedule s;
  EXPECT_THROW(s.set("a", {}), std::invalid_argument);
  EXPECT_THROW(s.set("a", {{0.1, 0.0}, {1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(s.set("a", {{0.0, 0.0}, {0.9, 1.0}}), std::invalid_argument);
  EXPECT_THROW(s.set("a", {{0.0, 0.0}, {0.5, 1.0}, {0.5, 2.0}, {1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(s.set("a", {{0.0, std::nan("")}}), std::invalid_argument);
  EXPECT_THROW(s.set_steps(0), std::invalid_argument);
  s.set_constant("a", 1);
  EXPECT_THROW(s.evaluate("a", 1.5), std::out_of_range);
  EXPECT_THROW(s.evaluate("b", 0.5), std::out_of_range);
}

TEST(Schedule, StepGrid) {
  AnnealingSchedule s;
  s.set_steps(4);
  EXPECT_DOUBLE_EQ(s.step_size(), 0.25);
  EXPECT_DOUBLE_EQ(s.u_at(3), 0.75);
}

TEST(StagedSchedule, StagesRampInTurn) {
  const auto s = staged_schedule({{"a", 0.0}, {"b", 5.0}, {"c", 2.0}}, {{{"a", 1.0}}, {{"b", 0.0}, {"a", 3.0}}}, 10);
  EXPECT_EQ(s.steps(), 10);
  EXPECT_DOUBLE_EQ(s.evaluate("a", 0.25), 0.5);
  EXPECT_DOUBLE_EQ(s.evaluate("b", 0.25), 5.0);
  EXPECT_DOUBLE_EQ(s.evaluate("a", 0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.evaluate("b", 0.75), 2.5);
  EXPECT_DOUBLE_EQ(s.evaluate("a", 0.75), 2.0);
  EXPECT_DOUBLE_EQ(s.evaluate("a", 1.0), 3.0);
  EXPECT_DOUBLE_EQ(s.evaluate("c", 0.6), 2.0);
}

TEST(StagedSchedule, ParameterHeldAfterItsStage) {
  const auto s = staged_schedule({{"x", 0.0}, {"y", 0.0}}, {{{"x", 2.0}}, {{"y", 1.0}}, {{"y", 4.0}}}, 3);
  for (double u : {1.0 / 3, 0.5, 0.9, 1.0}) EXPECT_DOUBLE_EQ(s.evaluate("x", u), 2.0);
  EXPECT_DOUBLE_EQ(s.evaluate("y", 2.0 / 3), 1.0);
  EXPECT_DOUBLE_EQ(s.evaluate("y", 1.0), 4.0);
}

TEST(StagedSchedule, UndeclaredTargetThrows) {
  EXPECT_THROW(staged_schedule({{"x", 0.0}}, {{{"z", 1.0}}}, 2), std::invalid_argument);
}
