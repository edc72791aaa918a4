#pragma once

#include <map>
#include <string>
#include <vector>

namespace wlqmc {

using ParameterSet = std::map<std::string, double>;

struct Breakpoint {
  double u = 0.0;
  double value = 0.0;
};

// Named piecewise-linear functions of the progress variable u in [0,1].
class AnnealingSchedule {
 public:
  AnnealingSchedule() = default;

  // Breakpoints must cover u=0 and u=1 with strictly increasing u. A single
  // breakpoint at u=0 means a constant.
  void set(const std::string& name, std::vector<Breakpoint> points);
  void set_constant(const std::string& name, double value);

  ParameterSet evaluate(double u) const;
  double evaluate(const std::string& name, double u) const;

  std::vector<std::string> names() const;
  const std::vector<Breakpoint>& points(const std::string& name) const;
  bool has(const std::string& name) const { return params_.count(name) != 0; }

  int steps() const { return steps_; }
  void set_steps(int steps);
  double step_size() const { return 1.0 / steps_; }
  double u_at(int step) const { return static_cast<double>(step) / steps_; }

 private:
  std::map<std::string, std::vector<Breakpoint>> params_;
  int steps_ = 1;
};

// Sequential stages of equal u-width. Stage k ramps the listed parameters
// linearly to their targets; everything else holds its value.
AnnealingSchedule staged_schedule(const ParameterSet& initial,
                                  const std::vector<ParameterSet>& stage_targets, int steps);

double evaluate(const AnnealingSchedule& schedule, const std::string& name, double u);
ParameterSet evaluate(const AnnealingSchedule& schedule, double u);

}  // namespace wlqmc
