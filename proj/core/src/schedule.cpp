#include "wlqmc/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace wlqmc {

void AnnealingSchedule::set(const std::string& name, std::vector<Breakpoint> points) {
  if (points.empty()) throw std::invalid_argument("schedule '" + name + "' has no breakpoints");
  for (const auto& p : points) {
    if (!std::isfinite(p.u) || !std::isfinite(p.value))
      throw std::invalid_argument("schedule '" + name + "' has a non-finite breakpoint");
  }
  if (points.front().u != 0.0)
    throw std::invalid_argument("schedule '" + name + "' must start at u=0");
  if (points.size() > 1) {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i].u > points[i - 1].u))
        throw std::invalid_argument("schedule '" + name + "' breakpoints must increase in u");
    if (points.back().u != 1.0)
      throw std::invalid_argument("schedule '" + name + "' must end at u=1");
  }
  params_[name] = std::move(points);
}

void AnnealingSchedule::set_constant(const std::string& name, double value) {
  set(name, {{0.0, value}});
}

void AnnealingSchedule::set_steps(int steps) {
  if (steps < 1) throw std::invalid_argument("schedule needs at least one step");
  steps_ = steps;
}

double AnnealingSchedule::evaluate(const std::string& name, double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("schedule position outside [0,1]");
  const auto& pts = points(name);
  if (pts.size() == 1) return pts.front().value;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto& a = pts[i - 1];
    const auto& b = pts[i];
    if (u == a.u) return a.value;
    if (u == b.u) return b.value;
    if (u < b.u) return a.value + (u - a.u) / (b.u - a.u) * (b.value - a.value);
  }
  return pts.back().value;
}

ParameterSet AnnealingSchedule::evaluate(double u) const {
  ParameterSet out;
  for (const auto& [name, pts] : params_) out[name] = evaluate(name, u);
  return out;
}

std::vector<std::string> AnnealingSchedule::names() const {
  std::vector<std::string> out;
  for (const auto& kv : params_) out.push_back(kv.first);
  return out;
}

const std::vector<Breakpoint>& AnnealingSchedule::points(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("unknown schedule parameter: " + name);
  return it->second;
}

AnnealingSchedule staged_schedule(const ParameterSet& initial,
                                  const std::vector<ParameterSet>& stage_targets, int steps) {
  AnnealingSchedule s;
  s.set_steps(steps);
  const auto n = stage_targets.size();
  std::map<std::string, std::vector<Breakpoint>> pts;
  ParameterSet current = initial;
  for (const auto& [k, v] : initial) pts[k].push_back({0.0, v});
  for (std::size_t st = 0; st < n; ++st) {
    for (const auto& [k, v] : stage_targets[st])
      if (!current.count(k)) throw std::invalid_argument("stage target for undeclared parameter " + k);
    const double u0 = static_cast<double>(st) / static_cast<double>(n);
    const double u1 = st + 1 == n ? 1.0 : static_cast<double>(st + 1) / static_cast<double>(n);
    for (auto& [k, v] : current) {
      auto it = stage_targets[st].find(k);
      if (it == stage_targets[st].end()) continue;
      if (pts[k].back().u != u0) pts[k].push_back({u0, v});
      v = it->second;
      pts[k].push_back({u1, v});
    }
  }
  for (auto& [k, p] : pts) {
    if (p.size() > 1 && p.back().u != 1.0) p.push_back({1.0, current[k]});
    s.set(k, std::move(p));
  }
  return s;
}

double evaluate(const AnnealingSchedule& schedule, const std::string& name, double u) {
  return schedule.evaluate(name, u);
}

ParameterSet evaluate(const AnnealingSchedule& schedule, double u) { return schedule.evaluate(u); }

}  // namespace wlqmc
