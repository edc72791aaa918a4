#pragma once

#include <string>
#include <vector>

#include "wlqmc/models.hpp"
#include "wlqmc/qmc.hpp"
#include "wlqmc/schedule.hpp"

namespace wlqmc {

// Families addressable by name from configs and the CLI. "presentation"
// takes its kind as a suffix ("presentation:doubled_chain").
std::vector<std::string> family_names();
std::vector<std::string> family_keys(const std::string& family);
// Missing keys take family defaults; unknown keys throw std::invalid_argument.
Model build_family(const std::string& family, const ParameterSet& params);
// fixed params merged under the scheduled ones.
ModelFactory make_family(const std::string& family, const ParameterSet& fixed);

struct Preset {
  std::string name;
  std::string family;
  ParameterSet fixed;
  AnnealingSchedule schedule;
  QmcParams qmc;
  MeasureSpec measure;
  double measure_u = 1.0;  // checkpoint the headline numbers are read at
  ParameterSet derived;    // measured constants that set the schedule
};

std::vector<std::string> preset_names();
std::vector<std::string> preset_keys(const std::string& name);
// Overrides use the keys listed by preset_keys; unknown keys throw.
Preset make_preset(const std::string& name, const ParameterSet& overrides = {});
AnnealingSchedule preset_schedule(const std::string& name, const ParameterSet& overrides = {});

// Gap of the bouquet Laplacian and the derived scale min(gap, cover bottom).
double bouquet_gap(int M);

}  // namespace wlqmc
