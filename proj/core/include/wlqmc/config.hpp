#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlqmc/qmc.hpp"
#include "wlqmc/schedule.hpp"

namespace wlqmc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented "key = value" with "[section]" headers; '#' starts a comment.
// Keys before the first header belong to section "".
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& source = "<config>");
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  // Keys of a section in file order.
  const std::vector<std::string>& keys(const std::string& section) const;
  std::vector<std::string> section_names() const { return order_; }

  void set(const std::string& section, const std::string& key, const std::string& value);
  // Canonical text: sections and keys in file order.
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::map<std::string, std::vector<std::string>> key_order_;
  std::vector<std::string> order_;
};

double parse_number(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text, char sep = ',');
// "0:0, 0.5:1, 1:0"
std::vector<Breakpoint> parse_breakpoints(const std::string& text);

enum class Mode { anneal, equilibrium, spectrum };

struct ExperimentConfig {
  std::string name = "experiment";
  Mode mode = Mode::anneal;
  std::string preset;  // empty when the family is given directly
  std::string family;
  ParameterSet preset_overrides;
  ParameterSet fixed;
  AnnealingSchedule schedule;
  QmcParams qmc;
  MeasureSpec measure;
  double measure_u = 1.0;
  int chains = 1;
  int threads = 0;  // 0: hardware concurrency
  int gap_samples = 0;
  std::size_t equilibrium_sweeps = 10000;
  std::string output = "out";
  ParameterSet derived;
  ConfigFile source;
};

std::string mode_name(Mode m);
ExperimentConfig load_experiment(const ConfigFile& cfg);

}  // namespace wlqmc
