#include "wlqmc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <istream>
#include <ostream>

#include "wlqmc/presets.hpp"

namespace wlqmc {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source) {
  ConfigFile cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      if (cfg.sections_.count(section)) throw ConfigError(where + ": duplicate section [" + section + "]");
      cfg.sections_[section];
      cfg.order_.push_back(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (cfg.has(section, key)) throw ConfigError(where + ": duplicate key " + key);
    cfg.set(section, key, value);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse(in, path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

const std::string& ConfigFile::get(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end() || !it->second.count(key))
    throw ConfigError("missing key [" + section + "] " + key);
  return it->second.at(key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
  return parse_number(get(section, key), "[" + section + "] " + key);
}

double ConfigFile::number_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

const std::vector<std::string>& ConfigFile::keys(const std::string& section) const {
  static const std::vector<std::string> none;
  auto it = key_order_.find(section);
  return it == key_order_.end() ? none : it->second;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!sections_.count(section)) order_.push_back(section);
  auto& sec = sections_[section];
  if (!sec.count(key)) key_order_[section].push_back(key);
  sec[key] = value;
}

void ConfigFile::write(std::ostream& out) const {
  for (const auto& s : order_) {
    if (!s.empty()) out << '[' << s << "]\n";
    for (const auto& k : keys(s)) out << k << " = " << sections_.at(s).at(k) << '\n';
  }
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* b = t.data();
  const auto* e = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (t.empty() || ec != std::errc() || ptr != e) throw ConfigError(what + ": not a number: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(what + ": not a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::vector<Breakpoint> parse_breakpoints(const std::string& text) {
  std::vector<Breakpoint> pts;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      pts.push_back({0.0, parse_number(item, "breakpoint")});
      continue;
    }
    pts.push_back({parse_number(item.substr(0, colon), "breakpoint u"),
                   parse_number(item.substr(colon + 1), "breakpoint value")});
  }
  if (pts.empty()) throw ConfigError("empty breakpoint list");
  return pts;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::anneal: return "anneal";
    case Mode::equilibrium: return "equilibrium";
    case Mode::spectrum: return "spectrum";
  }
  return "?";
}

namespace {

const std::vector<std::string> kExperimentKeys = {"name",  "mode",   "preset",      "family",    "chains",
                                                  "threads", "seed", "output", "gap_samples", "measure_u",
                                                  "equilibrium_sweeps"};
const std::vector<std::string> kQmcKeys = {"beta", "K", "sweeps", "burn_in", "boundary", "exact_draws", "seed"};
const std::vector<std::string> kMeasureKeys = {"marks", "sectors", "histogram"};
const std::vector<std::string> kSections = {"experiment", "preset", "family", "schedule", "qmc", "measure"};

void require_known(const ConfigFile& cfg, const std::string& section, const std::vector<std::string>& allowed) {
  for (const auto& k : cfg.keys(section))
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key [" + section + "] " + k);
}

int as_count(double v, const std::string& what, int lo) {
  if (v != std::floor(v) || v < lo) throw ConfigError(what + " must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

ParameterSet numbers_of(const ConfigFile& cfg, const std::string& section) {
  ParameterSet p;
  for (const auto& k : cfg.keys(section)) p[k] = cfg.number(section, k);
  return p;
}

}  // namespace

ExperimentConfig load_experiment(const ConfigFile& cfg) {
  for (const auto& s : cfg.section_names())
    if (std::find(kSections.begin(), kSections.end(), s) == kSections.end())
      throw ConfigError("unknown section [" + s + "]");
  require_known(cfg, "experiment", kExperimentKeys);
  require_known(cfg, "qmc", kQmcKeys);
  require_known(cfg, "measure", kMeasureKeys);

  ExperimentConfig ex;
  ex.source = cfg;
  ex.name = cfg.get_or("experiment", "name", ex.name);
  const std::string mode = cfg.get_or("experiment", "mode", "anneal");
  if (mode == "anneal") ex.mode = Mode::anneal;
  else if (mode == "equilibrium") ex.mode = Mode::equilibrium;
  else if (mode == "spectrum") ex.mode = Mode::spectrum;
  else throw ConfigError("unknown mode " + mode);

  ex.preset = cfg.get_or("experiment", "preset", "");
  ex.family = cfg.get_or("experiment", "family", "");
  if (ex.preset.empty() == ex.family.empty()) throw ConfigError("give exactly one of [experiment] preset / family");

  try {
    if (!ex.preset.empty()) {
      if (cfg.has_section("family") || cfg.has_section("schedule"))
        throw ConfigError("a preset config takes overrides in [preset], not [family] / [schedule]");
      ex.preset_overrides = numbers_of(cfg, "preset");
      Preset ps = make_preset(ex.preset, ex.preset_overrides);
      ex.family = ps.family;
      ex.fixed = ps.fixed;
      ex.schedule = ps.schedule;
      ex.qmc = ps.qmc;
      ex.measure = ps.measure;
      ex.measure_u = ps.measure_u;
      ex.derived = ps.derived;
    } else {
      if (cfg.has_section("preset")) throw ConfigError("[preset] needs [experiment] preset");
      ex.fixed = numbers_of(cfg, "family");
      AnnealingSchedule s;
      int steps = 1;
      for (const auto& k : cfg.keys("schedule")) {
        if (k == "steps") {
          steps = as_count(cfg.number("schedule", k), "[schedule] steps", 1);
          continue;
        }
        if (ex.fixed.count(k)) throw ConfigError("parameter " + k + " is both fixed and scheduled");
        s.set(k, parse_breakpoints(cfg.get("schedule", k)));
      }
      s.set_steps(steps);
      ex.schedule = s;
      build_family(ex.family, ex.fixed);  // validates keys
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }

  if (cfg.has("qmc", "beta")) ex.qmc.beta = cfg.number("qmc", "beta");
  if (!(ex.qmc.beta > 0)) throw ConfigError("[qmc] beta must be positive");
  if (cfg.has("qmc", "K")) ex.qmc.K = static_cast<std::size_t>(as_count(cfg.number("qmc", "K"), "[qmc] K", 0));
  if (ex.qmc.K == 1) throw ConfigError("[qmc] K must be 0 (auto) or >= 2");
  if (cfg.has("qmc", "sweeps")) ex.qmc.sweeps_per_step = as_count(cfg.number("qmc", "sweeps"), "[qmc] sweeps", 0);
  if (cfg.has("qmc", "burn_in")) ex.qmc.burn_in_sweeps = as_count(cfg.number("qmc", "burn_in"), "[qmc] burn_in", 0);
  if (cfg.has("qmc", "exact_draws"))
    ex.qmc.exact_draws = as_count(cfg.number("qmc", "exact_draws"), "[qmc] exact_draws", 0);
  if (cfg.has("qmc", "boundary")) {
    const auto& b = cfg.get("qmc", "boundary");
    if (b == "periodic") ex.qmc.boundary = Boundary::periodic;
    else if (b == "open") ex.qmc.boundary = Boundary::open;
    else throw ConfigError("[qmc] boundary must be periodic or open");
  }
  if (cfg.has("qmc", "seed")) ex.qmc.seed = static_cast<std::uint64_t>(as_count(cfg.number("qmc", "seed"), "[qmc] seed", 0));
  if (cfg.has("experiment", "seed"))
    ex.qmc.seed = static_cast<std::uint64_t>(as_count(cfg.number("experiment", "seed"), "[experiment] seed", 0));

  if (cfg.has("measure", "marks")) ex.measure.marks = split_list(cfg.get("measure", "marks"));
  if (cfg.has("measure", "sectors")) ex.measure.sectors = parse_bool(cfg.get("measure", "sectors"), "[measure] sectors");
  if (cfg.has("measure", "histogram"))
    ex.measure.histogram = parse_bool(cfg.get("measure", "histogram"), "[measure] histogram");

  ex.chains = as_count(cfg.number_or("experiment", "chains", 1), "[experiment] chains", 1);
  ex.threads = as_count(cfg.number_or("experiment", "threads", 0), "[experiment] threads", 0);
  ex.gap_samples = as_count(cfg.number_or("experiment", "gap_samples", 0), "[experiment] gap_samples", 0);
  if (ex.gap_samples == 1) throw ConfigError("[experiment] gap_samples must be 0 or >= 2");
  ex.measure_u = cfg.number_or("experiment", "measure_u", ex.measure_u);
  if (ex.measure_u < 0 || ex.measure_u > 1) throw ConfigError("[experiment] measure_u must lie in [0,1]");
  ex.equilibrium_sweeps = static_cast<std::size_t>(
      as_count(cfg.number_or("experiment", "equilibrium_sweeps", 10000), "[experiment] equilibrium_sweeps", 2));
  ex.output = cfg.get_or("experiment", "output", ex.output);
  return ex;
}

}  // namespace wlqmc
