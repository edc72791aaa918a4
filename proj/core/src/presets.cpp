#include "wlqmc/presets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wlqmc/spectral.hpp"

namespace wlqmc {

namespace {

struct FamilyDef {
  std::string name;
  ParameterSet defaults;
};

const std::vector<FamilyDef>& families() {
  static const std::vector<FamilyDef> defs = {
      {"double-well", {{"m", 1}, {"mu", -8}, {"h", 0}, {"R", 3}, {"a", 0.05}}},
      {"mexican-hat", {{"m", 1}, {"mu", -4}, {"g", 1}, {"h", 0}, {"R", 3}, {"a", 0.25}}},
      {"circle", {{"inv_m", 1}, {"r_min", 1}, {"mu", 0}, {"h", 0}, {"M", 16}}},
      {"bouquet", {{"M", 8}, {"h", 0}, {"inv_m", 1}}},
      {"rogue", {{"M", 8}, {"t", 0}, {"E", 0}, {"h", 0}, {"inv_m", 1}}},
      {"expander",
       {{"M", 8}, {"t", 0}, {"E", 0}, {"h", 0}, {"inv_m", 1}, {"N_G", 64}, {"degree", 4}, {"V", 0},
        {"EV_offset", std::numeric_limits<double>::quiet_NaN()}, {"t_prime", 0}, {"seed", 1}}},
      {"presentation", {{"n", 3}, {"M_sub", 4}, {"t", 0}, {"E", 0}, {"h", 0}, {"inv_m", 1}}},
      {"gadget",
       {{"N", 8}, {"R", 2}, {"J_AF", 2}, {"h_global", std::numeric_limits<double>::quiet_NaN()},
        {"J_prime", -0.25}, {"B", 0.02}}},
      {"tree-cover", {{"M", 1}, {"depth", 8}, {"matched", 1}}},
  };
  return defs;
}

std::pair<std::string, std::string> split_family(const std::string& family) {
  const auto colon = family.find(':');
  if (colon == std::string::npos) return {family, ""};
  return {family.substr(0, colon), family.substr(colon + 1)};
}

const FamilyDef& find_family(const std::string& base) {
  for (const auto& f : families())
    if (f.name == base) return f;
  throw std::invalid_argument("unknown family: " + base);
}

int as_int(double v, const char* key) {
  if (v != std::round(v)) throw std::invalid_argument(std::string("parameter ") + key + " must be an integer");
  return static_cast<int>(v);
}

bool is_gadget_field(const std::string& key) {
  return key.size() > 1 && key[0] == 'h' && std::all_of(key.begin() + 1, key.end(), ::isdigit);
}

ParameterSet merged(const FamilyDef& def, const ParameterSet& params) {
  ParameterSet p = def.defaults;
  for (const auto& [k, v] : params) {
    if (!def.defaults.count(k) && !(def.name == "gadget" && is_gadget_field(k)))
      throw std::invalid_argument("family " + def.name + " has no parameter " + k);
    p[k] = v;
  }
  return p;
}

RogueParams rogue_of(const ParameterSet& p) {
  return {p.at("t"), p.at("E"), p.at("h"), p.at("inv_m")};
}

}  // namespace

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& f : families()) out.push_back(f.name);
  return out;
}

std::vector<std::string> family_keys(const std::string& family) {
  std::vector<std::string> out;
  for (const auto& [k, v] : find_family(split_family(family).first).defaults) out.push_back(k);
  return out;
}

Model build_family(const std::string& family, const ParameterSet& params) {
  const auto [base, option] = split_family(family);
  const FamilyDef& def = find_family(base);
  const ParameterSet p = merged(def, params);
  if (!option.empty() && base != "presentation") throw std::invalid_argument("family " + base + " takes no suffix");

  if (base == "double-well") return build_tilted_double_well(p.at("m"), p.at("mu"), p.at("h"), {p.at("R"), p.at("a")});
  if (base == "mexican-hat")
    return build_mexican_hat(p.at("m"), p.at("mu"), p.at("g"), p.at("h"), {p.at("R"), p.at("a")});
  if (base == "circle") {
    // mu < 0 selects the radius of the potential minimum, r_min^2 = -mu/2.
    const double r_min = p.at("mu") < 0 ? std::sqrt(-p.at("mu") / 2) : p.at("r_min");
    const double inv_m = p.at("inv_m");
    if (!(inv_m >= 0)) throw std::invalid_argument("circle needs 1/m >= 0");
    const double m = inv_m > 0 ? 1.0 / inv_m : std::numeric_limits<double>::infinity();
    Model md = build_circle(m, r_min, p.at("h"), as_int(p.at("M"), "M"));
    md.params["inv_m"] = inv_m;
    md.params["mu"] = p.at("mu");
    return md;
  }
  if (base == "bouquet") return build_bouquet(as_int(p.at("M"), "M"), p.at("h"), p.at("inv_m"));
  if (base == "rogue") return build_bouquet_rogue(as_int(p.at("M"), "M"), rogue_of(p));
  if (base == "expander") {
    ExpanderParams e;
    e.N_G = as_int(p.at("N_G"), "N_G");
    e.degree = as_int(p.at("degree"), "degree");
    e.V = std::isnan(p.at("EV_offset")) ? p.at("V") : p.at("E") + p.at("EV_offset");
    e.t_prime = p.at("t_prime");
    e.seed = static_cast<std::uint64_t>(as_int(p.at("seed"), "seed"));
    return build_bouquet_expander(as_int(p.at("M"), "M"), rogue_of(p), e);
  }
  if (base == "presentation") {
    const auto kind = parse_kind(option.empty() ? "doubled-chain" : option);
    const int n = as_int(p.at("n"), "n");
    Presentation pres;
    switch (kind) {
      case PresentationKind::free: pres = free_presentation(n); break;
      case PresentationKind::collapsing_chain: pres = collapsing_chain(n); break;
      case PresentationKind::doubled_chain: pres = doubled_chain(n); break;
      case PresentationKind::custom: pres = trivial_presentation(); break;
      default: pres = grope_presentation(n, kind); break;
    }
    Model md = build_presentation_hamiltonian(pres, as_int(p.at("M_sub"), "M_sub"), rogue_of(p));
    md.family = "presentation:" + kind_name(kind);
    md.params["n"] = n;
    return md;
  }
  if (base == "gadget") {
    GadgetParams g;
    g.N = as_int(p.at("N"), "N");
    g.R = as_int(p.at("R"), "R");
    g.J_AF = p.at("J_AF");
    g.h_global = p.at("h_global");
    g.J_prime = p.at("J_prime");
    g.B = p.at("B");
    bool any = false;
    std::vector<double> h(static_cast<std::size_t>(std::max(g.N, 0)), 0.0);
    for (const auto& [k, v] : p)
      if (is_gadget_field(k)) {
        const int i = std::stoi(k.substr(1));
        if (i < 1 || i > g.N) throw std::invalid_argument("gadget field " + k + " outside 1..N");
        h[static_cast<std::size_t>(i - 1)] = v;
        any = true;
      }
    if (any) g.h_i = h;
    return build_ising_ring_gadget(g);
  }
  if (base == "tree-cover")
    return build_tree_cover(as_int(p.at("M"), "M"), as_int(p.at("depth"), "depth"),
                            p.at("matched") != 0 ? TreeBoundary::matched : TreeBoundary::dirichlet);
  throw std::logic_error("family table out of sync: " + base);
}

ModelFactory make_family(const std::string& family, const ParameterSet& fixed) {
  // Validate the fixed part once up front.
  build_family(family, fixed);
  return [family, fixed](const ParameterSet& scheduled) {
    ParameterSet p = fixed;
    for (const auto& [k, v] : scheduled) p[k] = v;
    return build_family(family, p);
  };
}

double bouquet_gap(int M) { return diagonalize(build_bouquet(M).H).gap; }

namespace {

struct PresetDef {
  std::string name;
  ParameterSet defaults;
};

const std::vector<PresetDef>& preset_defs() {
  static const std::vector<PresetDef> defs = {
      {"circle",
       {{"M", 16}, {"beta", 64}, {"mu0", -1.62}, {"R", 8}, {"h_final", 1}, {"steps_per_stage", 20},
        {"sweeps", 10}, {"burn_in", 100}, {"exact_draws", 1}, {"seed", 1}}},
      {"bouquet-quench",
       {{"M", 8}, {"beta", 256}, {"steps_per_stage", 20}, {"sweeps", 10}, {"burn_in", 100},
        {"exact_draws", 1}, {"seed", 1}}},
      {"rogue",
       {{"M", 8}, {"beta", 100}, {"E0", -10}, {"steps_per_stage", 10}, {"sweeps", 10}, {"burn_in", 100},
        {"seed", 1}}},
      {"expander",
       {{"M", 8}, {"beta", 1000}, {"E0", -5}, {"N_G", 64}, {"degree", 4}, {"graph_seed", 1}, {"delta", 0.01},
        {"A", 6}, {"steps_per_stage", 10}, {"sweeps", 10}, {"burn_in", 100}, {"seed", 1}}},
      {"presentation",
       {{"kind", static_cast<double>(PresentationKind::doubled_chain)}, {"n", 3}, {"M_sub", 4}, {"beta", 100},
        {"E0", -10}, {"steps_per_stage", 10}, {"sweeps", 10}, {"burn_in", 100}, {"seed", 1}}},
  };
  return defs;
}

const PresetDef& find_preset(const std::string& name) {
  for (const auto& d : preset_defs())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown preset: " + name);
}

ParameterSet preset_params(const PresetDef& def, const ParameterSet& overrides) {
  ParameterSet p = def.defaults;
  for (const auto& [k, v] : overrides) {
    if (!def.defaults.count(k)) throw std::invalid_argument("preset " + def.name + " has no parameter " + k);
    p[k] = v;
  }
  return p;
}

void common_qmc(Preset& ps, const ParameterSet& p) {
  ps.qmc.beta = p.at("beta");
  ps.qmc.sweeps_per_step = as_int(p.at("sweeps"), "sweeps");
  ps.qmc.burn_in_sweeps = as_int(p.at("burn_in"), "burn_in");
  ps.qmc.seed = static_cast<std::uint64_t>(as_int(p.at("seed"), "seed"));
  if (p.count("exact_draws")) ps.qmc.exact_draws = as_int(p.at("exact_draws"), "exact_draws");
}

// Lowest eigenvalue of the rogue + expander block.
double expander_block_E0(const Model& md) {
  const auto& ex = md.mark("expander");
  std::vector<Index> idx{md.state("r")};
  idx.insert(idx.end(), ex.begin(), ex.end());
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      B(i, j) = md.H.at(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& d : preset_defs()) out.push_back(d.name);
  return out;
}

std::vector<std::string> preset_keys(const std::string& name) {
  std::vector<std::string> out;
  for (const auto& [k, v] : find_preset(name).defaults) out.push_back(k);
  return out;
}

Preset make_preset(const std::string& name, const ParameterSet& overrides) {
  const PresetDef& def = find_preset(name);
  const ParameterSet p = preset_params(def, overrides);
  Preset ps;
  ps.name = name;
  common_qmc(ps, p);
  const int sps = as_int(p.at("steps_per_stage"), "steps_per_stage");

  if (name == "circle") {
    const double R = p.at("R");
    ps.family = "circle";
    ps.fixed = {{"M", p.at("M")}};
    ps.schedule = staged_schedule({{"mu", p.at("mu0")}, {"h", 0.0}, {"inv_m", 1.0}},
                                  {{{"mu", -R * R}}, {{"h", p.at("h_final")}}, {{"inv_m", 0.0}}}, 3 * sps);
    ps.measure.marks = {"theta0"};
    ps.measure_u = 1.0 / 3.0;
    ps.derived = {{"r_min_start", std::sqrt(-p.at("mu0") / 2)}, {"r_min_end", R / std::sqrt(2.0)}};
  } else if (name == "bouquet-quench") {
    ps.family = "bouquet";
    ps.fixed = {{"M", p.at("M")}};
    ps.schedule = staged_schedule({{"h", 0.0}, {"inv_m", 1.0}}, {{{"h", 1.0}}, {{"inv_m", 0.0}}}, 2 * sps);
    ps.measure.marks = {"hub"};
    ps.derived = {{"gap", bouquet_gap(as_int(p.at("M"), "M"))}};
  } else if (name == "rogue" || name == "presentation") {
    double gap = 0.0;
    double cover = 0.0;
    if (name == "rogue") {
      const int M = as_int(p.at("M"), "M");
      ps.family = "rogue";
      ps.fixed = {{"M", M}};
      gap = bouquet_gap(M);
      cover = tree_cover_bottom(M);
    } else {
      const auto kind = static_cast<PresentationKind>(as_int(p.at("kind"), "kind"));
      ps.family = "presentation:" + kind_name(kind);
      ps.fixed = {{"n", p.at("n")}, {"M_sub", p.at("M_sub")}};
      const Model sk = build_family(ps.family, {{"n", p.at("n")}, {"M_sub", p.at("M_sub")}, {"E", 1e3}});
      gap = diagonalize(sk.H).gap;
      cover = tree_cover_bottom(as_int(p.at("M_sub"), "M_sub"));
    }
    const double t_peak = gap / 2;
    const double E_max = std::min(gap, cover) / 2;
    ps.schedule = staged_schedule({{"t", 0.0}, {"E", p.at("E0")}, {"h", 0.0}, {"inv_m", 1.0}},
                                  {{{"t", t_peak}}, {{"E", E_max}}, {{"t", 0.0}}, {{"h", 1.0}}, {{"inv_m", 0.0}}},
                                  5 * sps);
    ps.measure.marks = {"r", "hub"};
    ps.derived = {{"gap", gap}, {"cover_bottom", cover}, {"t_peak", t_peak}, {"E_max", E_max}};
  } else if (name == "expander") {
    const int M = as_int(p.at("M"), "M");
    const double delta = p.at("delta");
    const double tp = p.at("A") * delta;
    ps.family = "expander";
    ps.fixed = {{"M", M},
                {"N_G", p.at("N_G")},
                {"degree", p.at("degree")},
                {"seed", p.at("graph_seed")},
                {"EV_offset", delta}};
    ps.qmc.boundary = Boundary::open;
    const double gap = bouquet_gap(M);
    const double cover = tree_cover_bottom(M);
    const double t_peak = gap / 2;
    const double target = std::min(gap, cover) / 2;
    // E such that the rogue + expander block has ground energy `target`.
    auto block = [&](double E) {
      ParameterSet q = ps.fixed;
      q["E"] = E;
      q["t_prime"] = tp;
      return expander_block_E0(build_family("expander", q)) - target;
    };
    double lo = target - 1.0, hi = target + tp + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) (block(0.5 * (lo + hi)) < 0 ? lo : hi) = 0.5 * (lo + hi);
    const double E_star = 0.5 * (lo + hi);
    ps.schedule = staged_schedule({{"t_prime", 0.0}, {"t", 0.0}, {"E", p.at("E0")}, {"h", 0.0}, {"inv_m", 1.0}},
                                  {{{"t_prime", tp}},
                                   {{"t", t_peak}},
                                   {{"E", E_star}},
                                   {{"t", 0.0}},
                                   {{"h", 1.0}},
                                   {{"inv_m", 0.0}}},
                                  6 * sps);
    ps.measure.marks = {"r", "expander"};
    ps.measure_u = 0.5;
    ps.derived = {{"gap", gap}, {"cover_bottom", cover}, {"t_peak", t_peak}, {"t_prime", tp},
                  {"E_star", E_star}, {"block_E0_target", target}};
  }
  return ps;
}

AnnealingSchedule preset_schedule(const std::string& name, const ParameterSet& overrides) {
  return make_preset(name, overrides).schedule;
}

}  // namespace wlqmc
