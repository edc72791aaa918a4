// wlqmc command-line driver.
//
// Exit codes: 0 ok, 2 config / usage error, 3 runtime failure. Failures print
// one machine-readable line on stderr:
//   error kind=<config|runtime> message="..."

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wlqmc/bounds.hpp"
#include "wlqmc/config.hpp"
#include "wlqmc/experiment.hpp"
#include "wlqmc/markov.hpp"
#include "wlqmc/presets.hpp"
#include "wlqmc/qmc.hpp"
#include "wlqmc/spectral.hpp"
#include "wlqmc/topology.hpp"

using namespace wlqmc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

ParameterSet parse_assignments(const std::vector<std::string>& items) {
  ParameterSet p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got " + item);
    p[item.substr(0, eq)] = parse_number(item.substr(eq + 1), item.substr(0, eq));
  }
  return p;
}

// Writes to `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& operator*() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
};

Model build_checked(const std::string& family, const ParameterSet& p) {
  try {
    return build_family(family, p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

SparseHamiltonian two_state(double B, double h) {
  // -B Sx + h Sz with S = sigma / 2
  return assemble(ConfigSpace(2), {{0, 0, h / 2}, {1, 1, -h / 2}, {1, 0, -B / 2}});
}

void write_sequence(std::ostream& out, const MoveSequence& seq, int copy_size, int weight_n) {
  out << "step,relation,position,orientation,length";
  if (weight_n > 0) out << ",weight";
  out << ",word\n";
  for (std::size_t i = 0; i < seq.words.size(); ++i) {
    out << i << ',';
    if (i == 0) {
      out << ",,";
    } else {
      const auto& m = seq.moves[i - 1];
      out << m.relation << ',' << m.position << ',' << (m.orientation == Orientation::forward ? "forward" : "inverse");
    }
    out << ',' << seq.words[i].size();
    if (weight_n > 0) out << ',' << word_weight(seq.words[i], weight_n);
    out << ',' << format_word(seq.words[i], copy_size) << '\n';
  }
}

void print_file(const std::string& path) {
  std::ifstream in(path);
  std::cout << in.rdbuf();
}

int report_experiment(const ExperimentConfig& ex) {
  const auto res = run_experiment(ex);
  const auto summary = std::filesystem::path(ex.output) / "summary.txt";
  if (std::filesystem::exists(summary)) print_file(summary.string());
  for (const auto& f : res.files) std::cerr << "wrote " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worldline path-integral QMC: models, annealing runs and spectral diagnostics"};
  app.require_subcommand(1);
  std::function<int()> action;

  // run / validate ----------------------------------------------------------
  std::string config_path, output_override;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--output", output_override, "Override [experiment] output");
  run->callback([&] {
    action = [&] {
      auto cfg = ConfigFile::load(config_path);
      if (!output_override.empty()) cfg.set("experiment", "output", output_override);
      return report_experiment(load_experiment(cfg));
    };
  });

  auto* validate = app.add_subcommand("validate", "Dry-run checks on a config");
  validate->add_option("config", config_path, "Config file")->required();
  validate->callback([&] {
    action = [&] {
      const auto ex = load_experiment(ConfigFile::load(config_path));
      const auto issues = validate_experiment(ex);
      if (issues.empty()) std::cout << "ok\n";
      for (const auto& i : issues) std::cout << i.kind << ": " << i.detail << '\n';
      return 0;
    };
  });

  // spectrum ----------------------------------------------------------------
  std::string family, out_path;
  std::vector<std::string> params;
  int M = 0;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of one family instance (CSV: index,eigenvalue)");
  spectrum->add_option("--family", family, "Family name")->required();
  spectrum->add_option("--param,-p", params, "key=value family parameter");
  spectrum->add_option("--M", M, "Subdivision M");
  spectrum->add_option("--out,-o", out_path, "CSV path (default stdout)");
  spectrum->callback([&] {
    action = [&] {
      auto p = parse_assignments(params);
      if (M > 0) p["M"] = M;
      const Model model = build_checked(family, p);
      const auto rep = diagonalize(model.H);
      Output out(out_path);
      *out << "index,eigenvalue\n";
      for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) *out << i << ',' << format_number(rep.eigenvalues[i]) << '\n';
      if (out.to_file())
        std::cout << "dim = " << model.H.dim() << "\nE0 = " << format_number(rep.E0)
                  << "\ngap = " << format_number(rep.gap) << '\n';
      return 0;
    };
  });

  // anneal ------------------------------------------------------------------
  std::string preset;
  int chains = 1, threads = 0, gap_samples = 0;
  long long seed = -1;
  std::string out_dir = "out";
  auto* anneal = app.add_subcommand("anneal", "Run a preset annealing experiment");
  anneal->add_option("--preset", preset, "Preset name")->required();
  anneal->add_option("--set", params, "key=value preset override");
  anneal->add_option("--M", M, "Subdivision M");
  anneal->add_option("--chains", chains, "Independent chains")->check(CLI::PositiveNumber);
  anneal->add_option("--threads", threads, "Worker threads (0: all cores)");
  anneal->add_option("--seed", seed, "Master seed");
  anneal->add_option("--gap-samples", gap_samples, "Points for the gap scan (0: none)");
  anneal->add_option("--out,-o", out_dir, "Output directory");
  anneal->callback([&] {
    action = [&] {
      ConfigFile cfg;
      cfg.set("experiment", "name", preset);
      cfg.set("experiment", "mode", "anneal");
      cfg.set("experiment", "preset", preset);
      cfg.set("experiment", "chains", std::to_string(chains));
      cfg.set("experiment", "threads", std::to_string(threads));
      if (seed >= 0) cfg.set("experiment", "seed", std::to_string(seed));
      if (gap_samples > 0) cfg.set("experiment", "gap_samples", std::to_string(gap_samples));
      cfg.set("experiment", "output", out_dir);
      auto p = parse_assignments(params);
      if (M > 0) p["M"] = M;
      for (const auto& [k, v] : p) cfg.set("preset", k, format_number(v));
      return report_experiment(load_experiment(cfg));
    };
  });

  // qmc-equilibrium ---------------------------------------------------------
  double beta = 1.0;
  std::size_t K = 0, sweeps = 10000, burn_in = 1000;
  auto* equilibrium = app.add_subcommand("qmc-equilibrium", "Slice marginals at fixed H against the exact reference");
  equilibrium->add_option("--family", family, "Family name")->required();
  equilibrium->add_option("--param,-p", params, "key=value family parameter");
  equilibrium->add_option("--M", M, "Subdivision M");
  equilibrium->add_option("--beta", beta, "Inverse temperature")->check(CLI::PositiveNumber);
  equilibrium->add_option("--K", K, "Slices (0: automatic)");
  equilibrium->add_option("--sweeps", sweeps, "Measured sweeps");
  equilibrium->add_option("--burn-in", burn_in, "Discarded sweeps");
  equilibrium->add_option("--seed", seed, "Seed");
  equilibrium->add_option("--out,-o", out_path, "CSV path (default stdout)");
  equilibrium->callback([&] {
    action = [&] {
      auto p = parse_assignments(params);
      if (M > 0) p["M"] = M;
      const Model model = build_checked(family, p);
      const std::size_t k = K ? K : slices_for(beta, model.H.norm_inf());
      const auto est = sample_equilibrium(model.H, beta, k, sweeps, burn_in, seed >= 0 ? static_cast<std::uint64_t>(seed) : 1);
      const auto exact = discrete_thermal_diagonal(model.H, beta, k);
      Output out(out_path);
      *out << "state,label,qmc_mean,qmc_stderr,exact,sigma,z\n";
      for (std::size_t c = 0; c < model.H.dim(); ++c) {
        const double sigma = std::max(est.stderr_[c], est.binomial_error(exact[c]));
        const double z = sigma > 0 ? (est.mean[c] - exact[c]) / sigma : 0.0;
        *out << c << ',' << model.H.space().label(c) << ',' << format_number(est.mean[c]) << ','
             << format_number(est.stderr_[c]) << ',' << format_number(exact[c]) << ',' << format_number(sigma) << ','
             << format_number(z) << '\n';
      }
      std::cerr << "K = " << k << ", acceptance = " << format_number(est.acceptance)
                << ", effective samples = " << format_number(est.effective_samples) << '\n';
      return 0;
    };
  });

  // topology ----------------------------------------------------------------
  auto* topology = app.add_subcommand("topology", "Word algebra and presentation moves");
  topology->require_subcommand(1);
  std::string word;
  int copy_size = 0, n = 3, weight_n = 0;
  std::vector<int> lengths{2, 4, 6};
  long long cap = -1;

  auto* reduce = topology->add_subcommand("reduce", "Free and cyclic reduction of a word");
  reduce->add_option("word", word, "Word such as \"a b a A A b\"")->required();
  reduce->add_option("--copy-size", copy_size, "Generators per copy");
  reduce->add_option("--n", weight_n, "Also report the weight for this n");
  reduce->callback([&] {
    action = [&] {
      const GroupWord w = parse_word(word, copy_size);
      const auto f = free_reduce(w), c = cyclic_reduce(w);
      std::cout << "input = " << format_word(w, copy_size) << "\nfree = " << format_word(f, copy_size)
                << "\nfree.length = " << f.size() << "\ncyclic = " << format_word(c, copy_size)
                << "\ncyclic.length = " << c.size() << '\n';
      if (weight_n > 0) std::cout << "weight = " << word_weight(w, weight_n, copy_size > 0 ? 2 : 1) << '\n';
      return 0;
    };
  });

  auto* shrink = topology->add_subcommand("shrink", "Collapsing-chain shrink sequence from g_1 (CSV)");
  shrink->add_option("--n", n, "Chain length")->check(CLI::Range(1, 30));
  shrink->add_option("--start", word, "Start word (default g_1)");
  shrink->add_option("--out,-o", out_path, "CSV path (default stdout)");
  shrink->callback([&] {
    action = [&] {
      const auto pres = collapsing_chain(n);
      const GroupWord start = word.empty() ? GroupWord{1} : parse_word(word);
      const auto seq = generate_shrink_sequence(start, pres);
      if (!replay(seq, pres)) throw std::logic_error("shrink sequence failed replay");
      Output out(out_path);
      write_sequence(*out, seq, 0, n);
      (out.to_file() ? std::cout : std::cerr) << "moves = " << seq.moves.size()
                                                << "\nmax_length = " << seq.max_length() << '\n';
      return 0;
    };
  });

  auto* grope = topology->add_subcommand("grope", "Half-grope shrink sequence from [1,2] (CSV)");
  grope->add_option("--n", n, "Depth")->check(CLI::Range(1, 12));
  grope->add_option("--out,-o", out_path, "CSV path (default stdout)");
  grope->callback([&] {
    action = [&] {
      const auto seq = generate_grope_shrink(n);
      if (!replay(seq, grope_presentation(n, PresentationKind::half_grope_capped)))
        throw std::logic_error("grope sequence failed replay");
      Output out(out_path);
      write_sequence(*out, seq, 0, 0);
      (out.to_file() ? std::cout : std::cerr) << "moves = " << seq.moves.size()
                                                << "\nmax_length = " << seq.max_length() << '\n';
      return 0;
    };
  });

  auto* count = topology->add_subcommand("count", "Bounded block-weight word counts (CSV)");
  count->add_option("--n", n, "Generators per copy")->check(CLI::Range(1, 8));
  count->add_option("--lengths", lengths, "Word lengths")->delimiter(',');
  count->add_option("--cap", cap, "Block weight cap (default floor(2^(n/2)))");
  count->callback([&] {
    action = [&] {
      const auto c = cap >= 0 ? cap : static_cast<long long>(std::floor(std::pow(2.0, n / 2.0)));
      std::cout << "length,restricted,total,ratio\n";
      for (int l : lengths) {
        const auto wc = count_bounded_weight_words(l, n, c);
        std::cout << l << ',' << wc.restricted << ',' << wc.total << ','
                  << format_number(static_cast<double>(wc.restricted) / static_cast<double>(wc.total)) << '\n';
      }
      return 0;
    };
  });

  // bounds ------------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Operator inequalities and coarse-graining checks");
  bounds->require_subcommand(1);
  int cases = 1000, max_dim = 8, sites = 4, local_dim = 2;
  double alpha = 0.1, B = 1.0, h = 0.5, Lambda = kDefaultLambda;
  std::vector<double> betas{2, 4, 6, 8, 10};

  auto* projector = bounds->add_subcommand("projector", "Random sweep of the two-projector inequality");
  projector->add_option("--cases", cases, "Random cases")->check(CLI::PositiveNumber);
  projector->add_option("--max-dim", max_dim, "Largest dimension")->check(CLI::Range(1, 64));
  projector->add_option("--seed", seed, "Seed");
  projector->callback([&] {
    action = [&] {
      std::mt19937_64 rng(seed >= 0 ? static_cast<std::uint64_t>(seed) : 1);
      std::uniform_int_distribution<int> dim_of(1, max_dim);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double worst = INFINITY, worst_a1 = INFINITY, worst_a2 = INFINITY;
      for (int i = 0; i < cases; ++i) {
        const int d = dim_of(rng);
        std::uniform_int_distribution<int> rank(0, d);
        const auto P1 = random_projector(d, rank(rng), rng);
        const auto P2 = random_projector(d, rank(rng), rng);
        worst = std::min(worst, projector_inequality_check(P1, P2, unit(rng)));
        const double a = unit(rng);
        worst_a1 = std::min(worst_a1, projector_inequality_alpha(P1, P2, a, false));
        worst_a2 = std::min(worst_a2, projector_inequality_alpha(P1, P2, a, true));
      }
      std::cout << "cases = " << cases << "\nmin_eig = " << format_number(worst)
                << "\nmin_eig.alpha = " << format_number(worst_a1)
                << "\nmin_eig.alpha_half = " << format_number(worst_a2) << '\n';
      return 0;
    };
  });

  auto* renorm = bounds->add_subcommand("renorm", "Renormalized gap bound against exact diagonalization (CSV)");
  renorm->add_option("--cases", cases, "Random chains")->check(CLI::PositiveNumber);
  renorm->add_option("--sites", sites, "Chain length")->check(CLI::Range(2, 12));
  renorm->add_option("--local-dim", local_dim, "Site dimension")->check(CLI::Range(2, 4));
  renorm->add_option("--alpha", alpha, "alpha in [0,1]");
  renorm->add_option("--seed", seed, "Seed");
  renorm->callback([&] {
    action = [&] {
      std::mt19937_64 rng(seed >= 0 ? static_cast<std::uint64_t>(seed) : 1);
      std::cout << "case,bound,exact,ratio,levels\n";
      for (int i = 0; i < cases; ++i) {
        const auto terms = random_projector_chain(sites, local_dim, rng);
        const auto rb = renormalize_bound(terms, alpha);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(terms[0].rows(), terms[0].cols());
        for (const auto& t : terms) H += t;
        const double exact = smallest_nonzero_eigenvalue(H);
        std::cout << i << ',' << format_number(rb.bound) << ',' << format_number(exact) << ','
                  << format_number(exact > 0 ? rb.bound / exact : 0.0) << ',' << rb.levels.size() << '\n';
      }
      return 0;
    };
  });

  auto* samebound = bounds->add_subcommand("samebound", "Coarse-grained defect on -B Sx + h Sz versus beta (CSV)");
  samebound->add_option("--B", B, "Transverse field");
  samebound->add_option("--hz", h, "Longitudinal field");
  samebound->add_option("--K", K, "Slices")->check(CLI::Range(3, 100000));
  samebound->add_option("--betas", betas, "Inverse temperatures")->delimiter(',');
  samebound->add_option("--lambda", Lambda, "Forbidden-link energy");
  samebound->callback([&] {
    action = [&] {
      const auto H = two_state(B, h);
      const std::size_t k = K ? K : 200;
      std::cout << "beta,C,E0,Delta,defect,log_defect\n";
      for (double b : betas) {
        const auto cg = coarse_grain(H, b, k, Lambda);
        std::cout << format_number(b) << ',' << format_number(cg.C) << ',' << format_number(cg.E0) << ','
                  << format_number(cg.Delta) << ',' << format_number(cg.defect) << ','
                  << format_number(std::log(cg.defect)) << '\n';
      }
      return 0;
    };
  });

  // toy-arc -----------------------------------------------------------------
  double cutoff = 0.26;
  auto* toy = app.add_subcommand("toy-arc", "Eight-point circle model with a hard step cutoff");
  toy->add_option("--cutoff", cutoff, "Cutoff in units of pi");
  toy->callback([&] {
    action = [&] {
      const auto r = toy_arc_model(cutoff);
      std::cout << "cutoff_over_pi = " << format_number(cutoff) << "\nweight_forward = " << format_number(r.weight_forward)
                << "\nweight_backward = " << format_number(r.weight_backward)
                << "\nconnected = " << (r.connected ? "true" : "false") << "\nJ_tilde = " << format_number(r.J_tilde)
                << '\n';
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 0;
  } catch (const ConfigError& e) {
    std::cerr << "error kind=config message=" << quoted(e.what()) << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error kind=config message=" << quoted(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error kind=runtime message=" << quoted(e.what()) << '\n';
    return 3;
  }
}
