#include "wlqmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "wlqmc/presets.hpp"

#ifndef WLQMC_VERSION
#define WLQMC_VERSION "0.0.0"
#endif

namespace wlqmc {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string git_describe() {
  std::string out;
  if (FILE* p = popen("git describe --always --dirty 2>/dev/null", "r")) {
    char buf[128];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

std::vector<ChainResult> run_chains(const ModelFactory& family, const AnnealingSchedule& schedule,
                                    const QmcParams& base, const MeasureSpec& measure, int chains, int threads) {
  if (chains < 1) throw std::invalid_argument("need at least one chain");
  QmcParams params = base;
  if (params.K == 0) params.K = slices_for(params.beta, schedule_max_norm(family, schedule));

  std::vector<ChainResult> out(static_cast<std::size_t>(chains));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int c = next++; c < chains; c = next++) {
      try {
        QmcParams p = params;
        p.seed = chain_seed(base.seed, static_cast<std::uint64_t>(c));
        auto& slot = out[static_cast<std::size_t>(c)];
        slot.chain = c;
        slot.seed = p.seed;
        slot.run = run_annealing(family, schedule, p, measure);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min(n, chains);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

int step_of(const AnnealingSchedule& schedule, double u) {
  return static_cast<int>(std::lround(u * schedule.steps()));
}

CheckpointSummary summarize(const std::vector<ChainResult>& chains, const MeasureSpec& measure, int step) {
  CheckpointSummary s;
  s.step = step;
  if (chains.empty()) return s;
  const double n = static_cast<double>(chains.size());
  for (const auto& ch : chains) {
    const auto& rec = ch.run.records.at(static_cast<std::size_t>(step));
    s.u = rec.u;
    s.acceptance += rec.acceptance / n;
    ++s.sectors[rec.sector];
  }
  for (std::size_t m = 0; m < measure.marks.size(); ++m) s.marks[measure.marks[m]];
  return s;
}

namespace {

void fill_mark_summary(CheckpointSummary& s, const std::vector<ChainResult>& chains, const MeasureSpec& measure,
                       const ModelFactory& family, const AnnealingSchedule& schedule) {
  const Model model = family(schedule.evaluate(schedule.u_at(s.step)));
  const double n = static_cast<double>(chains.size());
  for (std::size_t m = 0; m < measure.marks.size(); ++m) {
    auto states = model.mark(measure.marks[m]);
    std::sort(states.begin(), states.end());
    auto on = [&](Index c) { return std::binary_search(states.begin(), states.end(), c) ? 1.0 : 0.0; };
    MarkSummary ms;
    for (const auto& ch : chains) {
      const auto& rec = ch.run.records.at(static_cast<std::size_t>(s.step));
      ms.first += on(rec.first) / n;
      ms.middle += on(rec.middle) / n;
      ms.last += on(rec.last) / n;
      ms.fraction += rec.mark_fractions.at(m) / n;
    }
    s.marks[measure.marks[m]] = ms;
  }
}

void write_summary_block(std::ostream& out, const std::string& prefix, const CheckpointSummary& s) {
  out << prefix << ".step = " << s.step << '\n';
  out << prefix << ".u = " << format_number(s.u) << '\n';
  out << prefix << ".acceptance = " << format_number(s.acceptance) << '\n';
  for (const auto& [name, m] : s.marks) {
    out << prefix << ".first." << name << " = " << format_number(m.first) << '\n';
    out << prefix << ".middle." << name << " = " << format_number(m.middle) << '\n';
    out << prefix << ".last." << name << " = " << format_number(m.last) << '\n';
    out << prefix << ".fraction." << name << " = " << format_number(m.fraction) << '\n';
  }
}

std::ofstream open_out(const std::filesystem::path& p, std::vector<std::string>& files) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  files.push_back(p.string());
  return f;
}

void write_manifest(const ExperimentConfig& ex, std::size_t K, const std::filesystem::path& dir,
                    std::vector<std::string>& files) {
  auto f = open_out(dir / "manifest.txt", files);
  f << "# wlqmc " << WLQMC_VERSION << '\n';
  f << "# git " << git_describe() << '\n';
  f << "# seed " << ex.qmc.seed << '\n';
  f << "# K " << K << '\n';
  for (const auto& [k, v] : ex.derived) f << "# derived." << k << " " << format_number(v) << '\n';
  ex.source.write(f);
}

void exact_masses(ExperimentResult& res, const ModelFactory& family, const AnnealingSchedule& schedule,
                  const MeasureSpec& measure) {
  const Model model = family(schedule.evaluate(1.0));
  const auto rep = diagonalize(model.H);
  const double total = rep.psi0.sum();
  for (const auto& name : measure.marks) {
    double p2 = 0.0, amp = 0.0;
    for (Index c : model.mark(name)) {
      p2 += rep.psi0(c) * rep.psi0(c);
      amp += rep.psi0(c) / total;
    }
    res.exact_mass[name] = p2;
    res.exact_amplitude[name] = amp;
  }
}

}  // namespace

void write_records_csv(std::ostream& out, int chain, const std::vector<ObservableRecord>& records,
                       const MeasureSpec& measure) {
  std::vector<std::string> names;
  if (!records.empty())
    for (const auto& [k, v] : records.front().params) names.push_back(k);
  out << "chain,step,u";
  for (const auto& k : names) out << ',' << k;
  out << ",acceptance,sector,first,last,middle";
  for (const auto& m : measure.marks) out << ",frac_" << m;
  out << ",diag_energy\n";
  for (const auto& r : records) {
    out << chain << ',' << r.step << ',' << format_number(r.u);
    for (const auto& k : names) out << ',' << format_number(r.params.at(k));
    out << ',' << format_number(r.acceptance) << ',' << r.sector << ',' << r.first << ',' << r.last << ','
        << r.middle;
    for (double f : r.mark_fractions) out << ',' << format_number(f);
    out << ',' << format_number(r.diag_energy) << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& ex, bool write) {
  ExperimentResult res;
  const ModelFactory family = make_family(ex.family, ex.fixed);
  const std::filesystem::path dir(ex.output);
  if (write) std::filesystem::create_directories(dir);

  if (ex.gap_samples >= 2) {
    res.gaps = gap_along_schedule([&](double u) { return family(ex.schedule.evaluate(u)).H; }, ex.gap_samples);
    if (write) {
      auto f = open_out(dir / "gap.csv", res.files);
      f << "u,E0,gap\n";
      for (const auto& s : res.gaps.samples)
        f << format_number(s.u) << ',' << format_number(s.E0) << ',' << format_number(s.gap) << '\n';
    }
  }

  if (ex.mode == Mode::spectrum) {
    const Model model = family(ex.schedule.evaluate(0.0));
    const auto rep = diagonalize(model.H);
    if (write) {
      auto f = open_out(dir / "spectrum.csv", res.files);
      f << "index,eigenvalue\n";
      for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) f << i << ',' << format_number(rep.eigenvalues[i]) << '\n';
      write_manifest(ex, 0, dir, res.files);
    }
    return res;
  }

  if (ex.mode == Mode::equilibrium) {
    const Model model = family(ex.schedule.evaluate(0.0));
    const std::size_t K = ex.qmc.K ? ex.qmc.K : slices_for(ex.qmc.beta, model.H.norm_inf());
    res.K = K;
    const auto est = sample_equilibrium(model.H, ex.qmc.beta, K, ex.equilibrium_sweeps,
                                        static_cast<std::size_t>(ex.qmc.burn_in_sweeps), ex.qmc.seed);
    const auto exact = discrete_thermal_diagonal(model.H, ex.qmc.beta, K);
    if (write) {
      auto f = open_out(dir / "equilibrium.csv", res.files);
      f << "state,label,qmc_mean,qmc_stderr,exact,sigma,z\n";
      for (std::size_t c = 0; c < model.H.dim(); ++c) {
        const double sigma = std::max(est.stderr_[c], est.binomial_error(exact[c]));
        f << c << ',' << model.H.space().label(c) << ',' << format_number(est.mean[c]) << ','
          << format_number(est.stderr_[c]) << ',' << format_number(exact[c]) << ',' << format_number(sigma) << ','
          << format_number(sigma > 0 ? (est.mean[c] - exact[c]) / sigma : 0.0) << '\n';
      }
      write_manifest(ex, K, dir, res.files);
    }
    return res;
  }

  res.chains = run_chains(family, ex.schedule, ex.qmc, ex.measure, ex.chains, ex.threads);
  res.K = res.chains.front().run.K;
  res.at_measure = summarize(res.chains, ex.measure, step_of(ex.schedule, ex.measure_u));
  fill_mark_summary(res.at_measure, res.chains, ex.measure, family, ex.schedule);
  res.at_end = summarize(res.chains, ex.measure, ex.schedule.steps());
  fill_mark_summary(res.at_end, res.chains, ex.measure, family, ex.schedule);
  exact_masses(res, family, ex.schedule, ex.measure);

  if (write) {
    for (const auto& ch : res.chains) {
      char name[32];
      std::snprintf(name, sizeof name, "chain_%03d.csv", ch.chain);
      auto f = open_out(dir / name, res.files);
      write_records_csv(f, ch.chain, ch.run.records, ex.measure);
    }
    {
      auto f = open_out(dir / "sectors.csv", res.files);
      f << "checkpoint,step,sector,count\n";
      for (const auto& [s, n] : res.at_measure.sectors) f << "measure," << res.at_measure.step << ',' << s << ',' << n << '\n';
      for (const auto& [s, n] : res.at_end.sectors) f << "final," << res.at_end.step << ',' << s << ',' << n << '\n';
    }
    {
      auto f = open_out(dir / "summary.txt", res.files);
      f << "name = " << ex.name << '\n';
      f << "family = " << ex.family << '\n';
      f << "chains = " << ex.chains << '\n';
      f << "seed = " << ex.qmc.seed << '\n';
      f << "beta = " << format_number(ex.qmc.beta) << '\n';
      f << "K = " << res.K << '\n';
      for (const auto& [k, v] : ex.derived) f << "derived." << k << " = " << format_number(v) << '\n';
      write_summary_block(f, "measure", res.at_measure);
      write_summary_block(f, "final", res.at_end);
      for (const auto& [k, v] : res.exact_mass) f << "exact.mass." << k << " = " << format_number(v) << '\n';
      for (const auto& [k, v] : res.exact_amplitude) f << "exact.amplitude." << k << " = " << format_number(v) << '\n';
      if (!res.gaps.samples.empty()) {
        f << "gap.min = " << format_number(res.gaps.min_gap) << '\n';
        f << "gap.argmin_u = " << format_number(res.gaps.argmin_u) << '\n';
      }
    }
    write_manifest(ex, res.K, dir, res.files);
  }
  return res;
}

std::vector<ValidationIssue> validate_experiment(const ExperimentConfig& ex) {
  std::vector<ValidationIssue> issues;
  ModelFactory family;
  try {
    family = make_family(ex.family, ex.fixed);
  } catch (const std::exception& e) {
    issues.push_back({"build", e.what()});
    return issues;
  }
  const auto& s = ex.schedule;
  double max_norm = 0.0;
  std::size_t max_dim = 0;
  const int steps = ex.mode == Mode::anneal ? s.steps() : 0;
  for (int step = 0; step <= steps; ++step) {
    const double u = s.u_at(step);
    ParameterSet p;
    try {
      p = s.evaluate(u);
    } catch (const std::exception& e) {
      issues.push_back({"schedule", e.what()});
      continue;
    }
    for (const auto& [k, v] : p)
      if (!std::isfinite(v)) issues.push_back({"schedule", k + " is not finite at u=" + format_number(u)});
    Model model;
    try {
      model = family(p);
    } catch (const std::exception& e) {
      issues.push_back({"build", "u=" + format_number(u) + ": " + e.what()});
      continue;
    }
    const auto sign = check_no_sign_problem(model.H);
    for (auto [r, c] : sign.violations)
      issues.push_back({"sign", "positive off-diagonal at (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") value " + format_number(model.H.at(r, c)) + " at u=" + format_number(u)});
    max_norm = std::max(max_norm, model.H.norm_inf());
    max_dim = std::max(max_dim, model.H.dim());
    for (const auto& m : ex.measure.marks)
      if (!model.marks.count(m)) issues.push_back({"build", "family has no mark " + m});
  }
  if (ex.qmc.K > 0) {
    const double ratio = ex.qmc.beta * max_norm / static_cast<double>(ex.qmc.K);
    if (ratio > 0.1)
      issues.push_back({"k-margin", "beta*max||H||/K = " + format_number(ratio) + " > 0.1 with K=" +
                                        std::to_string(ex.qmc.K) + "; need K >= " +
                                        std::to_string(slices_for(ex.qmc.beta, max_norm))});
  }
  const std::size_t K = ex.qmc.K ? ex.qmc.K : slices_for(ex.qmc.beta, max_norm);
  if (K > (std::size_t{1} << 26)) issues.push_back({"size", "K = " + std::to_string(K) + " exceeds 2^26 slices"});
  if (max_dim > (std::size_t{1} << 20)) issues.push_back({"size", "dimension " + std::to_string(max_dim) + " exceeds 2^20"});
  if (ex.mode == Mode::equilibrium && max_dim > 4096)
    issues.push_back({"size", "equilibrium reference needs dimension <= 4096"});
  return issues;
}

}  // namespace wlqmc
