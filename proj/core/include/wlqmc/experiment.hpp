#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wlqmc/config.hpp"
#include "wlqmc/qmc.hpp"
#include "wlqmc/spectral.hpp"

namespace wlqmc {

struct ChainResult {
  int chain = 0;
  std::uint64_t seed = 0;
  AnnealResult run;
};

// Independent chains seeded by chain_seed(base.seed, chain). Results come
// back in chain order whatever the thread count.
std::vector<ChainResult> run_chains(const ModelFactory& family, const AnnealingSchedule& schedule,
                                    const QmcParams& base, const MeasureSpec& measure, int chains,
                                    int threads = 0);

struct MarkSummary {
  double first = 0.0;   // fraction of chains whose c_1 is on the mark
  double middle = 0.0;  // same for c_{K/2}
  double last = 0.0;    // same for c_K
  double fraction = 0.0;  // mean over chains of the slice fraction on the mark
};

struct CheckpointSummary {
  int step = 0;
  double u = 0.0;
  std::map<std::string, MarkSummary> marks;
  std::map<std::string, int> sectors;
  double acceptance = 0.0;
};

CheckpointSummary summarize(const std::vector<ChainResult>& chains, const MeasureSpec& measure, int step);
// Nearest schedule step to u.
int step_of(const AnnealingSchedule& schedule, double u);

struct ExperimentResult {
  std::size_t K = 0;
  std::vector<ChainResult> chains;
  CheckpointSummary at_measure;
  CheckpointSummary at_end;
  GapScan gaps;
  std::map<std::string, double> exact_mass;       // psi0^2 mass per mark at u = 1
  std::map<std::string, double> exact_amplitude;  // psi0 / sum psi0 mass per mark at u = 1
  std::vector<std::string> files;
};

// Runs the configured mode and, when `write` is set, writes its artifacts
// under ex.output: chain_NNN.csv, summary.txt, sectors.csv, gap.csv,
// spectrum.csv / equilibrium.csv and manifest.txt.
ExperimentResult run_experiment(const ExperimentConfig& ex, bool write = true);

struct ValidationIssue {
  std::string kind;  // sign | k-margin | size | schedule | build
  std::string detail;
};

// Dry run over every schedule step; never throws for model problems.
std::vector<ValidationIssue> validate_experiment(const ExperimentConfig& ex);

void write_records_csv(std::ostream& out, int chain, const std::vector<ObservableRecord>& records,
                       const MeasureSpec& measure);

std::string format_number(double v);
std::string git_describe();

}  // namespace wlqmc
