#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlqmc/hamiltonian.hpp"
#include "wlqmc/models.hpp"
#include "wlqmc/schedule.hpp"
#include "wlqmc/topology.hpp"
#include "wlqmc/trajectory.hpp"

namespace wlqmc {

using Rng = std::mt19937_64;

// Raised when some link weight 1 - (beta/K) H_dc is negative.
class NegativeWeightError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// delta_cd - (beta/K) H_dc.
double link_weight(const SparseHamiltonian& H, double beta, std::size_t K, Index c, Index d);

// Per-(H, beta/K) cache of link weights and proposal counts.
class LinkTable {
 public:
  LinkTable(const SparseHamiltonian& H, double beta, std::size_t K);

  double weight(Index c, Index d) const;
  std::size_t proposals(Index c) const { return H_->degree(c) + 1; }
  // k-th proposal from c; k == degree(c) proposes staying put.
  Index proposal(Index c, std::size_t k) const;
  const SparseHamiltonian& H() const { return *H_; }
  double step() const { return step_; }

 private:
  const SparseHamiltonian* H_;
  double step_;
  std::vector<double> self_;
};

double trajectory_weight(const Trajectory& traj, const LinkTable& table);
double trajectory_weight(const Trajectory& traj, const SparseHamiltonian& H, double beta);

// Metropolis-Hastings acceptance probability for replacing slice i by d,
// with proposals uniform over H-neighbors of the current value plus itself.
double acceptance_probability(const Trajectory& traj, std::size_t i, Index d, const LinkTable& table);

struct UpdateResult {
  bool accepted = false;
  Index proposal = 0;
};

UpdateResult local_update(Trajectory& traj, std::size_t i, Index proposal, const LinkTable& table,
                          Rng& rng);
// Draws the proposal uniformly, then calls the overload above.
UpdateResult local_update(Trajectory& traj, std::size_t i, const LinkTable& table, Rng& rng);

struct SweepStats {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  double rate() const { return attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0; }
};

// K single-slice attempts in a fresh random order.
SweepStats sweep(Trajectory& traj, const LinkTable& table, Rng& rng);

Trajectory grow_beta(const Trajectory& traj);

// ceil(10 beta max ||H||_inf)
std::size_t slices_for(double beta, double max_norm);

// Exact redraw of slices c_2..c_K from the trajectory distribution given c_1
// (forward filtering, backward sampling). Not a local move: the topological
// sector changes freely.
void resample_trajectory(Trajectory& traj, const LinkTable& table, Rng& rng);

struct QmcParams {
  double beta = 1.0;
  std::size_t K = 0;  // 0: slices_for(beta, max over the schedule)
  int sweeps_per_step = 10;
  int burn_in_sweeps = 100;
  std::uint64_t seed = 1;
  Boundary boundary = Boundary::periodic;
  int exact_draws = 0;  // resample_trajectory calls at u=0, each followed by one sweep
};

struct MeasureSpec {
  std::vector<std::string> marks;  // fractions of slices on each mark
  bool sectors = true;
  bool histogram = false;          // full slice-marginal histogram
};

struct ObservableRecord {
  int step = 0;
  double u = 0.0;
  ParameterSet params;
  double acceptance = 0.0;
  std::string sector;
  Index first = 0;   // c_1
  Index last = 0;    // c_K
  Index middle = 0;  // c_{K/2}
  std::vector<double> mark_fractions;
  double diag_energy = 0.0;  // slice average of H_cc
  std::vector<double> histogram;
};

using ModelFactory = std::function<Model(const ParameterSet&)>;
using StepHook = std::function<void(const ObservableRecord&, const Trajectory&, const Model&)>;

struct AnnealResult {
  std::size_t K = 0;
  std::vector<ObservableRecord> records;
  Trajectory final_trajectory;
};

// Largest ||H(u)||_inf over the schedule's step points.
double schedule_max_norm(const ModelFactory& family, const AnnealingSchedule& schedule);

AnnealResult run_annealing(const ModelFactory& family, const AnnealingSchedule& schedule,
                           const QmcParams& params, const MeasureSpec& measure,
                           const StepHook& hook = {});

// Slice-marginal sampling at fixed H. The sweeps are split over independent
// replicas, each started from an exact draw of the trajectory distribution;
// stderr is the spread of the replica means, so it stays honest however long
// the local-move autocorrelation time is.
struct EquilibriumEstimate {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t K = 0;
  std::size_t replicas = 0;
  double acceptance = 0.0;
  // Pooled sum p(1-p) / sum stderr^2: the number of independent slice draws
  // the run is worth. Rarely visited states get sqrt(p(1-p)/n) from it.
  double effective_samples = 0.0;

  double binomial_error(double p) const;
};

EquilibriumEstimate sample_equilibrium(const SparseHamiltonian& H, double beta, std::size_t K,
                                       std::size_t sweeps, std::size_t burn_in, std::uint64_t seed,
                                       std::size_t replicas = 20);

// Tr[(1 - beta H / K)^K P_c] / Tr[(1 - beta H / K)^K] for every c.
std::vector<double> discrete_thermal_diagonal(const SparseHamiltonian& H, double beta, std::size_t K);

struct EndpointJoint {
  std::vector<std::vector<double>> joint;  // empirical P(c_1, c_K)
  std::vector<double> reference;           // psi_0 normalized to unit sum
  double defect = 0.0;                     // TV distance to reference x reference
};

EndpointJoint measure_endpoint_joint(const std::vector<std::pair<Index, Index>>& endpoints,
                                     Boundary boundary, const std::vector<double>& psi0);

// Seed of chain `chain` derived from the master seed.
std::uint64_t chain_seed(std::uint64_t master, std::uint64_t chain);

}  // namespace wlqmc
