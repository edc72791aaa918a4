#include "wlqmc/qmc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "wlqmc/spectral.hpp"

namespace wlqmc {

namespace {

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_below(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

}  // namespace

double link_weight(const SparseHamiltonian& H, double beta, std::size_t K, Index c, Index d) {
  if (K == 0) throw std::invalid_argument("link_weight needs K >= 1");
  const double w = (c == d ? 1.0 : 0.0) - beta / static_cast<double>(K) * H.at(d, c);
  if (w < 0) throw NegativeWeightError("negative link weight: K too small or sign violation");
  return w;
}

LinkTable::LinkTable(const SparseHamiltonian& H, double beta, std::size_t K)
    : H_(&H), step_(beta / static_cast<double>(K)) {
  if (!(beta > 0) || K == 0) throw std::invalid_argument("link table needs beta > 0 and K >= 1");
  self_.resize(H.dim());
  for (std::size_t c = 0; c < H.dim(); ++c) {
    self_[c] = 1.0 - step_ * H.diag(static_cast<Index>(c));
    if (self_[c] < 0)
      throw NegativeWeightError("negative diagonal link weight at state " + std::to_string(c) +
                                ": K too small for ||H||");
  }
  const auto sign = check_no_sign_problem(H, 0.0);
  if (!sign.ok)
    throw NegativeWeightError("negative link weight: positive off-diagonal at (" +
                              std::to_string(sign.violations.front().first) + "," +
                              std::to_string(sign.violations.front().second) + ")");
}

double LinkTable::weight(Index c, Index d) const {
  if (c == d) return self_[static_cast<std::size_t>(c)];
  return -step_ * H_->at(d, c);
}

Index LinkTable::proposal(Index c, std::size_t k) const {
  auto nb = H_->neighbors(c);
  return k < nb.size() ? nb[k] : c;
}

double trajectory_weight(const Trajectory& traj, const LinkTable& table) {
  const auto K = traj.K();
  double w = 1.0;
  for (std::size_t i = 0; i < traj.links(); ++i) w *= table.weight(traj.slices[i], traj.slices[(i + 1) % K]);
  return w;
}

double trajectory_weight(const Trajectory& traj, const SparseHamiltonian& H, double beta) {
  return trajectory_weight(traj, LinkTable(H, beta, traj.K()));
}

double acceptance_probability(const Trajectory& traj, std::size_t i, Index d, const LinkTable& table) {
  const Index c = traj.slices[i];
  if (d == c) return 1.0;
  const auto K = traj.K();
  const bool periodic = traj.boundary == Boundary::periodic;
  double w_old = 1.0, w_new = 1.0;
  if (periodic || i > 0) {
    const Index p = traj.slices[(i + K - 1) % K];
    w_old *= table.weight(p, c);
    w_new *= table.weight(p, d);
  }
  if (periodic || i + 1 < K) {
    const Index q = traj.slices[(i + 1) % K];
    w_old *= table.weight(c, q);
    w_new *= table.weight(d, q);
  }
  if (w_new <= 0) return 0.0;
  if (w_old <= 0) return 1.0;
  // Proposal sets differ in size between states; the ratio of their sizes
  // is the Hastings factor.
  const double hastings = static_cast<double>(table.proposals(c)) / static_cast<double>(table.proposals(d));
  return std::min(1.0, w_new / w_old * hastings);
}

UpdateResult local_update(Trajectory& traj, std::size_t i, Index proposal, const LinkTable& table,
                          Rng& rng) {
  UpdateResult r;
  r.proposal = proposal;
  const double a = acceptance_probability(traj, i, proposal, table);
  if (a >= 1.0 || (a > 0.0 && uniform01(rng) < a)) {
    traj.slices[i] = proposal;
    r.accepted = true;
  }
  return r;
}

UpdateResult local_update(Trajectory& traj, std::size_t i, const LinkTable& table, Rng& rng) {
  const Index c = traj.slices[i];
  const Index d = table.proposal(c, uniform_below(rng, table.proposals(c)));
  return local_update(traj, i, d, table, rng);
}

SweepStats sweep(Trajectory& traj, const LinkTable& table, Rng& rng) {
  const auto K = traj.K();
  thread_local std::vector<std::size_t> order;
  order.resize(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = K; k > 1; --k) std::swap(order[k - 1], order[uniform_below(rng, k)]);
  SweepStats st;
  for (std::size_t i : order) {
    ++st.attempts;
    if (local_update(traj, i, table, rng).accepted) ++st.accepted;
  }
  return st;
}

Trajectory grow_beta(const Trajectory& traj) {
  Trajectory out = traj;
  out.slices.push_back(traj.slices.back());
  return out;
}

std::size_t slices_for(double beta, double max_norm) {
  const double k = std::ceil(10.0 * beta * max_norm);
  return std::max<std::size_t>(2, static_cast<std::size_t>(k));
}

void resample_trajectory(Trajectory& traj, const LinkTable& table, Rng& rng) {
  const auto K = traj.K();
  const auto& H = table.H();
  const std::size_t d = H.dim();
  std::vector<double> alpha(K * d, 0.0);
  alpha[static_cast<std::size_t>(traj.slices[0])] = 1.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double* a = &alpha[k * d];
    double* b = &alpha[(k + 1) * d];
    double norm = 0.0;
    for (std::size_t y = 0; y < d; ++y) {
      const auto cy = static_cast<Index>(y);
      double s = a[y] * table.weight(cy, cy);
      for (Index x : H.neighbors(cy)) s += a[x] * table.weight(x, cy);
      b[y] = s;
      norm += s;
    }
    if (!(norm > 0)) throw std::runtime_error("trajectory redraw: forward pass lost all weight");
    for (std::size_t y = 0; y < d; ++y) b[y] /= norm;
  }

  std::vector<double> p;
  std::vector<Index> cand;
  auto draw = [&]() {
    double tot = 0.0;
    for (double x : p) tot += x;
    if (!(tot > 0)) throw std::runtime_error("trajectory redraw: backward pass lost all weight");
    double r = uniform01(rng) * tot;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0 && r < p[i]) return cand[i];
      r -= p[i];
    }
    for (std::size_t i = p.size(); i-- > 0;)
      if (p[i] > 0) return cand[i];
    return cand.back();
  };

  const double* last = &alpha[(K - 1) * d];
  p.clear();
  cand.clear();
  for (std::size_t y = 0; y < d; ++y) {
    const auto cy = static_cast<Index>(y);
    const double w = traj.boundary == Boundary::periodic ? table.weight(cy, traj.slices[0]) : 1.0;
    cand.push_back(cy);
    p.push_back(last[y] * w);
  }
  Index next = draw();
  traj.slices[K - 1] = next;
  for (std::size_t k = K - 1; k-- > 1;) {
    const double* a = &alpha[k * d];
    p.clear();
    cand.clear();
    cand.push_back(next);
    p.push_back(a[next] * table.weight(next, next));
    for (Index x : H.neighbors(next)) {
      cand.push_back(x);
      p.push_back(a[x] * table.weight(x, next));
    }
    next = draw();
    traj.slices[k] = next;
  }
}

std::uint64_t chain_seed(std::uint64_t master, std::uint64_t chain) {
  // splitmix64 of (master xor chain)
  std::uint64_t z = master ^ chain;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double schedule_max_norm(const ModelFactory& family, const AnnealingSchedule& schedule) {
  double best = 0.0;
  for (int s = 0; s <= schedule.steps(); ++s)
    best = std::max(best, family(schedule.evaluate(schedule.u_at(s))).H.norm_inf());
  return best;
}

namespace {

Index diagonal_argmin(const SparseHamiltonian& H) {
  const auto& d = H.diagonal();
  return static_cast<Index>(std::min_element(d.begin(), d.end()) - d.begin());
}

ObservableRecord measure(const Model& model, const Trajectory& traj, const MeasureSpec& spec) {
  ObservableRecord rec;
  const auto K = traj.K();
  rec.first = traj.slices.front();
  rec.last = traj.slices.back();
  rec.middle = traj.slices[K / 2];
  double e = 0.0;
  for (Index c : traj.slices) e += model.H.diag(c);
  rec.diag_energy = e / static_cast<double>(K);
  for (const auto& name : spec.marks) {
    auto states = model.mark(name);
    std::sort(states.begin(), states.end());
    std::size_t hits = 0;
    for (Index c : traj.slices)
      if (std::binary_search(states.begin(), states.end(), c)) ++hits;
    rec.mark_fractions.push_back(static_cast<double>(hits) / static_cast<double>(K));
  }
  if (spec.histogram) {
    rec.histogram.assign(model.H.dim(), 0.0);
    for (Index c : traj.slices) rec.histogram[static_cast<std::size_t>(c)] += 1.0 / static_cast<double>(K);
  }
  if (spec.sectors && model.geometry.kind != Geometry::Kind::none)
    rec.sector = sector_string(sector_of_trajectory(traj, model.geometry));
  else
    rec.sector = "-";
  return rec;
}

}  // namespace

AnnealResult run_annealing(const ModelFactory& family, const AnnealingSchedule& schedule,
                           const QmcParams& params, const MeasureSpec& spec, const StepHook& hook) {
  if (!(params.beta > 0)) throw std::invalid_argument("beta must be positive");
  AnnealResult res;
  res.K = params.K ? params.K : slices_for(params.beta, schedule_max_norm(family, schedule));
  if (res.K < 2) throw std::invalid_argument("need K >= 2");
  Rng rng(params.seed);

  Model model = family(schedule.evaluate(0.0));
  auto table = std::make_unique<LinkTable>(model.H, params.beta, res.K);
  Trajectory traj = Trajectory::constant(diagonal_argmin(model.H), res.K, params.boundary);

  for (int d = 0; d < params.exact_draws; ++d) {
    resample_trajectory(traj, *table, rng);
    sweep(traj, *table, rng);
  }
  for (int s = 0; s < params.burn_in_sweeps; ++s) sweep(traj, *table, rng);

  const int steps = schedule.steps();
  for (int step = 0; step <= steps; ++step) {
    const double u = schedule.u_at(step);
    const ParameterSet p = schedule.evaluate(u);
    SweepStats acc;
    if (step > 0) {
      model = family(p);
      table = std::make_unique<LinkTable>(model.H, params.beta, res.K);
      for (int s = 0; s < params.sweeps_per_step; ++s) {
        auto st = sweep(traj, *table, rng);
        acc.attempts += st.attempts;
        acc.accepted += st.accepted;
      }
    }
    ObservableRecord rec = measure(model, traj, spec);
    rec.step = step;
    rec.u = u;
    rec.params = p;
    rec.acceptance = acc.rate();
    if (hook) hook(rec, traj, model);
    res.records.push_back(std::move(rec));
  }
  res.final_trajectory = std::move(traj);
  return res;
}

EquilibriumEstimate sample_equilibrium(const SparseHamiltonian& H, double beta, std::size_t K,
                                       std::size_t sweeps, std::size_t burn_in, std::uint64_t seed,
                                       std::size_t replicas) {
  if (replicas < 2 || sweeps < replicas) throw std::invalid_argument("need sweeps >= replicas >= 2");
  LinkTable table(H, beta, K);
  auto marginal = discrete_thermal_diagonal(H, beta, K);
  for (double& x : marginal) x = std::max(x, 0.0);
  const auto n = H.dim();
  const std::size_t per_replica = sweeps / replicas;
  std::vector<std::vector<double>> replica_means(replicas, std::vector<double>(n, 0.0));
  std::vector<std::size_t> counts(n);
  SweepStats total;
  for (std::size_t r = 0; r < replicas; ++r) {
    Rng rng(chain_seed(seed, r));
    // exact draw: c_1 from the slice marginal, the rest by forward filtering
    std::discrete_distribution<Index> first(marginal.begin(), marginal.end());
    Trajectory traj = Trajectory::constant(first(rng), K);
    resample_trajectory(traj, table, rng);
    for (std::size_t s = 0; s < burn_in; ++s) sweep(traj, table, rng);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t s = 0; s < per_replica; ++s) {
      auto st = sweep(traj, table, rng);
      total.attempts += st.attempts;
      total.accepted += st.accepted;
      for (Index c : traj.slices) ++counts[static_cast<std::size_t>(c)];
    }
    for (std::size_t c = 0; c < n; ++c)
      replica_means[r][c] = static_cast<double>(counts[c]) / static_cast<double>(per_replica * K);
  }
  EquilibriumEstimate est;
  est.K = K;
  est.acceptance = total.rate();
  est.replicas = replicas;
  est.mean.assign(n, 0.0);
  est.stderr_.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) m += replica_means[r][c];
    m /= static_cast<double>(replicas);
    double v = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) v += (replica_means[r][c] - m) * (replica_means[r][c] - m);
    v /= static_cast<double>(replicas - 1);
    est.mean[c] = m;
    est.stderr_[c] = std::sqrt(v / static_cast<double>(replicas));
  }
  double pq = 0.0, se2 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    pq += est.mean[c] * (1 - est.mean[c]);
    se2 += est.stderr_[c] * est.stderr_[c];
  }
  est.effective_samples = se2 > 0 ? pq / se2 : static_cast<double>(sweeps * K);
  return est;
}

double EquilibriumEstimate::binomial_error(double p) const {
  return effective_samples > 0 ? std::sqrt(p * (1 - p) / effective_samples) : 0.0;
}

std::vector<double> discrete_thermal_diagonal(const SparseHamiltonian& H, double beta, std::size_t K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(H));
  const auto& lam = es.eigenvalues();
  const auto& V = es.eigenvectors();
  const double step = beta / static_cast<double>(K);
  // Weights relative to the largest factor to keep the power finite.
  const double top = 1.0 - step * lam(0);
  std::vector<double> out(H.dim(), 0.0);
  double Z = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    const double f = (1.0 - step * lam(k)) / top;
    const double wk = std::pow(f, static_cast<double>(K));
    Z += wk;
    for (Eigen::Index c = 0; c < lam.size(); ++c) out[static_cast<std::size_t>(c)] += wk * V(c, k) * V(c, k);
  }
  for (double& x : out) x /= Z;
  return out;
}

EndpointJoint measure_endpoint_joint(const std::vector<std::pair<Index, Index>>& endpoints,
                                     Boundary boundary, const std::vector<double>& psi0) {
  if (boundary != Boundary::open) throw std::invalid_argument("endpoint joint needs an open-boundary run");
  if (endpoints.empty()) throw std::invalid_argument("no endpoint samples");
  const auto n = psi0.size();
  EndpointJoint out;
  out.joint.assign(n, std::vector<double>(n, 0.0));
  for (auto [a, b] : endpoints) out.joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += 1.0;
  for (auto& row : out.joint)
    for (double& x : row) x /= static_cast<double>(endpoints.size());
  const double s = std::accumulate(psi0.begin(), psi0.end(), 0.0);
  out.reference = psi0;
  for (double& x : out.reference) x /= s;
  double tv = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) tv += std::abs(out.joint[a][b] - out.reference[a] * out.reference[b]);
  out.defect = 0.5 * tv;
  return out;
}

}  // namespace wlqmc
