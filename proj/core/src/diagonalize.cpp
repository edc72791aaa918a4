#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "wlqmc/spectral.hpp"

namespace wlqmc {

Eigen::MatrixXd to_dense(const SparseHamiltonian& H) {
  const auto n = static_cast<Eigen::Index>(H.dim());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto row = static_cast<Index>(r);
    D(r, r) = H.diag(row);
    auto nb = H.neighbors(row);
    auto cv = H.couplings(row);
    for (std::size_t k = 0; k < nb.size(); ++k) D(r, nb[k]) = cv[k];
  }
  return D;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
  const double s = v.sum();
  if (s < 0 || (s == 0 && v(0) < 0)) v = -v;
}

void project_out(const std::vector<Eigen::VectorXd>& Y, Eigen::VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& y : Y) w -= y.dot(w) * y;
}

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

// Lowest eigenpair of H restricted to the orthogonal complement of `locked`.
// Krylov expansion with full reorthogonalization and thick restart: the
// lowest half of the Ritz vectors survive each restart.
Eigenpair lanczos_lowest(const SparseHamiltonian& H, const std::vector<Eigen::VectorXd>& locked,
                         const DiagOptions& opt, double hnorm, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(H.dim());
  const Eigen::Index room = n - static_cast<Eigen::Index>(locked.size());
  if (room <= 0) throw std::logic_error("lanczos: no room left after deflation");
  const Eigen::Index m = std::max<Eigen::Index>(std::min<Eigen::Index>(opt.krylov, room), 1);
  const Eigen::Index keep = std::max<Eigen::Index>(m / 2, 1);

  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(n);
    H.apply({x.data(), static_cast<std::size_t>(n)}, {y.data(), static_cast<std::size_t>(n)});
    project_out(locked, y);
    return y;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unif(rng);
  project_out(locked, v);
  v.normalize();

  Eigen::MatrixXd V(n, m), HV(n, m);
  V.col(0) = v;
  HV.col(0) = apply(v);
  Eigen::Index cols = 1;
  Eigenpair best;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    // grow the basis from the last H v
    while (cols < m) {
      Eigen::VectorXd w = HV.col(cols - 1);
      for (int pass = 0; pass < 2; ++pass) {
        project_out(locked, w);
        w -= V.leftCols(cols) * (V.leftCols(cols).transpose() * w);
      }
      const double b = w.norm();
      if (b < 1e-12 * hnorm) break;  // invariant subspace
      V.col(cols) = w / b;
      HV.col(cols) = apply(V.col(cols));
      ++cols;
    }
    Eigen::MatrixXd T = V.leftCols(cols).transpose() * HV.leftCols(cols);
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd s0 = es.eigenvectors().col(0);
    Eigen::VectorXd x = V.leftCols(cols) * s0;
    Eigen::VectorXd Hx = HV.leftCols(cols) * s0;
    const double theta = es.eigenvalues()(0);
    Eigen::VectorXd r = Hx - theta * x;
    best = {theta, x, r.norm()};
    if (best.residual <= opt.tol * hnorm) {
      const double nx = x.norm();
      best.vector /= nx;
      return best;
    }
    const Eigen::Index k = std::min(keep, cols);
    const Eigen::MatrixXd S = es.eigenvectors().leftCols(k);
    const Eigen::MatrixXd Vk = V.leftCols(cols) * S;
    const Eigen::MatrixXd HVk = HV.leftCols(cols) * S;
    V.leftCols(k) = Vk;
    HV.leftCols(k) = HVk;
    cols = k;
    // continue from the residual direction of the lowest Ritz pair
    for (int pass = 0; pass < 2; ++pass) {
      project_out(locked, r);
      r -= V.leftCols(cols) * (V.leftCols(cols).transpose() * r);
    }
    const double rn = r.norm();
    if (rn < 1e-14 * hnorm || cols >= m) continue;
    V.col(cols) = r / rn;
    HV.col(cols) = apply(V.col(cols));
    ++cols;
  }
  throw std::runtime_error("lanczos: no convergence (residual " + std::to_string(best.residual) + ")");
}

}  // namespace

SpectralReport diagonalize(const SparseHamiltonian& H, const DiagOptions& opt) {
  SpectralReport rep;
  const auto n = H.dim();
  const double hnorm = std::max(H.norm_inf(), 1e-300);
  if (n <= opt.dense_cap && !opt.force_iterative) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(H));
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    const auto& ev = es.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    rep.E0 = ev(0);
    rep.gap = n > 1 ? ev(1) - ev(0) : 0.0;
    rep.psi0 = es.eigenvectors().col(0);
    rep.dense = true;
  } else {
    std::vector<Eigen::VectorXd> locked;
    const int nev = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.nev, 1)), n));
    for (int j = 0; j < nev; ++j) {
      auto p = lanczos_lowest(H, locked, opt, hnorm, 0x5eedULL + static_cast<std::uint64_t>(j));
      rep.eigenvalues.push_back(p.value);
      locked.push_back(std::move(p.vector));
    }
    // Deflated pairs come out in order only approximately; sort values and
    // keep the vector of the smallest.
    const auto lowest = std::min_element(rep.eigenvalues.begin(), rep.eigenvalues.end()) - rep.eigenvalues.begin();
    rep.psi0 = locked[static_cast<std::size_t>(lowest)];
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    rep.E0 = rep.eigenvalues.front();
    rep.gap = rep.eigenvalues.size() > 1 ? rep.eigenvalues[1] - rep.eigenvalues[0] : 0.0;
    rep.dense = false;
  }
  fix_sign(rep.psi0);
  Eigen::VectorXd Hx(static_cast<Eigen::Index>(n));
  H.apply({rep.psi0.data(), n}, {Hx.data(), n});
  rep.residual = (Hx - rep.E0 * rep.psi0).norm();
  return rep;
}

GapScan gap_along_schedule(const HamiltonianPath& path, int samples, const DiagOptions& opt) {
  if (samples < 2) throw std::invalid_argument("gap scan needs at least two samples");
  GapScan scan;
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double u = static_cast<double>(i) / (samples - 1);
    const auto rep = diagonalize(path(u), opt);
    scan.samples.push_back({u, rep.E0, rep.gap});
    if (rep.gap < scan.min_gap) {
      scan.min_gap = rep.gap;
      scan.argmin_u = u;
    }
  }
  return scan;
}

}  // namespace wlqmc
