#include "wlqmc/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlqmc/qmc.hpp"
#include "wlqmc/spectral.hpp"

namespace wlqmc {

SparseMatrix markov_generator(const MarkovSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.E.size());
  if (spec.J.rows() != n || spec.J.cols() != n) throw std::invalid_argument("J and E sizes differ");
  SparseMatrix Jt = spec.J.transpose();
  if ((spec.J - Jt).norm() > 1e-12 * std::max(1.0, spec.J.norm())) throw std::invalid_argument("J is not symmetric");

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (SparseMatrix::InnerIterator it(spec.J, c); it; ++it) {
      const auto d = it.row();
      if (d == c) {
        if (it.value() != 0.0) throw std::invalid_argument("J has a nonzero diagonal");
        continue;
      }
      if (it.value() < 0) throw std::invalid_argument("J has a negative entry");
      const double rate =
          it.value() * std::exp(-(spec.E[static_cast<std::size_t>(d)] - spec.E[static_cast<std::size_t>(c)]) / 2);
      trip.emplace_back(d, c, rate);
      out[static_cast<std::size_t>(c)] += rate;
    }
  }
  for (Eigen::Index c = 0; c < n; ++c) trip.emplace_back(c, c, -out[static_cast<std::size_t>(c)]);
  SparseMatrix T(n, n);
  T.setFromTriplets(trip.begin(), trip.end());
  return T;
}

Symmetrized symmetrize(const SparseMatrix& T, const std::vector<double>& E, double tol, std::size_t check_cap) {
  const auto n = T.rows();
  if (T.cols() != n || static_cast<Eigen::Index>(E.size()) != n) throw std::invalid_argument("size mismatch");
  Symmetrized s;
  s.L = T;
  for (Eigen::Index c = 0; c < s.L.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(s.L, c); it; ++it)
      if (it.row() != c)
        it.valueRef() *= std::exp((E[static_cast<std::size_t>(it.row())] - E[static_cast<std::size_t>(c)]) / 2);
  s.H = -s.L;

  if (static_cast<std::size_t>(n) <= check_cap) {
    Eigen::MatrixXd Td(T);
    Eigen::EigenSolver<Eigen::MatrixXd> et(Td, false);
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = et.eigenvalues()(i).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(Eigen::MatrixXd(s.H), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = -eh.eigenvalues()(i);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double scale = std::max(1.0, Td.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > tol * scale) throw std::runtime_error("symmetrize: spectrum mismatch");
  }
  return s;
}

std::size_t trajectory_index(const Trajectory& traj, std::size_t d) {
  std::size_t idx = 0;
  for (std::size_t i = traj.K(); i-- > 0;) idx = idx * d + static_cast<std::size_t>(traj.slices[i]);
  return idx;
}

Trajectory trajectory_at(std::size_t index, std::size_t d, std::size_t K, Boundary boundary) {
  Trajectory t{std::vector<Index>(K), boundary};
  for (std::size_t i = 0; i < K; ++i) {
    t.slices[i] = static_cast<Index>(index % d);
    index /= d;
  }
  return t;
}

namespace {

std::size_t checked_count(std::size_t d, std::size_t K, std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < K; ++i) {
    if (n > cap / d) throw std::invalid_argument("trajectory space larger than " + std::to_string(cap));
    n *= d;
  }
  return n;
}

constexpr std::size_t kEnumerationCap = 1000000;

// Link transfer matrix with Lambda substituted for forbidden links.
Eigen::MatrixXd link_matrix(const SparseHamiltonian& H, double beta, std::size_t K, double Lambda) {
  const LinkTable table(H, beta, K);
  const auto d = static_cast<Eigen::Index>(H.dim());
  Eigen::MatrixXd T(d, d);
  const double floor = std::exp(-Lambda);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const double w = table.weight(static_cast<Index>(b), static_cast<Index>(a));
      T(a, b) = w > 0 ? w : floor;
    }
  return T;
}

void finish(CoarseGrain& cg, const SparseHamiltonian& Hq, const Eigen::VectorXd& Zraw) {
  const auto d = static_cast<Eigen::Index>(Hq.dim());
  const Eigen::MatrixXd Hd = to_dense(Hq);
  cg.Z = Zraw / Zraw.sum();
  cg.Ht = -cg.Jt;
  cg.C = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    cg.Ht(c, c) = 0.0;
    for (Eigen::Index e = 0; e < d; ++e) {
      if (e == c) continue;
      cg.Ht(c, c) += cg.Jt(e, c) * std::sqrt(cg.Z(e) / cg.Z(c));
      if (Hd(e, c) != 0.0) cg.C = std::max(cg.C, cg.Jt(e, c) / -Hd(e, c));
    }
  }
  cg.Htp = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index e = 0; e < d; ++e) {
      if (e == c) continue;
      cg.Htp(e, c) = cg.C * Hd(e, c);
      cg.Htp(c, c) -= cg.C * Hd(e, c) * std::sqrt(cg.Z(e) / cg.Z(c));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hd, Eigen::EigenvaluesOnly);
  cg.E0 = es.eigenvalues()(0);
  cg.Delta = d > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;
  const Eigen::MatrixXd ref = cg.C * (Hd - cg.E0 * Eigen::MatrixXd::Identity(d, d));
  cg.defect = (cg.Htp - ref).cwiseAbs().maxCoeff();
}

}  // namespace

MarkovSpec qmc_markov_spec(const SparseHamiltonian& H, double beta, std::size_t K, double Lambda,
                           Boundary boundary) {
  if (K < 2) throw std::invalid_argument("need K >= 2");
  const std::size_t d = H.dim();
  const std::size_t n = checked_count(d, K, kEnumerationCap);
  const LinkTable table(H, beta, K);
  MarkovSpec spec;
  spec.Lambda = Lambda;
  spec.E.resize(n);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<std::size_t> stride(K, 1);
  for (std::size_t i = 1; i < K; ++i) stride[i] = stride[i - 1] * d;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Trajectory t = trajectory_at(idx, d, K, boundary);
    double E = 0.0;
    for (std::size_t i = 0; i < t.links(); ++i) {
      const double w = table.weight(t.slices[i], t.slices[(i + 1) % K]);
      E += w > 0 ? -std::log(w) : Lambda;
    }
    spec.E[idx] = E;
    for (std::size_t i = 0; i < K; ++i) {
      const Index c = t.slices[i];
      for (Index e : H.neighbors(c)) {
        const auto other = idx + stride[i] * static_cast<std::size_t>(e) - stride[i] * static_cast<std::size_t>(c);
        trip.emplace_back(static_cast<Eigen::Index>(other), static_cast<Eigen::Index>(idx), 1.0);
      }
    }
  }
  spec.J.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  spec.J.setFromTriplets(trip.begin(), trip.end());
  return spec;
}

CoarseGrain coarse_grain(const SparseHamiltonian& Hq, double beta, std::size_t K, double Lambda) {
  if (K < 3) throw std::invalid_argument("coarse_grain needs K >= 3");
  const auto d = static_cast<Eigen::Index>(Hq.dim());
  const Eigen::MatrixXd T = link_matrix(Hq, beta, K, Lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  auto power = [&](std::size_t p) {
    Eigen::VectorXd f = es.eigenvalues().unaryExpr([&](double x) { return std::pow(x, static_cast<double>(p)); });
    return Eigen::MatrixXd(es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose());
  };
  const Eigen::MatrixXd TK = power(K);
  const Eigen::MatrixXd Tm = power(K - 2);
  const Eigen::VectorXd Zraw = TK.diagonal();

  CoarseGrain cg;
  cg.Jt = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Index e : Hq.neighbors(static_cast<Index>(c))) {
      // a(x) = sqrt(T(x,c) T(x,e)) weights both the c_2 and the c_K link.
      const Eigen::VectorXd a = (T.col(c).cwiseProduct(T.col(e))).cwiseSqrt();
      cg.Jt(e, c) = a.dot(Tm * a) / std::sqrt(Zraw(c) * Zraw(e));
    }
  finish(cg, Hq, Zraw);
  return cg;
}

CoarseGrain coarse_grain_enumerated(const SparseHamiltonian& Hq, double beta, std::size_t K, double Lambda) {
  if (K < 3) throw std::invalid_argument("coarse_grain needs K >= 3");
  const std::size_t d = Hq.dim();
  const std::size_t rest = checked_count(d, K - 1, kEnumerationCap);
  const Eigen::MatrixXd T = link_matrix(Hq, beta, K, Lambda);
  const auto dd = static_cast<Eigen::Index>(d);

  CoarseGrain cg;
  cg.Jt = Eigen::MatrixXd::Zero(dd, dd);
  Eigen::VectorXd Zraw = Eigen::VectorXd::Zero(dd);
  Eigen::VectorXd w(dd);
  std::vector<Index> s(K);
  for (std::size_t r = 0; r < rest; ++r) {
    std::size_t x = r;
    for (std::size_t i = 1; i < K; ++i) {
      s[i] = static_cast<Index>(x % d);
      x /= d;
    }
    double mid = 1.0;
    for (std::size_t i = 1; i + 1 < K; ++i) mid *= T(s[i + 1], s[i]);
    for (Eigen::Index c = 0; c < dd; ++c) w(c) = mid * T(s[1], c) * T(c, s[K - 1]);
    Zraw += w;
    for (Eigen::Index c = 0; c < dd; ++c)
      for (Index e : Hq.neighbors(static_cast<Index>(c))) cg.Jt(e, c) += std::sqrt(w(c) * w(e));
  }
  for (Eigen::Index c = 0; c < dd; ++c)
    for (Eigen::Index e = 0; e < dd; ++e) cg.Jt(e, c) /= std::sqrt(Zraw(c) * Zraw(e));
  finish(cg, Hq, Zraw);
  return cg;
}

}  // namespace wlqmc
