#include "wlqmc/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

namespace wlqmc {

namespace {

double min_eig(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

void require_projector(const Eigen::MatrixXd& P, double tol) {
  if (P.rows() != P.cols()) throw std::invalid_argument("projector must be square");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("projector is not symmetric");
  if ((P * P - P).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("projector is not idempotent");
}

double projector_inequality_check(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2, double x) {
  require_projector(P1);
  require_projector(P2);
  if (P1.rows() != P2.rows()) throw std::invalid_argument("projector sizes differ");
  if (x < 0 || x > 1) throw std::invalid_argument("x must lie in [0,1]");
  const auto n = P1.rows();
  const Eigen::MatrixXd Q1 = Eigen::MatrixXd::Identity(n, n) - P1;
  return min_eig(x * P1 + P2 - x / (1 + x) * Q1 * P2 * Q1);
}

double projector_inequality_alpha(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2, double alpha,
                                  bool half_weight) {
  require_projector(P1);
  require_projector(P2);
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
  const auto n = P1.rows();
  const Eigen::MatrixXd Q1 = Eigen::MatrixXd::Identity(n, n) - P1;
  const double w = half_weight ? 0.5 : 1.0;
  const double c = half_weight ? (1 - alpha) / (3 - alpha) : (1 - alpha) / (2 - alpha);
  return min_eig(w * P1 + P2 - w * alpha * P1 - c * Q1 * P2 * Q1);
}

double projector_block_bracket(double x, double theta) {
  const double y = x / (1 + x);
  const double c2 = std::cos(theta) * std::cos(theta);
  return x * (1 - y) - y * c2;
}

Eigen::MatrixXd range_projector(const Eigen::MatrixXd& A, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  const auto& V = es.eigenvectors();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  for (Eigen::Index k = 0; k < A.rows(); ++k)
    if (es.eigenvalues()(k) > tol) P += V.col(k) * V.col(k).transpose();
  return P;
}

namespace {

std::optional<double> nonzero_min(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() == 0) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  for (Eigen::Index k = 0; k < A.rows(); ++k)
    if (es.eigenvalues()(k) > tol) return es.eigenvalues()(k);
  return std::nullopt;
}

std::size_t periodic_distance(std::size_t i, std::size_t j, std::size_t K) {
  const std::size_t d = i > j ? i - j : j - i;
  return std::min(d, K - d);
}

// nullopt: the chain has no nonzero eigenvalue at all.
std::optional<double> recurse(const std::vector<Eigen::MatrixXd>& terms, double alpha, double tol,
                              std::vector<RenormLevel>& levels) {
  const std::size_t K = terms.size();
  const auto n = terms.front().rows();
  RenormLevel level{K, static_cast<std::size_t>(n), 0.0};

  std::optional<double> lambda0;
  for (const auto& T : terms) {
    auto v = nonzero_min(T, tol);
    if (v && (!lambda0 || *v < *lambda0)) lambda0 = v;
  }
  level.lambda0 = lambda0.value_or(0.0);
  levels.push_back(level);
  if (!lambda0) return std::nullopt;

  if (K < 4 || K % 2 != 0) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (const auto& T : terms) S += T;
    return nonzero_min(S, tol);
  }

  std::vector<Eigen::MatrixXd> P;
  P.reserve(K);
  for (const auto& T : terms) P.push_back(range_projector(T, tol));

  // Joint zero space of the even projectors.
  Eigen::MatrixXd Qe = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < K; i += 2) Qe = Qe * (Eigen::MatrixXd::Identity(n, n) - P[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Qe + Qe.transpose()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
  Eigen::MatrixXd B(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) B.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);

  const double even_part = alpha / 4;
  const double c = (1 - alpha) / (3 - alpha);
  std::optional<double> sub;
  if (B.cols() > 0) {
    // On the joint zero space every even Q acts as the identity, so
    // Q_i Q_{i+2} P_{i+1} Q_{i+2} Q_i reduces to B^T P_{i+1} B.
    std::vector<Eigen::MatrixXd> next;
    for (std::size_t i = 0; i < K; i += 2) next.push_back(B.transpose() * P[i + 1] * B);
    sub = recurse(next, alpha, tol, levels);
  }
  const double inner = sub ? std::min(even_part, c * *sub) : even_part;
  return *lambda0 * inner;
}

}  // namespace

Eigen::MatrixXd random_projector(int dim, int rank, std::mt19937_64& rng) {
  if (dim < 1 || rank < 0 || rank > dim) throw std::invalid_argument("bad projector shape");
  if (rank == 0) return Eigen::MatrixXd::Zero(dim, dim);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd A(dim, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < dim; ++i) A(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
  return Q * Q.transpose();
}

Eigen::MatrixXd embed_two_site(const Eigen::MatrixXd& local, int d, int sites, int i) {
  const int dd = d * d;
  if (local.rows() != dd || local.cols() != dd) throw std::invalid_argument("local operator must be d^2 x d^2");
  if (sites < 2 || i < 0 || i >= sites) throw std::invalid_argument("bad site index");
  const int j = (i + 1) % sites;
  Eigen::Index n = 1;
  for (int s = 0; s < sites; ++s) n *= d;
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(sites), 1);
  for (int s = 1; s < sites; ++s) stride[static_cast<std::size_t>(s)] = stride[static_cast<std::size_t>(s - 1)] * d;
  const Eigen::Index si = stride[static_cast<std::size_t>(i)], sj = stride[static_cast<std::size_t>(j)];
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Eigen::Index ai = (a / si) % d, aj = (a / sj) % d;
    const Eigen::Index rest = a - ai * si - aj * sj;
    for (Eigen::Index bi = 0; bi < d; ++bi)
      for (Eigen::Index bj = 0; bj < d; ++bj) out(a, rest + bi * si + bj * sj) = local(ai * d + aj, bi * d + bj);
  }
  return out;
}

std::vector<Eigen::MatrixXd> random_projector_chain(int sites, int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, d * d - 1);
  std::vector<Eigen::MatrixXd> terms;
  for (int i = 0; i < sites; ++i) terms.push_back(embed_two_site(random_projector(d * d, rank(rng), rng), d, sites, i));
  return terms;
}

double smallest_nonzero_eigenvalue(const Eigen::MatrixXd& A, double tol) { return nonzero_min(A, tol).value_or(0.0); }

RenormBound renormalize_bound(const std::vector<Eigen::MatrixXd>& terms, double alpha, double tol) {
  const std::size_t K = terms.size();
  if (K == 0 || K % 2 != 0) throw std::invalid_argument("renormalize_bound needs an even number of terms");
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
  const auto n = terms.front().rows();
  double scale = 1.0;
  for (const auto& T : terms) {
    if (T.rows() != n || T.cols() != n) throw std::invalid_argument("terms differ in size");
    scale = std::max(scale, T.cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j)
      if (periodic_distance(i, j, K) > 1 &&
          (terms[i] * terms[j] - terms[j] * terms[i]).cwiseAbs().maxCoeff() > tol * scale * scale)
        throw std::invalid_argument("terms " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
  RenormBound out;
  out.bound = recurse(terms, alpha, tol, out.levels).value_or(0.0);
  return out;
}

ToyArcReport toy_arc_model(double cutoff_over_pi) {
  constexpr int G = 8;  // grid points, step pi/4
  auto w = [&](int a, int b) {
    int d = ((a - b) % G + G) % G;
    d = std::min(d, G - d);
    return d / 4.0 <= cutoff_over_pi + 1e-12 ? 1.0 : 0.0;
  };
  ToyArcReport rep;
  rep.weight_forward = rep.weight_backward = 1.0;
  for (int k = 0; k < G; ++k) {
    rep.weight_forward *= w(k, (k + 1) % G);
    rep.weight_backward *= w((G - k) % G, (G - k - 1) % G);
  }

  const int c1 = 0, c5 = 4;
  auto valid = [&](int c2, int c3, int c4) { return w(c1, c2) * w(c2, c3) * w(c3, c4) * w(c4, c5) > 0; };
  auto code = [&](int c2, int c3, int c4) { return (c2 * G + c3) * G + c4; };
  std::vector<char> seen(G * G * G, 0);
  std::queue<std::array<int, 3>> q;
  q.push({1, 2, 3});
  seen[static_cast<std::size_t>(code(1, 2, 3))] = 1;
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    for (int slot = 0; slot < 3; ++slot)
      for (int v = 0; v < G; ++v) {
        auto t = s;
        t[static_cast<std::size_t>(slot)] = v;
        const auto k = static_cast<std::size_t>(code(t[0], t[1], t[2]));
        if (!seen[k] && valid(t[0], t[1], t[2])) {
          seen[k] = 1;
          q.push(t);
        }
      }
  }
  rep.connected = seen[static_cast<std::size_t>(code(7, 6, 5))] != 0;

  const int a = 2, b = 6;  // c_3 = pi/2 and -pi/2
  auto Z2 = [&](int c3) {
    double z = 0;
    for (int c2 = 0; c2 < G; ++c2) z += w(c1, c2) * w(c2, c3);
    return z;
  };
  auto Z4 = [&](int c3) {
    double z = 0;
    for (int c4 = 0; c4 < G; ++c4) z += w(c3, c4) * w(c4, c5);
    return z;
  };
  double sum = 0;
  for (int c2 = 0; c2 < G; ++c2)
    for (int c4 = 0; c4 < G; ++c4)
      sum += w(c1, c2) * std::sqrt(w(c2, a) * w(c2, b)) * w(c4, c5) * std::sqrt(w(a, c4) * w(b, c4));
  const double norm = std::sqrt(Z2(a) * Z4(a) * Z2(b) * Z4(b));
  rep.J_tilde = norm > 0 ? sum / norm : 0.0;
  return rep;
}

}  // namespace wlqmc
