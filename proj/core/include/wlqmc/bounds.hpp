#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace wlqmc {

// Throws std::invalid_argument unless P is symmetric and idempotent to tol.
void require_projector(const Eigen::MatrixXd& P, double tol = 1e-10);

// Smallest eigenvalue of x P1 + P2 - (x/(1+x)) (1-P1) P2 (1-P1), 0 <= x <= 1.
double projector_inequality_check(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2, double x);

// The two alpha forms that follow from the same inequality:
//   weight 1:   P1 + P2 - alpha P1 - (1-alpha)/(2-alpha) (1-P1) P2 (1-P1)
//   weight 1/2: P1/2 + P2 - alpha/2 P1 - (1-alpha)/(3-alpha) (1-P1) P2 (1-P1)
// Returns the smallest eigenvalue.
double projector_inequality_alpha(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2, double alpha,
                                  bool half_weight);

// Closed form of the 2x2 block: determinant / sin^2 = x(1-y) - y cos^2(theta), y = x/(1+x).
double projector_block_bracket(double x, double theta);

// Range projector of a PSD matrix (eigenvalues above tol).
Eigen::MatrixXd range_projector(const Eigen::MatrixXd& A, double tol = 1e-10);

// Smallest eigenvalue above tol, or 0 if there is none.
double smallest_nonzero_eigenvalue(const Eigen::MatrixXd& A, double tol = 1e-10);

// Rank-`rank` orthogonal projector onto the span of Gaussian vectors.
Eigen::MatrixXd random_projector(int dim, int rank, std::mt19937_64& rng);

// Embeds a d^2 x d^2 operator on sites (i, i+1 mod sites) of a periodic
// chain of d-level sites.
Eigen::MatrixXd embed_two_site(const Eigen::MatrixXd& local, int d, int sites, int i);

// Term i is a random projector of rank 1..d^2-1 on sites (i, i+1).
std::vector<Eigen::MatrixXd> random_projector_chain(int sites, int d, std::mt19937_64& rng);

struct RenormLevel {
  std::size_t sites = 0;
  std::size_t dim = 0;
  double lambda0 = 0.0;
};

struct RenormBound {
  double bound = 0.0;
  std::vector<RenormLevel> levels;
};

// Lower bound on the smallest nonzero eigenvalue of sum_i terms[i] for PSD
// terms on a periodic chain with [T_i, T_j] = 0 whenever the periodic
// distance exceeds 1. Each level replaces the terms by lambda0 times their
// range projectors P_i, then uses
//   sum P_i >= (alpha/4) sum_even P_i + (1-alpha)/(3-alpha) sum_even Q_i Q_{i+2} P_{i+1} Q_{i+2} Q_i
// and recurses on the second sum inside the joint zero space of the even
// P_i. A chain of fewer than 4 or an odd number of sites is solved exactly.
RenormBound renormalize_bound(const std::vector<Eigen::MatrixXd>& terms, double alpha, double tol = 1e-9);

// Toy model on an 8-point circle (step pi/4): a link has weight 1 if the
// circular distance between neighbors is at most cutoff * pi, else 0.
struct ToyArcReport {
  double weight_forward = 0.0;   // 0, pi/4, pi/2, ... (closed after 8 slices)
  double weight_backward = 0.0;  // 0, -pi/4, -pi/2, ...
  bool connected = false;        // window c_1..c_5 with c_1 = 0, c_5 = pi fixed
  double J_tilde = 0.0;          // J~(c_3 = pi/2 <-> c_3 = -pi/2 | c_1 = 0, c_5 = pi)
};

ToyArcReport toy_arc_model(double cutoff_over_pi);

}  // namespace wlqmc
