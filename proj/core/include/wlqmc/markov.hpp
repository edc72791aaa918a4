#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "wlqmc/hamiltonian.hpp"
#include "wlqmc/trajectory.hpp"

namespace wlqmc {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kDefaultLambda = 40.0;

// Continuous-time chain with rates T_dc = J_dc exp(-(E_d - E_c)/2).
struct MarkovSpec {
  std::vector<double> E;
  SparseMatrix J;  // symmetric, nonnegative, zero diagonal
  double Lambda = kDefaultLambda;
};

// Columns sum to zero. Throws on an asymmetric or negative J.
SparseMatrix markov_generator(const MarkovSpec& spec);

// L = exp(E/2) T exp(-E/2) and H = -L. When the dimension is at most
// `check_cap`, the spectra of T and -H are compared and a mismatch beyond
// `tol` throws.
struct Symmetrized {
  SparseMatrix L;
  SparseMatrix H;
};
Symmetrized symmetrize(const SparseMatrix& T, const std::vector<double>& E, double tol = 1e-9,
                       std::size_t check_cap = 512);

// Trajectory-space chain for single-slice updates: one state per trajectory
// (slice 0 is the least significant base-d digit), E = sum over links of
// -log(link weight) with Lambda standing in for zero weights, and J = 1
// between trajectories that differ on one slice by an H-adjacent move.
MarkovSpec qmc_markov_spec(const SparseHamiltonian& H, double beta, std::size_t K,
                           double Lambda = kDefaultLambda, Boundary boundary = Boundary::periodic);

std::size_t trajectory_index(const Trajectory& traj, std::size_t d);
Trajectory trajectory_at(std::size_t index, std::size_t d, std::size_t K,
                         Boundary boundary = Boundary::periodic);

// Projection of the trajectory-chain H onto the states |c_1> (c_1 fixed, the
// other slices summed with amplitude exp(-E/2)), and the comparison matrix
// built from C times the quantum off-diagonals.
struct CoarseGrain {
  Eigen::MatrixXd Jt;      // J~(c', c)
  Eigen::VectorXd Z;       // Z(c_1), normalized to unit sum
  Eigen::MatrixXd Ht;      // H~
  Eigen::MatrixXd Htp;     // H~'
  double C = 0.0;
  double E0 = 0.0;
  double Delta = 0.0;
  double defect = 0.0;     // max |H~' - C (H_quantum - E0)|
};

// Transfer-matrix evaluation; any K >= 3.
CoarseGrain coarse_grain(const SparseHamiltonian& H_quantum, double beta, std::size_t K,
                         double Lambda = kDefaultLambda);
// Same quantities by summing over every trajectory; d^K <= 10^6.
CoarseGrain coarse_grain_enumerated(const SparseHamiltonian& H_quantum, double beta, std::size_t K,
                                    double Lambda = kDefaultLambda);

}  // namespace wlqmc
