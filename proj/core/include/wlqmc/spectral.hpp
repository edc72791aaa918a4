#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wlqmc/hamiltonian.hpp"

namespace wlqmc {

struct SpectralReport {
  double E0 = 0.0;
  double gap = 0.0;
  Eigen::VectorXd psi0;              // unit norm, sign fixed so that sum >= 0
  std::vector<double> eigenvalues;   // ascending; all of them on the dense path
  double residual = 0.0;             // ||H psi0 - E0 psi0||
  bool dense = true;
};

struct DiagOptions {
  std::size_t dense_cap = 4096;
  int nev = 2;              // eigenpairs resolved on the iterative path
  double tol = 1e-9;        // residual target relative to ||H||_inf
  int krylov = 120;         // Lanczos basis size per restart
  int max_restarts = 400;
  bool force_iterative = false;
};

Eigen::MatrixXd to_dense(const SparseHamiltonian& H);
SpectralReport diagonalize(const SparseHamiltonian& H, const DiagOptions& opt = {});

struct GapSample {
  double u = 0.0;
  double E0 = 0.0;
  double gap = 0.0;
};

struct GapScan {
  std::vector<GapSample> samples;
  double min_gap = 0.0;
  double argmin_u = 0.0;
};

using HamiltonianPath = std::function<SparseHamiltonian(double u)>;

// samples >= 2 evenly spaced points including both ends.
GapScan gap_along_schedule(const HamiltonianPath& path, int samples, const DiagOptions& opt = {});

}  // namespace wlqmc
