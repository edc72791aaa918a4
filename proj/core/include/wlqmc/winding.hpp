#pragma once

#include <cstdint>
#include <vector>

#include "wlqmc/hamiltonian.hpp"
#include "wlqmc/topology.hpp"

namespace wlqmc {

// Distribution over winding numbers n in [-n_max, n_max].
struct WindingLaw {
  int n_max = 0;
  std::vector<double> p;  // p[n + n_max]

  double prob(std::int64_t n) const;
  double mean() const;
  double variance() const;
};

// p_n proportional to exp(-m r_min^2 (2 pi n)^2 / (2 beta)); n_max is chosen so
// the truncated mass is below `tail`.
WindingLaw equilibrium_winding_law(double m, double r_min, double beta, double tail = 1e-12);

// Exact winding distribution of periodic K-slice trajectories on a ring, by
// propagating the link transfer matrix on the lifted line from every start.
WindingLaw exact_winding_distribution(const SparseHamiltonian& H, const Geometry& ring, double beta,
                                      std::size_t K, double tail = 1e-12);

WindingLaw empirical_winding(const std::vector<std::int64_t>& samples);

// 1/2 sum |p - q| over the union of supports.
double total_variation(const WindingLaw& a, const WindingLaw& b);

struct Instanton {
  double tau = 0.0;
  double action = 0.0;
};

// m R^2 n^2 / tau + h tau R
double instanton_action(double n, double R, double m, double h, double tau);
// tau* = n sqrt(R m / h), action 2 n sqrt(m R^3 h). Throws for h <= 0.
Instanton instanton_time(double n, double R, double m, double h);

}  // namespace wlqmc
