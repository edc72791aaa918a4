#pragma once

#include <vector>

#include "wlqmc/hamiltonian.hpp"

namespace wlqmc {

enum class Boundary { periodic, open };

// Worldline c_1..c_K. Periodic trajectories close with c_{K+1} = c_1.
struct Trajectory {
  std::vector<Index> slices;
  Boundary boundary = Boundary::periodic;

  std::size_t K() const { return slices.size(); }
  std::size_t links() const { return boundary == Boundary::periodic ? K() : K() - 1; }

  static Trajectory constant(Index c, std::size_t K, Boundary b = Boundary::periodic) {
    return {std::vector<Index>(K, c), b};
  }
};

}  // namespace wlqmc
