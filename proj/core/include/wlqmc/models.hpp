#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wlqmc/hamiltonian.hpp"
#include "wlqmc/schedule.hpp"
#include "wlqmc/topology.hpp"

namespace wlqmc {

// A built family instance: the operator plus what downstream code needs to
// interpret its states.
struct Model {
  std::string family;
  ParameterSet params;
  SparseHamiltonian H;
  Geometry geometry;
  std::map<std::string, std::vector<Index>> marks;
  std::map<std::string, double> certificates;
  std::uint64_t seed = 0;

  const std::vector<Index>& mark(const std::string& name) const;
  Index state(const std::string& mark_name) const;  // first state of a mark
};

struct LatticeParams {
  double R = 3.0;
  double a = 0.05;
};

struct RogueParams {
  double t = 0.0;
  double E = 0.0;
  double h = 0.0;
  double inv_m = 1.0;
};

struct ExpanderParams {
  int N_G = 64;
  int degree = 4;
  double V = 0.0;
  double t_prime = 0.0;
  std::uint64_t seed = 1;
};

struct GadgetParams {
  int N = 8;
  int R = 2;
  double J_AF = 2.0;
  // NaN selects h_global = 2 J_AF (N - 2R), which puts the minimum of
  // J_AF (sum S)^2 + h sum S at N_up = R.
  double h_global = std::numeric_limits<double>::quiet_NaN();
  double J_prime = -0.25;
  double B = 0.02;
  std::vector<double> h_i;
};

inline constexpr std::size_t kDefaultStateCap = 1u << 16;

Model build_tilted_double_well(double m, double mu, double h, const LatticeParams& lattice);
Model build_mexican_hat(double m, double mu, double g, double h, const LatticeParams& lattice,
                        std::size_t state_cap = kDefaultStateCap);
// m may be +infinity (no hopping).
Model build_circle(double m, double r_min, double h, int M);
Model build_bouquet(int M, double h = 0.0, double inv_m = 1.0);
Model build_bouquet_rogue(int M, const RogueParams& r);
Model build_bouquet_expander(int M, const RogueParams& r, const ExpanderParams& e);
Model build_presentation_hamiltonian(const Presentation& pres, int M_sub, const RogueParams& r);
Model build_ising_ring_gadget(const GadgetParams& g);

// Truncated Laplacian of the 4-regular tree with every edge subdivided into
// M segments. `dirichlet` keeps the infinite-tree degree on the frontier;
// `matched` closes each frontier vertex with the exact self-energy of its
// missing subtrees at the bottom of the infinite spectrum, so the truncated
// operator stays above that bottom and converges to it from above.
enum class TreeBoundary { dirichlet, matched };
Model build_tree_cover(int M, int depth, TreeBoundary boundary = TreeBoundary::matched,
                       std::size_t state_cap = kDefaultStateCap);

// Bottom of the spectrum of the infinite subdivided 4-regular tree.
double tree_cover_bottom(int M);

// Random connected d-regular simple graph, edges (i<j). The seed actually
// used (after resampling) is written to *used_seed.
std::vector<std::pair<int, int>> random_regular_graph(int n, int degree, std::uint64_t seed,
                                                      std::uint64_t* used_seed = nullptr);

// Sidecar metadata: family, params, seed, marks and labels as key=value.
void write_metadata(std::ostream& out, const Model& model);

}  // namespace wlqmc
