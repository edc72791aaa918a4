#include "wlqmc/models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>

namespace wlqmc {

const std::vector<Index>& Model::mark(const std::string& name) const {
  auto it = marks.find(name);
  if (it == marks.end()) throw std::out_of_range("model " + family + " has no mark " + name);
  return it->second;
}

Index Model::state(const std::string& mark_name) const { return mark(mark_name).front(); }

namespace {

double hopping_scale(double m) {
  if (std::isinf(m) && m > 0) return 0.0;
  if (!(m > 0)) throw std::invalid_argument("mass must be positive");
  return 1.0 / m;
}

void check_lattice(const LatticeParams& l) {
  if (!(l.a > 0) || !(l.R > 0)) throw std::invalid_argument("lattice needs a > 0 and R > 0");
  const double ratio = l.R / l.a;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("lattice needs R/a integral");
}

// Throws if the minimum of v is attained more than once.
void assert_unique_minimum(const std::vector<double>& v, const char* family) {
  const double mn = *std::min_element(v.begin(), v.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(mn));
  const auto ties = std::count_if(v.begin(), v.end(), [&](double x) { return x - mn <= tol; });
  if (ties > 1)
    throw std::invalid_argument(std::string(family) + ": grid points tie for the potential minimum");
}

// Subdivided bouquet Laplacian scaled by `scale`, at indices offset...
void skeleton_laplacian(std::vector<Triplet>& t, int loops, int M, double scale, Index offset) {
  const Geometry g = Geometry::skeleton(loops, M, offset);
  t.push_back({offset, offset, scale * 2.0 * loops});
  for (int l = 0; l < loops; ++l) {
    for (int j = 1; j < M; ++j) {
      const Index s = g.state(l, j);
      t.push_back({s, s, 2.0 * scale});
      t.push_back({s, g.state(l, j - 1), -scale});
    }
    t.push_back({offset, g.state(l, M - 1), -scale});
  }
}

std::vector<std::string> skeleton_labels(int loops, int M) {
  std::vector<std::string> labels{"0"};
  for (int l = 0; l < loops; ++l)
    for (int j = 1; j < M; ++j) labels.push_back("g" + std::to_string(l + 1) + ":" + std::to_string(j));
  return labels;
}

std::vector<Index> iota_states(Index b, Index e) {
  std::vector<Index> v;
  for (Index i = b; i < e; ++i) v.push_back(i);
  return v;
}

void check_rogue(const RogueParams& r) {
  if (!(r.t >= 0)) throw std::invalid_argument("rogue tunneling t must be >= 0");
  if (!(r.h >= 0)) throw std::invalid_argument("hub depth h must be >= 0");
  if (!(r.inv_m >= 0)) throw std::invalid_argument("hopping prefactor 1/m must be >= 0");
}

// Skeleton with a rogue state appended at index skeleton size.
Model skeleton_with_rogue(const std::string& family, int loops, int M, const RogueParams& r) {
  check_rogue(r);
  const Geometry g = Geometry::skeleton(loops, M);
  const auto n_sk = static_cast<Index>(g.states());
  const Index rogue = n_sk;
  std::vector<Triplet> t;
  skeleton_laplacian(t, loops, M, r.inv_m, 0);
  t.push_back({0, 0, -r.h});
  t.push_back({rogue, 0, -r.t});
  t.push_back({rogue, rogue, r.E});
  auto labels = skeleton_labels(loops, M);
  labels.push_back("r");

  Model m;
  m.family = family;
  m.params = {{"M", M}, {"t", r.t}, {"E", r.E}, {"h", r.h}, {"inv_m", r.inv_m}};
  m.H = assemble(ConfigSpace(labels), t);
  m.geometry = g;
  m.geometry.splitting = {rogue};
  m.marks["hub"] = {0};
  m.marks["r"] = {rogue};
  m.marks["skeleton"] = iota_states(0, n_sk);
  return m;
}

}  // namespace

Model build_tilted_double_well(double m, double mu, double h, const LatticeParams& lattice) {
  check_lattice(lattice);
  if (lattice.a >= 1.0) throw std::invalid_argument("double well: lattice too coarse (a >= 1)");
  const double tau = hopping_scale(m) / (2.0 * lattice.a * lattice.a);
  const int n = static_cast<int>(std::lround(2.0 * lattice.R / lattice.a)) + 1;
  std::vector<double> V(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = -lattice.R + i * lattice.a;
    V[static_cast<std::size_t>(i)] = mu * x * x + x * x * x * x + h * x;
  }
  if (h != 0.0) assert_unique_minimum(V, "double well");
  const double vmin = *std::min_element(V.begin(), V.end());
  std::vector<Triplet> t;
  Model md;
  md.family = "double-well";
  md.params = {{"m", m}, {"mu", mu}, {"h", h}, {"R", lattice.R}, {"a", lattice.a}};
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, V[static_cast<std::size_t>(i)] - vmin + 2.0 * tau});
    if (i > 0 && tau > 0) t.push_back({i, i - 1, -tau});
    const double x = -lattice.R + i * lattice.a;
    if (x < -1e-12) md.marks["left"].push_back(i);
    if (x > 1e-12) md.marks["right"].push_back(i);
  }
  md.H = assemble(ConfigSpace(static_cast<std::size_t>(n)), t);
  return md;
}

Model build_mexican_hat(double m, double mu, double g, double h, const LatticeParams& lattice,
                        std::size_t state_cap) {
  check_lattice(lattice);
  const double tau = hopping_scale(m) / (2.0 * lattice.a * lattice.a);
  const int n = static_cast<int>(std::lround(2.0 * lattice.R / lattice.a)) + 1;
  const auto states = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (states > state_cap) throw std::invalid_argument("mexican hat: state count exceeds cap");
  std::vector<double> V(states);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = -lattice.R + i * lattice.a, y = -lattice.R + j * lattice.a;
      const double r2 = x * x + y * y;
      V[static_cast<std::size_t>(i + n * j)] = mu * r2 + g * r2 * r2 - h * x;
    }
  if (h != 0.0) assert_unique_minimum(V, "mexican hat");
  const double vmin = *std::min_element(V.begin(), V.end());
  std::vector<Triplet> t;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Index s = i + n * j;
      t.push_back({s, s, V[static_cast<std::size_t>(s)] - vmin + 4.0 * tau});
      if (tau > 0) {
        if (i > 0) t.push_back({s, s - 1, -tau});
        if (j > 0) t.push_back({s, s - n, -tau});
      }
    }
  Model md;
  md.family = "mexican-hat";
  md.params = {{"m", m}, {"mu", mu}, {"g", g}, {"h", h}, {"R", lattice.R}, {"a", lattice.a}};
  md.H = assemble(ConfigSpace(states), t);
  md.marks["grid"] = iota_states(0, static_cast<Index>(states));
  return md;
}

Model build_circle(double m, double r_min, double h, int M) {
  if (M < 3) throw std::invalid_argument("circle needs M >= 3");
  if (!(r_min > 0)) throw std::invalid_argument("circle needs r_min > 0");
  const double a = 2.0 * std::numbers::pi / M;
  const double tau = hopping_scale(m) / (2.0 * r_min * r_min * a * a);
  std::vector<Triplet> t;
  for (int j = 0; j < M; ++j) {
    // -h x restricted to the circle of radius r_min, shifted to vanish at 0.
    const double V = h * r_min * (1.0 - std::cos(a * j));
    t.push_back({j, j, 2.0 * tau + V});
    if (tau > 0) t.push_back({(j + 1) % M, j, -tau});
  }
  Model md;
  md.family = "circle";
  md.params = {{"m", m}, {"r_min", r_min}, {"h", h}, {"M", M}};
  md.H = assemble(ConfigSpace(static_cast<std::size_t>(M)), t);
  md.geometry = Geometry::ring(M);
  md.marks["theta0"] = {0};
  md.marks["ring"] = iota_states(0, M);
  return md;
}

Model build_bouquet(int M, double h, double inv_m) {
  if (M < 3) throw std::invalid_argument("bouquet needs M >= 3");
  if (!(h >= 0) || !(inv_m >= 0)) throw std::invalid_argument("bouquet needs h, 1/m >= 0");
  std::vector<Triplet> t;
  skeleton_laplacian(t, 2, M, inv_m, 0);
  t.push_back({0, 0, -h});
  Model md;
  md.family = "bouquet";
  md.params = {{"M", M}, {"h", h}, {"inv_m", inv_m}};
  md.H = assemble(ConfigSpace(skeleton_labels(2, M)), t);
  md.geometry = Geometry::skeleton(2, M);
  md.marks["hub"] = {0};
  md.marks["skeleton"] = iota_states(0, 2 * M - 1);
  return md;
}

Model build_bouquet_rogue(int M, const RogueParams& r) {
  if (M < 3) throw std::invalid_argument("bouquet needs M >= 3");
  return skeleton_with_rogue("rogue", 2, M, r);
}

Model build_presentation_hamiltonian(const Presentation& pres, int M_sub, const RogueParams& r) {
  if (pres.n_generators < 1) throw std::invalid_argument("unsupported presentation: no generators");
  if (M_sub < 3) throw std::invalid_argument("presentation complex needs M_sub >= 3");
  Model md = skeleton_with_rogue("presentation", pres.n_generators, M_sub, r);
  md.params["generators"] = pres.n_generators;
  return md;
}

std::vector<std::pair<int, int>> random_regular_graph(int n, int degree, std::uint64_t seed,
                                                      std::uint64_t* used_seed) {
  if (degree < 1 || n <= degree || (static_cast<long>(n) * degree) % 2 != 0)
    throw std::invalid_argument("random regular graph: need n > d and n*d even");
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<std::pair<int, int>> edges;
    bool simple = false;
    for (int pairing = 0; pairing < 100000 && !simple; ++pairing) {
      std::vector<int> stubs;
      for (int v = 0; v < n; ++v)
        for (int k = 0; k < degree; ++k) stubs.push_back(v);
      std::shuffle(stubs.begin(), stubs.end(), rng);
      edges.clear();
      simple = true;
      for (std::size_t k = 0; k < stubs.size(); k += 2) {
        int a = stubs[k], b = stubs[k + 1];
        if (a == b) {
          simple = false;
          break;
        }
        edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      if (simple) {
        std::sort(edges.begin(), edges.end());
        simple = std::adjacent_find(edges.begin(), edges.end()) == edges.end();
      }
    }
    if (!simple) continue;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          q.push(w);
        }
    }
    if (count == n) {
      if (used_seed) *used_seed = seed + static_cast<std::uint64_t>(attempt);
      return edges;
    }
  }
  throw std::runtime_error("random regular graph: no connected sample after 100 seeds");
}

Model build_bouquet_expander(int M, const RogueParams& r, const ExpanderParams& e) {
  if (M < 3) throw std::invalid_argument("bouquet needs M >= 3");
  if (e.degree < 3) throw std::invalid_argument("expander degree must be >= 3");
  check_rogue(r);
  std::uint64_t used = e.seed;
  const auto edges = random_regular_graph(e.N_G, e.degree, e.seed, &used);

  Model md = skeleton_with_rogue("expander", 2, M, r);
  const Index rogue = md.state("r");
  const Index g0 = rogue + 1;
  std::vector<Triplet> t = md.H.lower_triplets();
  for (int i = 0; i < e.N_G; ++i) t.push_back({g0 + i, g0 + i, e.degree + e.V});
  for (auto [a, b] : edges) t.push_back({g0 + b, g0 + a, -1.0});
  t.push_back({g0, rogue, -e.t_prime});

  auto labels = md.H.space().labels();
  for (int i = 0; i < e.N_G; ++i) labels.push_back("x" + std::to_string(i + 1));
  md.H = assemble(ConfigSpace(labels), t);
  md.params["N_G"] = e.N_G;
  md.params["degree"] = e.degree;
  md.params["V"] = e.V;
  md.params["t_prime"] = e.t_prime;
  md.seed = used;
  md.marks["expander"] = iota_states(g0, g0 + e.N_G);
  for (Index s : md.marks["expander"]) md.geometry.splitting.push_back(s);

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(e.N_G, e.N_G);
  for (int i = 0; i < e.N_G; ++i) L(i, i) = e.degree;
  for (auto [a, b] : edges) L(a, b) = L(b, a) = -1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  md.certificates["expander_gap"] = es.eigenvalues()(1);
  return md;
}

double tree_cover_bottom(int M) {
  if (M < 1) throw std::invalid_argument("tree cover needs M >= 1");
  // Radial eigenfunction decaying by 1/sqrt(3) per tree level; on each
  // subdivided edge the profile is A cos(kx) + B sin(kx) with eigenvalue
  // 2 - 2cos k. Matching at tree vertices gives f(k) = 0 below.
  const double s3 = std::sqrt(3.0);
  auto f = [&](double k) {
    return 2.0 * std::tan(k / 2) * std::sin(M * k) + 4.0 * std::cos(M * k) - 2.0 * s3;
  };
  double lo = 1e-12, hi = std::numbers::pi / M * (M == 1 ? 0.999999 : 1.0);
  if (f(lo) <= 0 || f(hi) >= 0) throw std::logic_error("tree cover bottom: no bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return 2.0 - 2.0 * std::cos(k);
}

Model build_tree_cover(int M, int depth, TreeBoundary boundary, std::size_t state_cap) {
  if (M < 1) throw std::invalid_argument("tree cover needs M >= 1");
  if (depth < 1) throw std::invalid_argument("tree cover needs depth >= 1");
  // Count: 1 + sum_{k=1..depth} 4*3^{k-1} tree vertices, each non-root one
  // preceded by M-1 subdivision vertices.
  double tree_vertices = 1, level = 4;
  for (int k = 1; k <= depth; ++k, level *= 3) tree_vertices += level;
  const double total = 1 + (tree_vertices - 1) * M;
  if (total > static_cast<double>(state_cap)) throw std::invalid_argument("tree cover: state count exceeds cap");

  double frontier_diag = 4.0;
  if (boundary == TreeBoundary::matched) {
    const double lam = tree_cover_bottom(M);
    const double k = std::acos(1.0 - lam / 2.0);
    const double self = M == 1 ? std::sqrt(3.0)
                               : 3.0 * (std::sin((M - 1) * k) + std::sin(k) / std::sqrt(3.0)) /
                                     std::sin(M * k);
    frontier_diag = 4.0 - self;
  }

  std::vector<Triplet> t;
  std::vector<Index> frontier;
  Index next = 1;
  t.push_back({0, 0, depth == 0 ? frontier_diag : 4.0});
  std::vector<Index> current{0};
  for (int d = 1; d <= depth; ++d) {
    std::vector<Index> children;
    for (Index parent : current) {
      const int branches = parent == 0 ? 4 : 3;
      for (int b = 0; b < branches; ++b) {
        Index prev = parent;
        for (int s = 1; s < M; ++s) {
          t.push_back({next, next, 2.0});
          t.push_back({next, prev, -1.0});
          prev = next++;
        }
        t.push_back({next, next, d == depth ? frontier_diag : 4.0});
        t.push_back({next, prev, -1.0});
        if (d == depth) frontier.push_back(next);
        children.push_back(next++);
      }
    }
    current = std::move(children);
  }
  Model md;
  md.family = "tree-cover";
  md.params = {{"M", M}, {"depth", depth},
               {"matched", boundary == TreeBoundary::matched ? 1.0 : 0.0}};
  md.H = assemble(ConfigSpace(static_cast<std::size_t>(next)), t);
  md.marks["root"] = {0};
  md.marks["frontier"] = std::move(frontier);
  return md;
}

Model build_ising_ring_gadget(const GadgetParams& g) {
  if (g.N < 3 || g.N > 14) throw std::invalid_argument("gadget needs 3 <= N <= 14");
  if (g.R < 1 || g.R >= g.N) throw std::invalid_argument("gadget needs 1 <= R < N");
  if (!g.h_i.empty() && static_cast<int>(g.h_i.size()) != g.N)
    throw std::invalid_argument("gadget: h_i must have N entries");
  const double hg = std::isnan(g.h_global) ? 2.0 * g.J_AF * (g.N - 2 * g.R) : g.h_global;
  const int N = g.N;
  const std::size_t dim = std::size_t{1} << N;

  auto spin = [](std::size_t s, int i) { return ((s >> i) & 1u) ? 1.0 : -1.0; };
  std::vector<double> E(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    double sum = 0, ring = 0, field = 0;
    for (int i = 0; i < N; ++i) {
      sum += spin(s, i);
      if (!g.h_i.empty()) field += g.h_i[static_cast<std::size_t>(i)] * spin(s, i);
    }
    // Unordered pairs at periodic distance 1..R-1.
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        const int d = std::min(j - i, N - (j - i));
        if (d <= g.R - 1) ring += spin(s, i) * spin(s, j);
      }
    E[s] = g.J_AF * sum * sum + hg * sum + g.J_prime * ring + field;
  }

  double best_in = std::numeric_limits<double>::infinity();
  double best_out = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < dim; ++s) {
    const int up = std::popcount(s);
    (up == g.R ? best_in : best_out) = std::min(up == g.R ? best_in : best_out, E[s]);
  }
  if (!(best_in < best_out - 1e-12))
    throw std::invalid_argument("gadget tuning: N_up = R is not the unique classical minimum sector");

  std::vector<Triplet> t;
  std::vector<std::string> labels(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const auto si = static_cast<Index>(s);
    t.push_back({si, si, E[s] - best_in});
    for (int i = 0; i < N; ++i) {
      const std::size_t f = s ^ (std::size_t{1} << i);
      if (f < s && g.B != 0.0) t.push_back({si, static_cast<Index>(f), -g.B});
    }
    std::string l(static_cast<std::size_t>(N), 'd');
    for (int i = 0; i < N; ++i)
      if ((s >> i) & 1u) l[static_cast<std::size_t>(i)] = 'u';
    labels[s] = l;
  }
  Model md;
  md.family = "gadget";
  md.params = {{"N", N}, {"R", g.R}, {"J_AF", g.J_AF}, {"h_global", hg},
               {"J_prime", g.J_prime}, {"B", g.B}};
  md.H = assemble(ConfigSpace(labels), t);
  for (int a = 0; a < N; ++a) {
    std::size_t s = 0;
    for (int k = 0; k < g.R; ++k) s |= std::size_t{1} << ((a + k) % N);
    md.marks["domains"].push_back(static_cast<Index>(s));
  }
  return md;
}

void write_metadata(std::ostream& out, const Model& model) {
  char buf[64];
  out << "family=" << model.family << '\n';
  for (const auto& [k, v] : model.params) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << "param." << k << '=' << buf << '\n';
  }
  out << "seed=" << model.seed << '\n';
  for (const auto& [k, v] : model.certificates) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << "certificate." << k << '=' << buf << '\n';
  }
  for (const auto& [k, states] : model.marks) {
    out << "mark." << k << '=';
    for (std::size_t i = 0; i < states.size(); ++i) out << (i ? "," : "") << states[i];
    out << '\n';
  }
  if (model.H.space().has_labels())
    for (std::size_t i = 0; i < model.H.dim(); ++i) out << "label." << i << '=' << model.H.space().label(i) << '\n';
}

}  // namespace wlqmc
