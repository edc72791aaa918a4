#include <algorithm>
#include <stdexcept>

#include "wlqmc/topology.hpp"

namespace wlqmc {

Geometry Geometry::ring(int M, Index offset) {
  if (M < 3) throw std::invalid_argument("ring geometry needs M >= 3");
  Geometry g;
  g.kind = Kind::ring;
  g.M = M;
  g.loops = 1;
  g.offset = offset;
  return g;
}

Geometry Geometry::skeleton(int loops, int M, Index offset) {
  if (M < 3) throw std::invalid_argument("skeleton geometry needs M >= 3");
  if (loops < 1) throw std::invalid_argument("skeleton geometry needs a loop");
  Geometry g;
  g.kind = Kind::skeleton;
  g.M = M;
  g.loops = loops;
  g.offset = offset;
  return g;
}

std::size_t Geometry::states() const {
  switch (kind) {
    case Kind::ring: return static_cast<std::size_t>(M);
    case Kind::skeleton: return 1 + static_cast<std::size_t>(loops) * static_cast<std::size_t>(M - 1);
    default: return 0;
  }
}

bool Geometry::on_geometry(Index c) const {
  return c >= offset && static_cast<std::size_t>(c - offset) < states();
}

bool Geometry::is_splitting(Index c) const {
  return std::find(splitting.begin(), splitting.end(), c) != splitting.end();
}

std::pair<int, int> Geometry::position(Index c) const {
  if (!on_geometry(c)) throw std::out_of_range("state not on the geometry");
  const int k = c - offset;
  if (kind == Kind::ring) return {0, k};
  if (k == 0) return {-1, 0};
  return {(k - 1) / (M - 1), (k - 1) % (M - 1) + 1};
}

Index Geometry::state(int loop, int j) const {
  if (kind == Kind::ring) return offset + ((j % M) + M) % M;
  if (j % M == 0) return offset;
  return offset + 1 + loop * (M - 1) + (j - 1);
}

namespace {

// Signed census crossing for the step a -> b, or throws if the step is not
// an edge (or a stay) of the geometry. Returns (loop+1) * sign, 0 for none.
int crossing(const Geometry& g, Index a, Index b) {
  if (a == b) return 0;
  const int c = g.census();
  if (g.kind == Geometry::Kind::ring) {
    const int ja = a - g.offset, jb = b - g.offset;
    if ((ja + 1) % g.M == jb) return ja == c ? 1 : 0;
    if ((jb + 1) % g.M == ja) return jb == c ? -1 : 0;
    throw std::invalid_argument("trajectory jumps between non-adjacent ring sites");
  }
  auto [la, ja] = g.position(a);
  auto [lb, jb] = g.position(b);
  // Put the hub on the loop of the other endpoint, at position 0 or M.
  if (la < 0) {
    la = lb;
    ja = jb == 1 ? 0 : g.M;
  }
  if (lb < 0) {
    lb = la;
    jb = ja == 1 ? 0 : g.M;
  }
  if (la != lb || std::abs(ja - jb) != 1)
    throw std::invalid_argument("trajectory jumps between non-adjacent skeleton sites");
  if (ja == c && jb == c + 1) return la + 1;
  if (jb == c && ja == c + 1) return -(la + 1);
  return 0;
}

SectorLabel finish(const Geometry& g, const std::vector<int>& letters, bool closed) {
  SectorLabel s;
  if (g.kind == Geometry::Kind::ring) {
    s.is_winding = true;
    for (int l : letters) s.winding += l > 0 ? 1 : -1;
    return s;
  }
  GroupWord w(letters);
  s.word = closed ? conjugacy_representative(w) : free_reduce(w);
  return s;
}

}  // namespace

std::vector<SectorLabel> sector_of_trajectory(const Trajectory& traj, const Geometry& g) {
  if (g.kind == Geometry::Kind::none) throw std::invalid_argument("family has no sector geometry");
  const auto K = traj.K();
  if (K == 0) throw std::invalid_argument("empty trajectory");
  std::size_t first_split = K;
  for (std::size_t i = 0; i < K; ++i) {
    const Index c = traj.slices[i];
    if (g.is_splitting(c)) {
      if (first_split == K) first_split = i;
    } else if (!g.on_geometry(c)) {
      throw std::invalid_argument("trajectory leaves the declared geometry at slice " +
                                  std::to_string(i));
    }
  }

  const bool periodic = traj.boundary == Boundary::periodic;
  std::vector<SectorLabel> out;
  std::vector<int> letters;

  if (first_split == K) {
    const std::size_t links = traj.links();
    for (std::size_t i = 0; i < links; ++i) {
      const int x = crossing(g, traj.slices[i], traj.slices[(i + 1) % K]);
      if (x != 0) letters.push_back(x);
    }
    out.push_back(finish(g, letters, periodic));
    return out;
  }

  // Intervals between splitting states. Periodic runs start just after a
  // splitting slice so no interval wraps.
  const std::size_t start = periodic ? first_split : 0;
  bool in_run = false;
  Index prev = -1;
  for (std::size_t n = 0; n < K; ++n) {
    const std::size_t i = (start + n) % K;
    const Index c = traj.slices[i];
    if (g.is_splitting(c)) {
      if (in_run) out.push_back(finish(g, letters, false));
      in_run = false;
      letters.clear();
    } else {
      if (in_run) {
        const int x = crossing(g, prev, c);
        if (x != 0) letters.push_back(x);
      }
      in_run = true;
    }
    prev = c;
  }
  if (in_run) out.push_back(finish(g, letters, false));
  return out;
}

std::string SectorLabel::str() const {
  if (is_winding) return std::to_string(winding);
  if (word.empty()) return "e";
  std::string s = format_word(word);
  std::replace(s.begin(), s.end(), ' ', '.');
  return s;
}

std::string sector_string(const std::vector<SectorLabel>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += '|';
    out += l.str();
  }
  return out.empty() ? "-" : out;
}

}  // namespace wlqmc
