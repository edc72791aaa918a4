#include "wlqmc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace wlqmc {

ConfigSpace::ConfigSpace(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("config space must have at least one state");
}

ConfigSpace::ConfigSpace(std::vector<std::string> labels)
    : size_(labels.size()), labels_(std::move(labels)) {
  if (size_ == 0) throw std::invalid_argument("config space must have at least one state");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate state label: " + l);
  }
}

std::string ConfigSpace::label(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("state index out of range");
  return labels_.empty() ? std::to_string(i) : labels_[i];
}

Index ConfigSpace::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<Index>(i);
  return -1;
}

std::span<const Index> SparseHamiltonian::neighbors(Index c) const {
  auto b = row_ptr_[static_cast<std::size_t>(c)];
  auto e = row_ptr_[static_cast<std::size_t>(c) + 1];
  return {cols_.data() + b, e - b};
}

std::span<const double> SparseHamiltonian::couplings(Index c) const {
  auto b = row_ptr_[static_cast<std::size_t>(c)];
  auto e = row_ptr_[static_cast<std::size_t>(c) + 1];
  return {vals_.data() + b, e - b};
}

std::size_t SparseHamiltonian::degree(Index c) const {
  return row_ptr_[static_cast<std::size_t>(c) + 1] - row_ptr_[static_cast<std::size_t>(c)];
}

double SparseHamiltonian::at(Index r, Index c) const {
  if (r == c) return diag(r);
  auto nb = neighbors(r);
  auto it = std::lower_bound(nb.begin(), nb.end(), c);
  if (it == nb.end() || *it != c) return 0.0;
  return couplings(r)[static_cast<std::size_t>(it - nb.begin())];
}

double SparseHamiltonian::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) {
    double s = std::abs(diag_[r]);
    for (double v : couplings(static_cast<Index>(r))) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<Triplet> SparseHamiltonian::lower_triplets() const {
  std::vector<Triplet> out;
  out.reserve(dim() + cols_.size() / 2);
  for (std::size_t r = 0; r < dim(); ++r) {
    auto row = static_cast<Index>(r);
    auto nb = neighbors(row);
    auto cv = couplings(row);
    for (std::size_t k = 0; k < nb.size() && nb[k] < row; ++k) out.push_back({row, nb[k], cv[k]});
    out.push_back({row, row, diag_[r]});
  }
  return out;
}

void SparseHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < dim(); ++r) {
    double s = diag_[r] * x[r];
    const auto b = row_ptr_[r], e = row_ptr_[r + 1];
    for (auto k = b; k < e; ++k) s += vals_[k] * x[static_cast<std::size_t>(cols_[k])];
    y[r] = s;
  }
}

SparseHamiltonian SparseHamiltonian::with_space(ConfigSpace space) const {
  if (space.size() != dim()) throw std::invalid_argument("relabelled space has wrong size");
  SparseHamiltonian out = *this;
  out.space_ = std::move(space);
  return out;
}

SparseHamiltonian assemble(const ConfigSpace& space, const std::vector<Triplet>& entries) {
  const auto n = space.size();
  SparseHamiltonian H;
  H.space_ = space;
  H.diag_.assign(n, 0.0);

  std::vector<Triplet> off;
  off.reserve(entries.size() * 2);
  for (const auto& t : entries) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n) {
      throw std::out_of_range("triplet index out of range: (" + std::to_string(t.row) + "," +
                              std::to_string(t.col) + ")");
    }
    if (!std::isfinite(t.value)) throw std::invalid_argument("non-finite matrix entry");
    if (t.row == t.col) {
      H.diag_[static_cast<std::size_t>(t.row)] += t.value;
    } else {
      off.push_back(t);
      off.push_back({t.col, t.row, t.value});
    }
  }
  std::stable_sort(off.begin(), off.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  // Merge duplicates in the fully expanded list; both triangles see the same
  // summation order, so symmetry is bitwise.
  std::vector<Triplet> merged;
  for (const auto& t : off) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }

  H.row_ptr_.assign(n + 1, 0);
  for (const auto& t : merged) {
    if (t.value == 0.0) continue;
    H.row_ptr_[static_cast<std::size_t>(t.row) + 1]++;
    H.cols_.push_back(t.col);
    H.vals_.push_back(t.value);
  }
  for (std::size_t r = 0; r < n; ++r) H.row_ptr_[r + 1] += H.row_ptr_[r];
  return H;
}

SignCheck check_no_sign_problem(const SparseHamiltonian& H, double tol) {
  SignCheck res;
  for (std::size_t r = 0; r < H.dim(); ++r) {
    auto row = static_cast<Index>(r);
    auto nb = H.neighbors(row);
    auto cv = H.couplings(row);
    for (std::size_t k = 0; k < nb.size() && nb[k] < row; ++k) {
      if (cv[k] > tol) {
        res.ok = false;
        res.violations.emplace_back(row, nb[k]);
      }
    }
  }
  return res;
}

void write_triplets(std::ostream& out, const SparseHamiltonian& H) {
  out << "dim " << H.dim() << '\n';
  char buf[64];
  for (const auto& t : H.lower_triplets()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.row << ' ' << t.col << ' ' << buf << '\n';
  }
}

SparseHamiltonian read_triplets(std::istream& in) {
  std::string line;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key >> dim;
    if (key != "dim" || !ls || dim == 0) throw std::invalid_argument("triplet file: bad header");
    break;
  }
  if (dim == 0) throw std::invalid_argument("triplet file: missing header");
  std::vector<Triplet> entries;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long r = 0, c = 0;
    double v = 0;
    if (!(ls >> r >> c >> v)) throw std::invalid_argument("triplet file: bad line: " + line);
    entries.push_back({static_cast<Index>(r), static_cast<Index>(c), v});
  }
  return assemble(ConfigSpace(dim), entries);
}

}  // namespace wlqmc
