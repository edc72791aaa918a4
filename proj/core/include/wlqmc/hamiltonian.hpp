#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wlqmc {

using Index = std::int32_t;

// Basis of a finite configuration space with optional unique labels.
class ConfigSpace {
 public:
  explicit ConfigSpace(std::size_t size = 1);
  explicit ConfigSpace(std::vector<std::string> labels);

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  std::string label(std::size_t i) const;
  const std::vector<std::string>& labels() const { return labels_; }
  // Returns -1 when the label is unknown.
  Index find(const std::string& label) const;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Real symmetric operator. Off-diagonal rows are stored in full (both
// triangles) in CSR form with column indices sorted; the diagonal is dense.
class SparseHamiltonian {
 public:
  SparseHamiltonian() = default;

  const ConfigSpace& space() const { return space_; }
  std::size_t dim() const { return space_.size(); }

  double diag(Index c) const { return diag_[static_cast<std::size_t>(c)]; }
  const std::vector<double>& diagonal() const { return diag_; }

  std::span<const Index> neighbors(Index c) const;
  std::span<const double> couplings(Index c) const;
  std::size_t degree(Index c) const;

  // Matrix element H(r, c). O(log degree).
  double at(Index r, Index c) const;

  // max_r sum_c |H(r, c)|
  double norm_inf() const;

  std::size_t nnz_offdiag() const { return cols_.size(); }

  // Lower-triangle entries (col <= row) in row-major order, including
  // every diagonal entry.
  std::vector<Triplet> lower_triplets() const;

  void apply(std::span<const double> x, std::span<double> y) const;

  SparseHamiltonian with_space(ConfigSpace space) const;

  friend SparseHamiltonian assemble(const ConfigSpace&, const std::vector<Triplet>&);

 private:
  ConfigSpace space_;
  std::vector<double> diag_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> cols_;
  std::vector<double> vals_;
};

// Each entry stands for an unordered pair; (r,c) and (c,r) land on the same
// element and duplicates are summed. Off-diagonal sums that are exactly zero
// are dropped so they never appear as neighbors.
SparseHamiltonian assemble(const ConfigSpace& space, const std::vector<Triplet>& entries);

struct SignCheck {
  bool ok = true;
  std::vector<std::pair<Index, Index>> violations;  // (row, col) with row > col
  explicit operator bool() const { return ok; }
};

inline constexpr double kSignTolerance = 1e-12;

SignCheck check_no_sign_problem(const SparseHamiltonian& H, double tol = kSignTolerance);

void write_triplets(std::ostream& out, const SparseHamiltonian& H);
SparseHamiltonian read_triplets(std::istream& in);

}  // namespace wlqmc
