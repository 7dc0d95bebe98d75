#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nestrank/errors.hpp"

namespace nestrank {

using Index = std::int32_t;

// Immutable binary bipartite matrix (rows ~ countries, columns ~ products)
// stored in both CSR and CSC form so that row sums and column reductions
// are cache-friendly. Entries are 0/1; only the positions of the ones are
// stored. Every row and every column of a constructed matrix has degree
// >= 1 (zero-degree lines are either stripped or rejected at build time).
class BinaryBipartiteMatrix {
 public:
  BinaryBipartiteMatrix() = default;

  // Build from (row, col) pairs. Duplicates are merged. Out-of-range
  // indices throw InvalidArgument. If strip_empty is true, zero-degree
  // rows/columns are removed and the mapping old->new (-1 = dropped) is
  // reported through row_map/col_map; otherwise zero-degree lines throw.
  // An empty result (no ones at all) throws.
  static BinaryBipartiteMatrix FromEdgeList(std::vector<std::pair<Index, Index>> pairs,
                                            Index n_rows, Index n_cols,
                                            bool strip_empty = false,
                                            std::vector<Index>* row_map = nullptr,
                                            std::vector<Index>* col_map = nullptr);

  // Build from row supports (sorted or unsorted lists of column indices).
  static BinaryBipartiteMatrix FromRows(const std::vector<std::vector<Index>>& rows,
                                        Index n_cols);

  Index rows() const { return n_rows_; }
  Index cols() const { return n_cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }

  // Sorted column indices of row i / sorted row indices of column a.
  std::span<const Index> row(Index i) const {
    return {col_idx_.data() + row_ptr_[i], col_idx_.data() + row_ptr_[i + 1]};
  }
  std::span<const Index> col(Index a) const {
    return {row_idx_.data() + col_ptr_[a], row_idx_.data() + col_ptr_[a + 1]};
  }

  Index row_degree(Index i) const { return static_cast<Index>(row_ptr_[i + 1] - row_ptr_[i]); }
  Index col_degree(Index a) const { return static_cast<Index>(col_ptr_[a + 1] - col_ptr_[a]); }

  bool has(Index i, Index a) const;

  // New matrix with rows/columns relabeled: position p of the result is
  // row_perm[p] of this matrix.
  BinaryBipartiteMatrix Permuted(const std::vector<Index>& row_perm,
                                 const std::vector<Index>& col_perm) const;

  bool operator==(const BinaryBipartiteMatrix& other) const {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ &&
           row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
  }

 private:
  void BuildCsc();

  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::vector<std::int64_t> row_ptr_;  // size n_rows_ + 1
  std::vector<Index> col_idx_;         // sorted within each row
  std::vector<std::int64_t> col_ptr_;  // size n_cols_ + 1
  std::vector<Index> row_idx_;         // sorted within each column
};

// Group profile of a perfectly nested matrix. Countries are grouped by
// equal diversification; group i (1-based in the math, 0-based here) has
// diversification d[i], cumulative country count e[i], increments
// delta[i] = d[i] - d[i-1] and eps[i] = e[i] - e[i-1]. Products exported
// by group i but not by group i-1 all have ubiquity n_countries - e[i-1].
struct NestedProfile {
  std::vector<Index> d;      // cumulative diversification per group, strictly increasing
  std::vector<Index> e;      // cumulative country count per group, strictly increasing
  std::vector<Index> delta;  // d increments, delta[0] = d[0]
  std::vector<Index> eps;    // e increments, eps[0] = e[0]

  Index groups() const { return static_cast<Index>(d.size()); }
  Index n_countries() const { return e.empty() ? 0 : e.back(); }
  Index n_products() const { return d.empty() ? 0 : d.back(); }

  // Diversification of country k (0-based, canonical ascending order).
  Index country_diversification(Index k) const;
  // Per-country diversification increments (the first country's increment
  // is its full diversification). Size n_countries().
  std::vector<Index> country_increments() const;
  // Group index (0-based) of country k / of product p, canonical order.
  Index country_group(Index k) const;
  Index product_group(Index p) const;

  bool operator==(const NestedProfile&) const = default;
};

// True iff rows can be ordered so that every row's support contains the
// support of every less-diversified row (inclusion chain).
bool is_perfectly_nested(const BinaryBipartiteMatrix& m);

// Group profile of a perfectly nested matrix; throws NotNested otherwise.
NestedProfile extract_profile(const BinaryBipartiteMatrix& m);

// Canonical matrix of a profile: rows sorted by ascending diversification,
// columns by descending ubiquity, row k filled on columns [0, D_k).
BinaryBipartiteMatrix from_profile(const NestedProfile& p);

// Validates a profile (positive increments, d/e consistent); throws
// InvalidArgument on malformed input.
void validate_profile(const NestedProfile& p);

// Rows sorted by (degree asc, index asc) and columns by (degree desc,
// index asc): a perfectly nested matrix becomes its canonical form.
BinaryBipartiteMatrix canonicalize(const BinaryBipartiteMatrix& m);

// Synthetic nested generator with diversification D_i = min(M, 1 +
// floor(M * (i/n)^alpha)), M = floor(m_ratio * n), i = 1..n. Requires
// 0 < alpha < 1. The diagonal crossing condition holds for every i < n.
BinaryBipartiteMatrix generate_model_a(Index n, double alpha, double m_ratio = 5.48);

// Synthetic nested generator with two linear regimes: D_1 = x + k1, the
// transitions up to country floor(alpha * (n-1)) add k1, later ones add
// k2. Violates the crossing condition when k2 > k1 is steep enough.
BinaryBipartiteMatrix generate_model_b(Index n, Index x, double alpha, Index k1, Index k2);

}  // namespace nestrank
