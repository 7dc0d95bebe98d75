#include "nestrank/bimatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nestrank {

namespace {

std::string LineName(const char* what, Index i) {
  return std::string(what) + " " + std::to_string(i);
}

}  // namespace

BinaryBipartiteMatrix BinaryBipartiteMatrix::FromEdgeList(
    std::vector<std::pair<Index, Index>> pairs, Index n_rows, Index n_cols,
    bool strip_empty, std::vector<Index>* row_map, std::vector<Index>* col_map) {
  if (n_rows <= 0 || n_cols <= 0)
    throw InvalidArgument("matrix dimensions must be positive, got " +
                          std::to_string(n_rows) + "x" + std::to_string(n_cols));
  for (const auto& [r, c] : pairs) {
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols)
      throw InvalidArgument("entry (" + std::to_string(r) + ", " + std::to_string(c) +
                            ") out of range for " + std::to_string(n_rows) + "x" +
                            std::to_string(n_cols));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  if (pairs.empty()) throw InvalidArgument("matrix has no entries");

  std::vector<Index> row_seen(n_rows, 0), col_seen(n_cols, 0);
  for (const auto& [r, c] : pairs) {
    row_seen[r] = 1;
    col_seen[c] = 1;
  }

  std::vector<Index> rmap(n_rows), cmap(n_cols);
  Index kept_rows = 0, kept_cols = 0;
  for (Index i = 0; i < n_rows; ++i) {
    if (row_seen[i]) {
      rmap[i] = kept_rows++;
    } else if (strip_empty) {
      rmap[i] = -1;
    } else {
      throw InvalidArgument(LineName("row", i) + " has no entries");
    }
  }
  for (Index a = 0; a < n_cols; ++a) {
    if (col_seen[a]) {
      cmap[a] = kept_cols++;
    } else if (strip_empty) {
      cmap[a] = -1;
    } else {
      throw InvalidArgument(LineName("column", a) + " has no entries");
    }
  }

  BinaryBipartiteMatrix m;
  m.n_rows_ = kept_rows;
  m.n_cols_ = kept_cols;
  m.row_ptr_.assign(kept_rows + 1, 0);
  m.col_idx_.resize(pairs.size());
  for (const auto& [r, c] : pairs) m.row_ptr_[rmap[r] + 1]++;
  std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
  // pairs are row-major sorted and the row remap is monotone, so a single
  // append pass keeps each row's columns sorted.
  std::vector<std::int64_t> fill(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
  for (const auto& [r, c] : pairs) m.col_idx_[fill[rmap[r]]++] = cmap[c];
  m.BuildCsc();
  if (row_map) *row_map = std::move(rmap);
  if (col_map) *col_map = std::move(cmap);
  return m;
}

BinaryBipartiteMatrix BinaryBipartiteMatrix::FromRows(
    const std::vector<std::vector<Index>>& rows, Index n_cols) {
  std::vector<std::pair<Index, Index>> pairs;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  pairs.reserve(total);
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i)
    for (Index c : rows[i]) pairs.emplace_back(i, c);
  return FromEdgeList(std::move(pairs), static_cast<Index>(rows.size()), n_cols);
}

void BinaryBipartiteMatrix::BuildCsc() {
  col_ptr_.assign(n_cols_ + 1, 0);
  row_idx_.resize(col_idx_.size());
  for (Index c : col_idx_) col_ptr_[c + 1]++;
  std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());
  std::vector<std::int64_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (Index i = 0; i < n_rows_; ++i)
    for (Index c : row(i)) row_idx_[fill[c]++] = i;  // row-major pass: rows sorted per column
}

bool BinaryBipartiteMatrix::has(Index i, Index a) const {
  auto r = row(i);
  return std::binary_search(r.begin(), r.end(), a);
}

BinaryBipartiteMatrix BinaryBipartiteMatrix::Permuted(
    const std::vector<Index>& row_perm, const std::vector<Index>& col_perm) const {
  if (static_cast<Index>(row_perm.size()) != n_rows_ ||
      static_cast<Index>(col_perm.size()) != n_cols_)
    throw InvalidArgument("permutation size does not match matrix dimensions");
  std::vector<Index> col_inv(n_cols_, -1);
  for (Index p = 0; p < n_cols_; ++p) {
    if (col_perm[p] < 0 || col_perm[p] >= n_cols_ || col_inv[col_perm[p]] != -1)
      throw InvalidArgument("column permutation is not a bijection");
    col_inv[col_perm[p]] = p;
  }
  std::vector<Index> row_seen(n_rows_, 0);
  BinaryBipartiteMatrix m;
  m.n_rows_ = n_rows_;
  m.n_cols_ = n_cols_;
  m.row_ptr_.assign(n_rows_ + 1, 0);
  m.col_idx_.reserve(col_idx_.size());
  for (Index p = 0; p < n_rows_; ++p) {
    Index src = row_perm[p];
    if (src < 0 || src >= n_rows_ || row_seen[src]++)
      throw InvalidArgument("row permutation is not a bijection");
    auto r = row(src);
    std::vector<Index> cols(r.begin(), r.end());
    for (Index& c : cols) c = col_inv[c];
    std::sort(cols.begin(), cols.end());
    m.col_idx_.insert(m.col_idx_.end(), cols.begin(), cols.end());
    m.row_ptr_[p + 1] = static_cast<std::int64_t>(m.col_idx_.size());
  }
  m.BuildCsc();
  return m;
}

Index NestedProfile::country_diversification(Index k) const {
  return d[country_group(k)];
}

std::vector<Index> NestedProfile::country_increments() const {
  std::vector<Index> inc(n_countries(), 0);
  Index country = 0;
  for (Index g = 0; g < groups(); ++g) {
    inc[country] = delta[g];  // first country of the group carries the jump
    country = e[g];
  }
  return inc;
}

Index NestedProfile::country_group(Index k) const {
  // first group whose cumulative count exceeds k
  auto it = std::upper_bound(e.begin(), e.end(), k);
  return static_cast<Index>(it - e.begin());
}

Index NestedProfile::product_group(Index p) const {
  auto it = std::upper_bound(d.begin(), d.end(), p);
  return static_cast<Index>(it - d.begin());
}

void validate_profile(const NestedProfile& p) {
  Index m = p.groups();
  if (m == 0) throw InvalidArgument("profile has no groups");
  if (p.e.size() != p.d.size() || p.delta.size() != p.d.size() || p.eps.size() != p.d.size())
    throw InvalidArgument("profile vectors have mismatched sizes");
  Index prev_d = 0, prev_e = 0;
  for (Index g = 0; g < m; ++g) {
    if (p.d[g] <= prev_d) throw InvalidArgument("group diversifications must increase");
    if (p.e[g] <= prev_e) throw InvalidArgument("group country counts must increase");
    if (p.delta[g] != p.d[g] - prev_d || p.eps[g] != p.e[g] - prev_e)
      throw InvalidArgument("profile increments do not match cumulative values");
    prev_d = p.d[g];
    prev_e = p.e[g];
  }
}

bool is_perfectly_nested(const BinaryBipartiteMatrix& m) {
  std::vector<Index> order(m.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (m.row_degree(a) != m.row_degree(b)) return m.row_degree(a) < m.row_degree(b);
    return a < b;
  });
  // inclusion chain: each row's support must contain the previous one's
  for (Index k = 0; k + 1 < m.rows(); ++k) {
    auto small = m.row(order[k]);
    auto big = m.row(order[k + 1]);
    if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) return false;
  }
  return true;
}

NestedProfile extract_profile(const BinaryBipartiteMatrix& m) {
  if (!is_perfectly_nested(m)) throw NotNested("matrix is not perfectly nested");
  std::vector<Index> degrees(m.rows());
  for (Index i = 0; i < m.rows(); ++i) degrees[i] = m.row_degree(i);
  std::sort(degrees.begin(), degrees.end());
  NestedProfile p;
  for (Index i = 0; i < static_cast<Index>(degrees.size()); ++i) {
    if (!p.d.empty() && degrees[i] == p.d.back()) {
      p.e.back()++;
      p.eps.back()++;
    } else {
      p.delta.push_back(degrees[i] - (p.d.empty() ? 0 : p.d.back()));
      p.d.push_back(degrees[i]);
      p.eps.push_back(1);
      p.e.push_back((p.e.empty() ? 0 : p.e.back()) + 1);
    }
  }
  // chain inclusion forces full column coverage up to the top group
  if (p.d.back() != m.cols())
    throw NotNested("top diversification does not cover all columns");
  return p;
}

BinaryBipartiteMatrix from_profile(const NestedProfile& p) {
  validate_profile(p);
  BinaryBipartiteMatrix m;
  std::vector<std::vector<Index>> rows;
  rows.reserve(p.n_countries());
  for (Index g = 0; g < p.groups(); ++g) {
    std::vector<Index> cols(p.d[g]);
    std::iota(cols.begin(), cols.end(), 0);
    for (Index k = 0; k < p.eps[g]; ++k) rows.push_back(cols);
  }
  return BinaryBipartiteMatrix::FromRows(rows, p.n_products());
}

BinaryBipartiteMatrix canonicalize(const BinaryBipartiteMatrix& m) {
  std::vector<Index> row_perm(m.rows()), col_perm(m.cols());
  std::iota(row_perm.begin(), row_perm.end(), 0);
  std::iota(col_perm.begin(), col_perm.end(), 0);
  std::sort(row_perm.begin(), row_perm.end(), [&](Index a, Index b) {
    if (m.row_degree(a) != m.row_degree(b)) return m.row_degree(a) < m.row_degree(b);
    return a < b;
  });
  std::sort(col_perm.begin(), col_perm.end(), [&](Index a, Index b) {
    if (m.col_degree(a) != m.col_degree(b)) return m.col_degree(a) > m.col_degree(b);
    return a < b;
  });
  return m.Permuted(row_perm, col_perm);
}

BinaryBipartiteMatrix generate_model_a(Index n, double alpha, double m_ratio) {
  if (n < 2) throw InvalidArgument("need at least 2 countries");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
  if (m_ratio <= 0.0) throw InvalidArgument("m_ratio must be positive");
  Index m_cols = static_cast<Index>(std::floor(m_ratio * n));
  if (m_cols < 1) throw InvalidArgument("m_ratio too small for this n");
  std::vector<std::vector<Index>> rows(n);
  for (Index i = 1; i <= n; ++i) {
    double frac = std::pow(static_cast<double>(i) / n, alpha);
    Index div = 1 + static_cast<Index>(std::floor(m_cols * frac));
    div = std::min(div, m_cols);
    rows[i - 1].resize(div);
    std::iota(rows[i - 1].begin(), rows[i - 1].end(), 0);
  }
  return BinaryBipartiteMatrix::FromRows(rows, m_cols);
}

BinaryBipartiteMatrix generate_model_b(Index n, Index x, double alpha, Index k1, Index k2) {
  if (n < 2) throw InvalidArgument("need at least 2 countries");
  if (x < 0 || k1 < 1 || k2 < 1) throw InvalidArgument("need x >= 0 and k1, k2 >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must be in [0, 1]");
  Index boundary = static_cast<Index>(std::floor(alpha * (n - 1)));
  std::vector<Index> div(n);
  div[0] = x + k1;
  for (Index i = 1; i < n; ++i) div[i] = div[i - 1] + (i <= boundary ? k1 : k2);
  std::vector<std::vector<Index>> rows(n);
  for (Index i = 0; i < n; ++i) {
    rows[i].resize(div[i]);
    std::iota(rows[i].begin(), rows[i].end(), 0);
  }
  return BinaryBipartiteMatrix::FromRows(rows, div[n - 1]);
}

}  // namespace nestrank
