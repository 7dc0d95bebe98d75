#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestrank/bimatrix.hpp"
#include "nestrank/metrics.hpp"

namespace nestrank {

enum class RatioMethod { kMemClosed, kFcmClosed, kFcmBlocked };

std::string ratio_method_name(RatioMethod m);  // "MEM_CLOSED" / "FCM_CLOSED" / "FCM_BLOCKED"

// 1-based inclusive row/column ranges of a diagonal block, rows in
// canonical ascending-fitness order, columns in descending ubiquity.
struct BlockRange {
  Index row_lo = 0, row_hi = 0;
  Index col_lo = 0, col_hi = 0;
  bool operator==(const BlockRange&) const = default;
};

// Exact fixed-point score ratios of adjacent rows/columns in canonical
// order: row_ratios[k] = F_(k+1)/F_(k+2), k = 0..N-2 (1-based math), and
// likewise for columns. A value of exactly 0 marks a block boundary.
struct RatioReport {
  RatioMethod method = RatioMethod::kMemClosed;
  std::vector<double> row_ratios;  // size N-1
  std::vector<double> col_ratios;  // size M-1
  std::vector<BlockRange> blocks;  // partition of rows/cols, >= 1 entry
};

// --- Minimal extremal metric, closed form -------------------------------

// Limit fitness ratios F_i/F_{i+1} = 1 - Delta_{i+1} / max_{j<=i+1} Delta_j
// over per-country diversification increments; exactly 0 iff the increment
// equals the running maximum. Column ratios follow the same values at
// group boundaries (complexities equal the owning group's fitness at the
// fixed point) and are 1 inside a group.
RatioReport mem_ratios(const NestedProfile& p);

// --- Fitness-complexity metric, closed form ------------------------------

// True iff the staircase stays strictly outside the diagonal: for groups
// i < m, d_i * e_m > e_i * d_m (equivalently every country satisfies
// D_i > (M/N) i). The single-block closed form applies only in this case.
bool fcm_crossing_condition(const NestedProfile& p);

// Group-level limit ratios under the crossing condition:
//   a_i = (e_m d_i - d_m e_i) / (e_m d_{i+1} - d_m e_i)   (fitness)
//   b_i = (e_m d_i - d_m e_i) / (e_m d_i - d_m e_{i-1})   (complexity)
// computed in exact integer arithmetic. Sizes m-1.
std::pair<std::vector<double>, std::vector<double>> fcm_group_ratio_limits(const NestedProfile& p);

// Per-country / per-product expansion of the group-level limits (ratio 1
// between members of the same group). Throws CrossingDetected when the
// crossing condition fails.
RatioReport fcm_ratios(const NestedProfile& p);

// Blocked decomposition for matrices violating the crossing condition:
// find the largest j with j D_i - i D_j > 0 for all i < j, emit that
// block's ratios, set the boundary ratio to 0, drop the block's rows and
// columns and recurse on the reduced profile. Non-crossing input yields
// a single block identical to fcm_ratios.
RatioReport fcm_blocked_ratios(const NestedProfile& p);

// Largest leading block size (countries) of the blocked decomposition.
Index fcm_block_boundary(const std::vector<Index>& diversification);

// --- Grouped fixed-point iteration ---------------------------------------

struct GroupedRunOptions {
  double epsilon = 1e-5;
  std::int64_t max_iter = 100000;
  bool record_ratio_history = false;  // keep x(n), y(n) trajectories
};

// Iterates the metric on the group profile (one value per group, suffix
// harmonic sums), so one step costs O(m) instead of O(nnz). The update is
// staged: fitness first, then complexity from the current-step fitness.
// x/y are the adjacent-group score ratios f_i/f_{i+1}, q_i/q_{i+1}.
struct GroupedRunResult {
  std::vector<double> f;  // per-group fitness, country-mean normalized
  std::vector<double> q;  // per-group complexity, product-mean normalized
  std::vector<double> fitness;      // expanded per country
  std::vector<double> complexity;   // expanded per product
  std::vector<double> x, y;         // final adjacent-group ratios, size m-1
  bool converged = false;
  std::int64_t iterations = 0;
  double final_delta = 0.0;
  std::vector<std::vector<double>> x_history, y_history;  // when recorded, entry 0 = initial
};

GroupedRunResult grouped_fcm_run(const NestedProfile& p, const GroupedRunOptions& opt = {});

// Max absolute residual of the stationary ratio equations of the grouped
// fitness-complexity system at (x, y), sizes m-1 each:
//   x_1 = delta_1 y_1 / (delta_1 y_1 + delta_2)
//   x_i = delta_i y_i / (delta_i y_i + delta_{i+1} (1 - x_{i-1}))    (1 < i < m)
//   y_i = eps_{i+1} x_i / (eps_{i+1} x_i + eps_i (1 - y_{i+1}))      (i < m-1)
//   y_{m-1} = eps_m x_{m-1} / (eps_m x_{m-1} + eps_{m-1})
// (1-based). Exact limits have residual ~ 0.
double stationary_residual(const NestedProfile& p, const std::vector<double>& x,
                           const std::vector<double>& y);

// Contiguous 1-based inclusive row ranges and column ranges split at the
// zero entries of a ratio report (the "rigid" score groups).
std::pair<std::vector<std::pair<Index, Index>>, std::vector<std::pair<Index, Index>>>
separate_groups(const RatioReport& r);

}  // namespace nestrank
