#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestrank/bimatrix.hpp"
#include "nestrank/metrics.hpp"

namespace nestrank {

// Ranks in descending order (largest value gets rank 1); tied values all
// receive the average of the positions they span.
std::vector<double> average_ranks_desc(const std::vector<double>& v);

// Spearman rank correlation: Pearson correlation of the descending
// average-tie ranks. Throws InvalidArgument on length mismatch, fewer
// than 2 entries, non-finite input, or a constant vector.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Row/column order that packs a matrix by its metric scores: rows by
// descending fitness, columns by ascending complexity (most ubiquitous
// first), so a perfectly nested matrix becomes upper-left stepwise.
// Ties are broken by higher degree first, then original index; tied
// score groups are logged.
struct Packing {
  std::vector<Index> row_order;  // packed position -> original row
  std::vector<Index> col_order;  // packed position -> original column
  std::vector<std::vector<Index>> row_ties;  // groups with equal scores, size > 1
  std::vector<std::vector<Index>> col_ties;
};

struct PackResult {
  Packing packing;
  ScoreState state;
  ConvergenceReport report;
};

PackResult pack(const BinaryBipartiteMatrix& m, Algo algo, const RunOptions& opt = {});

// Distance from a packed matrix to its best per-row stepwise (prefix)
// approximation: for each row, the minimum over prefix lengths L of
// (zeros inside the first L packed columns) + (ones outside them).
// 0 iff the packing lays the matrix out perfectly nested.
std::int64_t border_violations(const BinaryBipartiteMatrix& m, const Packing& p);

// Writes the packed matrix as an ASCII PGM image (P2), 0 = empty,
// 255 = filled, one image row per packed matrix row.
void write_packed_pgm(const std::string& path, const BinaryBipartiteMatrix& m,
                      const Packing& p);

// Writes the packed matrix as dense CSV in packed order.
void write_packed_csv(const std::string& path, const BinaryBipartiteMatrix& m,
                      const Packing& p);

// --- Noise robustness -----------------------------------------------------

// Cell region a perturbation may touch. The half splits use floor(N/2)
// and floor(M/2): TopLeft = most-fit rows x least-complex columns,
// BottomRight = least-fit rows x most-complex columns, measured on the
// unperturbed scores.
enum class Region { kFull, kTopLeft, kBottomRight };

std::string region_name(Region r);
Region region_from_name(const std::string&);

struct PerturbationResult {
  double eta = 0.0;
  std::uint64_t seed = 0;
  Region region = Region::kFull;
  std::int64_t flips = 0;
  double rho_fitness = 0.0;     // rank correlation, baseline vs perturbed
  double rho_complexity = 0.0;
};

// Flips floor(eta * cells-in-region) distinct uniformly chosen cells of
// the region, recomputes scores on the perturbed matrix (rows/columns
// emptied by the flips are dropped), and reports Spearman correlations
// against the baseline scores over the surviving lines. Deterministic
// for a given seed.
PerturbationResult perturb_and_rank(const BinaryBipartiteMatrix& m, Algo algo,
                                    double eta, Region region, std::uint64_t seed,
                                    const RunOptions& opt = {});

// --- Convergence scaling ---------------------------------------------------

struct ScalingPoint {
  std::string model;  // "a" or "b"
  std::string algo;
  Index n = 0;
  std::int64_t n_star = 0;  // halting iteration
  bool converged = false;
};

// Number of iterations to reach the halting criterion on synthetic
// nested matrices of growing size. Model "a" uses alpha; model "b" uses
// (x, alpha, k1, k2).
struct ScalingModelParams {
  std::string model = "a";
  double alpha = 0.5;
  double m_ratio = 5.48;
  Index x = 4;
  Index k1 = 1, k2 = 3;
};

std::vector<ScalingPoint> scaling_study(const ScalingModelParams& params, Algo algo,
                                        const std::vector<Index>& sizes,
                                        const RunOptions& opt = {});

void write_scaling_csv(const std::string& path, const std::vector<ScalingPoint>& pts);

}  // namespace nestrank
