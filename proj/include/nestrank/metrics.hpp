#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestrank/bimatrix.hpp"

namespace nestrank {

enum class Algo { kFitnessComplexity, kMinimalExtremal, kGeneralizedGamma };

// Kernel execution: Parallel uses OpenMP over rows/columns with a serial
// reduction per line, so results are bit-identical to Serial.
enum class ExecMode { kSerial, kParallel };

std::string algo_name(Algo a);           // "fcm" / "mem" / "gamma"
Algo algo_from_name(const std::string&); // throws InvalidArgument

// Per-iteration scores. fitness has one entry per row, complexity one per
// column, in the matrix's own index order. Scores are clamped from below
// at kUnderflowFloor; rows that ever hit the clamp are flagged.
struct ScoreState {
  std::vector<double> fitness;
  std::vector<double> complexity;
  std::int64_t iteration = 0;
  std::vector<std::uint8_t> underflow_rows;  // sticky per-row flags

  static ScoreState Uniform(const BinaryBipartiteMatrix& m);
};

inline constexpr double kUnderflowFloor = 1e-300;

struct RunOptions {
  double epsilon = 1e-5;             // halting threshold on the ratio drift
  std::int64_t max_iter = 100000;
  double gamma = 1.0;                // only used by kGeneralizedGamma
  double zero_ratio_threshold = 1e-12;
  bool record_history = false;       // keep the per-iteration drift series
  ExecMode mode = ExecMode::kParallel;
};

struct ConvergenceReport {
  bool converged = false;
  std::int64_t iterations = 0;       // first iteration meeting the criterion
  double final_delta = 0.0;          // drift at the last step taken
  std::vector<Index> rows_by_fitness;            // ascending score order
  std::vector<std::pair<Index, Index>> zero_ratio_pairs;  // adjacent rows whose score ratio ~ 0
  std::vector<double> delta_history;             // filled when record_history
};

struct RunResult {
  ScoreState state;
  ConvergenceReport report;
};

// One synchronous update (both score families computed from the previous
// step), means normalized to 1:
//   F~_i = sum_a M_ia Q_a,   Q~_a = 1 / sum_i M_ia / F_i.
ScoreState fcm_step(const BinaryBipartiteMatrix& m, const ScoreState& s,
                    ExecMode mode = ExecMode::kParallel);

// Extremal update: fitness as above and normalized; complexity is the
// minimum *current-step* normalized fitness among a column's exporters
// and is left unnormalized.
ScoreState mem_step(const BinaryBipartiteMatrix& m, const ScoreState& s,
                    ExecMode mode = ExecMode::kParallel);

// Generalized update Q~_a = (sum_i M_ia F_i^-gamma)^(-1/gamma), same
// timing and normalization as fcm_step. gamma == 1 dispatches to the
// fcm_step kernel so the two are bit-identical; gamma -> infinity
// approaches the extremal metric. Requires gamma >= 1.
ScoreState gamma_step(const BinaryBipartiteMatrix& m, const ScoreState& s,
                      double gamma, ExecMode mode = ExecMode::kParallel);

// Iterate from uniform scores until the rank-stability drift
//   d(n) = sum_i | r_i(n) - r_i(n+1) |,   r_i = F_(i)/F_(i+1) over rows
// sorted by ascending fitness (ties: degree, then index), falls below
// epsilon, or until max_iter. A run that exhausts max_iter is returned
// with converged = false rather than throwing.
RunResult run_metric(const BinaryBipartiteMatrix& m, Algo algo, const RunOptions& opt = {});

// Adjacent sorted-fitness pairs whose score ratio is below threshold.
std::vector<std::pair<Index, Index>> detect_zero_ratio_pairs(
    const std::vector<double>& fitness, const std::vector<Index>& rows_by_fitness,
    double threshold);

// Row order sorted by (fitness asc, degree asc, index asc).
std::vector<Index> sorted_by_fitness(const BinaryBipartiteMatrix& m,
                                     const std::vector<double>& fitness);

}  // namespace nestrank
