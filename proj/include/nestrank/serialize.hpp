#pragma once

#include <string>

#include "nestrank/analysis.hpp"
#include "nestrank/analytic.hpp"
#include "nestrank/metrics.hpp"

namespace nestrank {

// JSON document for a metric run:
// {algo, epsilon, iterations, converged, fitness, complexity, zero_ratio_pairs}
std::string score_report_json(Algo algo, double epsilon, const ScoreState& s,
                              const ConvergenceReport& r);

// JSON document for closed-form ratios:
// {method, row_ratios, col_ratios, blocks: [{rows: [lo, hi], cols: [lo, hi]}]}
// with 1-based inclusive block ranges.
std::string ratio_report_json(const RatioReport& r);

// One JSON line per perturbation trial.
std::string perturbation_json(Algo algo, const PerturbationResult& r);

// Packing as JSON: {row_order, col_order, row_ties, col_ties, violations}.
std::string packing_json(const Packing& p, std::int64_t violations);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nestrank
