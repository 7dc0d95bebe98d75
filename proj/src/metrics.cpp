#include "nestrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nestrank {

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::kFitnessComplexity: return "fcm";
    case Algo::kMinimalExtremal: return "mem";
    case Algo::kGeneralizedGamma: return "gamma";
  }
  return "?";
}

Algo algo_from_name(const std::string& s) {
  if (s == "fcm") return Algo::kFitnessComplexity;
  if (s == "mem") return Algo::kMinimalExtremal;
  if (s == "gamma") return Algo::kGeneralizedGamma;
  throw InvalidArgument("unknown algorithm '" + s + "' (expected fcm, mem or gamma)");
}

ScoreState ScoreState::Uniform(const BinaryBipartiteMatrix& m) {
  ScoreState s;
  s.fitness.assign(m.rows(), 1.0);
  s.complexity.assign(m.cols(), 1.0);
  s.underflow_rows.assign(m.rows(), 0);
  s.iteration = 0;
  return s;
}

namespace {

// Each output element is an independent serial reduction over one row or
// column, so the parallel loop computes bit-identical results.

void RowSums(const BinaryBipartiteMatrix& m, const double* q, double* f_out, bool par) {
  const Index n = m.rows();
#pragma omp parallel for schedule(static) if (par)
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index a : m.row(i)) acc += q[a];
    f_out[i] = acc;
  }
}

void ColHarmonic(const BinaryBipartiteMatrix& m, const double* f, double* q_out, bool par) {
  const Index n = m.cols();
#pragma omp parallel for schedule(static) if (par)
  for (Index a = 0; a < n; ++a) {
    double acc = 0.0;
    for (Index i : m.col(a)) acc += 1.0 / f[i];
    q_out[a] = 1.0 / acc;
  }
}

void ColMin(const BinaryBipartiteMatrix& m, const double* f, double* q_out, bool par) {
  const Index n = m.cols();
#pragma omp parallel for schedule(static) if (par)
  for (Index a = 0; a < n; ++a) {
    double lo = f[m.col(a).front()];
    for (Index i : m.col(a)) lo = std::min(lo, f[i]);
    q_out[a] = lo;
  }
}

// (sum_i f_i^-g)^(-1/g) computed as fmin * (sum_i (fmin/f_i)^g)^(-1/g) so
// large exponents cannot overflow: every power is in (0, 1].
void ColGamma(const BinaryBipartiteMatrix& m, const double* f, double g, double* q_out,
              bool par) {
  const Index n = m.cols();
#pragma omp parallel for schedule(static) if (par)
  for (Index a = 0; a < n; ++a) {
    auto rows = m.col(a);
    double lo = f[rows.front()];
    for (Index i : rows) lo = std::min(lo, f[i]);
    double acc = 0.0;
    for (Index i : rows) acc += std::pow(lo / f[i], g);
    q_out[a] = lo * std::pow(acc, -1.0 / g);
  }
}

// Mean-normalize in place; serial so both exec modes share it.
void NormalizeMean(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  double inv = static_cast<double>(v.size()) / sum;
  for (double& x : v) x *= inv;
}

void ClampFloor(std::vector<double>& v, std::vector<std::uint8_t>* flags) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < kUnderflowFloor) {
      v[i] = kUnderflowFloor;
      if (flags) (*flags)[i] = 1;
    }
  }
}

ScoreState StepImpl(const BinaryBipartiteMatrix& m, const ScoreState& s, Algo algo,
                    double gamma, ExecMode mode) {
  if (static_cast<Index>(s.fitness.size()) != m.rows() ||
      static_cast<Index>(s.complexity.size()) != m.cols())
    throw InvalidArgument("score state does not match matrix dimensions");
  const bool par = mode == ExecMode::kParallel;
  ScoreState next;
  next.fitness.resize(m.rows());
  next.complexity.resize(m.cols());
  next.underflow_rows = s.underflow_rows;
  next.iteration = s.iteration + 1;

  RowSums(m, s.complexity.data(), next.fitness.data(), par);
  NormalizeMean(next.fitness);
  ClampFloor(next.fitness, &next.underflow_rows);

  switch (algo) {
    case Algo::kFitnessComplexity:
      ColHarmonic(m, s.fitness.data(), next.complexity.data(), par);
      NormalizeMean(next.complexity);
      break;
    case Algo::kGeneralizedGamma:
      if (gamma == 1.0) {
        ColHarmonic(m, s.fitness.data(), next.complexity.data(), par);
      } else {
        ColGamma(m, s.fitness.data(), gamma, next.complexity.data(), par);
      }
      NormalizeMean(next.complexity);
      break;
    case Algo::kMinimalExtremal:
      // extremal complexity reads the current-step fitness and stays raw
      ColMin(m, next.fitness.data(), next.complexity.data(), par);
      break;
  }
  ClampFloor(next.complexity, nullptr);
  return next;
}

}  // namespace

ScoreState fcm_step(const BinaryBipartiteMatrix& m, const ScoreState& s, ExecMode mode) {
  return StepImpl(m, s, Algo::kFitnessComplexity, 1.0, mode);
}

ScoreState mem_step(const BinaryBipartiteMatrix& m, const ScoreState& s, ExecMode mode) {
  return StepImpl(m, s, Algo::kMinimalExtremal, 1.0, mode);
}

ScoreState gamma_step(const BinaryBipartiteMatrix& m, const ScoreState& s, double gamma,
                      ExecMode mode) {
  if (!(gamma >= 1.0)) throw InvalidArgument("gamma must be >= 1");
  return StepImpl(m, s, Algo::kGeneralizedGamma, gamma, mode);
}

std::vector<Index> sorted_by_fitness(const BinaryBipartiteMatrix& m,
                                     const std::vector<double>& fitness) {
  std::vector<Index> order(m.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
    if (m.row_degree(a) != m.row_degree(b)) return m.row_degree(a) < m.row_degree(b);
    return a < b;
  });
  return order;
}

std::vector<std::pair<Index, Index>> detect_zero_ratio_pairs(
    const std::vector<double>& fitness, const std::vector<Index>& rows_by_fitness,
    double threshold) {
  std::vector<std::pair<Index, Index>> pairs;
  for (std::size_t k = 0; k + 1 < rows_by_fitness.size(); ++k) {
    Index lo = rows_by_fitness[k], hi = rows_by_fitness[k + 1];
    if (fitness[lo] / fitness[hi] < threshold) pairs.emplace_back(lo, hi);
  }
  return pairs;
}

RunResult run_metric(const BinaryBipartiteMatrix& m, Algo algo, const RunOptions& opt) {
  if (opt.epsilon <= 0.0) throw InvalidArgument("epsilon must be positive");
  if (opt.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (algo == Algo::kGeneralizedGamma && !(opt.gamma >= 1.0))
    throw InvalidArgument("gamma must be >= 1");

  RunResult res;
  res.state = ScoreState::Uniform(m);
  if (m.rows() < 2) {
    // a single row has no adjacent ratios: one step and we are done
    res.state = StepImpl(m, res.state, algo, opt.gamma, opt.mode);
    res.report.converged = true;
    res.report.iterations = res.state.iteration;
    res.report.rows_by_fitness = sorted_by_fitness(m, res.state.fitness);
    return res;
  }

  auto ratios_on = [&](const std::vector<double>& fit, const std::vector<Index>& order) {
    std::vector<double> r(order.size() - 1);
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
      r[k] = fit[order[k]] / fit[order[k + 1]];
    return r;
  };

  ScoreState cur = std::move(res.state);
  for (std::int64_t n = 1; n <= opt.max_iter; ++n) {
    ScoreState next = StepImpl(m, cur, algo, opt.gamma, opt.mode);
    std::vector<Index> order = sorted_by_fitness(m, next.fitness);
    std::vector<double> r_new = ratios_on(next.fitness, order);
    std::vector<double> r_old = ratios_on(cur.fitness, order);
    double delta = 0.0;
    for (std::size_t k = 0; k < r_new.size(); ++k) delta += std::abs(r_new[k] - r_old[k]);
    cur = std::move(next);
    if (opt.record_history) res.report.delta_history.push_back(delta);
    res.report.final_delta = delta;
    res.report.iterations = n;
    if (delta < opt.epsilon) {
      res.report.converged = true;
      res.report.rows_by_fitness = std::move(order);
      break;
    }
    if (n == opt.max_iter) res.report.rows_by_fitness = std::move(order);
  }
  res.state = std::move(cur);
  res.report.zero_ratio_pairs = detect_zero_ratio_pairs(
      res.state.fitness, res.report.rows_by_fitness, opt.zero_ratio_threshold);
  return res;
}

}  // namespace nestrank
