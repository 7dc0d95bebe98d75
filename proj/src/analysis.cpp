#include "nestrank/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

namespace nestrank {

namespace {

// Bounded uniform draw with rejection, so sequences do not depend on the
// standard library's distribution implementation.
std::uint64_t Bounded(std::mt19937_64& g, std::uint64_t n) {
  std::uint64_t threshold = (-n) % n;
  for (;;) {
    std::uint64_t x = g();
    if (x >= threshold) return x % n;
  }
}

// k distinct values from [0, n) (Floyd's sampling).
std::vector<std::uint64_t> SampleDistinct(std::mt19937_64& g, std::uint64_t n,
                                          std::uint64_t k) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uint64_t t = Bounded(g, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> average_ranks_desc(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  std::vector<double> ranks(n);
  std::size_t k = 0;
  while (k < n) {
    std::size_t j = k;
    while (j + 1 < n && v[order[j + 1]] == v[order[k]]) ++j;
    double avg = (static_cast<double>(k) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = k; t <= j; ++t) ranks[order[t]] = avg;
    k = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("rank inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("need at least 2 observations");
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidArgument("non-finite value in rank input");
  for (double v : y)
    if (!std::isfinite(v)) throw InvalidArgument("non-finite value in rank input");
  std::vector<double> rx = average_ranks_desc(x), ry = average_ranks_desc(y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= rx.size();
  my /= ry.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw InvalidArgument("rank correlation undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<std::vector<Index>> TieGroups(const std::vector<Index>& order,
                                          const std::vector<double>& score) {
  std::vector<std::vector<Index>> groups;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t j = k;
    while (j + 1 < order.size() && score[order[j + 1]] == score[order[k]]) ++j;
    if (j > k) groups.emplace_back(order.begin() + k, order.begin() + j + 1);
    k = j + 1;
  }
  return groups;
}

}  // namespace

PackResult pack(const BinaryBipartiteMatrix& m, Algo algo, const RunOptions& opt) {
  RunResult run = run_metric(m, algo, opt);
  PackResult res;
  res.state = std::move(run.state);
  res.report = std::move(run.report);

  res.packing.row_order.resize(m.rows());
  std::iota(res.packing.row_order.begin(), res.packing.row_order.end(), 0);
  const std::vector<double>& f = res.state.fitness;
  std::sort(res.packing.row_order.begin(), res.packing.row_order.end(),
            [&](Index a, Index b) {
              if (f[a] != f[b]) return f[a] > f[b];  // most fit first
              if (m.row_degree(a) != m.row_degree(b))
                return m.row_degree(a) > m.row_degree(b);
              return a < b;
            });
  res.packing.col_order.resize(m.cols());
  std::iota(res.packing.col_order.begin(), res.packing.col_order.end(), 0);
  const std::vector<double>& q = res.state.complexity;
  std::sort(res.packing.col_order.begin(), res.packing.col_order.end(),
            [&](Index a, Index b) {
              if (q[a] != q[b]) return q[a] < q[b];  // most ubiquitous first
              if (m.col_degree(a) != m.col_degree(b))
                return m.col_degree(a) > m.col_degree(b);
              return a < b;
            });
  res.packing.row_ties = TieGroups(res.packing.row_order, f);
  res.packing.col_ties = TieGroups(res.packing.col_order, q);
  return res;
}

std::int64_t border_violations(const BinaryBipartiteMatrix& m, const Packing& p) {
  if (static_cast<Index>(p.row_order.size()) != m.rows() ||
      static_cast<Index>(p.col_order.size()) != m.cols())
    throw InvalidArgument("packing does not match matrix dimensions");
  std::vector<Index> col_pos(m.cols());
  for (Index pos = 0; pos < m.cols(); ++pos) col_pos[p.col_order[pos]] = pos;
  std::int64_t total = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    auto r = m.row(p.row_order[i]);
    std::vector<Index> pos(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) pos[k] = col_pos[r[k]];
    std::sort(pos.begin(), pos.end());
    // best prefix cut: L = 0 or just past the k-th one; violations are
    // (zeros inside length L) + (ones beyond it)
    std::int64_t d = static_cast<std::int64_t>(pos.size());
    std::int64_t best = d;  // L = 0
    for (std::int64_t k = 0; k < d; ++k)
      best = std::min(best, pos[k] - 2 * k - 1 + d);
    total += best;
  }
  return total;
}

void write_packed_pgm(const std::string& path, const BinaryBipartiteMatrix& m,
                      const Packing& p) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  std::vector<Index> col_pos(m.cols());
  for (Index pos = 0; pos < m.cols(); ++pos) col_pos[p.col_order[pos]] = pos;
  std::vector<char> filled(m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    std::fill(filled.begin(), filled.end(), 0);
    for (Index a : m.row(p.row_order[i])) filled[col_pos[a]] = 1;
    int line_len = 0;
    for (Index a = 0; a < m.cols(); ++a) {
      const char* v = filled[a] ? "255" : "0";
      int len = filled[a] ? 3 : 1;
      if (line_len > 0 && line_len + 1 + len > 70) {  // keep PGM lines short
        out << '\n';
        line_len = 0;
      }
      if (line_len > 0) {
        out << ' ';
        ++line_len;
      }
      out << v;
      line_len += len;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

void write_packed_csv(const std::string& path, const BinaryBipartiteMatrix& m,
                      const Packing& p) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  std::vector<Index> col_pos(m.cols());
  for (Index pos = 0; pos < m.cols(); ++pos) col_pos[p.col_order[pos]] = pos;
  std::vector<char> filled(m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    std::fill(filled.begin(), filled.end(), 0);
    for (Index a : m.row(p.row_order[i])) filled[col_pos[a]] = 1;
    for (Index a = 0; a < m.cols(); ++a) {
      out << (filled[a] ? '1' : '0');
      if (a + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::string region_name(Region r) {
  switch (r) {
    case Region::kFull: return "FULL";
    case Region::kTopLeft: return "TOP_LEFT";
    case Region::kBottomRight: return "BOTTOM_RIGHT";
  }
  return "?";
}

Region region_from_name(const std::string& s) {
  if (s == "FULL" || s == "full") return Region::kFull;
  if (s == "TOP_LEFT" || s == "top-left") return Region::kTopLeft;
  if (s == "BOTTOM_RIGHT" || s == "bottom-right") return Region::kBottomRight;
  throw InvalidArgument("unknown region '" + s + "'");
}

PerturbationResult perturb_and_rank(const BinaryBipartiteMatrix& m, Algo algo,
                                    double eta, Region region, std::uint64_t seed,
                                    const RunOptions& opt) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must be in [0, 1]");
  RunResult base = run_metric(m, algo, opt);

  // region = row set x column set, chosen on the unperturbed scores
  std::vector<Index> row_list, col_list;
  if (region == Region::kFull) {
    row_list.resize(m.rows());
    col_list.resize(m.cols());
    std::iota(row_list.begin(), row_list.end(), 0);
    std::iota(col_list.begin(), col_list.end(), 0);
  } else {
    std::vector<Index> rows_desc(m.rows()), cols_asc(m.cols());
    std::iota(rows_desc.begin(), rows_desc.end(), 0);
    std::iota(cols_asc.begin(), cols_asc.end(), 0);
    const std::vector<double>& f = base.state.fitness;
    const std::vector<double>& q = base.state.complexity;
    std::sort(rows_desc.begin(), rows_desc.end(), [&](Index a, Index b) {
      if (f[a] != f[b]) return f[a] > f[b];
      if (m.row_degree(a) != m.row_degree(b)) return m.row_degree(a) > m.row_degree(b);
      return a < b;
    });
    std::sort(cols_asc.begin(), cols_asc.end(), [&](Index a, Index b) {
      if (q[a] != q[b]) return q[a] < q[b];
      if (m.col_degree(a) != m.col_degree(b)) return m.col_degree(a) > m.col_degree(b);
      return a < b;
    });
    Index half_rows = m.rows() / 2, half_cols = m.cols() / 2;
    if (region == Region::kTopLeft) {
      row_list.assign(rows_desc.begin(), rows_desc.begin() + half_rows);
      col_list.assign(cols_asc.begin(), cols_asc.begin() + half_cols);
    } else {
      row_list.assign(rows_desc.end() - half_rows, rows_desc.end());
      col_list.assign(cols_asc.end() - half_cols, cols_asc.end());
    }
  }

  PerturbationResult out;
  out.eta = eta;
  out.seed = seed;
  out.region = region;
  std::uint64_t cells = static_cast<std::uint64_t>(row_list.size()) * col_list.size();
  std::uint64_t flips = static_cast<std::uint64_t>(eta * static_cast<double>(cells));
  out.flips = static_cast<std::int64_t>(flips);
  if (flips == 0) {
    out.rho_fitness = 1.0;
    out.rho_complexity = 1.0;
    return out;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> picks = SampleDistinct(rng, cells, flips);

  // toggling distinct cells = symmetric difference with the edge set
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(m.nnz());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index a : m.row(i)) edges.emplace_back(i, a);
  std::vector<std::pair<Index, Index>> cells_flipped;
  cells_flipped.reserve(picks.size());
  for (std::uint64_t cell : picks)
    cells_flipped.emplace_back(row_list[cell / col_list.size()],
                               col_list[cell % col_list.size()]);
  std::sort(cells_flipped.begin(), cells_flipped.end());
  std::vector<std::pair<Index, Index>> toggled;
  toggled.reserve(edges.size() + cells_flipped.size());
  std::set_symmetric_difference(edges.begin(), edges.end(), cells_flipped.begin(),
                                cells_flipped.end(), std::back_inserter(toggled));

  std::vector<Index> row_map, col_map;
  BinaryBipartiteMatrix pm = BinaryBipartiteMatrix::FromEdgeList(
      std::move(toggled), m.rows(), m.cols(), /*strip_empty=*/true, &row_map, &col_map);
  RunResult pr = run_metric(pm, algo, opt);

  std::vector<double> bf, pf, bq, pq;
  for (Index i = 0; i < m.rows(); ++i) {
    if (row_map[i] < 0) continue;
    bf.push_back(base.state.fitness[i]);
    pf.push_back(pr.state.fitness[row_map[i]]);
  }
  for (Index a = 0; a < m.cols(); ++a) {
    if (col_map[a] < 0) continue;
    bq.push_back(base.state.complexity[a]);
    pq.push_back(pr.state.complexity[col_map[a]]);
  }
  out.rho_fitness = spearman(bf, pf);
  out.rho_complexity = spearman(bq, pq);
  return out;
}

std::vector<ScalingPoint> scaling_study(const ScalingModelParams& params, Algo algo,
                                        const std::vector<Index>& sizes,
                                        const RunOptions& opt) {
  std::vector<ScalingPoint> pts;
  pts.reserve(sizes.size());
  for (Index n : sizes) {
    BinaryBipartiteMatrix m;
    if (params.model == "a") {
      m = generate_model_a(n, params.alpha, params.m_ratio);
    } else if (params.model == "b") {
      m = generate_model_b(n, params.x, params.alpha, params.k1, params.k2);
    } else {
      throw InvalidArgument("unknown model '" + params.model + "' (expected a or b)");
    }
    RunResult r = run_metric(m, algo, opt);
    pts.push_back({params.model, algo_name(algo), n, r.report.iterations,
                   r.report.converged});
  }
  return pts;
}

void write_scaling_csv(const std::string& path, const std::vector<ScalingPoint>& pts) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "model,algo,N,n_star,converged\n";
  for (const auto& p : pts)
    out << p.model << ',' << p.algo << ',' << p.n << ',' << p.n_star << ','
        << (p.converged ? 1 : 0) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace nestrank
