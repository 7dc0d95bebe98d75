#include "nestrank/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nestrank {

namespace {
using I64 = std::int64_t;

// Positive value stored as m * 2^e with m in [0.5, 1). The grouped iteration
// runs on these so that score scales spanning thousands of orders of
// magnitude stay representable: adjacent-group ratios then read out exactly
// even after one block has decayed far below double range. All operations
// scale by powers of two only, which IEEE arithmetic performs exactly, so in
// normal ranges the results match plain double computation bit for bit.
struct Scaled {
  double m = 0.0;
  I64 e = 0;
};

// Mantissas are renormalized lazily: anywhere inside a wide band they are
// left alone, so in-band arithmetic is ordinary double arithmetic and only
// values drifting toward the range limits pay for a frexp.
inline constexpr double kBandLo = 0x1p-256;
inline constexpr double kBandHi = 0x1p+256;

inline Scaled Renorm(double m, I64 e) {
  if (m >= kBandLo && m < kBandHi) return {m, e};
  if (m == 0.0) return {0.0, 0};
  int k = 0;
  m = std::frexp(m, &k);
  return {m, e + k};
}

inline Scaled ToScaled(double v) { return Renorm(v, 0); }

inline double ToDouble(const Scaled& s) {
  if (s.m == 0.0) return 0.0;
  I64 e = std::clamp<I64>(s.e, -5000, 5000);
  return std::ldexp(s.m, static_cast<int>(e));
}

// a / b as a double; exponent difference applied after one mantissa division,
// so the quotient is correctly rounded whenever it is representable.
inline double ScaledRatio(const Scaled& a, const Scaled& b) {
  if (a.m == 0.0) return 0.0;
  I64 e = std::clamp<I64>(a.e - b.e, -5000, 5000);
  return std::ldexp(a.m / b.m, static_cast<int>(e));
}

inline Scaled Mul(const Scaled& a, double factor) { return Renorm(a.m * factor, a.e); }

inline Scaled Div(const Scaled& a, const Scaled& b) { return Renorm(a.m / b.m, a.e - b.e); }

inline Scaled Recip(const Scaled& a) { return Renorm(1.0 / a.m, -a.e); }

// acc += t with both terms aligned to the larger exponent; the aligned add is
// a single double addition, matching plain arithmetic in normal ranges.
inline void AddInto(Scaled& acc, const Scaled& t) {
  if (t.m == 0.0) return;
  if (acc.m == 0.0) {
    acc = t;
    return;
  }
  double am = acc.m, tm = t.m;
  I64 ref = acc.e;
  if (I64 d = t.e - acc.e; d > 0) {
    ref = t.e;
    am = d > 1100 ? 0.0 : std::ldexp(am, static_cast<int>(-d));
  } else if (d < 0) {
    tm = d < -1100 ? 0.0 : std::ldexp(tm, static_cast<int>(d));
  }
  acc = Renorm(am + tm, ref);
}
}

std::string ratio_method_name(RatioMethod m) {
  switch (m) {
    case RatioMethod::kMemClosed: return "MEM_CLOSED";
    case RatioMethod::kFcmClosed: return "FCM_CLOSED";
    case RatioMethod::kFcmBlocked: return "FCM_BLOCKED";
  }
  return "?";
}

// Splits row/column index space into blocks at the exact-zero ratios.
static std::vector<BlockRange> BlocksFromZeros(const NestedProfile& p,
                                               const std::vector<double>& row_ratios) {
  std::vector<BlockRange> blocks;
  Index row_lo = 1;
  for (Index k = 0; k <= static_cast<Index>(row_ratios.size()); ++k) {
    bool cut = k == static_cast<Index>(row_ratios.size()) || row_ratios[k] == 0.0;
    if (!cut) continue;
    Index row_hi = k + 1;  // rows are 1-based; ratio k separates rows k+1 and k+2
    BlockRange b;
    b.row_lo = row_lo;
    b.row_hi = row_hi;
    b.col_lo = row_lo == 1 ? 1 : p.country_diversification(row_lo - 2) + 1;
    b.col_hi = p.country_diversification(row_hi - 1);
    blocks.push_back(b);
    row_lo = row_hi + 1;
  }
  return blocks;
}

RatioReport mem_ratios(const NestedProfile& p) {
  validate_profile(p);
  const Index n = p.n_countries();
  std::vector<Index> inc = p.country_increments();
  RatioReport r;
  r.method = RatioMethod::kMemClosed;
  r.row_ratios.resize(n - 1 < 0 ? 0 : n - 1);
  Index run_max = inc.empty() ? 0 : inc[0];
  for (Index k = 0; k + 1 < n; ++k) {
    run_max = std::max(run_max, inc[k + 1]);
    // exact zero on integer equality, so boundaries are unambiguous; the
    // integer subtraction keeps the quotient correctly rounded
    r.row_ratios[k] = inc[k + 1] == run_max
                          ? 0.0
                          : static_cast<double>(run_max - inc[k + 1]) / run_max;
  }
  // complexities coincide with the owning group's fitness at the fixed
  // point, so column ratios are the row values at group boundaries
  const Index m_cols = p.n_products();
  r.col_ratios.assign(m_cols - 1 < 0 ? 0 : m_cols - 1, 1.0);
  for (Index g = 0; g + 1 < p.groups(); ++g) {
    Index boundary_country = p.e[g];  // 1-based: last country of group g
    r.col_ratios[p.d[g] - 1] = r.row_ratios[boundary_country - 1];
  }
  r.blocks = BlocksFromZeros(p, r.row_ratios);
  return r;
}

bool fcm_crossing_condition(const NestedProfile& p) {
  validate_profile(p);
  const Index m = p.groups();
  const I64 dm = p.d[m - 1], em = p.e[m - 1];
  for (Index i = 0; i + 1 < m; ++i)
    if (static_cast<I64>(p.d[i]) * em <= static_cast<I64>(p.e[i]) * dm) return false;
  return true;
}

std::pair<std::vector<double>, std::vector<double>> fcm_group_ratio_limits(
    const NestedProfile& p) {
  if (!fcm_crossing_condition(p))
    throw CrossingDetected("diagonal crossing: single-block limits do not exist");
  const Index m = p.groups();
  const I64 dm = p.d[m - 1], em = p.e[m - 1];
  std::vector<double> a(m - 1), b(m - 1);
  for (Index i = 0; i + 1 < m; ++i) {
    I64 num = em * p.d[i] - dm * p.e[i];
    a[i] = static_cast<double>(num) / static_cast<double>(em * p.d[i + 1] - dm * p.e[i]);
    I64 prev_e = i == 0 ? 0 : p.e[i - 1];
    b[i] = static_cast<double>(num) / static_cast<double>(em * p.d[i] - dm * prev_e);
  }
  return {std::move(a), std::move(b)};
}

// Shared expansion: per-country ratios from diversification prefix, using
// j (sub-block country count) and w (sub-block product count) as the
// normalization pair. Countries with equal diversification get ratio 1.
static void ExpandFcmRows(const std::vector<Index>& div, I64 j, I64 w,
                          std::vector<double>* out) {
  for (Index k = 0; k + 1 < static_cast<Index>(div.size()); ++k) {
    I64 num = j * div[k] - w * (k + 1);
    I64 den = j * div[k + 1] - w * (k + 1);
    out->push_back(num == den ? 1.0 : static_cast<double>(num) / static_cast<double>(den));
  }
}

// Column ratios need the non-exporter prefix E_p = countries with
// diversification < p (within the sub-block).
static void ExpandFcmCols(const std::vector<Index>& div, I64 j, I64 w,
                          std::vector<double>* out) {
  std::vector<I64> non_exporters(w + 1, 0);  // E_p for p = 1..w
  for (I64 p = 1; p <= w; ++p) {
    // countries (sorted ascending) with div < p
    non_exporters[p] = std::lower_bound(div.begin(), div.end(), static_cast<Index>(p)) -
                       div.begin();
  }
  for (I64 p = 1; p < w; ++p) {
    I64 num = j * p - w * non_exporters[p + 1];
    I64 den = j * p - w * non_exporters[p];
    out->push_back(num == den ? 1.0 : static_cast<double>(num) / static_cast<double>(den));
  }
}

RatioReport fcm_ratios(const NestedProfile& p) {
  if (!fcm_crossing_condition(p))
    throw CrossingDetected("diagonal crossing: use the blocked decomposition");
  RatioReport r;
  r.method = RatioMethod::kFcmClosed;
  std::vector<Index> div(p.n_countries());
  for (Index k = 0; k < p.n_countries(); ++k) div[k] = p.country_diversification(k);
  ExpandFcmRows(div, p.n_countries(), p.n_products(), &r.row_ratios);
  ExpandFcmCols(div, p.n_countries(), p.n_products(), &r.col_ratios);
  r.blocks.push_back({1, p.n_countries(), 1, p.n_products()});
  return r;
}

Index fcm_block_boundary(const std::vector<Index>& div) {
  const Index n = static_cast<Index>(div.size());
  for (Index j = n; j >= 1; --j) {
    bool ok = true;
    for (Index i = 1; i < j && ok; ++i)
      if (static_cast<I64>(j) * div[i - 1] - static_cast<I64>(i) * div[j - 1] <= 0) ok = false;
    if (ok) return j;
  }
  return 1;  // unreachable: j = 1 has no constraints
}

RatioReport fcm_blocked_ratios(const NestedProfile& p) {
  validate_profile(p);
  RatioReport r;
  std::vector<Index> div(p.n_countries());
  for (Index k = 0; k < p.n_countries(); ++k) div[k] = p.country_diversification(k);

  Index row_base = 0, col_base = 0;  // 0-based offsets of the current tail
  std::vector<Index> local(div);
  while (!local.empty()) {
    Index j = fcm_block_boundary(local);
    Index w = local[j - 1];  // products owned by this block
    std::vector<Index> head(local.begin(), local.begin() + j);
    ExpandFcmRows(head, j, w, &r.row_ratios);
    ExpandFcmCols(head, j, w, &r.col_ratios);
    r.blocks.push_back({row_base + 1, row_base + j, col_base + 1, col_base + w});
    if (j == static_cast<Index>(local.size())) break;
    r.row_ratios.push_back(0.0);  // boundary pairs decouple
    r.col_ratios.push_back(0.0);
    local.erase(local.begin(), local.begin() + j);
    for (Index& dvalue : local) dvalue -= w;
    row_base += j;
    col_base += w;
  }
  r.method = r.blocks.size() == 1 ? RatioMethod::kFcmClosed : RatioMethod::kFcmBlocked;
  return r;
}

GroupedRunResult grouped_fcm_run(const NestedProfile& p, const GroupedRunOptions& opt) {
  validate_profile(p);
  if (opt.epsilon <= 0.0) throw InvalidArgument("epsilon must be positive");
  if (opt.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  const Index m = p.groups();
  const Scaled n_countries = ToScaled(static_cast<double>(p.n_countries()));
  const Scaled n_products = ToScaled(static_cast<double>(p.n_products()));

  std::vector<Scaled> f(m, ToScaled(1.0)), q(m);
  // complexity seeded from the uniform fitness state
  for (Index i = 0; i < m; ++i)
    q[i] = ToScaled(1.0 / static_cast<double>(p.e[m - 1] - (i == 0 ? 0 : p.e[i - 1])));

  auto normalize = [](std::vector<Scaled>& v, const std::vector<Index>& weights,
                      const Scaled& total) {
    Scaled s;
    for (std::size_t i = 0; i < v.size(); ++i)
      AddInto(s, Mul(v[i], static_cast<double>(weights[i])));
    Scaled inv = Div(total, s);
    for (Scaled& x : v) x = Renorm(x.m * inv.m, x.e + inv.e);
  };
  normalize(q, p.delta, n_products);

  auto ratios_into = [m](const std::vector<Scaled>& v, std::vector<double>& r) {
    for (Index i = 0; i + 1 < m; ++i) r[i] = ScaledRatio(v[i], v[i + 1]);
  };

  GroupedRunResult res;
  std::vector<double> x(m - 1), y(m - 1), x_prev(m - 1);
  ratios_into(f, x);
  ratios_into(q, y);
  if (opt.record_ratio_history) {
    res.x_history.push_back(x);
    res.y_history.push_back(y);
  }

  for (std::int64_t n = 1; n <= opt.max_iter; ++n) {
    // staged update: fitness from previous complexity, then complexity
    // from the current fitness (suffix harmonic sums)
    Scaled prefix;
    for (Index i = 0; i < m; ++i) {
      AddInto(prefix, Mul(q[i], static_cast<double>(p.delta[i])));
      f[i] = prefix;
    }
    normalize(f, p.eps, n_countries);
    Scaled suffix;
    for (Index i = m - 1; i >= 0; --i) {
      AddInto(suffix, Renorm(static_cast<double>(p.eps[i]) / f[i].m, -f[i].e));
      q[i] = Recip(suffix);
    }
    normalize(q, p.delta, n_products);

    x_prev.swap(x);
    ratios_into(f, x);
    ratios_into(q, y);
    double delta = 0.0;
    for (Index i = 0; i + 1 < m; ++i) delta += std::abs(x[i] - x_prev[i]);
    if (opt.record_ratio_history) {
      res.x_history.push_back(x);
      res.y_history.push_back(y);
    }
    res.iterations = n;
    res.final_delta = delta;
    if (m == 1 || delta < opt.epsilon) {
      res.converged = true;
      break;
    }
  }

  res.f.resize(m);
  res.q.resize(m);
  for (Index g = 0; g < m; ++g) {
    res.f[g] = ToDouble(f[g]);
    res.q[g] = ToDouble(q[g]);
  }
  res.x = std::move(x);
  res.y = std::move(y);
  res.fitness.reserve(p.n_countries());
  res.complexity.reserve(p.n_products());
  for (Index g = 0; g < m; ++g) {
    res.fitness.insert(res.fitness.end(), p.eps[g], res.f[g]);
    res.complexity.insert(res.complexity.end(), p.delta[g], res.q[g]);
  }
  return res;
}

double stationary_residual(const NestedProfile& p, const std::vector<double>& x,
                           const std::vector<double>& y) {
  validate_profile(p);
  const Index m = p.groups();
  if (static_cast<Index>(x.size()) != m - 1 || static_cast<Index>(y.size()) != m - 1)
    throw InvalidArgument("ratio vectors must have one entry per adjacent group pair");
  if (m == 1) return 0.0;
  double worst = 0.0;
  auto upd = [&worst](double lhs, double rhs) {
    worst = std::max(worst, std::abs(lhs - rhs));
  };
  const std::vector<Index>& dl = p.delta;
  const std::vector<Index>& ep = p.eps;
  upd(x[0], dl[0] * y[0] / (dl[0] * y[0] + dl[1]));
  for (Index i = 1; i + 1 < m; ++i)
    upd(x[i], dl[i] * y[i] / (dl[i] * y[i] + dl[i + 1] * (1.0 - x[i - 1])));
  for (Index i = 0; i + 2 < m; ++i)
    upd(y[i], ep[i + 1] * x[i] / (ep[i + 1] * x[i] + ep[i] * (1.0 - y[i + 1])));
  upd(y[m - 2], ep[m - 1] * x[m - 2] / (ep[m - 1] * x[m - 2] + ep[m - 2]));
  return worst;
}

std::pair<std::vector<std::pair<Index, Index>>, std::vector<std::pair<Index, Index>>>
separate_groups(const RatioReport& r) {
  auto split = [](const std::vector<double>& ratios) {
    std::vector<std::pair<Index, Index>> ranges;
    Index lo = 1;
    for (Index k = 0; k <= static_cast<Index>(ratios.size()); ++k) {
      if (k < static_cast<Index>(ratios.size()) && ratios[k] != 0.0) continue;
      ranges.emplace_back(lo, k + 1);
      lo = k + 2;
    }
    return ranges;
  };
  return {split(r.row_ratios), split(r.col_ratios)};
}

}  // namespace nestrank
