#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "nestrank/analytic.hpp"

using namespace nestrank;

namespace {

NestedProfile ProfileFromGroups(std::vector<Index> delta, std::vector<Index> eps) {
  NestedProfile p;
  p.delta = std::move(delta);
  p.eps = std::move(eps);
  Index d = 0, e = 0;
  for (std::size_t i = 0; i < p.delta.size(); ++i) {
    d += p.delta[i];
    e += p.eps[i];
    p.d.push_back(d);
    p.e.push_back(e);
  }
  return p;
}

NestedProfile SingletonProfile(const std::vector<Index>& increments) {
  return ProfileFromGroups(increments, std::vector<Index>(increments.size(), 1));
}

// Independent oracle: the extremal update restricted to a nested matrix is
// the linear per-country recurrence F_i <- sum_{j<=i} inc_j F_j. Iterates
// n steps with rescaling and returns adjacent score ratios.
std::vector<double> MemIteratedRatios(const std::vector<Index>& inc, int steps) {
  const std::size_t n = inc.size();
  std::vector<double> f(n, 1.0);
  for (int s = 0; s < steps; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += inc[i] * f[i];
      f[i] = acc;
    }
    double scale = 1.0 / f.back();
    for (double& v : f) v *= scale;
  }
  std::vector<double> r(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) r[i] = f[i] / f[i + 1];
  return r;
}

}  // namespace

TEST_CASE("extremal closed-form ratios, frozen cases") {
  RatioReport r = mem_ratios(SingletonProfile({3, 1, 2}));
  REQUIRE(r.row_ratios.size() == 2);
  CHECK(r.row_ratios[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.row_ratios[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.col_ratios == std::vector<double>{1.0, 1.0, 2.0 / 3.0, 1.0 / 3.0, 1.0});
  REQUIRE(r.blocks.size() == 1);
  CHECK(r.blocks[0] == BlockRange{1, 3, 1, 6});
  CHECK(r.method == RatioMethod::kMemClosed);

  RatioReport tie = mem_ratios(SingletonProfile({1, 1}));
  CHECK(tie.row_ratios == std::vector<double>{0.0});
  REQUIRE(tie.blocks.size() == 2);
  CHECK(tie.blocks[0] == BlockRange{1, 1, 1, 1});
  CHECK(tie.blocks[1] == BlockRange{2, 2, 2, 2});

  RatioReport single = mem_ratios(SingletonProfile({5}));
  CHECK(single.row_ratios.empty());
  CHECK(single.col_ratios == std::vector<double>(4, 1.0));
  REQUIRE(single.blocks.size() == 1);
  CHECK(single.blocks[0] == BlockRange{1, 1, 1, 5});
}

TEST_CASE("extremal closed form matches the iterated recurrence") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Index> inc(2 + g() % 8);
    // strictly decreasing increments keep every ratio nonzero and the
    // iteration's decay geometric (rate <= ~0.92), so 800 steps suffice
    for (std::size_t i = 0; i < inc.size(); ++i)
      inc[i] = static_cast<Index>(1 + g() % 3) +
               static_cast<Index>(inc.size() - i) * 10;
    RatioReport closed = mem_ratios(SingletonProfile(inc));
    std::vector<double> iter = MemIteratedRatios(inc, 800);
    for (std::size_t k = 0; k < iter.size(); ++k)
      CHECK(closed.row_ratios[k] == doctest::Approx(iter[k]).epsilon(1e-9));
  }
}

TEST_CASE("tied increments freeze the 1/(n+1) law in the recurrence") {
  std::vector<double> r = MemIteratedRatios({2, 2}, 1000);
  CHECK(r[0] == doctest::Approx(1.0 / 1001.0).epsilon(1e-10));
}

TEST_CASE("crossing condition, frozen cases") {
  CHECK(fcm_crossing_condition(ProfileFromGroups({2, 1}, {1, 1})));  // d=(2,3)
  // D=(1,4): 1 * 2 <= 1 * 4
  CHECK_FALSE(fcm_crossing_condition(SingletonProfile({1, 3})));
  CHECK_THROWS_AS(fcm_ratios(SingletonProfile({1, 3})), CrossingDetected);
  CHECK_THROWS_AS(fcm_group_ratio_limits(SingletonProfile({1, 3})), CrossingDetected);
}

TEST_CASE("harmonic closed-form ratios, frozen 2x3 case") {
  NestedProfile p = SingletonProfile({2, 1});  // D = (2, 3)
  auto [a, b] = fcm_group_ratio_limits(p);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b[0] == doctest::Approx(1.0 / 4.0).epsilon(1e-15));

  RatioReport r = fcm_ratios(p);
  CHECK(r.method == RatioMethod::kFcmClosed);
  CHECK(r.row_ratios == std::vector<double>{1.0 / 3.0});
  REQUIRE(r.col_ratios.size() == 2);
  CHECK(r.col_ratios[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.col_ratios[1] == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  REQUIRE(r.blocks.size() == 1);
  CHECK(r.blocks[0] == BlockRange{1, 2, 1, 3});
}

TEST_CASE("harmonic closed-form column ratio on a 5x8 staircase") {
  // D = (3,5,6,7,8): non-exporter prefix E = (0,0,0,1,1,2,3,4), so
  // Q6/Q7 = (5*6 - 8*3) / (5*6 - 8*2) = 6/14
  NestedProfile p = SingletonProfile({3, 2, 1, 1, 1});
  REQUIRE(fcm_crossing_condition(p));
  RatioReport r = fcm_ratios(p);
  CHECK(r.col_ratios[5] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  // row ratio F3/F4 = (5*6 - 8*3)/(5*7 - 8*3) = 6/11
  CHECK(r.row_ratios[2] == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("harmonic closed form matches the grouped iteration at halt") {
  std::vector<NestedProfile> profiles = {
      SingletonProfile({3, 2, 1, 1, 1}),
      ProfileFromGroups({2, 1}, {1, 1}),
      ProfileFromGroups({4, 3, 2}, {2, 3, 4}),
      ProfileFromGroups({6, 3, 2, 2}, {1, 2, 2, 1}),
  };
  for (const auto& p : profiles) {
    REQUIRE(fcm_crossing_condition(p));
    auto [a, b] = fcm_group_ratio_limits(p);
    GroupedRunOptions opt;
    opt.epsilon = 1e-13;
    opt.max_iter = 1000000;
    GroupedRunResult run = grouped_fcm_run(p, opt);
    REQUIRE(run.converged);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(run.x[i] == doctest::Approx(a[i]).epsilon(1e-7));
      CHECK(run.y[i] == doctest::Approx(b[i]).epsilon(1e-7));
    }
    // the stationary equations hold at the halt point
    CHECK(stationary_residual(p, run.x, run.y) < 1e-10);
  }
}

TEST_CASE("stationary residual detects a perturbed ratio vector") {
  NestedProfile p = ProfileFromGroups({2, 1}, {1, 1});
  std::vector<double> x{1.0 / 3.0}, y{1.0 / 4.0};
  CHECK(stationary_residual(p, x, y) < 1e-15);
  x[0] += 0.1;
  CHECK(stationary_residual(p, x, y) > 1e-3);
  CHECK_THROWS_AS(stationary_residual(p, {}, {}), InvalidArgument);
}

TEST_CASE("grouped iteration ratio trajectories are monotone with exact bounds") {
  NestedProfile p = ProfileFromGroups({4, 3, 2, 1}, {1, 2, 1, 3});
  REQUIRE(fcm_crossing_condition(p));
  auto [a, b] = fcm_group_ratio_limits(p);
  GroupedRunOptions opt;
  opt.epsilon = 1e-12;
  opt.record_ratio_history = true;
  GroupedRunResult run = grouped_fcm_run(p, opt);
  REQUIRE(run.converged);
  // x starts at all ones, y at the seeded complexity ratios
  for (double v : run.x_history.front()) CHECK(v == 1.0);
  for (std::size_t n = 1; n < run.x_history.size(); ++n) {
    for (std::size_t i = 0; i < run.x_history[n].size(); ++i) {
      CHECK(run.x_history[n][i] <= run.x_history[n - 1][i] + 1e-13);
      CHECK(run.y_history[n][i] <= run.y_history[n - 1][i] + 1e-13);
      // closed-form limits bound the trajectories from below
      CHECK(run.x_history[n][i] > a[i] - 1e-13);
      CHECK(run.y_history[n][i] > b[i] - 1e-13);
    }
  }
}

TEST_CASE("grouped iteration agrees with the full engine at the fixed point") {
  NestedProfile p = ProfileFromGroups({3, 2, 2, 1}, {2, 1, 2, 2});
  REQUIRE(fcm_crossing_condition(p));
  GroupedRunOptions gopt;
  gopt.epsilon = 1e-13;
  GroupedRunResult grouped = grouped_fcm_run(p, gopt);
  RunOptions fopt;
  fopt.epsilon = 1e-13;
  RunResult full = run_metric(from_profile(p), Algo::kFitnessComplexity, fopt);
  REQUIRE(grouped.converged);
  REQUIRE(full.report.converged);
  for (std::size_t i = 0; i < grouped.fitness.size(); ++i)
    CHECK(grouped.fitness[i] == doctest::Approx(full.state.fitness[i]).epsilon(1e-8));
  for (std::size_t i = 0; i < grouped.complexity.size(); ++i)
    CHECK(grouped.complexity[i] ==
          doctest::Approx(full.state.complexity[i]).epsilon(1e-8));
}

TEST_CASE("blocked decomposition, frozen two-block case") {
  // D = (1, 4): the least-diversified country decouples
  RatioReport r = fcm_blocked_ratios(SingletonProfile({1, 3}));
  CHECK(r.method == RatioMethod::kFcmBlocked);
  CHECK(r.row_ratios == std::vector<double>{0.0});
  CHECK(r.col_ratios == std::vector<double>{0.0, 1.0, 1.0});
  REQUIRE(r.blocks.size() == 2);
  CHECK(r.blocks[0] == BlockRange{1, 1, 1, 1});
  CHECK(r.blocks[1] == BlockRange{2, 2, 2, 4});
}

TEST_CASE("blocked decomposition on a 5x8 crossing staircase") {
  // D = (2,3,4,8,8): the leading three countries form the first block
  std::vector<Index> div{2, 3, 4, 8, 8};
  CHECK(fcm_block_boundary(div) == 3);
  NestedProfile p = ProfileFromGroups({2, 1, 1, 4}, {1, 1, 1, 2});
  CHECK_FALSE(fcm_crossing_condition(p));
  RatioReport r = fcm_blocked_ratios(p);
  CHECK(r.method == RatioMethod::kFcmBlocked);
  REQUIRE(r.blocks.size() == 2);
  CHECK(r.blocks[0] == BlockRange{1, 3, 1, 4});
  CHECK(r.blocks[1] == BlockRange{4, 5, 5, 8});
  CHECK(r.row_ratios.size() == 4);
  CHECK(r.row_ratios[2] == 0.0);  // boundary pair
  CHECK(r.col_ratios[3] == 0.0);
  // block-local ratios use the block's own normalization (3 countries, 4
  // products): F1/F2 = (3*2 - 4*1)/(3*3 - 4*1) = 2/5
  CHECK(r.row_ratios[0] == doctest::Approx(2.0 / 5.0).epsilon(1e-15));
  // second block is two equally diversified countries: ratio 1
  CHECK(r.row_ratios[3] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("blocked decomposition degenerates to the closed form when non-crossing") {
  NestedProfile p = SingletonProfile({3, 2, 1, 1, 1});
  RatioReport blocked = fcm_blocked_ratios(p);
  RatioReport closed = fcm_ratios(p);
  CHECK(blocked.method == RatioMethod::kFcmClosed);
  CHECK(blocked.row_ratios == closed.row_ratios);
  CHECK(blocked.col_ratios == closed.col_ratios);
  CHECK(blocked.blocks == closed.blocks);
}

TEST_CASE("separate_groups splits at exact zeros") {
  RatioReport r = mem_ratios(SingletonProfile({3, 1, 2}));
  auto [rows, cols] = separate_groups(r);
  CHECK(rows == std::vector<std::pair<Index, Index>>{{1, 3}});
  CHECK(cols == std::vector<std::pair<Index, Index>>{{1, 6}});

  RatioReport tie = mem_ratios(SingletonProfile({1, 1, 1}));
  auto [trows, tcols] = separate_groups(tie);
  CHECK(trows ==
        std::vector<std::pair<Index, Index>>{{1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("grouped run handles a single group") {
  NestedProfile p = ProfileFromGroups({4}, {3});
  GroupedRunResult run = grouped_fcm_run(p);
  CHECK(run.converged);
  CHECK(run.x.empty());
  CHECK(run.fitness == std::vector<double>(3, 1.0));
  CHECK(run.complexity == std::vector<double>(4, 1.0));
}
