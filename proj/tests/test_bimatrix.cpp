#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>
#include <random>

#include "doctest.h"
#include "nestrank/bimatrix.hpp"

using namespace nestrank;

TEST_CASE("edge list construction and accessors") {
  auto m = BinaryBipartiteMatrix::FromEdgeList({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}}, 2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.nnz() == 5);
  CHECK(m.row_degree(0) == 2);
  CHECK(m.row_degree(1) == 3);
  CHECK(m.col_degree(0) == 2);
  CHECK(m.col_degree(2) == 1);
  CHECK(m.has(1, 2));
  CHECK_FALSE(m.has(0, 2));
  auto r1 = m.row(1);
  CHECK(std::vector<Index>(r1.begin(), r1.end()) == std::vector<Index>{0, 1, 2});
  auto c0 = m.col(0);
  CHECK(std::vector<Index>(c0.begin(), c0.end()) == std::vector<Index>{0, 1});
}

TEST_CASE("duplicate entries are merged") {
  auto m = BinaryBipartiteMatrix::FromEdgeList({{0, 0}, {0, 0}, {1, 0}}, 2, 1);
  CHECK(m.nnz() == 2);
}

TEST_CASE("zero-degree lines: strip vs reject") {
  std::vector<Index> row_map, col_map;
  auto m = BinaryBipartiteMatrix::FromEdgeList({{0, 0}}, 2, 1, true, &row_map, &col_map);
  CHECK(m.rows() == 1);
  CHECK(m.cols() == 1);
  CHECK(row_map == std::vector<Index>{0, -1});
  CHECK(col_map == std::vector<Index>{0});

  CHECK_THROWS_AS(BinaryBipartiteMatrix::FromEdgeList({{0, 0}}, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(BinaryBipartiteMatrix::FromEdgeList({{0, 5}}, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(BinaryBipartiteMatrix::FromEdgeList({}, 2, 2, true), InvalidArgument);
}

TEST_CASE("nestedness detection") {
  // supports form an inclusion chain regardless of row order
  auto nested = BinaryBipartiteMatrix::FromRows({{0, 1, 2}, {0}, {0, 1}}, 3);
  CHECK(is_perfectly_nested(nested));
  // row {1} is not contained in row {0, 2}'s support? it is; break it with {2}
  auto broken = BinaryBipartiteMatrix::FromRows({{0, 1}, {1, 2}, {0, 1, 2}}, 3);
  CHECK_FALSE(is_perfectly_nested(broken));
  // equal-degree rows must have identical supports
  auto equal_ok = BinaryBipartiteMatrix::FromRows({{0, 1}, {0, 1}, {0, 1, 2}}, 3);
  CHECK(is_perfectly_nested(equal_ok));
}

TEST_CASE("profile extraction and reconstruction") {
  auto m = BinaryBipartiteMatrix::FromRows({{0, 1, 2, 3, 4}, {0, 1}, {0, 1}, {0, 1, 2}}, 5);
  NestedProfile p = extract_profile(m);
  CHECK(p.d == std::vector<Index>{2, 3, 5});
  CHECK(p.e == std::vector<Index>{2, 3, 4});
  CHECK(p.delta == std::vector<Index>{2, 1, 2});
  CHECK(p.eps == std::vector<Index>{2, 1, 1});
  CHECK(p.n_countries() == 4);
  CHECK(p.n_products() == 5);
  CHECK(p.country_increments() == std::vector<Index>{2, 0, 1, 2});
  CHECK(p.country_diversification(0) == 2);
  CHECK(p.country_diversification(3) == 5);
  CHECK(p.country_group(2) == 1);
  CHECK(p.product_group(0) == 0);
  CHECK(p.product_group(2) == 1);
  CHECK(p.product_group(4) == 2);

  // round trip: reconstruction equals the canonical sort of the original
  CHECK(from_profile(p) == canonicalize(m));
  CHECK(extract_profile(from_profile(p)) == p);

  auto crossing = BinaryBipartiteMatrix::FromRows({{0, 1}, {1, 2}, {0, 1, 2}}, 3);
  CHECK_THROWS_AS(extract_profile(crossing), NotNested);
}

TEST_CASE("canonical 10x20 five-group staircase") {
  NestedProfile p;
  p.d = {4, 8, 12, 16, 20};
  p.e = {2, 4, 6, 8, 10};
  p.delta = {4, 4, 4, 4, 4};
  p.eps = {2, 2, 2, 2, 2};
  auto m = from_profile(p);
  CHECK(m.rows() == 10);
  CHECK(m.cols() == 20);
  CHECK(is_perfectly_nested(m));
  // ubiquity of a group-g product is the count of countries in groups >= g
  CHECK(m.col_degree(0) == 10);
  CHECK(m.col_degree(4) == 8);
  CHECK(m.col_degree(19) == 2);
  CHECK(extract_profile(m) == p);
}

TEST_CASE("round trip survives random shuffling") {
  NestedProfile p;
  p.d = {3, 7, 10};
  p.e = {2, 3, 6};
  p.delta = {3, 4, 3};
  p.eps = {2, 1, 3};
  auto m = from_profile(p);
  std::vector<Index> rp(m.rows()), cp(m.cols());
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(cp.begin(), cp.end(), 0);
  std::mt19937_64 g(12345);
  for (std::size_t i = rp.size(); i > 1; --i) std::swap(rp[i - 1], rp[g() % i]);
  for (std::size_t i = cp.size(); i > 1; --i) std::swap(cp[i - 1], cp[g() % i]);
  auto shuffled = m.Permuted(rp, cp);
  CHECK(is_perfectly_nested(shuffled));
  CHECK(extract_profile(shuffled) == p);
  CHECK(canonicalize(shuffled) == m);
}

TEST_CASE("model a frozen diversification profile") {
  auto m = generate_model_a(10, 0.5);
  CHECK(m.cols() == 54);
  std::vector<Index> expect{18, 25, 30, 35, 39, 42, 46, 49, 52, 54};
  for (Index i = 0; i < 10; ++i) CHECK(m.row_degree(i) == expect[i]);
  CHECK(is_perfectly_nested(m));
  // the last row saturates at the column count
  CHECK(m.row_degree(9) == m.cols());
}

TEST_CASE("model a satisfies the crossing condition below the top row") {
  auto m = generate_model_a(100, 0.5);
  Index n = m.rows(), cols = m.cols();
  for (Index i = 1; i < n; ++i) {
    // D_i * n > M * i, exact in 64-bit
    CHECK(static_cast<std::int64_t>(m.row_degree(i - 1)) * n >
          static_cast<std::int64_t>(cols) * i);
  }
}

TEST_CASE("model b frozen profiles") {
  auto m = generate_model_b(4, 2, 0.5, 1, 3);
  std::vector<Index> expect{3, 4, 7, 10};
  for (Index i = 0; i < 4; ++i) CHECK(m.row_degree(i) == expect[i]);
  CHECK(m.cols() == 10);

  auto m2 = generate_model_b(3, 1, 0.5, 1, 1);
  std::vector<Index> expect2{2, 3, 4};
  for (Index i = 0; i < 3; ++i) CHECK(m2.row_degree(i) == expect2[i]);

  CHECK_THROWS_AS(generate_model_b(1, 2, 0.5, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(generate_model_a(10, 1.5), InvalidArgument);
  CHECK_THROWS_AS(generate_model_a(10, 0.0), InvalidArgument);
}

TEST_CASE("permutation validation") {
  auto m = BinaryBipartiteMatrix::FromRows({{0, 1}, {0}}, 2);
  CHECK_THROWS_AS(m.Permuted({0, 0}, {0, 1}), InvalidArgument);
  CHECK_THROWS_AS(m.Permuted({0, 1}, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(m.Permuted({0}, {0, 1}), InvalidArgument);
}
