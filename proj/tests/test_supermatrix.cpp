#include <doctest.h>

#include <vector>

#include "superfrm/supermatrix.hpp"

using namespace superfrm;
using Grid = SuperMatrixd::Grid;

namespace {

Grid grid(std::initializer_list<std::initializer_list<double>> rows) {
  Grid g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row)
      g(r, c++) = v;
    ++r;
  }
  return g;
}

// 9x6 with row blocks [3,4,2] and column blocks [2,4].
SuperMatrixd nine_by_six() {
  return SuperMatrixd(grid({{1, 2, 3, 4, 5, 6},
                            {7, 8, 9, 1, 0, 1},
                            {-2, 3, 6, 0, 9, -1},
                            {1, 2, 3, 4, 5, 0},
                            {7, 6, 5, 4, 3, 2},
                            {1, 0, 2, 1, 3, 0},
                            {4, 5, 0, 6, 7, 0},
                            {8, 9, 1, 2, 3, 1},
                            {9, 0, 1, 0, 3, 0}}),
                      Partition({3, 4, 2}), Partition({2, 4}));
}

Grid four_by_six() {
  return grid({{3, 4, 5, 7, 8, 9}, {1, 2, 3, 0, 1, 2}, {0, 6, 1, 4, 0, -3}, {-1, 1, 2, 5, 1, 4}});
}

} // namespace

TEST_CASE("partition construction") {
  Partition p = make_partition({4, 6, 5, 3});
  CHECK(p.total() == 18);
  CHECK(p.block_count() == 4);
  CHECK(p.offsets() == std::vector<std::size_t>{0, 4, 10, 15});
  CHECK(p.is_mixed());
  CHECK(p.block_of(10) == 2);
  CHECK(p.cuts() == std::vector<std::size_t>{4, 10, 15});

  Partition one = make_partition({1});
  CHECK(one.total() == 1);
  CHECK(one.is_trivial());

  Partition even = make_partition({3, 3, 3});
  CHECK(even.total() == 9);
  CHECK_FALSE(even.is_mixed());
}

TEST_CASE("partition errors carry their codes") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no exception");
    return ErrorCode::SchemaError;
  };
  CHECK(code_of([] { make_partition({}); }) == ErrorCode::EmptyPartition);
  CHECK(code_of([] { make_partition({2, 0}); }) == ErrorCode::NonPositiveBlock);
  const std::vector<std::size_t> outside{0};
  CHECK(code_of([&] { Partition::from_cuts(4, outside); }) == ErrorCode::CutOutOfRange);
  const std::vector<std::size_t> at_end{4};
  CHECK(code_of([&] { Partition::from_cuts(4, at_end); }) == ErrorCode::CutOutOfRange);
  const std::vector<std::size_t> repeated{2, 2};
  CHECK(code_of([&] { Partition::from_cuts(4, repeated); }) == ErrorCode::DuplicateCut);
  const std::vector<std::size_t> descending{3, 2};
  CHECK(code_of([&] { Partition::from_cuts(4, descending); }) == ErrorCode::DuplicateCut);
}

TEST_CASE("partition_matrix from cut positions") {
  const std::vector<std::size_t> row_cuts{2, 3};
  const std::vector<std::size_t> none{};
  auto stacked = partition_matrix<double>(four_by_six(), row_cuts, none);
  CHECK(stacked.row_partition().sizes() == std::vector<std::size_t>{2, 1, 1});
  CHECK(stacked.col_partition().is_trivial());
  // Row cuts give a super column matrix by the structural rule.
  CHECK(classify(stacked).shape == MatrixShape::super_column);
  CHECK(classify(stacked).mixed_rows);

  const std::vector<std::size_t> col_cuts{3, 5};
  auto side_by_side = partition_matrix<double>(four_by_six(), none, col_cuts);
  CHECK(side_by_side.col_partition().sizes() == std::vector<std::size_t>{3, 2, 1});
  CHECK(classify(side_by_side).shape == MatrixShape::super_row);

  auto plain = partition_matrix<double>(four_by_six(), none, none);
  CHECK(classify(plain).shape == MatrixShape::simple);
  CHECK(plain.entries() == four_by_six());
}

TEST_CASE("block access") {
  SuperMatrixd m = nine_by_six();
  Grid b00 = m.block(0, 0);
  CHECK(b00 == grid({{1, 2}, {7, 8}, {-2, 3}}));
  CHECK(m.block(2, 1).rows() == 2);
  CHECK(m.block(2, 1).cols() == 4);
  CHECK(Grid(m.block(2, 1)) == grid({{1, 2, 3, 1}, {1, 0, 3, 0}}));
  CHECK_THROWS_AS(m.block(3, 0), Error);
  CHECK_THROWS_AS(m.block(0, 2), Error);

  SuperMatrixd single(grid({{1, 2}, {3, 4}}));
  CHECK(Grid(single.block(0, 0)) == single.entries());
}

TEST_CASE("reassembling blocks reproduces the grid") {
  SuperMatrixd m = nine_by_six();
  Grid rebuilt = Grid::Zero(9, 6);
  for (std::size_t i = 0; i < m.row_partition().block_count(); ++i)
    for (std::size_t j = 0; j < m.col_partition().block_count(); ++j)
      rebuilt.block(static_cast<Eigen::Index>(m.row_partition().offset(i)),
                    static_cast<Eigen::Index>(m.col_partition().offset(j)), m.block(i, j).rows(),
                    m.block(i, j).cols()) = m.block(i, j);
  CHECK(rebuilt == flatten(m));
}

TEST_CASE("transposing a super column matrix") {
  Grid y = grid({{3, 1, 0, 1, 5},
                 {0, 1, 7, 0, -2},
                 {1, 4, 1, 2, 1},
                 {9, 5, 8, 3, 0},
                 {0, 1, 2, 3, 4},
                 {5, 6, 7, 8, 9},
                 {1, 0, 2, 3, 7},
                 {1, 0, 1, 0, 1},
                 {0, 1, 0, 1, 0},
                 {1, 1, 1, 1, 1},
                 {8, 0, -1, 0, 1},
                 {1, 1, 0, 2, 0}});
  SuperMatrixd m(y, Partition({2, 4, 1, 3, 2}), Partition::trivial(5));
  CHECK(classify(m).shape == MatrixShape::super_column);

  SuperMatrixd t = transpose(m);
  CHECK(t.rows() == 5);
  CHECK(t.cols() == 12);
  CHECK(t.col_partition().sizes() == std::vector<std::size_t>{2, 4, 1, 3, 2});
  CHECK(classify(t).shape == MatrixShape::super_row);
  for (std::size_t r = 0; r < 12; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      CHECK(t(c, r) == m(r, c));
  CHECK(transpose(t) == m);
}

TEST_CASE("transpose blocks against a double-loop transpose") {
  Grid g(7, 4);
  for (Eigen::Index r = 0; r < 7; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      g(r, c) = static_cast<double>(r * 10 + c) - 13.5;
  SuperMatrixd m(g, Partition({3, 4}), Partition({2, 2}));
  SuperMatrixd t = transpose(m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Grid a = t.block(i, j);
      Grid b = m.block(j, i);
      REQUIRE(a.rows() == b.cols());
      REQUIRE(a.cols() == b.rows());
      for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
          CHECK(a(r, c) == b(c, r));
    }
}

TEST_CASE("vector transpose keeps entries and partition") {
  SuperVectord::Vector x(18);
  x << 3, 1, 4, 5, 0, -3, 2, 1, -4, 7, 7, 0, 3, 1, 2, 0, 3, -5;
  SuperVectord v(x, Partition({4, 6, 5, 3}));
  CHECK(v.is_mixed());
  auto t = transpose(v);
  CHECK(t.orientation() == Orientation::column);
  CHECK(t.entries() == x);
  CHECK(t.partition().sizes() == std::vector<std::size_t>{4, 6, 5, 3});
  CHECK(transpose(t) == v);
  CHECK(Eigen::VectorXd(v.block(1)) == (Eigen::VectorXd(6) << 0, -3, 2, 1, -4, 7).finished());

  SuperVectord one(Eigen::VectorXd::Constant(1, 2.5));
  CHECK(transpose(one).orientation() == Orientation::column);
  CHECK(transpose(one)[0] == 2.5);
}

TEST_CASE("flatten and re-partition round trip") {
  SuperMatrixd m = nine_by_six();
  const auto rc = m.row_partition().cuts();
  const auto cc = m.col_partition().cuts();
  CHECK(partition_matrix<double>(flatten(m), rc, cc) == m);
  CHECK(flatten(m)(2, 0) == -2);
  CHECK(flatten(m).rows() == 9);
}

TEST_CASE("classification") {
  Grid g(9, 9);
  g.setConstant(1.0);
  SuperMatrixd even(g, Partition({3, 3, 3}), Partition({3, 3, 3}));
  MatrixKind k = classify(even);
  CHECK(k.shape == MatrixShape::general_super);
  CHECK(k.square);
  CHECK(k.perfect_square);

  SuperMatrixd uneven(four_by_six(), Partition({2, 2}), Partition({2, 2, 2}));
  k = classify(uneven);
  CHECK(k.shape == MatrixShape::general_super);
  CHECK_FALSE(k.square);
  CHECK_FALSE(k.perfect_square);

  CHECK(classify(SuperMatrixd(four_by_six())).shape == MatrixShape::simple);

  // Pure function of partitions: entries do not matter.
  SuperMatrixd zeros(Grid::Zero(9, 9), Partition({3, 3, 3}), Partition({3, 3, 3}));
  CHECK(classify(zeros) == classify(even));

  SuperMatrixd mixed(Grid::Zero(9, 9), Partition({4, 5}), Partition({4, 5}));
  CHECK(classify(mixed).square);
  CHECK_FALSE(classify(mixed).perfect_square);
}

TEST_CASE("entry domains") {
  SuperMatrixd fuzzy(grid({{0.1, 1, 0.8, 0.6, 0.5},
                           {1, 0.7, 1, 0, 0.7},
                           {0.9, 0.3, 0.4, 0.5, 1},
                           {0.7, 1, 0.3, 1, 0.8},
                           {0.8, 0.1, 0, 1, 0.1},
                           {0.4, 0.6, 1, 0.7, 0.5},
                           {0, 0.5, 0.2, 1, 0.3},
                           {1, 0, 1, 0.4, 1}}),
                     Partition({3, 2, 3}), Partition({3, 2}));
  CHECK(check_entry_domain(fuzzy, EntryDomain::fuzzy_unit).empty());
  CHECK_FALSE(check_entry_domain(fuzzy, EntryDomain::signed_ternary).empty());

  SuperMatrixd signed_grid(grid({{1, 0, -1}, {0, 1, 1}}));
  auto v = check_entry_domain(signed_grid, EntryDomain::fuzzy_unit);
  REQUIRE(v.size() == 1);
  CHECK(v[0].row == 0);
  CHECK(v[0].col == 2);
  CHECK(check_entry_domain(signed_grid, EntryDomain::signed_ternary).empty());

  SuperMatrixd big(grid({{0, 1.5}, {-1, 1}}));
  v = check_entry_domain(big, EntryDomain::signed_unit);
  REQUIRE(v.size() == 1);
  CHECK(v[0].row == 0);
  CHECK(v[0].col == 1);
  CHECK(v[0].value == 1.5);
  CHECK(check_entry_domain(big, EntryDomain::unrestricted).empty());

  CHECK(entry_domain_from_string("signed_unit") == EntryDomain::signed_unit);
  CHECK_THROWS_AS(entry_domain_from_string("ternary"), Error);
}

TEST_CASE("mismatched partitions are rejected") {
  CHECK_THROWS_AS(SuperMatrixd(Grid::Zero(3, 3), Partition({2}), Partition({3})), Error);
  CHECK_THROWS_AS(SuperVectord(Eigen::VectorXd::Zero(3), Partition({1, 1})), Error);
}
