#include <doctest.h>

#include "reference_oracle.hpp"
#include "superfrm/dynamics.hpp"

using namespace superfrm;
using Grid = SuperMatrixd::Grid;

namespace {

Grid rows_of(std::initializer_list<std::initializer_list<double>> rows) {
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

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
    out(i++) = x;
  return out;
}

StateVector state(const std::string& bits, Side side, const Partition& p) {
  std::vector<std::size_t> on;
  std::size_t i = 0;
  for (char ch : bits) {
    if (ch == '|')
      continue;
    if (ch == '1')
      on.push_back(i);
    ++i;
  }
  return StateVector::from_indices(side, p, on);
}

// 12x5, row blocks [3,4,2,3].
SuperMatrixd product_example() {
  return SuperMatrixd(rows_of({{0, 1, 0, 1, 0},
                               {1, 1, 0, 0, 1},
                               {0, 1, 0, 1, 1},
                               {-1, 1, 1, 1, 0},
                               {0, -1, 0, 1, 1},
                               {1, 0, 1, 1, 1},
                               {1, 0, 1, 1, 1},
                               {-1, 0, 1, 1, 1},
                               {0, 1, 1, 1, 0},
                               {0, 1, 0, 1, 1},
                               {1, 1, 1, 1, 1},
                               {0, 1, 1, 0, 1}}),
                      Partition({3, 4, 2, 3}), Partition::trivial(5));
}

// 5 attributes (domain) against expert groups of 3, 4 and 5 (range).
SuperMatrixd attributes_by_experts() {
  return SuperMatrixd(rows_of({{1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0},
                               {1, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0},
                               {0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0},
                               {1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0},
                               {0, 1, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1}}),
                      Partition::trivial(5), Partition({3, 4, 5}));
}

// Expert groups of 5, 3 and 4 (domain) against 6 attributes (range).
SuperMatrixd experts_by_attributes() {
  return SuperMatrixd(rows_of({{1, 0, 0, 0, 0, 0},
                               {0, 1, 0, 0, 0, 0},
                               {0, 0, 1, 0, 0, 0},
                               {0, 0, 0, 1, 1, 0},
                               {0, 0, 0, 0, 0, 1},
                               {1, 0, 0, 1, 0, 0},
                               {0, 1, 0, 0, 1, 0},
                               {0, 0, 1, 0, 0, 1},
                               {0, 0, 0, 0, 0, 1},
                               {0, 0, 0, 1, 0, 0},
                               {0, 0, 1, 0, 0, 0},
                               {1, 0, 0, 0, 0, 0}}),
                      Partition({5, 3, 4}), Partition::trivial(6));
}

ThresholdPolicy gt0() { return {}; }

} // namespace

TEST_CASE("special product against hand-checked sums") {
  SuperMatrixd m = product_example();
  auto x = state("100|0001|01|010", Side::domain, m.row_partition());
  auto fwd = special_product(x.as_reals(), m, Direction::forward);
  CHECK(fwd.entries() == vec({2, 3, 3, 4, 2}));
  CHECK(fwd.partition() == m.col_partition());

  auto bwd = special_product(Eigen::VectorXd::Ones(5), m, Direction::backward);
  CHECK(bwd.entries() == vec({2, 3, 3, 2, 1, 4, 4, 2, 3, 3, 5, 3}));
  CHECK(bwd.partition().sizes() == std::vector<std::size_t>{3, 4, 2, 3});

  CHECK(special_product(Eigen::VectorXd::Zero(12), m, Direction::forward).entries() == Eigen::VectorXd::Zero(5));
  CHECK_THROWS_AS(special_product(Eigen::VectorXd::Zero(5), m, Direction::forward), Error);
  CHECK_THROWS_AS(special_product(Eigen::VectorXd::Zero(12), m, Direction::backward), Error);
}

TEST_CASE("a unit seed picks out one row") {
  SuperMatrixd m = attributes_by_experts();
  auto e1 = StateVector::unit(Side::domain, m.row_partition(), 0);
  auto y = special_product(e1.as_reals(), m, Direction::forward);
  CHECK(y.entries() == vec({1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0}));
  CHECK(y.partition().sizes() == std::vector<std::size_t>{3, 4, 5});
}

TEST_CASE("thresholding") {
  ThresholdRule ge2{Comparator::ge, 2};
  Bits b = apply_threshold(vec({3, 3, 3, 1, 3, 1, 3, 3, 3, 3, 3, 3, 2, 4}), ge2);
  CHECK(StateVector(b, Side::range, Partition::trivial(14)).key() == "11101011111111");

  ThresholdRule ge1{Comparator::ge, 1};
  CHECK(StateVector(apply_threshold(vec({-4, 0, 1}), ge1), Side::range, Partition::trivial(3)).key() == "001");

  ThresholdRule gt0;
  Eigen::VectorXd binary = vec({1, 0, 1, 1, 0});
  CHECK(apply_threshold(binary, gt0) == binary.cast<std::uint8_t>());

  CHECK(parse_rule("ge:2") == ge2);
  CHECK(parse_rule("gt:-0.5") == ThresholdRule{Comparator::gt, -0.5});
  CHECK(format_rule(ThresholdRule{Comparator::gt, 6}) == "gt:6");
  CHECK_THROWS_AS(parse_rule("gte:2"), Error);
  CHECK_THROWS_AS(parse_rule("ge"), Error);
  CHECK_THROWS_AS(parse_rule("ge:two"), Error);
}

TEST_CASE("updating forces the seed coordinates") {
  Bits thresholded(6);
  thresholded << 0, 1, 0, 0, 1, 0;
  Bits forced = apply_update(thresholded, {0});
  Bits expected(6);
  expected << 1, 1, 0, 0, 1, 0;
  CHECK(forced == expected);
  CHECK(apply_update(thresholded, {}) == thresholded);
  CHECK(apply_update(thresholded, {1}) == thresholded);
  CHECK_THROWS_AS(apply_update(thresholded, {6}), Error);
}

TEST_CASE("steps of a three-expert run") {
  SuperMatrixd m = experts_by_attributes();
  auto seed = state("00010|010|0001", Side::domain, m.row_partition());

  StepRecord first = step(m, seed, gt0(), seed, 1);
  CHECK(first.produced_side == Side::range);
  CHECK(first.raw == vec({1, 1, 0, 1, 2, 0}));
  CHECK_FALSE(first.used_first_step_rule); // three nodes on
  auto y = StateVector(first.after_update, Side::range, m.col_partition());
  CHECK(y.to_string() == "110110");

  StepRecord second = step(m, y, gt0(), seed, 2);
  CHECK(second.produced_side == Side::domain);
  CHECK(second.raw == vec({1, 1, 0, 2, 0, 2, 2, 0, 0, 1, 0, 1}));
  CHECK(StateVector(second.after_update, Side::domain, m.row_partition()).to_string() == "11010|110|0101");

  auto zero = StateVector::zeros(Side::domain, m.row_partition());
  StepRecord idle = step(m, zero, gt0(), zero, 1);
  CHECK(idle.after_update == Bits::Zero(6));

  auto wrong = StateVector::zeros(Side::domain, Partition::trivial(4));
  CHECK_THROWS_AS(step(m, wrong, gt0(), wrong, 1), Error);
}

TEST_CASE("hidden pattern of a unit attribute seed") {
  SuperMatrixd m = attributes_by_experts();
  auto seed = StateVector::unit(Side::domain, m.row_partition(), 0);
  HiddenPattern p = run_hidden_pattern(m, seed, gt0());
  CHECK(p.kind == PatternKind::fixed_point);
  CHECK(p.period == 1);
  CHECK(p.steps_to_enter == 4);
  REQUIRE(p.cycle.size() == 1);
  CHECK(p.cycle[0].domain.key() == "11111");
  CHECK(p.cycle[0].range->to_string() == "111|1111|11111");
  REQUIRE(p.trace.size() == 6);
  CHECK(p.trace[0].used_first_step_rule);
  CHECK(StateVector(p.trace[0].after_update, Side::range, m.col_partition()).to_string() == "100|1001|11000");
}

TEST_CASE("hidden pattern of a three-expert seed") {
  SuperMatrixd m = experts_by_attributes();
  auto seed = state("00010|010|0001", Side::domain, m.row_partition());
  HiddenPattern p = run_hidden_pattern(m, seed, gt0());
  CHECK(p.kind == PatternKind::fixed_point);
  CHECK(p.steps_to_enter == 2);
  CHECK(p.cycle[0].domain.to_string() == "11010|110|0101");
  CHECK(p.cycle[0].range->to_string() == "110110");
}

TEST_CASE("an inhibitory loop gives a limit cycle") {
  // 0 excites 1, 1 excites 2, 2 inhibits 1. Worked by hand from seed {0}:
  // 1000 -> 1100 -> 1110 -> 1010 -> 1000 -> 1100, so the cycle has length 4
  // and starts at the first visit (the seed itself ran under the first-step rule).
  SuperMatrixd m(rows_of({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, -1, 0, 0}, {0, 0, 0, 0}}));
  RunOptions one;
  one.sidedness = Sidedness::one_sided;
  auto seed = StateVector::unit(Side::domain, m.row_partition(), 0);
  HiddenPattern p = run_hidden_pattern(m, seed, gt0(), one);
  CHECK(p.kind == PatternKind::limit_cycle);
  CHECK(p.period == 4);
  CHECK(p.steps_to_enter == 1);
  REQUIRE(p.cycle.size() == 4);
  CHECK(p.cycle[0].domain.key() == "1100");
  CHECK(p.cycle[1].domain.key() == "1110");
  CHECK(p.cycle[2].domain.key() == "1010");
  CHECK(p.cycle[3].domain.key() == "1000");
  CHECK_FALSE(p.cycle[0].range.has_value());

  // Same model as a two-sided system is a different dynamical system.
  auto o = oracle::run(oracle::to_grid(m), {1, 0, 0, 0}, true, {});
  HiddenPattern two = run_hidden_pattern(m, seed, gt0());
  CHECK(two.period == o.period);
  CHECK(two.cycle[0].domain.key() == oracle::text(o.cycle[0]));
}

TEST_CASE("antisymmetric pair against exhaustive enumeration") {
  SuperMatrixd m(rows_of({{0, 1}, {-1, 0}}));
  AttractorCensus census = enumerate_attractors(m, Side::domain, gt0(), 4);
  std::size_t total = 0;
  for (const auto& a : census.attractors)
    total += a.basin_size;
  CHECK(total == 4);
  for (std::size_t mask = 0; mask < 4; ++mask) {
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < 2; ++i)
      if ((mask >> i) & 1u)
        on.push_back(i);
    auto seed = StateVector::from_indices(Side::domain, m.row_partition(), on);
    HiddenPattern p = run_hidden_pattern(m, seed, gt0());
    CHECK(canonical_rotation(p.cycle, Side::domain) == census.attractors[census.assignment[mask]].cycle);
  }
  // e1 forward gives range 01, back gives domain 10: a fixed pair.
  HiddenPattern p = run_hidden_pattern(m, StateVector::unit(Side::domain, m.row_partition(), 0), gt0());
  CHECK(p.kind == PatternKind::fixed_point);
  CHECK(p.cycle[0].range->key() == "01");
}

TEST_CASE("first-step modes") {
  SuperMatrixd m(rows_of({{1, 1}, {1, 0}}));
  ThresholdPolicy policy;
  policy.domain_rule = {Comparator::gt, 1};
  policy.range_rule = {Comparator::gt, 1};
  auto seed = StateVector::unit(Side::domain, m.row_partition(), 0);

  HiddenPattern automatic = run_hidden_pattern(m, seed, policy);
  CHECK(automatic.trace[0].used_first_step_rule);
  CHECK(automatic.trace[0].rule_applied == ThresholdRule{});

  policy.first_step_mode = FirstStepMode::never;
  HiddenPattern never = run_hidden_pattern(m, seed, policy);
  CHECK_FALSE(never.trace[0].used_first_step_rule);
  CHECK(never.trace[0].rule_applied == policy.range_rule);

  policy.first_step_mode = FirstStepMode::always;
  auto pair = StateVector::from_indices(Side::domain, m.row_partition(), {0, 1});
  HiddenPattern always = run_hidden_pattern(m, pair, policy);
  CHECK(always.trace[0].used_first_step_rule);
}

TEST_CASE("sweeps match individual runs") {
  SuperMatrixd m = experts_by_attributes();
  auto entries = sweep_unit_seeds(m, Side::range, gt0());
  REQUIRE(entries.size() == 6);
  for (const auto& e : entries) {
    HiddenPattern p = run_hidden_pattern(m, StateVector::unit(Side::range, m.col_partition(), e.index), gt0());
    CHECK(p.cycle == e.pattern.cycle);
    CHECK(p.steps_to_enter == e.pattern.steps_to_enter);
  }

  SuperMatrixd zero(Grid::Zero(1, 1));
  RunOptions one;
  one.sidedness = Sidedness::one_sided;
  auto z = sweep_unit_seeds(zero, Side::domain, gt0(), one);
  REQUIRE(z.size() == 1);
  CHECK(z[0].pattern.kind == PatternKind::fixed_point);
  CHECK(z[0].pattern.cycle[0].domain.key() == "1");
}

TEST_CASE("enumeration counts and agrees with single runs") {
  SuperMatrixd m = experts_by_attributes();
  AttractorCensus census = enumerate_attractors(m, Side::range, gt0(), 64);
  std::size_t total = 0;
  for (const auto& a : census.attractors)
    total += a.basin_size;
  CHECK(total == 64);

  SuperMatrixd a = attributes_by_experts();
  AttractorCensus dom = enumerate_attractors(a, Side::domain, gt0(), 32);
  HiddenPattern e1 = run_hidden_pattern(a, StateVector::unit(Side::domain, a.row_partition(), 0), gt0());
  CHECK(dom.attractors[dom.assignment[1]].cycle == canonical_rotation(e1.cycle, Side::domain));

  SuperMatrixd zero(Grid::Zero(3, 2));
  AttractorCensus zc = enumerate_attractors(zero, Side::domain, gt0(), 8);
  CHECK(zc.attractors.size() == 8); // each seed is its own forced fixed pair
  CHECK(zc.attractors[zc.assignment[0]].cycle[0].domain.key() == "000");
  CHECK(zc.attractors[zc.assignment[0]].cycle[0].range->key() == "00");

  CHECK_THROWS_AS(enumerate_attractors(m, Side::domain, gt0(), 4095), Error);
  try {
    enumerate_attractors(m, Side::domain, gt0(), 8);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StateSpaceTooLarge);
  }
}

TEST_CASE("run limits and seed checks") {
  SuperMatrixd m = attributes_by_experts();
  auto seed = StateVector::unit(Side::domain, m.row_partition(), 0);
  RunOptions tight;
  tight.max_steps = 1;
  CHECK_THROWS_AS(run_hidden_pattern(m, seed, gt0(), tight), Error);
  tight.max_steps = 4; // recurrence needs six products here
  try {
    run_hidden_pattern(m, seed, gt0(), tight);
    FAIL("expected StepLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepLimitExceeded);
  }
  tight.max_steps = 6;
  CHECK(run_hidden_pattern(m, seed, gt0(), tight).kind == PatternKind::fixed_point);

  RunOptions one;
  one.sidedness = Sidedness::one_sided;
  CHECK_THROWS_AS(run_hidden_pattern(m, seed, gt0(), one), Error);
  auto bad = StateVector::unit(Side::range, Partition::trivial(5), 0);
  CHECK_THROWS_AS(run_hidden_pattern(m, bad, gt0()), Error);
}

TEST_CASE("state vectors") {
  Partition p({3, 2});
  auto s = StateVector::from_indices(Side::range, p, {0, 4, 4});
  CHECK(s.on_count() == 2);
  CHECK(s.to_string() == "100|01");
  CHECK(s.key() == "10001");
  CHECK(s.on_indices() == std::vector<std::size_t>{0, 4});
  CHECK_THROWS_AS(StateVector::from_indices(Side::range, p, {5}), Error);
  Bits two(2);
  two << 1, 2;
  CHECK_THROWS_AS(StateVector(two, Side::domain, Partition::trivial(2)), Error);
}
