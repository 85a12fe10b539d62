#include "superfrm/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace superfrm {

const char* to_string(Side side) { return side == Side::domain ? "domain" : "range"; }
const char* to_string(Comparator cmp) { return cmp == Comparator::ge ? "ge" : "gt"; }

const char* to_string(FirstStepMode mode) {
  switch (mode) {
  case FirstStepMode::automatic: return "auto";
  case FirstStepMode::always: return "always";
  case FirstStepMode::never: return "never";
  }
  return "unknown";
}

const char* to_string(PatternKind kind) {
  return kind == PatternKind::fixed_point ? "fixed_point" : "limit_cycle";
}

Side other(Side side) noexcept { return side == Side::domain ? Side::range : Side::domain; }

ThresholdRule parse_rule(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::SchemaError, "threshold rule '" + std::string(text) + "' is not cmp:cutoff");
  auto cmp = text.substr(0, colon);
  auto number = text.substr(colon + 1);
  ThresholdRule rule;
  if (cmp == "ge")
    rule.cmp = Comparator::ge;
  else if (cmp == "gt")
    rule.cmp = Comparator::gt;
  else
    throw Error(ErrorCode::SchemaError, "unknown comparator '" + std::string(cmp) + "'");
  auto [end, ec] = std::from_chars(number.data(), number.data() + number.size(), rule.cutoff);
  if (ec != std::errc() || end != number.data() + number.size() || number.empty())
    throw Error(ErrorCode::SchemaError, "bad cutoff '" + std::string(number) + "'");
  return rule;
}

std::string format_rule(const ThresholdRule& rule) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, rule.cutoff);
  return std::string(to_string(rule.cmp)) + ":" + std::string(buf, end);
}

// StateVector ---------------------------------------------------------------

StateVector::StateVector(Bits bits, Side side, Partition partition)
    : bits_(std::move(bits)), side_(side), partition_(std::move(partition)) {
  if (static_cast<std::size_t>(bits_.size()) != partition_.total())
    throw Error(ErrorCode::DimensionMismatch, "state of length " + std::to_string(bits_.size()) +
                                                  " against partition total " + std::to_string(partition_.total()));
  for (Eigen::Index i = 0; i < bits_.size(); ++i)
    if (bits_(i) > 1)
      throw Error(ErrorCode::DimensionMismatch, "state entry " + std::to_string(i) + " is not binary");
}

StateVector StateVector::zeros(Side side, const Partition& partition) {
  return StateVector(Bits::Zero(static_cast<Eigen::Index>(partition.total())), side, partition);
}

StateVector StateVector::unit(Side side, const Partition& partition, std::size_t index) {
  return from_indices(side, partition, {index});
}

StateVector StateVector::from_indices(Side side, const Partition& partition, const std::vector<std::size_t>& on) {
  Bits bits = Bits::Zero(static_cast<Eigen::Index>(partition.total()));
  for (auto i : on) {
    if (i >= partition.total())
      throw Error(ErrorCode::IndexOutOfRange, "coordinate " + std::to_string(i) + " outside state of length " +
                                                  std::to_string(partition.total()));
    bits(static_cast<Eigen::Index>(i)) = 1;
  }
  return StateVector(std::move(bits), side, partition);
}

std::vector<std::size_t> StateVector::on_indices() const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < bits_.size(); ++i)
    if (bits_(i))
      out.push_back(static_cast<std::size_t>(i));
  return out;
}

std::size_t StateVector::on_count() const { return static_cast<std::size_t>(bits_.cast<int>().sum()); }

std::string StateVector::to_string() const {
  std::string out;
  for (std::size_t b = 0; b < partition_.block_count(); ++b) {
    if (b)
      out += '|';
    for (std::size_t i = 0; i < partition_.size(b); ++i)
      out += bits_(static_cast<Eigen::Index>(partition_.offset(b) + i)) ? '1' : '0';
  }
  return out;
}

std::string StateVector::key() const {
  std::string out(static_cast<std::size_t>(bits_.size()), '0');
  for (Eigen::Index i = 0; i < bits_.size(); ++i)
    if (bits_(i))
      out[static_cast<std::size_t>(i)] = '1';
  return out;
}

// Threshold and update ------------------------------------------------------

Bits apply_threshold(const Eigen::Ref<const Eigen::VectorXd>& raw, const ThresholdRule& rule) {
  return raw.unaryExpr([&rule](double v) -> std::uint8_t { return rule.fires(v) ? 1 : 0; });
}

Bits apply_update(const Bits& bits, const std::vector<std::size_t>& forced_on) {
  Bits out = bits;
  for (auto i : forced_on) {
    if (i >= static_cast<std::size_t>(out.size()))
      throw Error(ErrorCode::IndexOutOfRange,
                  "forced coordinate " + std::to_string(i) + " outside vector of length " + std::to_string(out.size()));
    out(static_cast<Eigen::Index>(i)) = 1;
  }
  return out;
}

namespace {

bool first_step_rule_active(const ThresholdPolicy& policy, const StateVector& seed) {
  switch (policy.first_step_mode) {
  case FirstStepMode::always: return true;
  case FirstStepMode::never: return false;
  case FirstStepMode::automatic: return seed.on_count() == 1;
  }
  return false;
}

void check_seed(const SuperMatrixd& m, const StateVector& seed, Sidedness sidedness) {
  if (sidedness == Sidedness::one_sided) {
    if (m.rows() != m.cols())
      throw Error(ErrorCode::DimensionMismatch, "one-sided dynamics need a square matrix");
    if (seed.side() != Side::domain)
      throw Error(ErrorCode::DimensionMismatch, "one-sided dynamics run on the domain side");
  }
  const std::size_t expected = seed.side() == Side::domain ? m.rows() : m.cols();
  if (seed.size() != expected)
    throw Error(ErrorCode::DimensionMismatch, std::string(to_string(seed.side())) + " seed of length " +
                                                  std::to_string(seed.size()) + ", model expects " +
                                                  std::to_string(expected));
}

} // namespace

StepRecord step(const SuperMatrixd& m, const StateVector& state, const ThresholdPolicy& policy,
                const StateVector& seed, std::size_t step_index, Sidedness sidedness) {
  check_seed(m, seed, sidedness);
  const bool one_sided = sidedness == Sidedness::one_sided;
  const Direction direction = (one_sided || state.side() == Side::domain) ? Direction::forward : Direction::backward;
  if (one_sided && state.side() != Side::domain)
    throw Error(ErrorCode::DimensionMismatch, "one-sided states live on the domain side");

  StepRecord rec;
  rec.step_index = step_index;
  rec.produced_side = one_sided ? Side::domain : other(state.side());
  rec.raw = special_product(state.as_reals(), m, direction).entries();

  rec.used_first_step_rule = step_index == 1 && first_step_rule_active(policy, seed);
  rec.rule_applied = rec.used_first_step_rule ? policy.first_step_rule : policy.rule_for(rec.produced_side);
  rec.thresholded = apply_threshold(rec.raw, rec.rule_applied);
  rec.after_update =
      rec.produced_side == seed.side() ? apply_update(rec.thresholded, seed.on_indices()) : rec.thresholded;
  return rec;
}

HiddenPattern run_hidden_pattern(const SuperMatrixd& m, const StateVector& seed, const ThresholdPolicy& policy,
                                 const RunOptions& options) {
  check_seed(m, seed, options.sidedness);
  if (options.max_steps < 2)
    throw Error(ErrorCode::StepLimitExceeded, "max_steps must be at least 2");

  const bool one_sided = options.sidedness == Sidedness::one_sided;
  const std::size_t steps_per_round = one_sided ? 1 : 2;
  const Side seed_side = seed.side();
  const auto partition_of = [&](Side s) -> const Partition& {
    return s == Side::domain ? m.row_partition() : m.col_partition();
  };

  HiddenPattern result;
  std::vector<StateVector> visits{seed};
  std::vector<std::optional<StateVector>> opposite{std::nullopt};
  std::unordered_map<std::string, std::size_t> seen;
  if (!first_step_rule_active(policy, seed))
    seen.emplace(seed.key(), 0);

  std::size_t products = 0;
  StateVector state = seed;
  for (;;) {
    if (products + steps_per_round > options.max_steps)
      throw Error(ErrorCode::StepLimitExceeded,
                  "no recurrence within " + std::to_string(options.max_steps) + " products");

    std::optional<StateVector> produced_opposite;
    for (std::size_t sub = 0; sub < steps_per_round; ++sub) {
      StepRecord rec = step(m, state, policy, seed, ++products, options.sidedness);
      state = StateVector(rec.after_update, rec.produced_side, partition_of(rec.produced_side));
      if (rec.produced_side != seed_side)
        produced_opposite = state;
      if (options.record_trace)
        result.trace.push_back(std::move(rec));
    }

    const std::size_t k = visits.size();
    visits.push_back(state);
    opposite.push_back(produced_opposite);

    auto [it, inserted] = seen.emplace(state.key(), k);
    if (inserted)
      continue;

    const std::size_t j = it->second;
    result.period = k - j;
    result.kind = result.period == 1 ? PatternKind::fixed_point : PatternKind::limit_cycle;
    result.steps_to_enter = j * steps_per_round;
    result.seed_side_visits = visits.size();
    for (std::size_t i = j; i < k; ++i) {
      if (one_sided) {
        result.cycle.push_back({visits[i], std::nullopt});
      } else if (seed_side == Side::domain) {
        result.cycle.push_back({visits[i], opposite[i + 1]});
      } else {
        result.cycle.push_back({*opposite[i + 1], visits[i]});
      }
    }
    return result;
  }
}

std::vector<SweepEntry> sweep_unit_seeds(const SuperMatrixd& m, Side side, const ThresholdPolicy& policy,
                                         const RunOptions& options) {
  const Partition& partition = side == Side::domain ? m.row_partition() : m.col_partition();
  std::vector<SweepEntry> out;
  out.reserve(partition.total());
  for (std::size_t i = 0; i < partition.total(); ++i)
    out.push_back({i, run_hidden_pattern(m, StateVector::unit(side, partition, i), policy, options)});
  return out;
}

std::vector<StatePair> canonical_rotation(std::vector<StatePair> cycle, Side seed_side) {
  if (cycle.empty())
    return cycle;
  auto seed_key = [seed_side](const StatePair& p) {
    return (seed_side == Side::domain || !p.range) ? p.domain.key() : p.range->key();
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < cycle.size(); ++i)
    if (seed_key(cycle[i]) < seed_key(cycle[best]))
      best = i;
  std::rotate(cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(best), cycle.end());
  return cycle;
}

} // namespace superfrm
