#ifndef SUPERFRM_DYNAMICS_HPP
#define SUPERFRM_DYNAMICS_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superfrm/supermatrix.hpp"

namespace superfrm {

/// Rows of a connection matrix are the domain side, columns the range side.
enum class Side { domain, range };

/// forward multiplies a domain state by M, backward a range state by M^T.
enum class Direction { forward, backward };

/// FCMs iterate a square matrix on a single node set.
enum class Sidedness { two_sided, one_sided };

enum class Comparator { ge, gt };

struct ThresholdRule {
  Comparator cmp = Comparator::gt;
  double cutoff = 0.0;

  bool fires(double value) const noexcept { return cmp == Comparator::ge ? value >= cutoff : value > cutoff; }

  friend bool operator==(const ThresholdRule&, const ThresholdRule&) = default;
};

/// automatic applies the first-step rule to step 1 only for unit seeds.
enum class FirstStepMode { automatic, always, never };

struct ThresholdPolicy {
  ThresholdRule domain_rule;
  ThresholdRule range_rule;
  ThresholdRule first_step_rule{Comparator::gt, 0.0};
  FirstStepMode first_step_mode = FirstStepMode::automatic;

  const ThresholdRule& rule_for(Side side) const noexcept {
    return side == Side::domain ? domain_rule : range_rule;
  }

  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;
};

const char* to_string(Side side);
const char* to_string(Comparator cmp);
const char* to_string(FirstStepMode mode);
Side other(Side side) noexcept;

/// "ge:2", "gt:0.5"
ThresholdRule parse_rule(std::string_view text);
std::string format_rule(const ThresholdRule& rule);

using Bits = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

/// Binary on/off assignment over one side's nodes.
class StateVector {
public:
  StateVector(Bits bits, Side side, Partition partition);

  static StateVector zeros(Side side, const Partition& partition);
  static StateVector unit(Side side, const Partition& partition, std::size_t index);
  static StateVector from_indices(Side side, const Partition& partition, const std::vector<std::size_t>& on);

  const Bits& bits() const noexcept { return bits_; }
  Side side() const noexcept { return side_; }
  const Partition& partition() const noexcept { return partition_; }
  std::size_t size() const noexcept { return partition_.total(); }
  bool operator[](std::size_t i) const { return bits_(static_cast<Eigen::Index>(i)) != 0; }

  std::vector<std::size_t> on_indices() const;
  std::size_t on_count() const;

  /// Block-separated 0/1 text, e.g. "100|1001|11000".
  std::string to_string() const;
  /// Exact encoding of the bits, usable as a map key.
  std::string key() const;

  Eigen::VectorXd as_reals() const { return bits_.cast<double>(); }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.side_ == b.side_ && a.partition_ == b.partition_ && a.bits_ == b.bits_;
  }

private:
  Bits bits_;
  Side side_;
  Partition partition_;
};

/// x (.)_s M: the plain product on the flattened matrix, re-partitioned by
/// M's column partition (forward) or row partition (backward).
template <typename Derived, typename Scalar>
SuperVector<Scalar> special_product(const Eigen::MatrixBase<Derived>& x, const SuperMatrix<Scalar>& m,
                                    Direction direction) {
  const bool forward = direction == Direction::forward;
  const std::size_t expected = forward ? m.rows() : m.cols();
  if (static_cast<std::size_t>(x.size()) != expected)
    throw Error(ErrorCode::DimensionMismatch, "vector of length " + std::to_string(x.size()) + " against " +
                                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                                  (forward ? " (forward)" : " (backward)"));
  using Vector = typename SuperVector<Scalar>::Vector;
  if (forward) {
    Vector y = m.entries().transpose() * x.template cast<Scalar>();
    return SuperVector<Scalar>(std::move(y), m.col_partition());
  }
  Vector y = m.entries() * x.template cast<Scalar>();
  return SuperVector<Scalar>(std::move(y), m.row_partition());
}

Bits apply_threshold(const Eigen::Ref<const Eigen::VectorXd>& raw, const ThresholdRule& rule);

/// Sets every forced coordinate to 1.
Bits apply_update(const Bits& bits, const std::vector<std::size_t>& forced_on);

struct StepRecord {
  std::size_t step_index = 0;
  Side produced_side = Side::range;
  Eigen::VectorXd raw;
  Bits thresholded;
  Bits after_update;
  ThresholdRule rule_applied;
  bool used_first_step_rule = false;
};

/// One multiply-threshold-update product. Domain states go forward and
/// range states backward; one-sided models always go forward onto the
/// domain side.
StepRecord step(const SuperMatrixd& m, const StateVector& state, const ThresholdPolicy& policy,
                const StateVector& seed, std::size_t step_index, Sidedness sidedness = Sidedness::two_sided);

enum class PatternKind { fixed_point, limit_cycle };
const char* to_string(PatternKind kind);

/// Range is empty for one-sided models.
struct StatePair {
  StateVector domain;
  std::optional<StateVector> range;

  friend bool operator==(const StatePair&, const StatePair&) = default;
};

struct HiddenPattern {
  PatternKind kind = PatternKind::fixed_point;
  std::size_t period = 1;
  std::vector<StatePair> cycle;
  /// Products performed before the trajectory is inside the cycle.
  std::size_t steps_to_enter = 0;
  /// Seed-side states produced, seed included, until the recurrence.
  std::size_t seed_side_visits = 0;
  std::vector<StepRecord> trace;
};

struct RunOptions {
  std::size_t max_steps = 10000;
  Sidedness sidedness = Sidedness::two_sided;
  bool record_trace = true;
};

/// Iterates from the seed until a seed-side state recurs.
///
/// When the first-step rule fires on step 1 the map from the seed differs
/// from every later round, so the seed itself is not eligible as a
/// recurrence target.
HiddenPattern run_hidden_pattern(const SuperMatrixd& m, const StateVector& seed, const ThresholdPolicy& policy,
                                 const RunOptions& options = {});

struct SweepEntry {
  std::size_t index;
  HiddenPattern pattern;
};

std::vector<SweepEntry> sweep_unit_seeds(const SuperMatrixd& m, Side side, const ThresholdPolicy& policy,
                                         const RunOptions& options = {});

/// Rotates a cycle so that its smallest seed-side state comes first.
std::vector<StatePair> canonical_rotation(std::vector<StatePair> cycle, Side seed_side);

struct Attractor {
  PatternKind kind = PatternKind::fixed_point;
  std::size_t period = 1;
  std::vector<StatePair> cycle; // canonical rotation
  std::size_t basin_size = 0;
  std::size_t first_seed = 0;
};

struct AttractorCensus {
  Side side = Side::domain;
  std::size_t dimension = 0;
  std::vector<Attractor> attractors;
  /// attractor index for every seed, indexed by the seed's bit mask
  /// (bit i = coordinate i).
  std::vector<std::uint32_t> assignment;
};

/// Exhaustive oracle: runs every one of the 2^n seeds on `side` through a
/// separate plain-loop simulator and groups outcomes by attractor.
AttractorCensus enumerate_attractors(const SuperMatrixd& m, Side side, const ThresholdPolicy& policy,
                                     std::size_t state_limit, Sidedness sidedness = Sidedness::two_sided);

} // namespace superfrm

#endif // SUPERFRM_DYNAMICS_HPP
