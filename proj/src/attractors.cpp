#include <map>

#include "superfrm/dynamics.hpp"

namespace superfrm {

namespace {

using Plain = std::vector<std::uint8_t>;

// Row-major copy of the matrix walked with plain loops; shares nothing with
// the Eigen product path used by run_hidden_pattern.
struct PlainSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;
  bool one_sided = false;
  ThresholdPolicy policy;

  // forward: domain -> range (or domain -> domain when one-sided)
  Plain product(const Plain& x, bool forward, const ThresholdRule& rule) const {
    const std::size_t out_len = forward ? cols : rows;
    Plain out(out_len, 0);
    for (std::size_t o = 0; o < out_len; ++o) {
      double sum = 0.0;
      if (forward) {
        for (std::size_t i = 0; i < rows; ++i)
          if (x[i])
            sum += weights[i * cols + o];
      } else {
        for (std::size_t j = 0; j < cols; ++j)
          if (x[j])
            sum += weights[o * cols + j];
      }
      out[o] = rule.fires(sum) ? 1 : 0;
    }
    return out;
  }
};

struct Outcome {
  std::vector<Plain> seed_side;    // cycle states, in trajectory order
  std::vector<Plain> opposite_side; // state produced from each seed-side cycle state
};

Outcome simulate(const PlainSystem& sys, const Plain& seed, Side seed_side) {
  std::size_t on = 0;
  for (auto b : seed)
    on += b;
  const bool first_rule = sys.policy.first_step_mode == FirstStepMode::always ||
                          (sys.policy.first_step_mode == FirstStepMode::automatic && on == 1);

  auto force = [&seed](Plain& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = s[i] | seed[i];
  };

  std::vector<Plain> trail{seed};
  std::vector<Plain> produced{Plain{}};
  std::size_t step_no = 0;
  for (;;) {
    const Plain& current = trail.back();
    Plain next;
    Plain opp;
    if (sys.one_sided) {
      ++step_no;
      next = sys.product(current, true, step_no == 1 && first_rule ? sys.policy.first_step_rule
                                                                    : sys.policy.domain_rule);
      force(next);
    } else {
      const bool forward = seed_side == Side::domain;
      const Side mid_side = other(seed_side);
      ++step_no;
      opp = sys.product(current, forward,
                        step_no == 1 && first_rule ? sys.policy.first_step_rule : sys.policy.rule_for(mid_side));
      ++step_no;
      next = sys.product(opp, !forward, sys.policy.rule_for(seed_side));
      force(next);
    }
    const std::size_t first_eligible = first_rule ? 1 : 0;
    for (std::size_t j = first_eligible; j < trail.size(); ++j) {
      if (trail[j] == next) {
        Outcome out;
        out.seed_side.assign(trail.begin() + static_cast<std::ptrdiff_t>(j), trail.end());
        out.opposite_side.assign(produced.begin() + static_cast<std::ptrdiff_t>(j) + 1, produced.end());
        out.opposite_side.push_back(opp);
        return out;
      }
    }
    trail.push_back(std::move(next));
    produced.push_back(std::move(opp));
  }
}

StateVector to_state(const Plain& bits, Side side, const Partition& partition) {
  Bits b(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i)
    b(static_cast<Eigen::Index>(i)) = bits[i];
  return StateVector(std::move(b), side, partition);
}

std::string cycle_key(const std::vector<StatePair>& cycle) {
  std::string key;
  for (const auto& p : cycle) {
    key += p.domain.key();
    key += '/';
    if (p.range)
      key += p.range->key();
    key += ';';
  }
  return key;
}

} // namespace

AttractorCensus enumerate_attractors(const SuperMatrixd& m, Side side, const ThresholdPolicy& policy,
                                     std::size_t state_limit, Sidedness sidedness) {
  const bool one_sided = sidedness == Sidedness::one_sided;
  if (one_sided && (side != Side::domain || m.rows() != m.cols()))
    throw Error(ErrorCode::DimensionMismatch, "one-sided enumeration needs a square matrix and the domain side");

  const std::size_t n = side == Side::domain ? m.rows() : m.cols();
  if (n >= 32 || (std::size_t{1} << n) > state_limit)
    throw Error(ErrorCode::StateSpaceTooLarge,
                "2^" + std::to_string(n) + " seeds exceed the limit of " + std::to_string(state_limit));

  PlainSystem sys;
  sys.rows = m.rows();
  sys.cols = m.cols();
  sys.one_sided = one_sided;
  sys.policy = policy;
  sys.weights.reserve(sys.rows * sys.cols);
  for (std::size_t r = 0; r < sys.rows; ++r)
    for (std::size_t c = 0; c < sys.cols; ++c)
      sys.weights.push_back(m(r, c));

  const Partition& seed_partition = side == Side::domain ? m.row_partition() : m.col_partition();
  const Partition& opposite_partition = side == Side::domain ? m.col_partition() : m.row_partition();

  AttractorCensus census;
  census.side = side;
  census.dimension = n;
  const std::size_t count = std::size_t{1} << n;
  census.assignment.resize(count);
  std::map<std::string, std::uint32_t> index_of;

  Plain seed(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t i = 0; i < n; ++i)
      seed[i] = static_cast<std::uint8_t>((mask >> i) & 1u);
    Outcome outcome = simulate(sys, seed, side);

    std::vector<StatePair> cycle;
    for (std::size_t i = 0; i < outcome.seed_side.size(); ++i) {
      StateVector s = to_state(outcome.seed_side[i], side, seed_partition);
      if (one_sided)
        cycle.push_back({s, std::nullopt});
      else if (side == Side::domain)
        cycle.push_back({s, to_state(outcome.opposite_side[i], Side::range, opposite_partition)});
      else
        cycle.push_back({to_state(outcome.opposite_side[i], Side::domain, opposite_partition), s});
    }
    cycle = canonical_rotation(std::move(cycle), side);

    auto [it, inserted] = index_of.emplace(cycle_key(cycle), static_cast<std::uint32_t>(census.attractors.size()));
    if (inserted) {
      Attractor a;
      a.period = cycle.size();
      a.kind = a.period == 1 ? PatternKind::fixed_point : PatternKind::limit_cycle;
      a.cycle = std::move(cycle);
      a.first_seed = mask;
      census.attractors.push_back(std::move(a));
    }
    census.attractors[it->second].basin_size += 1;
    census.assignment[mask] = it->second;
  }
  return census;
}

} // namespace superfrm
