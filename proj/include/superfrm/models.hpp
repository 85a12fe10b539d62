#ifndef SUPERFRM_MODELS_HPP
#define SUPERFRM_MODELS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superfrm/dynamics.hpp"
#include "superfrm/supermatrix.hpp"

namespace superfrm {

enum class ModelKind { fcm, frm, super_row_frm, super_column_frm, super_frm };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Labels grouped into blocks along one side.
using LabelBlocks = std::vector<std::vector<std::string>>;

Partition partition_of(const LabelBlocks& blocks);

struct ModelSpec {
  std::string name;
  std::string description;
  ModelKind kind = ModelKind::frm;
  LabelBlocks domain_labels;
  LabelBlocks range_labels; // equals domain_labels for fcm
  SuperMatrixd matrix{SuperMatrixd::Grid::Zero(1, 1)};
  EntryDomain entry_domain = EntryDomain::signed_ternary;
  ThresholdPolicy policy;

  Sidedness sidedness() const noexcept {
    return kind == ModelKind::fcm ? Sidedness::one_sided : Sidedness::two_sided;
  }
  const LabelBlocks& labels(Side side) const noexcept { return side == Side::domain ? domain_labels : range_labels; }
  const Partition& partition(Side side) const noexcept {
    return side == Side::domain ? matrix.row_partition() : matrix.col_partition();
  }
  /// Flat label list for one side.
  std::vector<std::string> flat_labels(Side side) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct Diagnostic {
  std::string field;
  std::string message;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;

  std::string to_string() const;
};

/// Empty result means the spec is valid.
std::vector<Diagnostic> validate_model(const ModelSpec& spec);

/// Throws ValidationError carrying every diagnostic.
void require_valid(const ModelSpec& spec);

/// Resolves one seed token on a side: an exact label, a 1-based flat index
/// ("7"), or a 1-based block.position pair ("4.1").
std::size_t resolve_label(const ModelSpec& spec, Side side, std::string_view token);

/// Labels close to `token` on either side, for error messages.
std::vector<std::string> near_matches(const ModelSpec& spec, std::string_view token, std::size_t limit = 5);

StateVector seed_from_labels(const ModelSpec& spec, const std::vector<std::string>& labels, Side side);

std::vector<std::string> labels_of(const ModelSpec& spec, const StateVector& state);

struct PolicyOverrides {
  std::optional<ThresholdRule> domain_rule;
  std::optional<ThresholdRule> range_rule;
  std::optional<ThresholdRule> first_step_rule;
  std::optional<FirstStepMode> first_step_mode;
};

ThresholdPolicy effective_policy(const ModelSpec& spec, const PolicyOverrides& overrides);

HiddenPattern run_model(const ModelSpec& spec, const StateVector& seed, const PolicyOverrides& overrides = {},
                        std::size_t max_steps = 10000);

struct ModelSummary {
  std::string name;
  ModelKind kind = ModelKind::frm;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_blocks;
  std::vector<std::size_t> col_blocks;
  MatrixKind matrix_kind;
  EntryDomain entry_domain = EntryDomain::signed_ternary;
  ThresholdPolicy policy;
  std::size_t nonzeros = 0;

  std::string to_text() const;
  std::string to_json() const;

  friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

ModelSummary describe(const ModelSpec& spec);

} // namespace superfrm

#endif // SUPERFRM_MODELS_HPP
