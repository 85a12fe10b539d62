#ifndef SUPERFRM_MODEL_IO_HPP
#define SUPERFRM_MODEL_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "superfrm/models.hpp"

namespace superfrm {

inline constexpr int model_format_version = 1;
inline constexpr int report_format_version = 1;

/// Parses a model document. Malformed JSON raises SyntaxError with the line,
/// structural problems SchemaError, and invariant violations ValidationError.
ModelSpec parse_model(std::string_view text);

/// Canonical document: fixed key order, one matrix row per line, LF endings.
std::string serialize_model(const ModelSpec& spec);

/// Shortest text for a number; integral values carry no decimal point.
std::string format_number(double value);

struct RunReport {
  std::string model_name;
  Side seed_side = Side::domain;
  std::vector<std::string> seed_labels;
  ThresholdPolicy policy;
  Sidedness sidedness = Sidedness::two_sided;
  HiddenPattern pattern;
  bool include_trace = false;
  LabelBlocks domain_labels;
  LabelBlocks range_labels;
};

RunReport make_report(const ModelSpec& spec, const StateVector& seed, const ThresholdPolicy& policy,
                      HiddenPattern pattern, bool include_trace);

std::string serialize_report(const RunReport& report);
std::string format_report_text(const RunReport& report);

/// Graphviz text: one cluster per block, one edge per nonzero entry.
std::string emit_dot(const ModelSpec& spec);

std::vector<std::string> fixture_names();
/// Throws UnknownFixture.
ModelSpec load_fixture(std::string_view name);
/// Canonical document text of a bundled fixture.
std::string_view fixture_text(std::string_view name);

} // namespace superfrm

#endif // SUPERFRM_MODEL_IO_HPP
