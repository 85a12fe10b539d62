#include "superfrm/models.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

namespace superfrm {

const char* to_string(ModelKind kind) {
  switch (kind) {
  case ModelKind::fcm: return "fcm";
  case ModelKind::frm: return "frm";
  case ModelKind::super_row_frm: return "super_row_frm";
  case ModelKind::super_column_frm: return "super_column_frm";
  case ModelKind::super_frm: return "super_frm";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto k : {ModelKind::fcm, ModelKind::frm, ModelKind::super_row_frm, ModelKind::super_column_frm,
                 ModelKind::super_frm})
    if (name == to_string(k))
      return k;
  throw Error(ErrorCode::SchemaError, "unknown model kind '" + std::string(name) + "'");
}

Partition partition_of(const LabelBlocks& blocks) {
  std::vector<std::size_t> sizes;
  sizes.reserve(blocks.size());
  for (const auto& b : blocks)
    sizes.push_back(b.size());
  return Partition(std::move(sizes));
}

std::vector<std::string> ModelSpec::flat_labels(Side side) const {
  std::vector<std::string> out;
  for (const auto& block : labels(side))
    out.insert(out.end(), block.begin(), block.end());
  return out;
}

std::string Diagnostic::to_string() const {
  std::string out = field;
  if (row && col)
    out += " (row " + std::to_string(*row + 1) + ", col " + std::to_string(*col + 1) + ")";
  else if (row)
    out += " (row " + std::to_string(*row + 1) + ")";
  return out + ": " + message;
}

namespace {

void check_side_labels(const ModelSpec& spec, Side side, std::vector<Diagnostic>& out) {
  const std::string field = std::string(to_string(side)) + ".blocks";
  const LabelBlocks& blocks = spec.labels(side);
  const Partition& partition = spec.partition(side);
  if (blocks.size() != partition.block_count()) {
    out.push_back({field,
                   std::to_string(blocks.size()) + " label blocks against " +
                       std::to_string(partition.block_count()) + " matrix blocks",
                   {},
                   {}});
  } else {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].size() != partition.size(b))
        out.push_back({field,
                       "block " + std::to_string(b + 1) + " has " + std::to_string(blocks[b].size()) +
                           " labels, matrix block has " + std::to_string(partition.size(b)),
                       {},
                       {}});
  }
  std::set<std::string> seen;
  for (const auto& label : spec.flat_labels(side)) {
    if (label.empty())
      out.push_back({field, "empty label", {}, {}});
    else if (!seen.insert(label).second)
      out.push_back({field, "duplicate label '" + label + "'", {}, {}});
  }
}

} // namespace

std::vector<Diagnostic> validate_model(const ModelSpec& spec) {
  std::vector<Diagnostic> out;
  check_side_labels(spec, Side::domain, out);
  check_side_labels(spec, Side::range, out);

  const bool rows_trivial = spec.matrix.row_partition().is_trivial();
  const bool cols_trivial = spec.matrix.col_partition().is_trivial();
  const std::string kind = to_string(spec.kind);
  switch (spec.kind) {
  case ModelKind::fcm:
    if (spec.matrix.rows() != spec.matrix.cols())
      out.push_back({"matrix",
                     "fcm needs a square matrix, got " + std::to_string(spec.matrix.rows()) + "x" +
                         std::to_string(spec.matrix.cols()),
                     {},
                     {}});
    if (spec.domain_labels != spec.range_labels)
      out.push_back({"range.blocks", "fcm domain and range labels differ", {}, {}});
    if (!rows_trivial || !cols_trivial)
      out.push_back({"matrix", "fcm partitions must be trivial", {}, {}});
    if (!(spec.policy.domain_rule == spec.policy.range_rule))
      out.push_back({"policy.range", "fcm uses a single rule; range must equal domain", {}, {}});
    break;
  case ModelKind::frm:
    if (!rows_trivial || !cols_trivial)
      out.push_back({"matrix", "frm partitions must be trivial", {}, {}});
    break;
  case ModelKind::super_column_frm:
    if (rows_trivial)
      out.push_back({"domain.blocks", kind + " needs more than one domain block", {}, {}});
    if (!cols_trivial)
      out.push_back({"range.blocks", kind + " needs a single range block", {}, {}});
    break;
  case ModelKind::super_row_frm:
    if (!rows_trivial)
      out.push_back({"domain.blocks", kind + " needs a single domain block", {}, {}});
    if (cols_trivial)
      out.push_back({"range.blocks", kind + " needs more than one range block", {}, {}});
    break;
  case ModelKind::super_frm:
    if (rows_trivial)
      out.push_back({"domain.blocks", kind + " needs more than one domain block", {}, {}});
    if (cols_trivial)
      out.push_back({"range.blocks", kind + " needs more than one range block", {}, {}});
    break;
  }

  for (const auto& v : check_entry_domain(spec.matrix, spec.entry_domain)) {
    std::ostringstream msg;
    msg << "entry " << v.value << " outside " << to_string(spec.entry_domain);
    out.push_back({"matrix", msg.str(), v.row, v.col});
  }
  return out;
}

void require_valid(const ModelSpec& spec) {
  auto diagnostics = validate_model(spec);
  if (diagnostics.empty())
    return;
  std::string msg = "model '" + spec.name + "' is invalid";
  for (const auto& d : diagnostics)
    msg += "\n  " + d.to_string();
  throw Error(ErrorCode::ValidationError, msg);
}

namespace {

std::optional<std::size_t> parse_positive(std::string_view text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || value == 0)
    return std::nullopt;
  return value;
}

std::optional<std::size_t> try_resolve(const ModelSpec& spec, Side side, std::string_view token) {
  const auto flat = spec.flat_labels(side);
  if (auto it = std::find(flat.begin(), flat.end(), token); it != flat.end())
    return static_cast<std::size_t>(it - flat.begin());

  const Partition& partition = spec.partition(side);
  if (auto dot = token.find('.'); dot != std::string_view::npos) {
    auto block = parse_positive(token.substr(0, dot));
    auto pos = parse_positive(token.substr(dot + 1));
    if (block && pos && *block <= partition.block_count() && *pos <= partition.size(*block - 1))
      return partition.offset(*block - 1) + *pos - 1;
    return std::nullopt;
  }
  if (auto index = parse_positive(token); index && *index <= partition.total())
    return *index - 1;
  return std::nullopt;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j)
    prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                        std::tolower(static_cast<unsigned char>(b[j - 1]));
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (same ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

} // namespace

std::size_t resolve_label(const ModelSpec& spec, Side side, std::string_view token) {
  if (spec.kind == ModelKind::fcm && side == Side::range)
    throw Error(ErrorCode::WrongSide, "fcm models have a single (domain) node set");
  if (auto index = try_resolve(spec, side, token))
    return *index;
  // Indices are valid on both sides, so only a label name can be on the wrong one.
  const auto elsewhere = spec.flat_labels(other(side));
  if (spec.kind != ModelKind::fcm && std::find(elsewhere.begin(), elsewhere.end(), token) != elsewhere.end())
    throw Error(ErrorCode::WrongSide, "'" + std::string(token) + "' is a " + to_string(other(side)) + " node, not " +
                                          to_string(side));
  std::string msg = "no " + std::string(to_string(side)) + " node '" + std::string(token) + "'";
  auto close = near_matches(spec, token);
  if (!close.empty()) {
    msg += "; did you mean";
    for (std::size_t i = 0; i < close.size(); ++i)
      msg += (i ? ", " : " ") + close[i];
    msg += "?";
  }
  throw Error(ErrorCode::UnknownLabel, msg);
}

std::vector<std::string> near_matches(const ModelSpec& spec, std::string_view token, std::size_t limit) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  std::set<std::string> seen;
  for (Side side : {Side::domain, Side::range})
    for (const auto& label : spec.flat_labels(side)) {
      if (!seen.insert(label).second)
        continue;
      const std::size_t d = edit_distance(token, label);
      if (d <= std::max<std::size_t>(1, token.size() / 3))
        scored.emplace_back(d, label);
    }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i)
    out.push_back(scored[i].second);
  return out;
}

StateVector seed_from_labels(const ModelSpec& spec, const std::vector<std::string>& labels, Side side) {
  std::vector<std::size_t> on;
  for (const auto& label : labels)
    on.push_back(resolve_label(spec, side, label));
  return StateVector::from_indices(side, spec.partition(side), on);
}

std::vector<std::string> labels_of(const ModelSpec& spec, const StateVector& state) {
  const auto flat = spec.flat_labels(state.side());
  std::vector<std::string> out;
  for (auto i : state.on_indices())
    out.push_back(flat.at(i));
  return out;
}

ThresholdPolicy effective_policy(const ModelSpec& spec, const PolicyOverrides& overrides) {
  ThresholdPolicy policy = spec.policy;
  if (overrides.domain_rule)
    policy.domain_rule = *overrides.domain_rule;
  if (overrides.range_rule)
    policy.range_rule = *overrides.range_rule;
  if (overrides.first_step_rule)
    policy.first_step_rule = *overrides.first_step_rule;
  if (overrides.first_step_mode)
    policy.first_step_mode = *overrides.first_step_mode;
  if (spec.kind == ModelKind::fcm)
    policy.range_rule = policy.domain_rule;
  return policy;
}

HiddenPattern run_model(const ModelSpec& spec, const StateVector& seed, const PolicyOverrides& overrides,
                        std::size_t max_steps) {
  require_valid(spec);
  if (spec.kind == ModelKind::fcm && seed.side() != Side::domain)
    throw Error(ErrorCode::WrongSide, "fcm seeds live on the domain side");
  if (!(seed.partition() == spec.partition(seed.side())))
    throw Error(ErrorCode::DimensionMismatch, "seed partition does not match the model's " +
                                                  std::string(to_string(seed.side())) + " side");
  RunOptions options;
  options.max_steps = max_steps;
  options.sidedness = spec.sidedness();
  return run_hidden_pattern(spec.matrix, seed, effective_policy(spec, overrides), options);
}

ModelSummary describe(const ModelSpec& spec) {
  ModelSummary s;
  s.name = spec.name;
  s.kind = spec.kind;
  s.rows = spec.matrix.rows();
  s.cols = spec.matrix.cols();
  s.row_blocks = spec.matrix.row_partition().sizes();
  s.col_blocks = spec.matrix.col_partition().sizes();
  s.matrix_kind = classify(spec.matrix);
  s.entry_domain = spec.entry_domain;
  s.policy = spec.policy;
  s.nonzeros = static_cast<std::size_t>((spec.matrix.entries().array() != 0.0).count());
  return s;
}

namespace {

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out = "[";
  for (std::size_t i = 0; i < sizes.size(); ++i)
    out += (i ? "," : "") + std::to_string(sizes[i]);
  return out + "]";
}

} // namespace

std::string ModelSummary::to_text() const {
  std::ostringstream os;
  auto line = [&os](const char* key, const std::string& value) {
    os << key;
    for (std::size_t pad = std::char_traits<char>::length(key); pad < 15; ++pad)
      os << ' ';
    os << value << '\n';
  };
  line("name:", name);
  line("kind:", to_string(kind));
  line("dimensions:", std::to_string(rows) + "x" + std::to_string(cols));
  line("row blocks:", join_sizes(row_blocks));
  line("col blocks:", join_sizes(col_blocks));
  line("matrix shape:", std::string(to_string(matrix_kind.shape)) + (matrix_kind.perfect_square ? " (perfect square)" : ""));
  line("entry domain:", to_string(entry_domain));
  line("policy:", "domain " + format_rule(policy.domain_rule) + ", range " + format_rule(policy.range_rule) +
                      ", first step " + to_string(policy.first_step_mode) + " " + format_rule(policy.first_step_rule));
  line("nonzeros:", std::to_string(nonzeros));
  return os.str();
}

std::string ModelSummary::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["kind"] = to_string(kind);
  j["rows"] = rows;
  j["cols"] = cols;
  j["row_blocks"] = row_blocks;
  j["col_blocks"] = col_blocks;
  j["matrix_shape"] = to_string(matrix_kind.shape);
  j["mixed_rows"] = matrix_kind.mixed_rows;
  j["mixed_cols"] = matrix_kind.mixed_cols;
  j["square"] = matrix_kind.square;
  j["perfect_square"] = matrix_kind.perfect_square;
  j["entry_domain"] = to_string(entry_domain);
  j["policy"] = {{"domain", format_rule(policy.domain_rule)},
                 {"range", format_rule(policy.range_rule)},
                 {"first_step_mode", to_string(policy.first_step_mode)},
                 {"first_step", format_rule(policy.first_step_rule)}};
  j["nonzeros"] = nonzeros;
  return j.dump(2) + "\n";
}

} // namespace superfrm
