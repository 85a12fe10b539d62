#include "superfrm/model_io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace superfrm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::SchemaError, field + ": " + message);
}

void require_keys(const json& obj, const std::string& field, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object())
    schema_error(field.empty() ? "document" : field, "expected an object");
  const std::string prefix = field.empty() ? "" : field + ".";
  std::set<std::string> known(required.begin(), required.end());
  known.insert(optional.begin(), optional.end());
  for (const auto& item : obj.items())
    if (!known.count(item.key()))
      schema_error(prefix + item.key(), "unknown field");
  for (const char* k : required)
    if (!obj.contains(k))
      schema_error(prefix + k, "missing");
}

std::string get_string(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_string())
    schema_error(field, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number())
    schema_error(field, "expected a number");
  return v.get<double>();
}

LabelBlocks parse_blocks(const json& side, const std::string& field) {
  require_keys(side, field, {"blocks"});
  const json& blocks = side.at("blocks");
  if (!blocks.is_array() || blocks.empty())
    schema_error(field + ".blocks", "expected a non-empty array of label arrays");
  LabelBlocks out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string bfield = field + ".blocks[" + std::to_string(b) + "]";
    if (!blocks[b].is_array() || blocks[b].empty())
      schema_error(bfield, "expected a non-empty array of labels");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      if (!blocks[b][i].is_string())
        schema_error(bfield + "[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(blocks[b][i].get<std::string>());
    }
    out.push_back(std::move(labels));
  }
  return out;
}

ThresholdRule parse_rule_object(const json& obj, const std::string& field, bool with_mode, FirstStepMode* mode) {
  if (with_mode)
    require_keys(obj, field, {"mode", "cmp", "cutoff"});
  else
    require_keys(obj, field, {"cmp", "cutoff"});
  ThresholdRule rule;
  const std::string cmp = get_string(obj, "cmp", field + ".cmp");
  if (cmp == "ge")
    rule.cmp = Comparator::ge;
  else if (cmp == "gt")
    rule.cmp = Comparator::gt;
  else
    schema_error(field + ".cmp", "expected \"ge\" or \"gt\", got \"" + cmp + "\"");
  rule.cutoff = get_number(obj.at("cutoff"), field + ".cutoff");
  if (with_mode) {
    const std::string m = get_string(obj, "mode", field + ".mode");
    if (m == "auto")
      *mode = FirstStepMode::automatic;
    else if (m == "always")
      *mode = FirstStepMode::always;
    else if (m == "never")
      *mode = FirstStepMode::never;
    else
      schema_error(field + ".mode", "expected auto, always or never, got \"" + m + "\"");
  }
  return rule;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i + 1 < end; ++i)
    if (text[i] == '\n')
      ++line;
  return line;
}

} // namespace

ModelSpec parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos)
      what = what.substr(pos);
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_of(text, e.byte)) + ": " + what);
  }

  require_keys(doc, "", {"format_version", "name", "kind", "entry_domain", "domain", "matrix", "policy"},
               {"description", "range"});
  const json& version = doc.at("format_version");
  if (!version.is_number_integer() || version.get<long long>() != model_format_version)
    schema_error("format_version", "expected " + std::to_string(model_format_version));

  ModelSpec spec;
  spec.name = get_string(doc, "name", "name");
  if (doc.contains("description"))
    spec.description = get_string(doc, "description", "description");
  spec.kind = model_kind_from_string(get_string(doc, "kind", "kind"));
  spec.entry_domain = entry_domain_from_string(get_string(doc, "entry_domain", "entry_domain"));
  const bool fcm = spec.kind == ModelKind::fcm;

  spec.domain_labels = parse_blocks(doc.at("domain"), "domain");
  if (doc.contains("range"))
    spec.range_labels = parse_blocks(doc.at("range"), "range");
  else if (fcm)
    spec.range_labels = spec.domain_labels;
  else
    schema_error("range", "missing");

  const Partition rows = partition_of(spec.domain_labels);
  const Partition cols = partition_of(spec.range_labels);
  const json& matrix = doc.at("matrix");
  if (!matrix.is_array())
    schema_error("matrix", "expected an array of rows");
  if (matrix.size() != rows.total())
    schema_error("matrix", std::to_string(matrix.size()) + " rows, domain has " + std::to_string(rows.total()) +
                               " labels");
  SuperMatrixd::Grid grid(static_cast<Eigen::Index>(rows.total()), static_cast<Eigen::Index>(cols.total()));
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    const std::string rfield = "matrix row " + std::to_string(r + 1);
    const json& row = matrix[r];
    if (!row.is_array())
      schema_error(rfield, "expected an array");
    if (row.size() != cols.total())
      schema_error(rfield, std::to_string(row.size()) + " entries, range has " + std::to_string(cols.total()) +
                               " labels");
    for (std::size_t c = 0; c < row.size(); ++c)
      grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(row[c], rfield + ", col " + std::to_string(c + 1));
  }
  spec.matrix = SuperMatrixd(std::move(grid), rows, cols);

  const json& policy = doc.at("policy");
  if (fcm)
    require_keys(policy, "policy", {"domain", "first_step"}, {"range"});
  else
    require_keys(policy, "policy", {"domain", "range", "first_step"});
  spec.policy.domain_rule = parse_rule_object(policy.at("domain"), "policy.domain", false, nullptr);
  spec.policy.range_rule = policy.contains("range")
                               ? parse_rule_object(policy.at("range"), "policy.range", false, nullptr)
                               : spec.policy.domain_rule;
  spec.policy.first_step_rule =
      parse_rule_object(policy.at("first_step"), "policy.first_step", true, &spec.policy.first_step_mode);

  require_valid(spec);
  return spec;
}

std::string format_number(double value) {
  if (value == 0.0)
    return "0";
  if (std::isfinite(value) && std::floor(value) == value && std::fabs(value) < 1e15)
    return std::to_string(static_cast<long long>(value));
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

std::string quote(const std::string& s) { return json(s).dump(); }

std::string rule_text(const ThresholdRule& rule) {
  return "\"cmp\": " + quote(to_string(rule.cmp)) + ", \"cutoff\": " + format_number(rule.cutoff);
}

void write_blocks(std::ostringstream& os, const char* key, const LabelBlocks& blocks) {
  os << "  \"" << key << "\": {\n    \"blocks\": [\n";
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    os << "      [";
    for (std::size_t i = 0; i < blocks[b].size(); ++i)
      os << (i ? ", " : "") << quote(blocks[b][i]);
    os << "]" << (b + 1 < blocks.size() ? "," : "") << "\n";
  }
  os << "    ]\n  },\n";
}

} // namespace

std::string serialize_model(const ModelSpec& spec) {
  std::ostringstream os;
  const bool fcm = spec.kind == ModelKind::fcm;
  os << "{\n";
  os << "  \"format_version\": " << model_format_version << ",\n";
  os << "  \"name\": " << quote(spec.name) << ",\n";
  if (!spec.description.empty())
    os << "  \"description\": " << quote(spec.description) << ",\n";
  os << "  \"kind\": " << quote(to_string(spec.kind)) << ",\n";
  os << "  \"entry_domain\": " << quote(to_string(spec.entry_domain)) << ",\n";
  write_blocks(os, "domain", spec.domain_labels);
  if (!fcm)
    write_blocks(os, "range", spec.range_labels);

  const auto& grid = spec.matrix.entries();
  os << "  \"matrix\": [\n";
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    os << "    [";
    for (Eigen::Index c = 0; c < grid.cols(); ++c)
      os << (c ? ", " : "") << format_number(grid(r, c));
    os << "]" << (r + 1 < grid.rows() ? "," : "") << "\n";
  }
  os << "  ],\n";

  os << "  \"policy\": {\n";
  os << "    \"domain\": {" << rule_text(spec.policy.domain_rule) << "},\n";
  if (!fcm)
    os << "    \"range\": {" << rule_text(spec.policy.range_rule) << "},\n";
  os << "    \"first_step\": {\"mode\": " << quote(to_string(spec.policy.first_step_mode)) << ", "
     << rule_text(spec.policy.first_step_rule) << "}\n";
  os << "  }\n}\n";
  return os.str();
}

// Reports -------------------------------------------------------------------

RunReport make_report(const ModelSpec& spec, const StateVector& seed, const ThresholdPolicy& policy,
                      HiddenPattern pattern, bool include_trace) {
  RunReport r;
  r.model_name = spec.name;
  r.seed_side = seed.side();
  r.seed_labels = labels_of(spec, seed);
  r.policy = policy;
  r.sidedness = spec.sidedness();
  r.pattern = std::move(pattern);
  r.include_trace = include_trace;
  if (!include_trace)
    r.pattern.trace.clear();
  r.domain_labels = spec.domain_labels;
  r.range_labels = spec.range_labels;
  return r;
}

namespace {

std::vector<std::string> flatten_labels(const LabelBlocks& blocks) {
  std::vector<std::string> out;
  for (const auto& b : blocks)
    out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<std::string> on_labels(const StateVector& s, const std::vector<std::string>& flat) {
  std::vector<std::string> out;
  for (auto i : s.on_indices())
    out.push_back(flat.at(i));
  return out;
}

ordered_json number_json(double v) {
  if (std::floor(v) == v && std::fabs(v) < 1e15)
    return static_cast<long long>(v);
  return v;
}

ordered_json rule_json(const ThresholdRule& rule) {
  return {{"cmp", to_string(rule.cmp)}, {"cutoff", number_json(rule.cutoff)}};
}

ordered_json state_json(const StateVector& s, const std::vector<std::string>& flat) {
  return {{"state", s.to_string()}, {"on", on_labels(s, flat)}};
}

std::string bits_text(const Bits& bits, const Partition& partition) {
  return StateVector(bits, Side::domain, partition).to_string();
}

} // namespace

std::string serialize_report(const RunReport& report) {
  const auto dom = flatten_labels(report.domain_labels);
  const auto rng = flatten_labels(report.range_labels);
  const bool one_sided = report.sidedness == Sidedness::one_sided;

  ordered_json j;
  j["report_version"] = report_format_version;
  j["model"] = report.model_name;
  j["seed"] = {{"side", to_string(report.seed_side)}, {"labels", report.seed_labels}};
  ordered_json policy;
  policy["domain"] = rule_json(report.policy.domain_rule);
  if (!one_sided)
    policy["range"] = rule_json(report.policy.range_rule);
  policy["first_step"] = rule_json(report.policy.first_step_rule);
  policy["first_step"]["mode"] = to_string(report.policy.first_step_mode);
  j["policy"] = policy;
  j["pattern"] = {{"kind", to_string(report.pattern.kind)},
                  {"period", report.pattern.period},
                  {"steps_to_enter", report.pattern.steps_to_enter},
                  {"seed_side_visits", report.pattern.seed_side_visits}};
  ordered_json cycle = ordered_json::array();
  for (const auto& pair : report.pattern.cycle) {
    ordered_json p;
    p["domain"] = state_json(pair.domain, dom);
    if (pair.range)
      p["range"] = state_json(*pair.range, rng);
    cycle.push_back(p);
  }
  j["cycle"] = cycle;
  if (report.include_trace) {
    ordered_json trace = ordered_json::array();
    for (const auto& rec : report.pattern.trace) {
      const Partition part = partition_of(rec.produced_side == Side::domain ? report.domain_labels
                                                                              : report.range_labels);
      ordered_json raw = ordered_json::array();
      for (Eigen::Index i = 0; i < rec.raw.size(); ++i)
        raw.push_back(number_json(rec.raw(i)));
      trace.push_back({{"step", rec.step_index},
                       {"produced_side", to_string(rec.produced_side)},
                       {"rule", format_rule(rec.rule_applied)},
                       {"first_step_rule", rec.used_first_step_rule},
                       {"raw", raw},
                       {"thresholded", bits_text(rec.thresholded, part)},
                       {"after_update", bits_text(rec.after_update, part)}});
    }
    j["trace"] = trace;
  }
  return j.dump(2) + "\n";
}

std::string format_report_text(const RunReport& report) {
  const auto dom = flatten_labels(report.domain_labels);
  const auto rng = flatten_labels(report.range_labels);
  const bool one_sided = report.sidedness == Sidedness::one_sided;
  auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
      out += (i ? ", " : "") + items[i];
    return out.empty() ? std::string("(none)") : out;
  };

  std::ostringstream os;
  os << "model:    " << report.model_name << "\n";
  os << "seed:     " << to_string(report.seed_side) << " {" << join(report.seed_labels) << "}\n";
  os << "policy:   domain " << format_rule(report.policy.domain_rule);
  if (!one_sided)
    os << ", range " << format_rule(report.policy.range_rule);
  os << ", first step " << to_string(report.policy.first_step_mode) << " "
     << format_rule(report.policy.first_step_rule) << "\n";
  os << "pattern:  " << to_string(report.pattern.kind) << ", period " << report.pattern.period << ", entered after "
     << report.pattern.steps_to_enter << " products\n";

  for (std::size_t i = 0; i < report.pattern.cycle.size(); ++i) {
    const auto& pair = report.pattern.cycle[i];
    os << "state " << i + 1 << ":\n";
    os << "  domain  " << pair.domain.to_string() << "\n";
    os << "          on: " << join(on_labels(pair.domain, dom)) << "\n";
    if (pair.range) {
      os << "  range   " << pair.range->to_string() << "\n";
      os << "          on: " << join(on_labels(*pair.range, rng)) << "\n";
    }
  }

  if (report.include_trace) {
    os << "trace:\n";
    for (const auto& rec : report.pattern.trace) {
      const Partition part = partition_of(rec.produced_side == Side::domain ? report.domain_labels
                                                                              : report.range_labels);
      os << "  step " << rec.step_index << " -> " << to_string(rec.produced_side) << ", rule "
         << format_rule(rec.rule_applied) << (rec.used_first_step_rule ? " (first step)" : "") << "\n";
      os << "    raw      ";
      for (Eigen::Index k = 0; k < rec.raw.size(); ++k)
        os << (k ? " " : "") << format_number(rec.raw(k));
      os << "\n";
      os << "    thresh   " << bits_text(rec.thresholded, part) << "\n";
      os << "    updated  " << bits_text(rec.after_update, part) << "\n";
    }
  }
  return os.str();
}

} // namespace superfrm
