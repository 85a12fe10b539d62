#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "superfrm/model_io.hpp"

namespace superfrm::cli {

namespace {

struct Options {
  std::string fixture;
  std::string model_path;
  std::vector<std::string> on;
  std::string side;
  std::string threshold_domain;
  std::string threshold_range;
  std::string first_step;
  std::size_t max_steps = 10000;
  std::size_t max_states = std::size_t{1} << 20;
  bool trace = false;
  bool json = false;
  std::string output;
};

// Usage problems found after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::SyntaxError:
  case ErrorCode::SchemaError:
  case ErrorCode::ValidationError:
  case ErrorCode::EmptyPartition:
  case ErrorCode::NonPositiveBlock:
  case ErrorCode::CutOutOfRange:
  case ErrorCode::DuplicateCut:
    return invalid_model;
  case ErrorCode::StepLimitExceeded:
  case ErrorCode::StateSpaceTooLarge:
    return resource_bound;
  default:
    return usage;
  }
}

ModelSpec load_model(const Options& opt) {
  if (opt.fixture.empty() == opt.model_path.empty())
    throw UsageError("give exactly one of --fixture NAME or a model path");
  if (!opt.fixture.empty())
    return load_fixture(opt.fixture);
  std::ifstream in(opt.model_path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read '" + opt.model_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

ThresholdRule parse_rule_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_rule(text);
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

PolicyOverrides overrides_from(const Options& opt) {
  PolicyOverrides o;
  if (!opt.threshold_domain.empty())
    o.domain_rule = parse_rule_flag("--threshold-domain", opt.threshold_domain);
  if (!opt.threshold_range.empty())
    o.range_rule = parse_rule_flag("--threshold-range", opt.threshold_range);
  if (opt.first_step == "auto")
    o.first_step_mode = FirstStepMode::automatic;
  else if (opt.first_step == "always")
    o.first_step_mode = FirstStepMode::always;
  else if (opt.first_step == "never")
    o.first_step_mode = FirstStepMode::never;
  else if (!opt.first_step.empty())
    o.first_step_rule = parse_rule_flag("--first-step", opt.first_step);
  return o;
}

std::optional<Side> side_flag(const Options& opt) {
  if (opt.side.empty())
    return std::nullopt;
  return opt.side == "domain" ? Side::domain : Side::range;
}

// Picks the side on which every seed token resolves, preferring the domain.
Side infer_side(const ModelSpec& spec, const std::vector<std::string>& tokens) {
  if (spec.kind == ModelKind::fcm)
    return Side::domain;
  for (Side side : {Side::domain, Side::range}) {
    bool all = true;
    for (const auto& t : tokens) {
      try {
        resolve_label(spec, side, t);
      } catch (const Error&) {
        all = false;
        break;
      }
    }
    if (all)
      return side;
  }
  return Side::domain; // let resolution report the first bad token
}

class Sink {
public:
  explicit Sink(const Options& opt, std::ostream& out) : out_(out), path_(opt.output) {}

  std::ostream& stream() { return path_.empty() ? out_ : buffer_; }

  void commit() {
    if (path_.empty())
      return;
    std::ofstream file(path_, std::ios::binary);
    if (!(file << buffer_.str()))
      throw UsageError("cannot write '" + path_ + "'");
  }

private:
  std::ostream& out_;
  std::string path_;
  std::ostringstream buffer_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items)
    out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string pair_text(const StatePair& p) {
  return p.range ? p.domain.to_string() + " / " + p.range->to_string() : p.domain.to_string();
}

nlohmann::ordered_json pair_json(const ModelSpec& spec, const StatePair& p) {
  nlohmann::ordered_json j;
  j["domain"] = {{"state", p.domain.to_string()}, {"on", labels_of(spec, p.domain)}};
  if (p.range)
    j["range"] = {{"state", p.range->to_string()}, {"on", labels_of(spec, *p.range)}};
  return j;
}

// Subcommands ---------------------------------------------------------------

int cmd_validate(const Options& opt, std::ostream& out) {
  const ModelSpec spec = load_model(opt);
  if (opt.json) {
    nlohmann::ordered_json j;
    j["valid"] = true;
    j["model"] = spec.name;
    j["kind"] = to_string(spec.kind);
    out << j.dump(2) << "\n";
  } else {
    out << "ok: " << spec.name << " (" << to_string(spec.kind) << ", " << spec.matrix.rows() << "x"
        << spec.matrix.cols() << ")\n";
  }
  return ok;
}

int cmd_describe(const Options& opt, std::ostream& out) {
  const ModelSummary summary = describe(load_model(opt));
  Sink sink(opt, out);
  sink.stream() << (opt.json ? summary.to_json() : summary.to_text());
  sink.commit();
  return ok;
}

int cmd_run(const Options& opt, std::ostream& out) {
  const ModelSpec spec = load_model(opt);
  const Side side = side_flag(opt).value_or(infer_side(spec, opt.on));
  const StateVector seed = seed_from_labels(spec, opt.on, side);
  const PolicyOverrides overrides = overrides_from(opt);
  HiddenPattern pattern = run_model(spec, seed, overrides, opt.max_steps);
  const RunReport report = make_report(spec, seed, effective_policy(spec, overrides), std::move(pattern), opt.trace);
  Sink sink(opt, out);
  sink.stream() << (opt.json ? serialize_report(report) : format_report_text(report));
  sink.commit();
  return ok;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const ModelSpec spec = load_model(opt);
  const Side side = side_flag(opt).value_or(Side::domain);
  if (spec.kind == ModelKind::fcm && side == Side::range)
    throw Error(ErrorCode::WrongSide, "fcm models have a single (domain) node set");
  const ThresholdPolicy policy = effective_policy(spec, overrides_from(opt));
  RunOptions run;
  run.max_steps = opt.max_steps;
  run.sidedness = spec.sidedness();
  run.record_trace = false;
  const auto entries = sweep_unit_seeds(spec.matrix, side, policy, run);
  const auto labels = spec.flat_labels(side);

  Sink sink(opt, out);
  std::ostream& os = sink.stream();
  if (opt.json) {
    nlohmann::ordered_json j;
    j["report_version"] = report_format_version;
    j["model"] = spec.name;
    j["side"] = to_string(side);
    j["policy"] = {{"domain", format_rule(policy.domain_rule)},
                   {"range", format_rule(policy.range_rule)},
                   {"first_step", format_rule(policy.first_step_rule)},
                   {"first_step_mode", to_string(policy.first_step_mode)}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json cycle = nlohmann::ordered_json::array();
      for (const auto& p : e.pattern.cycle)
        cycle.push_back(pair_json(spec, p));
      rows.push_back({{"seed", labels[e.index]},
                      {"kind", to_string(e.pattern.kind)},
                      {"period", e.pattern.period},
                      {"steps_to_enter", e.pattern.steps_to_enter},
                      {"cycle", cycle}});
    }
    j["rows"] = rows;
    os << j.dump(2) << "\n";
  } else {
    std::size_t width = 4;
    for (const auto& l : labels)
      width = std::max(width, l.size());
    os << std::left << std::setw(static_cast<int>(width)) << "seed" << "  " << std::setw(11) << "pattern"
       << "  period  enter  first cycle state\n";
    for (const auto& e : entries)
      os << std::left << std::setw(static_cast<int>(width)) << labels[e.index] << "  " << std::setw(11)
         << to_string(e.pattern.kind) << "  " << std::setw(6) << e.pattern.period << "  " << std::setw(5)
         << e.pattern.steps_to_enter << "  " << pair_text(e.pattern.cycle.front()) << "\n";
  }
  sink.commit();
  return ok;
}

int cmd_attractors(const Options& opt, std::ostream& out) {
  const ModelSpec spec = load_model(opt);
  const Side side = side_flag(opt).value_or(Side::domain);
  if (spec.kind == ModelKind::fcm && side == Side::range)
    throw Error(ErrorCode::WrongSide, "fcm models have a single (domain) node set");
  const ThresholdPolicy policy = effective_policy(spec, overrides_from(opt));
  const AttractorCensus census = enumerate_attractors(spec.matrix, side, policy, opt.max_states, spec.sidedness());
  const auto labels = spec.flat_labels(side);
  auto seed_labels = [&](std::size_t mask) {
    std::vector<std::string> on;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if ((mask >> i) & 1u)
        on.push_back(labels[i]);
    return on;
  };

  Sink sink(opt, out);
  std::ostream& os = sink.stream();
  if (opt.json) {
    nlohmann::ordered_json j;
    j["report_version"] = report_format_version;
    j["model"] = spec.name;
    j["side"] = to_string(side);
    j["seeds"] = std::size_t{1} << census.dimension;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& a : census.attractors) {
      nlohmann::ordered_json cycle = nlohmann::ordered_json::array();
      for (const auto& p : a.cycle)
        cycle.push_back(pair_json(spec, p));
      list.push_back({{"kind", to_string(a.kind)},
                      {"period", a.period},
                      {"basin_size", a.basin_size},
                      {"first_seed", seed_labels(a.first_seed)},
                      {"cycle", cycle}});
    }
    j["attractors"] = list;
    os << j.dump(2) << "\n";
  } else {
    os << spec.name << ": " << census.attractors.size() << " attractors over " << (std::size_t{1} << census.dimension)
       << " " << to_string(side) << " seeds\n";
    for (std::size_t i = 0; i < census.attractors.size(); ++i) {
      const auto& a = census.attractors[i];
      os << "[" << i + 1 << "] " << to_string(a.kind) << ", period " << a.period << ", basin " << a.basin_size
         << ", first seed {" << join(seed_labels(a.first_seed)) << "}\n";
      for (const auto& p : a.cycle)
        os << "    " << pair_text(p) << "\n";
    }
  }
  sink.commit();
  return ok;
}

int cmd_dot(const Options& opt, std::ostream& out) {
  const ModelSpec spec = load_model(opt);
  Sink sink(opt, out);
  sink.stream() << emit_dot(spec);
  sink.commit();
  return ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden-pattern runner for fuzzy relational and cognitive map models", "superfrm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Options opt;

  auto add_input = [&opt](CLI::App* sub) {
    auto* fixture = sub->add_option("--fixture", opt.fixture, "Bundled fixture name");
    auto* path = sub->add_option("model", opt.model_path, "Model document (JSON)");
    fixture->excludes(path);
    path->excludes(fixture);
  };
  auto add_policy = [&opt](CLI::App* sub) {
    sub->add_option("--threshold-domain", opt.threshold_domain, "Domain rule, cmp:cutoff (ge:2, gt:0)");
    sub->add_option("--threshold-range", opt.threshold_range, "Range rule, cmp:cutoff");
    sub->add_option("--first-step", opt.first_step, "auto | always | never | cmp:cutoff");
  };
  auto add_side = [&opt](CLI::App* sub) {
    sub->add_option("--side", opt.side, "Seed side")->check(CLI::IsMember({"domain", "range"}));
  };
  auto add_json = [&opt](CLI::App* sub) { sub->add_flag("--json", opt.json, "Machine-readable output"); };
  auto add_output = [&opt](CLI::App* sub) { sub->add_option("-o,--output", opt.output, "Write to a file"); };

  auto* validate = app.add_subcommand("validate", "Check a model document");
  add_input(validate);
  add_json(validate);

  auto* describe_cmd = app.add_subcommand("describe", "Summarize a model");
  add_input(describe_cmd);
  add_json(describe_cmd);
  add_output(describe_cmd);

  auto* run = app.add_subcommand("run", "Find the hidden pattern of one seed");
  add_input(run);
  run->add_option("--on", opt.on, "Seed labels, 1-based indices or block.position")->delimiter(',')->required();
  add_side(run);
  add_policy(run);
  run->add_option("--max-steps", opt.max_steps, "Product budget")->check(CLI::PositiveNumber);
  run->add_flag("--trace", opt.trace, "Include every product");
  add_json(run);
  add_output(run);

  auto* sweep = app.add_subcommand("sweep", "Run every unit seed on one side");
  add_input(sweep);
  add_side(sweep);
  add_policy(sweep);
  sweep->add_option("--max-steps", opt.max_steps, "Product budget per seed")->check(CLI::PositiveNumber);
  add_json(sweep);
  add_output(sweep);

  auto* attractors = app.add_subcommand("attractors", "Enumerate every seed on one side");
  add_input(attractors);
  add_side(attractors);
  add_policy(attractors);
  attractors->add_option("--max-states", opt.max_states, "Largest seed count to enumerate");
  add_json(attractors);
  add_output(attractors);

  auto* dot = app.add_subcommand("dot", "Export a Graphviz graph");
  add_input(dot);
  add_output(dot);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return usage;
  }

  try {
    if (validate->parsed())
      return cmd_validate(opt, out);
    if (describe_cmd->parsed())
      return cmd_describe(opt, out);
    if (run->parsed())
      return cmd_run(opt, out);
    if (sweep->parsed())
      return cmd_sweep(opt, out);
    if (attractors->parsed())
      return cmd_attractors(opt, out);
    return cmd_dot(opt, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

} // namespace superfrm::cli
