#include <sstream>

#include <json.hpp>

#include "superfrm/model_io.hpp"

namespace superfrm {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

void write_clusters(std::ostringstream& os, const LabelBlocks& blocks, const char* side, const char* prefix) {
  std::size_t index = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    os << "  subgraph cluster_" << side << "_" << b + 1 << " {\n";
    os << "    label=\"" << side << " block " << b + 1 << "\";\n";
    for (const auto& label : blocks[b])
      os << "    " << prefix << index++ << " [label=" << quote(label) << "];\n";
    os << "  }\n";
  }
}

} // namespace

std::string emit_dot(const ModelSpec& spec) {
  const bool fcm = spec.kind == ModelKind::fcm;
  std::ostringstream os;
  os << "digraph " << quote(spec.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=ellipse];\n";
  write_clusters(os, spec.domain_labels, fcm ? "nodes" : "domain", "d");
  if (!fcm)
    write_clusters(os, spec.range_labels, "range", "r");

  const auto& grid = spec.matrix.entries();
  const char* target = fcm ? "d" : "r";
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      const double w = grid(i, j);
      if (w == 0.0)
        continue;
      os << "  d" << i << " -> " << target << j << " [label=\"" << format_number(w) << "\", weight_value="
         << format_number(w);
      if (w < 0)
        os << ", style=dashed, color=red";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

} // namespace superfrm
