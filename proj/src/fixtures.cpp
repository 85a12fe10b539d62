#include <algorithm>

#include "fixture_data.hpp"
#include "superfrm/model_io.hpp"

namespace superfrm {

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::fixture_count; ++i)
    out.emplace_back(detail::fixture_table[i].name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view fixture_text(std::string_view name) {
  for (std::size_t i = 0; i < detail::fixture_count; ++i)
    if (detail::fixture_table[i].name == name)
      return detail::fixture_table[i].text;
  std::string known;
  for (const auto& n : fixture_names())
    known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::UnknownFixture, "no fixture '" + std::string(name) + "' (known: " + known + ")");
}

ModelSpec load_fixture(std::string_view name) { return parse_model(fixture_text(name)); }

} // namespace superfrm
