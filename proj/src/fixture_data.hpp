#ifndef SUPERFRM_FIXTURE_DATA_HPP
#define SUPERFRM_FIXTURE_DATA_HPP

#include <cstddef>
#include <string_view>

namespace superfrm::detail {

struct FixtureEntry {
  std::string_view name;
  std::string_view text;
};

// Defined in the build tree from fixtures/*.json.
extern const FixtureEntry fixture_table[];
extern const std::size_t fixture_count;

} // namespace superfrm::detail

#endif // SUPERFRM_FIXTURE_DATA_HPP
