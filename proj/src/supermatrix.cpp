#include "superfrm/supermatrix.hpp"

#include <algorithm>

namespace superfrm {

MatrixKind classify(const Partition& rows, const Partition& cols) {
  MatrixKind kind;
  if (rows.is_trivial() && cols.is_trivial())
    kind.shape = MatrixShape::simple;
  else if (rows.is_trivial())
    kind.shape = MatrixShape::super_row;
  else if (cols.is_trivial())
    kind.shape = MatrixShape::super_column;
  else
    kind.shape = MatrixShape::general_super;

  kind.mixed_rows = rows.is_mixed();
  kind.mixed_cols = cols.is_mixed();
  kind.square = rows.total() == cols.total();

  // Equal partitions with uniform blocks: every block is t x t.
  kind.perfect_square = kind.shape == MatrixShape::general_super && rows == cols && !rows.is_mixed();
  return kind;
}

const char* to_string(MatrixShape shape) {
  switch (shape) {
  case MatrixShape::simple: return "simple";
  case MatrixShape::super_row: return "super_row";
  case MatrixShape::super_column: return "super_column";
  case MatrixShape::general_super: return "general_super";
  }
  return "unknown";
}

const char* to_string(EntryDomain domain) {
  switch (domain) {
  case EntryDomain::fuzzy_unit: return "fuzzy_unit";
  case EntryDomain::signed_ternary: return "signed_ternary";
  case EntryDomain::signed_unit: return "signed_unit";
  case EntryDomain::unrestricted: return "unrestricted";
  }
  return "unknown";
}

EntryDomain entry_domain_from_string(std::string_view name) {
  for (auto d : {EntryDomain::fuzzy_unit, EntryDomain::signed_ternary, EntryDomain::signed_unit,
                 EntryDomain::unrestricted})
    if (name == to_string(d))
      return d;
  throw Error(ErrorCode::SchemaError, "unknown entry domain '" + std::string(name) + "'");
}

} // namespace superfrm
