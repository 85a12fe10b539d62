#include "superfrm/partition.hpp"

#include <algorithm>
#include <string>

#include "superfrm/error.hpp"

namespace superfrm {

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::EmptyPartition: return "EmptyPartition";
  case ErrorCode::NonPositiveBlock: return "NonPositiveBlock";
  case ErrorCode::CutOutOfRange: return "CutOutOfRange";
  case ErrorCode::DuplicateCut: return "DuplicateCut";
  case ErrorCode::BlockIndexOutOfRange: return "BlockIndexOutOfRange";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
  case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
  case ErrorCode::UnknownLabel: return "UnknownLabel";
  case ErrorCode::WrongSide: return "WrongSide";
  case ErrorCode::SyntaxError: return "SyntaxError";
  case ErrorCode::SchemaError: return "SchemaError";
  case ErrorCode::ValidationError: return "ValidationError";
  case ErrorCode::UnknownFixture: return "UnknownFixture";
  }
  return "Unknown";
}

Partition::Partition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty())
    throw Error(ErrorCode::EmptyPartition, "a partition needs at least one block");
  offsets_.reserve(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0)
      throw Error(ErrorCode::NonPositiveBlock, "block " + std::to_string(i) + " has size 0");
    offsets_.push_back(total_);
    total_ += sizes_[i];
  }
}

Partition Partition::trivial(std::size_t total) { return Partition({total}); }

Partition Partition::from_cuts(std::size_t total, std::span<const std::size_t> cuts) {
  std::vector<std::size_t> sizes;
  std::size_t previous = 0;
  for (std::size_t cut : cuts) {
    if (cut < 1 || cut + 1 > total)
      throw Error(ErrorCode::CutOutOfRange,
                  "cut " + std::to_string(cut) + " outside [1, " + std::to_string(total) + " - 1]");
    if (cut <= previous)
      throw Error(ErrorCode::DuplicateCut, "cut " + std::to_string(cut) + " repeats or is out of order");
    sizes.push_back(cut - previous);
    previous = cut;
  }
  sizes.push_back(total - previous);
  return Partition(std::move(sizes));
}

std::vector<std::size_t> Partition::cuts() const {
  return {offsets_.begin() + 1, offsets_.end()};
}

std::size_t Partition::block_of(std::size_t index) const {
  if (index >= total_)
    throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(index) + " outside partition");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

bool Partition::is_mixed() const noexcept {
  return std::adjacent_find(sizes_.begin(), sizes_.end(), std::not_equal_to<>()) != sizes_.end();
}

} // namespace superfrm
