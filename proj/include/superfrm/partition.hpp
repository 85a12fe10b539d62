#ifndef SUPERFRM_PARTITION_HPP
#define SUPERFRM_PARTITION_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace superfrm {

/// Ordered block widths along one axis of a super vector or supermatrix.
///
/// Sizes are canonical; cut positions are only an input convenience
/// (see from_cuts). A partition always has at least one block and every
/// block is at least one wide.
class Partition {
public:
  explicit Partition(std::vector<std::size_t> sizes);

  /// Single block covering `total` entries.
  static Partition trivial(std::size_t total);

  /// Cuts are the 1-based positions after which a division line is drawn,
  /// strictly increasing and inside [1, total - 1].
  static Partition from_cuts(std::size_t total, std::span<const std::size_t> cuts);

  std::size_t total() const noexcept { return total_; }
  std::size_t block_count() const noexcept { return sizes_.size(); }
  std::size_t size(std::size_t block) const { return sizes_.at(block); }
  std::size_t offset(std::size_t block) const { return offsets_.at(block); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

  /// Cut positions reproducing this partition through from_cuts.
  std::vector<std::size_t> cuts() const;

  /// Block index holding the given flat position.
  std::size_t block_of(std::size_t index) const;

  bool is_trivial() const noexcept { return sizes_.size() == 1; }
  bool is_mixed() const noexcept;

  friend bool operator==(const Partition& a, const Partition& b) { return a.sizes_ == b.sizes_; }

private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

inline Partition make_partition(std::vector<std::size_t> sizes) { return Partition(std::move(sizes)); }

} // namespace superfrm

#endif // SUPERFRM_PARTITION_HPP
