#ifndef SUPERFRM_SUPERMATRIX_HPP
#define SUPERFRM_SUPERMATRIX_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superfrm/error.hpp"
#include "superfrm/partition.hpp"

namespace superfrm {

enum class Orientation { row, column };

/// Dense vector carrying a partition into blocks.
template <typename Scalar>
class SuperVector {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SuperVector(Vector entries, Partition partition, Orientation orientation = Orientation::row)
      : entries_(std::move(entries)), partition_(std::move(partition)), orientation_(orientation) {
    if (static_cast<std::size_t>(entries_.size()) != partition_.total())
      throw Error(ErrorCode::DimensionMismatch,
                  "vector of length " + std::to_string(entries_.size()) + " against partition total " +
                      std::to_string(partition_.total()));
  }

  explicit SuperVector(Vector entries, Orientation orientation = Orientation::row)
      : SuperVector(entries, Partition::trivial(static_cast<std::size_t>(entries.size())), orientation) {}

  const Vector& entries() const noexcept { return entries_; }
  const Partition& partition() const noexcept { return partition_; }
  Orientation orientation() const noexcept { return orientation_; }
  std::size_t size() const noexcept { return partition_.total(); }
  bool is_mixed() const noexcept { return partition_.is_mixed(); }

  Scalar operator[](std::size_t i) const { return entries_(static_cast<Eigen::Index>(i)); }

  auto block(std::size_t i) const {
    if (i >= partition_.block_count())
      throw Error(ErrorCode::BlockIndexOutOfRange, "vector block " + std::to_string(i));
    return entries_.segment(static_cast<Eigen::Index>(partition_.offset(i)),
                            static_cast<Eigen::Index>(partition_.size(i)));
  }

  friend bool operator==(const SuperVector& a, const SuperVector& b) {
    return a.orientation_ == b.orientation_ && a.partition_ == b.partition_ && a.entries_ == b.entries_;
  }

private:
  Vector entries_;
  Partition partition_;
  Orientation orientation_;
};

/// Dense matrix plus independent row and column partitions.
///
/// Entries live in one flat row-major grid; blocks are views into it.
template <typename Scalar>
class SuperMatrix {
public:
  using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SuperMatrix(Grid entries, Partition rows, Partition cols)
      : entries_(std::move(entries)), rows_(std::move(rows)), cols_(std::move(cols)) {
    if (static_cast<std::size_t>(entries_.rows()) != rows_.total() ||
        static_cast<std::size_t>(entries_.cols()) != cols_.total())
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()) +
                      " grid against partitions " + std::to_string(rows_.total()) + "x" +
                      std::to_string(cols_.total()));
  }

  /// Simple matrix (both partitions trivial).
  explicit SuperMatrix(Grid entries)
      : SuperMatrix(entries, Partition::trivial(static_cast<std::size_t>(entries.rows())),
                    Partition::trivial(static_cast<std::size_t>(entries.cols()))) {}

  const Grid& entries() const noexcept { return entries_; }
  const Partition& row_partition() const noexcept { return rows_; }
  const Partition& col_partition() const noexcept { return cols_; }
  std::size_t rows() const noexcept { return rows_.total(); }
  std::size_t cols() const noexcept { return cols_.total(); }

  Scalar operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  /// View of block (i, j).
  auto block(std::size_t i, std::size_t j) const {
    if (i >= rows_.block_count() || j >= cols_.block_count())
      throw Error(ErrorCode::BlockIndexOutOfRange,
                  "block (" + std::to_string(i) + ", " + std::to_string(j) + ") of " +
                      std::to_string(rows_.block_count()) + "x" + std::to_string(cols_.block_count()));
    return entries_.block(static_cast<Eigen::Index>(rows_.offset(i)), static_cast<Eigen::Index>(cols_.offset(j)),
                          static_cast<Eigen::Index>(rows_.size(i)), static_cast<Eigen::Index>(cols_.size(j)));
  }

  friend bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

private:
  Grid entries_;
  Partition rows_;
  Partition cols_;
};

using SuperVectord = SuperVector<double>;
using SuperMatrixd = SuperMatrix<double>;

template <typename Scalar>
SuperMatrix<Scalar> partition_matrix(typename SuperMatrix<Scalar>::Grid entries,
                                     std::span<const std::size_t> row_cuts,
                                     std::span<const std::size_t> col_cuts) {
  auto rows = Partition::from_cuts(static_cast<std::size_t>(entries.rows()), row_cuts);
  auto cols = Partition::from_cuts(static_cast<std::size_t>(entries.cols()), col_cuts);
  return SuperMatrix<Scalar>(std::move(entries), std::move(rows), std::move(cols));
}

template <typename Scalar>
SuperMatrix<Scalar> transpose(const SuperMatrix<Scalar>& m) {
  typename SuperMatrix<Scalar>::Grid t = m.entries().transpose();
  return SuperMatrix<Scalar>(std::move(t), m.col_partition(), m.row_partition());
}

template <typename Scalar>
SuperVector<Scalar> transpose(const SuperVector<Scalar>& v) {
  auto flipped = v.orientation() == Orientation::row ? Orientation::column : Orientation::row;
  return SuperVector<Scalar>(v.entries(), v.partition(), flipped);
}

template <typename Scalar>
const typename SuperMatrix<Scalar>::Grid& flatten(const SuperMatrix<Scalar>& m) {
  return m.entries();
}

template <typename Scalar>
const typename SuperVector<Scalar>::Vector& flatten(const SuperVector<Scalar>& v) {
  return v.entries();
}

enum class MatrixShape { simple, super_row, super_column, general_super };

struct MatrixKind {
  MatrixShape shape = MatrixShape::simple;
  bool mixed_rows = false;
  bool mixed_cols = false;
  bool square = false;
  bool perfect_square = false;

  friend bool operator==(const MatrixKind&, const MatrixKind&) = default;
};

/// Depends only on the two partitions.
MatrixKind classify(const Partition& rows, const Partition& cols);

template <typename Scalar>
MatrixKind classify(const SuperMatrix<Scalar>& m) {
  return classify(m.row_partition(), m.col_partition());
}

const char* to_string(MatrixShape shape);

enum class EntryDomain { fuzzy_unit, signed_ternary, signed_unit, unrestricted };

const char* to_string(EntryDomain domain);
EntryDomain entry_domain_from_string(std::string_view name);

inline bool admits(EntryDomain domain, double value) {
  switch (domain) {
  case EntryDomain::fuzzy_unit: return value >= 0.0 && value <= 1.0;
  case EntryDomain::signed_ternary: return value == -1.0 || value == 0.0 || value == 1.0;
  case EntryDomain::signed_unit: return value >= -1.0 && value <= 1.0;
  case EntryDomain::unrestricted: return std::isfinite(value);
  }
  return false;
}

struct CellViolation {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Every cell outside the declared domain, in row-major order.
template <typename Scalar>
std::vector<CellViolation> check_entry_domain(const SuperMatrix<Scalar>& m, EntryDomain domain) {
  std::vector<CellViolation> out;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double v = static_cast<double>(m(r, c));
      if (!admits(domain, v))
        out.push_back({r, c, v});
    }
  return out;
}

} // namespace superfrm

#endif // SUPERFRM_SUPERMATRIX_HPP
