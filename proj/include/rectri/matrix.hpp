#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "rectri/common.hpp"
#include "rectri/error.hpp"

namespace rectri {

template <typename T>
class MatrixView;

// Owned column-major storage. Element (r, c) lives at data[c * rows + r].
template <typename T>
class MatrixBuffer {
  static_assert(std::is_floating_point_v<T>);

 public:
  static constexpr ElemKind kind = elem_kind_of<T>::value;

  MatrixBuffer() = default;

  MatrixBuffer(index_t rows, index_t cols, T fill = T{})
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                 fill);
  }

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  T& at(index_t r, index_t c) {
    check_index(r, c);
    return data_[static_cast<std::size_t>(c) * rows_ + r];
  }
  const T& at(index_t r, index_t c) const {
    check_index(r, c);
    return data_[static_cast<std::size_t>(c) * rows_ + r];
  }

  T& operator()(index_t r, index_t c) noexcept {
    return data_[static_cast<std::size_t>(c) * rows_ + r];
  }
  const T& operator()(index_t r, index_t c) const noexcept {
    return data_[static_cast<std::size_t>(c) * rows_ + r];
  }

  MatrixView<T> view() noexcept;
  MatrixView<const T> view() const noexcept;
  MatrixView<const T> cview() const noexcept;

 private:
  void check_index(index_t r, index_t c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw BoundsError("matrix index (" + std::to_string(r) + ", " +
                        std::to_string(c) + ") out of range");
  }

  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<T> data_;
};

// Non-owning rectangular window into a MatrixBuffer. Views never reinterpret
// stride: leading_dim is always the origin buffer's row count, and offsets are
// kept relative to that origin so overlap checks can compare rectangles.
template <typename T>
class MatrixView {
 public:
  using value_type = std::remove_const_t<T>;

  MatrixView() = default;

  MatrixView(T* origin_data, index_t origin_rows, index_t origin_cols,
             index_t row_offset, index_t col_offset, index_t rows, index_t cols)
      : origin_data_(origin_data),
        origin_rows_(origin_rows),
        origin_cols_(origin_cols),
        row_offset_(row_offset),
        col_offset_(col_offset),
        rows_(rows),
        cols_(cols) {}

  // Views of mutable data convert freely to read-only views.
  operator MatrixView<const T>() const noexcept {
    return MatrixView<const T>(origin_data_, origin_rows_, origin_cols_,
                               row_offset_, col_offset_, rows_, cols_);
  }

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  index_t row_offset() const noexcept { return row_offset_; }
  index_t col_offset() const noexcept { return col_offset_; }
  index_t leading_dim() const noexcept { return origin_rows_; }

  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  // Pointer to element (0, 0) of the window.
  T* data() const noexcept {
    return origin_data_ + static_cast<std::size_t>(col_offset_) * origin_rows_ +
           row_offset_;
  }

  T& operator()(index_t r, index_t c) const noexcept {
    return origin_data_[static_cast<std::size_t>(col_offset_ + c) * origin_rows_ +
                        (row_offset_ + r)];
  }

  T& at(index_t r, index_t c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw BoundsError("view index (" + std::to_string(r) + ", " +
                        std::to_string(c) + ") out of range");
    return (*this)(r, c);
  }

  // Window into this view; aliases the same storage, no copy.
  MatrixView<T> subview(index_t r0, index_t c0, index_t nr, index_t nc) const {
    if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > rows_ ||
        c0 + nc > cols_)
      throw BoundsError("subview (" + std::to_string(r0) + ", " +
                        std::to_string(c0) + ", " + std::to_string(nr) + ", " +
                        std::to_string(nc) + ") escapes a " +
                        std::to_string(rows_) + "x" + std::to_string(cols_) +
                        " view");
    return MatrixView<T>(origin_data_, origin_rows_, origin_cols_,
                         row_offset_ + r0, col_offset_ + c0, nr, nc);
  }

  const void* origin_id() const noexcept {
    return static_cast<const void*>(origin_data_);
  }

 private:
  T* origin_data_ = nullptr;
  index_t origin_rows_ = 0;
  index_t origin_cols_ = 0;
  index_t row_offset_ = 0;
  index_t col_offset_ = 0;
  index_t rows_ = 0;
  index_t cols_ = 0;
};

template <typename T>
MatrixView<T> MatrixBuffer<T>::view() noexcept {
  return MatrixView<T>(data(), rows_, cols_, 0, 0, rows_, cols_);
}

template <typename T>
MatrixView<const T> MatrixBuffer<T>::view() const noexcept {
  return MatrixView<const T>(data(), rows_, cols_, 0, 0, rows_, cols_);
}

template <typename T>
MatrixView<const T> MatrixBuffer<T>::cview() const noexcept {
  return view();
}

// Two views are disjoint iff they live in different buffers or their index
// rectangles do not intersect.
template <typename A, typename B>
bool overlaps(const MatrixView<A>& a, const MatrixView<B>& b) noexcept {
  if (a.origin_id() != b.origin_id()) return false;
  if (a.empty() || b.empty()) return false;
  const bool rows_meet = a.row_offset() < b.row_offset() + b.rows() &&
                         b.row_offset() < a.row_offset() + a.rows();
  const bool cols_meet = a.col_offset() < b.col_offset() + b.cols() &&
                         b.col_offset() < a.col_offset() + a.cols();
  return rows_meet && cols_meet;
}

// Split point for the recursive drivers: floor(n/2), no padding.
inline index_t split_half(index_t n) {
  if (n < 2) throw SplitError("cannot split dimension " + std::to_string(n));
  return n / 2;
}

}  // namespace rectri
