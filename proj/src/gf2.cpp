#include "f0mc/gf2.hpp"

#include <utility>

#include "f0mc/error.hpp"

namespace f0mc {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows, BitString(cols)), cols_(cols) {}

BitMatrix::BitMatrix(std::vector<BitString> rows, std::size_t cols) : rows_(std::move(rows)), cols_(cols) {
  for (const BitString& r : rows_) {
    if (r.size() != cols_) fail(ErrorCode::kWidthMismatch, "matrix row width differs from column count");
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BitMatrix::append_row(const BitString& row) {
  if (row.size() != cols_) fail(ErrorCode::kWidthMismatch, "appended row width differs from column count");
  rows_.push_back(row);
}

BitString BitMatrix::multiply(const BitString& x) const {
  if (x.size() != cols_) {
    fail(ErrorCode::kWidthMismatch,
         "vector of width " + std::to_string(x.size()) + " against " + std::to_string(cols_) + " columns");
  }
  BitString out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].dot(x)) out.set(r);
  }
  return out;
}

BitString BitMatrix::column(std::size_t c) const {
  BitString out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].test(c)) out.set(r);
  }
  return out;
}

BitMatrix BitMatrix::top_rows(std::size_t count) const {
  if (count > rows_.size()) fail(ErrorCode::kInvalidArgument, "top_rows beyond matrix height");
  return BitMatrix(std::vector<BitString>(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(count)), cols_);
}

std::size_t BitMatrix::rank() const {
  AffineSystem sys{*this, BitString(rows_.size())};
  return gaussian_solve(sys).rank;
}

SolutionSpace gaussian_solve(const AffineSystem& system) {
  const BitMatrix& m = system.matrix;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (system.rhs.size() != rows) fail(ErrorCode::kWidthMismatch, "right-hand side length differs from row count");

  std::vector<BitString> a(m.row_data());
  std::vector<bool> rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) rhs[r] = system.rhs.test(r);

  // Reduced row echelon form.
  std::vector<std::size_t> pivot_cols;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t sel = pivot_row;
    while (sel < rows && !a[sel].test(c)) ++sel;
    if (sel == rows) continue;
    if (sel != pivot_row) {
      std::swap(a[sel], a[pivot_row]);
      std::vector<bool>::swap(rhs[sel], rhs[pivot_row]);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != pivot_row && a[r].test(c)) {
        a[r] ^= a[pivot_row];
        rhs[r] = rhs[r] != rhs[pivot_row];
      }
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }

  SolutionSpace space;
  space.rank = pivot_cols.size();
  for (std::size_t r = space.rank; r < rows; ++r) {
    if (rhs[r]) return space;  // 0 = 1
  }
  space.consistent = true;
  space.particular = BitString(cols);
  for (std::size_t r = 0; r < space.rank; ++r) {
    if (rhs[r]) space.particular.set(pivot_cols[r]);
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    BitString v(cols);
    v.set(f);
    for (std::size_t r = 0; r < space.rank; ++r) {
      if (a[r].test(f)) v.set(pivot_cols[r]);
    }
    space.free_columns.push_back(f);
    space.nullspace_basis.push_back(v);
  }
  return space;
}

std::vector<BitString> enumerate_solutions(const SolutionSpace& space, std::size_t limit) {
  std::vector<BitString> out;
  for_each_solution(space, limit, [&](const BitString& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

}  // namespace f0mc
