#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "f0mc/bitstring.hpp"

namespace f0mc {

/// Dense GF(2) matrix stored as one BitString per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  explicit BitMatrix(std::vector<BitString> rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].test(c); }
  void set(std::size_t r, std::size_t c, bool value = true) noexcept { rows_[r].set(c, value); }

  const BitString& row(std::size_t r) const noexcept { return rows_[r]; }
  const std::vector<BitString>& row_data() const noexcept { return rows_; }
  void append_row(const BitString& row);

  /// M x over GF(2); x must have cols() bits.
  BitString multiply(const BitString& x) const;
  /// Column c as a rows()-bit string.
  BitString column(std::size_t c) const;
  BitMatrix top_rows(std::size_t count) const;
  std::size_t rank() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::vector<BitString> rows_;
  std::size_t cols_ = 0;
};

/// The system M x = v.
struct AffineSystem {
  BitMatrix matrix;
  BitString rhs;
};

/// Solution set of an affine system: particular XOR span(nullspace_basis).
///
/// Basis vector j has a one in free_columns[j] and zeros in every other free
/// column, so enumerating coefficient vectors in counting order enumerates
/// solutions lexicographically by their free-variable assignment.
struct SolutionSpace {
  bool consistent = false;
  BitString particular;
  std::vector<BitString> nullspace_basis;
  std::vector<std::size_t> free_columns;
  std::size_t rank = 0;

  std::size_t dimension() const noexcept { return nullspace_basis.size(); }
};

SolutionSpace gaussian_solve(const AffineSystem& system);

/// Up to `limit` solutions, ordered lexicographically over the free-variable
/// assignment read in increasing column order (first free column is the most
/// significant). Returns nothing for an inconsistent space.
std::vector<BitString> enumerate_solutions(const SolutionSpace& space, std::size_t limit);

/// Streaming form of enumerate_solutions. `visit` returns false to stop.
template <class Visit>
void for_each_solution(const SolutionSpace& space, std::size_t limit, Visit&& visit) {
  if (!space.consistent || limit == 0) return;
  const std::size_t dim = space.dimension();
  BitString current = space.particular;
  if (!visit(static_cast<const BitString&>(current))) return;
  std::uint64_t produced = 1;
  const bool bounded = dim < 64;
  const std::uint64_t total = bounded ? (std::uint64_t{1} << dim) : 0;
  for (std::uint64_t counter = 0;; ++counter) {
    if (produced >= limit) return;
    if (bounded && produced >= total) return;
    // counter -> counter + 1 flips the low (tz + 1) bits; bit b of the
    // counter is the coefficient of basis vector dim - 1 - b.
    const std::uint64_t next = counter + 1;
    const int flipped = std::countr_zero(next) + 1;
    for (int b = 0; b < flipped && b < static_cast<int>(dim); ++b) {
      current ^= space.nullspace_basis[dim - 1 - static_cast<std::size_t>(b)];
    }
    ++produced;
    if (!visit(static_cast<const BitString&>(current))) return;
  }
}

}  // namespace f0mc
