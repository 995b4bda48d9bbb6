#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/gf2.hpp"
#include "f0mc/hashing.hpp"
#include "f0mc/oracle.hpp"

namespace f0mc {

/// The affine subspace {M z + c : z} of {0,1}^m, kept as a fully reduced
/// echelon basis: each basis vector owns a pivot (its first set bit) that no
/// other basis vector and no stored minimum touches. Output bits at pivots are
/// free; every other bit is forced by the pivots before it. Prefix search over
/// the image is then exact Gaussian feasibility, and the image elements in
/// ascending order are the minimum XOR the basis subsets taken in binary
/// counting order (first pivot most significant).
class AffineImage {
 public:
  AffineImage(const BitMatrix& m, const BitString& offset);

  std::size_t width() const noexcept { return min_.size(); }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  const BitString& minimum() const noexcept { return min_; }
  bool contains(const BitString& y) const;
  /// Some image element begins with `prefix`.
  bool extendable(const BitString& prefix) const;
  /// Smallest image element strictly above y (y must be in the image).
  std::optional<BitString> successor(const BitString& y) const;
  /// The `count` smallest elements, ascending.
  std::vector<BitString> smallest(std::size_t count) const;

  /// Visits elements in ascending order until `visit` returns false.
  template <class Visit>
  void for_each_ascending(Visit&& visit) const {
    BitString current = min_;
    if (!visit(static_cast<const BitString&>(current))) return;
    const std::size_t r = basis_.size();
    const std::uint64_t total = r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
    for (std::uint64_t counter = 0; counter < total; ++counter) {
      // counter -> counter + 1 toggles the low tz + 1 counter bits; counter
      // bit b is basis vector r - 1 - b.
      const int flipped = std::countr_zero(counter + 1) + 1;
      for (int b = 0; b < flipped; ++b) current ^= basis_[r - 1 - static_cast<std::size_t>(b)];
      if (!visit(static_cast<const BitString&>(current))) return;
    }
  }

 private:
  BitString reduce(BitString v) const;

  BitString min_;
  std::vector<BitString> basis_;    // ordered by pivot
  std::vector<std::size_t> pivots_;
};

/// Image of an affine hash over a term's solutions.
AffineImage term_image(const Term& term, const Hash& h);

struct BoundedResult {
  std::size_t count = 0;
  std::vector<BitString> witnesses;
};

/// min(p, |sol(f) with h(x) = 0^m|) and that many distinct witnesses, where m
/// is h's output width (pass a prefix slice). Each term's constrained system
/// is solved by elimination and its solutions enumerated lazily.
BoundedResult bounded_sat_dnf(const DnfFormula& f, const Hash& h, std::size_t p);
/// The same contract through oracle queries, one witness per call.
BoundedResult bounded_sat_cnf(const CnfFormula& f, const Hash& h, std::size_t p, NpOracle& oracle);

/// The p lexicographically smallest distinct values of h over sol(f),
/// ascending. Terms are scanned in order against a shared buffer of the p
/// best so far; a term stops as soon as its next value cannot enter the buffer.
std::vector<BitString> find_min(const DnfFormula& f, const Hash& h, std::size_t p);
/// Merges the values of h over sol(f) into `buffer`, kept as the p smallest
/// distinct values seen so far, ascending. find_min is this on an empty buffer.
void merge_min(const DnfFormula& f, const Hash& h, std::size_t p, std::vector<BitString>& buffer);
/// Same result by oracle-driven prefix search: each value costs m + 1 calls.
std::vector<BitString> find_min_cnf(const CnfFormula& f, const Hash& h, std::size_t p, NpOracle& oracle);

/// Largest t such that some x |= f has at least t trailing zeros in h(x),
/// by binary search over t in [0, n] with oracle queries. Throws
/// kUnsatisfiable for an unsatisfiable formula.
std::size_t find_max_range(const CnfFormula& f, const Hash& h, NpOracle& oracle);
std::size_t find_max_range(const DnfFormula& f, const Hash& h, NpOracle& oracle);

/// The t smallest distinct values of h over {x : a x = b}; empty when the
/// system is inconsistent.
std::vector<BitString> affine_find_min(const BitMatrix& a, const BitString& b, const Hash& h, std::size_t t);
/// The full image {h(x) : a x = b} as an AffineImage, if consistent.
std::optional<AffineImage> affine_image(const BitMatrix& a, const BitString& b, const Hash& h);

}  // namespace f0mc
