#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "f0mc/bitstring.hpp"

namespace f0mc {

inline constexpr unsigned kMaxFieldDegree = 64;

/// Low-order part of the modulus for GF(2^degree): the field polynomial is
/// x^degree + (bits of the returned value). Each entry is the numerically
/// smallest irreducible polynomial of its degree.
std::uint64_t field_modulus_low(unsigned degree);

/// Arithmetic in GF(2)[x] / (modulus of `degree`), elements as integers whose
/// bit j is the coefficient of x^j.
class GF2nField {
 public:
  explicit GF2nField(unsigned degree = 1);

  unsigned degree() const noexcept { return degree_; }
  std::uint64_t modulus_low() const noexcept { return modulus_low_; }
  std::uint64_t mask() const noexcept { return mask_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept { return a ^ b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;
  /// Multiplicative inverse; a must be nonzero.
  std::uint64_t inverse(std::uint64_t a) const;

 private:
  unsigned degree_;
  std::uint64_t modulus_low_;
  std::uint64_t mask_;
};

/// Multiplication by one fixed element y as a byte-sliced table:
/// v * y = XOR over bytes k of v of table[k][byte_k]. Worth building when the
/// same y multiplies many values (Horner evaluation of many polynomials at y).
class GF2nMulTable {
 public:
  GF2nMulTable() = default;
  GF2nMulTable(const GF2nField& field, std::uint64_t y);

  std::uint64_t mul(std::uint64_t v) const noexcept {
    std::uint64_t acc = 0;
    const std::uint64_t* t = table_.data();
    for (unsigned k = 0; k < slots_; ++k, t += 256) acc ^= t[(v >> (8 * k)) & 0xff];
    return acc;
  }

  /// Horner evaluation of sum coeffs[i] y^i.
  std::uint64_t eval(const std::uint64_t* coeffs, std::size_t count) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t i = count; i-- > 0;) acc = mul(acc) ^ coeffs[i];
    return acc;
  }

 private:
  unsigned slots_ = 0;
  std::vector<std::uint64_t> table_;
};

struct GF2nElement {
  std::uint64_t value = 0;
  unsigned degree = 1;

  /// MSB-first bit string of length `degree` (the x^(degree-1) coefficient first).
  BitString to_bits() const { return BitString::from_uint(value, degree); }
  static GF2nElement from_bits(const BitString& bits);

  friend bool operator==(const GF2nElement&, const GF2nElement&) = default;
};

/// Horner evaluation of sum coeffs[i] * x^i. Every element must share x's field.
GF2nElement gf2n_poly_eval(std::span<const GF2nElement> coeffs, GF2nElement x);

}  // namespace f0mc
