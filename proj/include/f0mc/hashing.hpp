#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/gf2.hpp"
#include "f0mc/gf2n.hpp"

namespace f0mc {

class Rng;

enum class HashFamily { kToeplitz, kXor, kPoly };

std::string_view family_name(HashFamily family);
HashFamily parse_family(std::string_view name);

/// One member of a hash family. Toeplitz and xor members are affine maps
/// x -> Ax + b over GF(2); poly members evaluate a degree-s polynomial over
/// GF(2^n) and map {0,1}^n to itself.
class Hash {
 public:
  Hash() = default;

  /// Draws a uniform Toeplitz member: m + n - 1 diagonal bits, then m bits of b.
  static Hash sample_toeplitz(std::size_t n, std::size_t m, Rng& rng);
  /// Draws a uniform xor member: A row by row, then b.
  static Hash sample_xor(std::size_t n, std::size_t m, Rng& rng);
  /// Draws s + 1 uniform coefficients over GF(2^n), constant term first.
  static Hash sample_poly(std::size_t n, std::size_t s, Rng& rng);

  /// diagonal[k] is A[i][j] for i - j + n - 1 = k; it has m + n - 1 bits.
  static Hash toeplitz(std::size_t n, std::size_t m, std::vector<bool> diagonal, BitString b);
  static Hash affine(BitMatrix a, BitString b);
  static Hash poly(std::size_t n, std::vector<GF2nElement> coeffs);
  /// Inverse of parameters(): `shape` is m for affine families and the degree
  /// s for poly.
  static Hash from_parameters(HashFamily family, std::size_t n, std::size_t shape, const std::vector<bool>& bits);

  HashFamily family() const noexcept { return family_; }
  bool is_affine() const noexcept { return family_ != HashFamily::kPoly; }
  std::size_t input_bits() const noexcept { return n_; }
  std::size_t output_bits() const noexcept { return m_; }

  /// Affine members only.
  const BitMatrix& matrix() const;
  const BitString& offset() const;
  /// Poly members only.
  const std::vector<GF2nElement>& coefficients() const;
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  BitString eval(const BitString& x) const;
  /// Poly members: evaluation on the integer form of x (n <= 64), returning
  /// the integer form of h(x).
  std::uint64_t eval_poly_value(std::uint64_t x) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t i = coeff_values_.size(); i-- > 0;) acc = field_.mul(acc, x) ^ coeff_values_[i];
    return acc;
  }

  /// h restricted to its first `bits` output bits. Not defined for poly members.
  Hash prefix(std::size_t bits) const;

  /// Number of bits in the canonical parameter encoding (what a coordinator
  /// would have to transmit): m + n - 1 + m for Toeplitz, mn + m for xor,
  /// (s + 1) n for poly.
  std::size_t parameter_bits() const;
  /// Parameter bits in transmission order.
  std::vector<bool> parameters() const;

  /// Text form, e.g. "toeplitz n=4 m=4 a=5a b=3"; parameter bits MSB-first in hex.
  std::string serialize() const;
  static Hash deserialize(std::string_view text);

  /// 64-bit digest of family, shape and parameters; equal hashes share it.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const Hash& a, const Hash& b);

 private:
  HashFamily family_ = HashFamily::kToeplitz;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  BitMatrix a_;
  BitString b_;
  std::vector<bool> diagonal_;  // Toeplitz only
  std::vector<GF2nElement> coeffs_;
  std::vector<std::uint64_t> coeff_values_;
  GF2nField field_;
  std::uint64_t fingerprint_ = 0;

  void seal();
};

/// A t-element list or a t x c grid of independently drawn members.
struct HashCollection {
  HashFamily family = HashFamily::kToeplitz;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rows = 0;
  std::size_t cols = 1;
  std::vector<Hash> entries;

  const Hash& at(std::size_t i) const { return entries[i * cols]; }
  const Hash& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/// Coefficients of a poly collection laid out contiguously, cell-major, for
/// evaluating every member at one point with a shared multiplication table.
struct PolyGrid {
  std::size_t n = 0;
  std::size_t terms = 0;  // s + 1
  std::size_t cells = 0;
  std::vector<std::uint64_t> coeffs;
  GF2nField field;

  explicit PolyGrid(const HashCollection& h);
  GF2nMulTable table_for(std::uint64_t x) const { return GF2nMulTable(field, x); }
  std::uint64_t eval(std::size_t cell, const GF2nMulTable& x) const noexcept {
    return x.eval(coeffs.data() + cell * terms, terms);
  }
};

/// PolyHash independence degree used for epsilon: max(2, ceil(10 ln(1/eps))).
std::size_t poly_degree_for(double epsilon);

/// `count` independent draws. Entry i is drawn from its own PRNG stream
/// (seed, substream(stream, i)), so entries do not depend on count. For the
/// poly family `m` is the polynomial degree s and outputs have n bits.
HashCollection pick_hash_functions(HashFamily family, std::size_t n, std::size_t m, std::size_t count,
                                   std::uint64_t seed, std::uint64_t stream = 0);
/// rows x cols grid, entry (i, j) drawn as entry i * cols + j of a flat pick.
HashCollection pick_hash_grid(HashFamily family, std::size_t n, std::size_t m, std::size_t rows,
                              std::size_t cols, std::uint64_t seed, std::uint64_t stream = 0);

/// Zero bits at the least-significant end; the full length for 0^L.
inline std::size_t trail_zero(const BitString& y) noexcept { return y.trailing_zeros(); }

/// Hex of a bit list read MSB-first, left-padded to whole digits.
std::string bits_to_hex(const std::vector<bool>& bits);
std::vector<bool> hex_to_bits(std::string_view hex, std::size_t count);

}  // namespace f0mc
