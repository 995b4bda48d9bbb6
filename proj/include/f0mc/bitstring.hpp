#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace f0mc {

/// Fixed-width vector over GF(2).
///
/// Index 0 is the most significant (first) bit, so lexicographic comparison
/// coincides with unsigned-integer order on the value. Internally bit i lives
/// in word i / 64 at position i % 64 (little-endian packing); bits past
/// size() are always zero. Widths are capped at kMaxBits so values stay
/// inline and cheap to copy.
class BitString {
 public:
  static constexpr std::size_t kMaxBits = 256;
  static constexpr std::size_t kWords = kMaxBits / 64;

  BitString() = default;
  explicit BitString(std::size_t length);

  /// The low `length` bits of `value`, most significant first. length <= 64.
  static BitString from_uint(std::uint64_t value, std::size_t length);
  /// Accepts an optional 0b prefix; the length is the digit count.
  static BitString parse_binary(std::string_view digits);
  /// Hex digits (optional 0x prefix) right-aligned into `length` bits.
  static BitString parse_hex(std::string_view digits, std::size_t length);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  /// First `length` bits.
  BitString prefix(std::size_t length) const;
  /// Bits [begin, begin + length).
  BitString slice(std::size_t begin, std::size_t length) const;
  BitString concat(const BitString& tail) const;

  bool none() const noexcept;
  bool any() const noexcept { return !none(); }
  std::size_t popcount() const noexcept;
  /// Parity of the bitwise AND; the GF(2) inner product.
  bool dot(const BitString& other) const noexcept;
  /// Number of zero bits at the least-significant end; size() when all zero.
  std::size_t trailing_zeros() const noexcept;
  /// Number of zero bits at the most-significant end; size() when all zero.
  std::size_t leading_zeros() const noexcept;

  BitString& operator^=(const BitString& other) noexcept;
  BitString& operator&=(const BitString& other) noexcept;
  BitString& operator|=(const BitString& other) noexcept;
  friend BitString operator^(BitString a, const BitString& b) noexcept { return a ^= b; }
  friend BitString operator&(BitString a, const BitString& b) noexcept { return a &= b; }
  friend BitString operator|(BitString a, const BitString& b) noexcept { return a |= b; }

  /// Numeric value; requires size() <= 64.
  std::uint64_t to_uint() const;
  /// Numeric value as a double (rounded for wide strings).
  double to_double() const noexcept;

  std::string to_binary() const;
  /// ceil(size/4) hex digits, MSB first, left-padded with zero bits.
  std::string to_hex() const;

  std::span<const std::uint64_t> words() const noexcept { return {words_.data(), word_count()}; }
  std::size_t word_count() const noexcept { return (size_ + 63) / 64; }
  std::size_t hash() const noexcept;

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  std::array<std::uint64_t, kWords> words_{};
  std::uint32_t size_ = 0;
};

struct BitStringHash {
  std::size_t operator()(const BitString& b) const noexcept { return b.hash(); }
};

}  // namespace f0mc

template <>
struct std::hash<f0mc::BitString> {
  std::size_t operator()(const f0mc::BitString& b) const noexcept { return b.hash(); }
};
