#include "f0mc/bitstring.hpp"

#include <bit>
#include <cmath>

#include "f0mc/error.hpp"

namespace f0mc {

namespace {

void check_length(std::size_t length) {
  if (length > BitString::kMaxBits) {
    fail(ErrorCode::kInvalidArgument,
         "bit string of length " + std::to_string(length) + " exceeds the " +
             std::to_string(BitString::kMaxBits) + "-bit limit");
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t reverse_bits(std::uint64_t r) {
  r = ((r >> 1) & 0x5555555555555555ULL) | ((r & 0x5555555555555555ULL) << 1);
  r = ((r >> 2) & 0x3333333333333333ULL) | ((r & 0x3333333333333333ULL) << 2);
  r = ((r >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((r & 0x0f0f0f0f0f0f0f0fULL) << 4);
  return __builtin_bswap64(r);
}

}  // namespace

BitString::BitString(std::size_t length) {
  check_length(length);
  size_ = static_cast<std::uint32_t>(length);
}

BitString BitString::from_uint(std::uint64_t value, std::size_t length) {
  if (length > 64) fail(ErrorCode::kInvalidArgument, "from_uint supports at most 64 bits");
  BitString out(length);
  if (length == 0) return out;
  // Bit i sits at word position i, so the MSB-first value is bit-reversed.
  out.words_[0] = reverse_bits(value << (64 - length));
  return out;
}

BitString BitString::parse_binary(std::string_view digits) {
  if (digits.starts_with("0b") || digits.starts_with("0B")) digits.remove_prefix(2);
  BitString out(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] == '1') {
      out.set(i);
    } else if (digits[i] != '0') {
      fail(ErrorCode::kParse, "invalid binary digit '" + std::string(1, digits[i]) + "'");
    }
  }
  return out;
}

BitString BitString::parse_hex(std::string_view digits, std::size_t length) {
  if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
  BitString out(length);
  // Walk from the least-significant digit so the value is right-aligned.
  std::size_t bit = length;
  for (std::size_t k = digits.size(); k-- > 0;) {
    const int v = hex_value(digits[k]);
    if (v < 0) fail(ErrorCode::kParse, "invalid hex digit '" + std::string(1, digits[k]) + "'");
    for (int b = 0; b < 4; ++b) {
      if (((v >> b) & 1) == 0) continue;
      if (bit < static_cast<std::size_t>(b) + 1) {
        fail(ErrorCode::kParse, "hex value does not fit in " + std::to_string(length) + " bits");
      }
      out.set(bit - 1 - b);
    }
    bit = bit >= 4 ? bit - 4 : 0;
  }
  return out;
}

BitString BitString::prefix(std::size_t length) const { return slice(0, length); }

BitString BitString::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > size_) fail(ErrorCode::kInvalidArgument, "slice out of range");
  BitString out(length);
  if (begin == 0) {
    out.words_ = words_;
    const std::size_t full = length / 64;
    const std::size_t rem = length % 64;
    if (rem != 0) out.words_[full] &= (std::uint64_t{1} << rem) - 1;
    for (std::size_t w = full + (rem != 0 ? 1 : 0); w < kWords; ++w) out.words_[w] = 0;
    return out;
  }
  for (std::size_t i = 0; i < length; ++i) {
    if (test(begin + i)) out.set(i);
  }
  return out;
}

BitString BitString::concat(const BitString& tail) const {
  BitString out(size_ + tail.size_);
  out.words_ = words_;
  for (std::size_t i = 0; i < tail.size_; ++i) {
    if (tail.test(i)) out.set(size_ + i);
  }
  return out;
}

bool BitString::none() const noexcept {
  for (std::uint64_t w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t BitString::popcount() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitString::dot(const BitString& other) const noexcept {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < kWords; ++w) acc ^= words_[w] & other.words_[w];
  return (std::popcount(acc) & 1) != 0;
}

std::size_t BitString::trailing_zeros() const noexcept {
  // The least-significant end is the highest index.
  for (std::size_t w = word_count(); w-- > 0;) {
    if (words_[w] != 0) {
      const std::size_t highest = w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[w]));
      return size_ - 1 - highest;
    }
  }
  return size_;
}

std::size_t BitString::leading_zeros() const noexcept {
  for (std::size_t w = 0; w < word_count(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return size_;
}

BitString& BitString::operator^=(const BitString& other) noexcept {
  for (std::size_t w = 0; w < kWords; ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitString& BitString::operator&=(const BitString& other) noexcept {
  for (std::size_t w = 0; w < kWords; ++w) words_[w] &= other.words_[w];
  return *this;
}

BitString& BitString::operator|=(const BitString& other) noexcept {
  for (std::size_t w = 0; w < kWords; ++w) words_[w] |= other.words_[w];
  return *this;
}

std::uint64_t BitString::to_uint() const {
  if (size_ > 64) fail(ErrorCode::kInvalidArgument, "to_uint requires at most 64 bits");
  if (size_ == 0) return 0;
  return reverse_bits(words_[0]) >> (64 - size_);
}

double BitString::to_double() const noexcept {
  double value = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) value += std::ldexp(1.0, static_cast<int>(size_ - 1 - i));
  }
  return value;
}

std::string BitString::to_binary() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (size_ + 3) / 4;
  const std::size_t pad = digits * 4 - size_;
  std::string s(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t padded = d * 4 + b;
      v <<= 1;
      if (padded >= pad && test(padded - pad)) v |= 1;
    }
    s[d] = kDigits[v];
  }
  return s;
}

std::size_t BitString::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (std::size_t w = 0; w < word_count(); ++w) {
    h ^= words_[w] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  const std::size_t common = a.size_ < b.size_ ? a.size_ : b.size_;
  for (std::size_t w = 0; w < BitString::kWords; ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    const std::size_t pos = w * 64 + static_cast<std::size_t>(std::countr_zero(diff));
    if (pos >= common) break;
    return a.test(pos) ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.size_ <=> b.size_;
}

}  // namespace f0mc
