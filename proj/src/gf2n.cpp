#include "f0mc/gf2n.hpp"

#include <array>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include "f0mc/error.hpp"

namespace f0mc {

namespace {

constexpr std::array<std::uint64_t, kMaxFieldDegree> kModulusLow = {
    0x0ULL, 0x3ULL, 0x3ULL, 0x3ULL,
    0x5ULL, 0x3ULL, 0x3ULL, 0x1bULL,
    0x3ULL, 0x9ULL, 0x5ULL, 0x9ULL,
    0x1bULL, 0x21ULL, 0x3ULL, 0x2bULL,
    0x9ULL, 0x9ULL, 0x27ULL, 0x9ULL,
    0x5ULL, 0x3ULL, 0x21ULL, 0x1bULL,
    0x9ULL, 0x1bULL, 0x27ULL, 0x3ULL,
    0x5ULL, 0x3ULL, 0x9ULL, 0x8dULL,
    0x4bULL, 0x1bULL, 0x5ULL, 0x35ULL,
    0x3fULL, 0x63ULL, 0x11ULL, 0x39ULL,
    0x9ULL, 0x27ULL, 0x59ULL, 0x21ULL,
    0x1bULL, 0x3ULL, 0x21ULL, 0x2dULL,
    0x71ULL, 0x1dULL, 0x4bULL, 0x9ULL,
    0x47ULL, 0x7dULL, 0x47ULL, 0x95ULL,
    0x11ULL, 0x63ULL, 0x7bULL, 0x3ULL,
    0x27ULL, 0x69ULL, 0x3ULL, 0x1bULL,
};

void check_degree(unsigned degree) {
  if (degree < 1 || degree > kMaxFieldDegree) {
    fail(ErrorCode::kInvalidArgument, "field degree " + std::to_string(degree) + " outside 1.." +
                                          std::to_string(kMaxFieldDegree));
  }
}

using u128 = unsigned __int128;

u128 clmul_portable(std::uint64_t a, std::uint64_t b) {
  u128 acc = 0;
  while (b != 0) {
    const int k = __builtin_ctzll(b);
    acc ^= static_cast<u128>(a) << k;
    b &= b - 1;
  }
  return acc;
}

#if defined(__x86_64__)
__attribute__((target("pclmul,sse2"))) u128 clmul_hw(std::uint64_t a, std::uint64_t b) {
  const __m128i p = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0);
  const auto lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(p));
  const auto hi = static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)));
  return (static_cast<u128>(hi) << 64) | lo;
}

const bool kHavePclmul = __builtin_cpu_supports("pclmul");
#endif

u128 clmul(std::uint64_t a, std::uint64_t b) {
#if defined(__x86_64__)
  if (kHavePclmul) return clmul_hw(a, b);
#endif
  return clmul_portable(a, b);
}

}  // namespace

std::uint64_t field_modulus_low(unsigned degree) {
  check_degree(degree);
  return kModulusLow[degree - 1];
}

GF2nField::GF2nField(unsigned degree)
    : degree_(degree),
      modulus_low_(field_modulus_low(degree)),
      mask_(degree == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1) {}

std::uint64_t GF2nField::mul(std::uint64_t a, std::uint64_t b) const noexcept {
  u128 p = clmul(a, b);
  // Fold the part above x^n back down with x^n = modulus_low; each pass drops
  // the degree by n - deg(modulus_low), and the tabulated moduli are sparse
  // and low, so this loop runs two or three times.
  while ((p >> degree_) != 0) {
    const u128 high = p >> degree_;
    // high < 2^(n-1) always fits in one word.
    p = (p & mask_) ^ clmul(static_cast<std::uint64_t>(high), modulus_low_);
  }
  return static_cast<std::uint64_t>(p);
}

std::uint64_t GF2nField::pow(std::uint64_t a, std::uint64_t e) const noexcept {
  std::uint64_t result = 1 & mask_;
  while (e != 0) {
    if (e & 1U) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint64_t GF2nField::inverse(std::uint64_t a) const {
  if ((a & mask_) == 0) fail(ErrorCode::kInvalidArgument, "zero has no multiplicative inverse");
  // a^(2^n - 2) = a^-1; the exponent is the mask with its low bit cleared.
  return pow(a, mask_ - 1);
}

GF2nMulTable::GF2nMulTable(const GF2nField& field, std::uint64_t y)
    : slots_((field.degree() + 7) / 8), table_(static_cast<std::size_t>(slots_) * 256, 0) {
  for (unsigned k = 0; k < slots_; ++k) {
    std::uint64_t* t = table_.data() + static_cast<std::size_t>(k) * 256;
    // Products with single bits, then every byte value by linearity.
    for (unsigned b = 0; b < 8 && 8 * k + b < field.degree(); ++b) {
      t[1U << b] = field.mul(std::uint64_t{1} << (8 * k + b), y);
    }
    for (unsigned v = 1; v < 256; ++v) {
      const unsigned low = v & (0U - v);
      if (v != low) t[v] = t[low] ^ t[v ^ low];
    }
  }
}

GF2nElement GF2nElement::from_bits(const BitString& bits) {
  return GF2nElement{bits.to_uint(), static_cast<unsigned>(bits.size())};
}

GF2nElement gf2n_poly_eval(std::span<const GF2nElement> coeffs, GF2nElement x) {
  const GF2nField field(x.degree);
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i].degree != x.degree) {
      fail(ErrorCode::kModulusMismatch, "coefficient over GF(2^" + std::to_string(coeffs[i].degree) +
                                            ") evaluated at a point of GF(2^" + std::to_string(x.degree) + ")");
    }
    acc = field.mul(acc, x.value) ^ coeffs[i].value;
  }
  return GF2nElement{acc, x.degree};
}

}  // namespace f0mc
