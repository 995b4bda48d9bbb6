#include <gtest/gtest.h>

#include <array>
#include <random>
#include <vector>

#include "f0mc/error.hpp"
#include "f0mc/gf2n.hpp"

using f0mc::GF2nElement;
using f0mc::GF2nField;

namespace {

// GF(256) over x^8 + x^4 + x^3 + x + 1 via exp/log tables generated by 0x03.
struct Gf256Tables {
  std::array<int, 512> exp{};
  std::array<int, 256> log{};
  Gf256Tables() {
    int v = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = v;
      log[v] = i;
      int doubled = v << 1;
      if (doubled & 0x100) doubled ^= 0x11b;
      v = doubled ^ v;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
  }
  int mul(int a, int b) const { return (a == 0 || b == 0) ? 0 : exp[log[a] + log[b]]; }
};

// Trial division by every polynomial of degree 1..deg/2; fine up to degree 20.
bool irreducible(std::uint64_t poly, unsigned deg) {
  auto mod = [](std::uint64_t a, std::uint64_t b) {
    const int db = 63 - __builtin_clzll(b);
    while (a != 0 && 63 - __builtin_clzll(a) >= db) a ^= b << ((63 - __builtin_clzll(a)) - db);
    return a;
  };
  for (unsigned d = 1; d <= deg / 2; ++d) {
    for (std::uint64_t q = 1ULL << d; q < (2ULL << d); ++q) {
      if (mod(poly, q) == 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Gf2n, ModuliAreSmallestIrreducible) {
  for (unsigned deg = 1; deg <= 16; ++deg) {
    const std::uint64_t full = (1ULL << deg) | f0mc::field_modulus_low(deg);
    EXPECT_TRUE(irreducible(full, deg)) << deg;
    for (std::uint64_t low = 0; low < f0mc::field_modulus_low(deg); ++low) {
      EXPECT_FALSE(irreducible((1ULL << deg) | low, deg)) << deg << " " << low;
    }
  }
  EXPECT_EQ(f0mc::field_modulus_low(8), 0x1bu);
  EXPECT_THROW(f0mc::field_modulus_low(0), f0mc::Error);
  EXPECT_THROW(f0mc::field_modulus_low(65), f0mc::Error);
}

TEST(Gf2n, MultiplicationMatchesLogTables) {
  const Gf256Tables ref;
  const GF2nField f(8);
  for (int a = 0; a < 256; ++a) {
    for (int b = 0; b < 256; b += 7) EXPECT_EQ(f.mul(a, b), static_cast<std::uint64_t>(ref.mul(a, b)));
  }
}

TEST(Gf2n, PolynomialEvalMatchesLogTables) {
  const Gf256Tables ref;
  std::mt19937_64 gen(8);
  std::vector<GF2nElement> coeffs;
  for (int i = 0; i < 4; ++i) coeffs.push_back(GF2nElement{gen() & 0xff, 8});
  for (int trial = 0; trial < 20; ++trial) {
    const int x = static_cast<int>(gen() & 0xff);
    int expected = 0;
    int power = 1;
    for (const auto& c : coeffs) {
      expected ^= ref.mul(static_cast<int>(c.value), power);
      power = ref.mul(power, x);
    }
    EXPECT_EQ(f0mc::gf2n_poly_eval(coeffs, GF2nElement{static_cast<std::uint64_t>(x), 8}).value,
              static_cast<std::uint64_t>(expected));
  }
}

TEST(Gf2n, TrivialPolynomials) {
  const GF2nElement c0{0x5a, 8};
  const GF2nElement x{0x13, 8};
  EXPECT_EQ(f0mc::gf2n_poly_eval(std::vector<GF2nElement>{c0}, x), c0);
  EXPECT_EQ(f0mc::gf2n_poly_eval(std::vector<GF2nElement>{GF2nElement{0, 8}, GF2nElement{1, 8}}, x), x);
}

TEST(Gf2n, MismatchedFieldRejected) {
  const std::vector<GF2nElement> coeffs{GF2nElement{1, 8}, GF2nElement{1, 9}};
  try {
    f0mc::gf2n_poly_eval(coeffs, GF2nElement{3, 8});
    FAIL() << "expected an error";
  } catch (const f0mc::Error& e) {
    EXPECT_EQ(e.code(), f0mc::ErrorCode::kModulusMismatch);
  }
}

TEST(Gf2n, FieldAxiomsOnSamples) {
  std::mt19937_64 gen(77);
  for (unsigned deg : {1u, 2u, 5u, 13u, 31u, 32u, 47u, 63u, 64u}) {
    const GF2nField f(deg);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t a = gen() & f.mask();
      const std::uint64_t b = gen() & f.mask();
      const std::uint64_t c = gen() & f.mask();
      EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
      EXPECT_EQ(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
      EXPECT_EQ(f.mul(a, b), f.mul(b, a));
      if (a != 0) EXPECT_EQ(f.mul(a, f.inverse(a)), 1u) << deg;
    }
  }
}

TEST(Gf2n, BitsRoundTrip) {
  const GF2nElement e{0b1011, 4};
  EXPECT_EQ(e.to_bits().to_binary(), "1011");
  EXPECT_EQ(GF2nElement::from_bits(e.to_bits()), e);
}
