#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "f0mc/error.hpp"
#include "f0mc/harness.hpp"
#include "f0mc/oracle.hpp"
#include "f0mc/solvers.hpp"

using f0mc::BitMatrix;
using f0mc::BitString;
using f0mc::Hash;

namespace {

// Sorted distinct hash values over every solution, by direct enumeration.
template <class F>
std::vector<BitString> brute_image(const F& f, const Hash& h) {
  std::set<BitString> s;
  for (const BitString& x : f0mc::brute_solutions(f)) s.insert(h.eval(x));
  return {s.begin(), s.end()};
}

template <class F>
std::size_t brute_zero_cell(const F& f, const Hash& h) {
  std::size_t c = 0;
  for (const BitString& x : f0mc::brute_solutions(f)) c += h.eval(x).none() ? 1 : 0;
  return c;
}

BitMatrix random_matrix(std::size_t rows, std::size_t cols, f0mc::Rng& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.next_bit());
  }
  return m;
}

}  // namespace

TEST(AffineImage, MatchesExhaustiveImage) {
  f0mc::Rng rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.uniform(10);
    const std::size_t cols = rng.uniform(7);
    const BitMatrix m = random_matrix(rows, cols, rng);
    const BitString c = f0mc::random_bitstring(rows, rng);
    const f0mc::AffineImage img(m, c);
    std::set<BitString> expected;
    for (std::uint64_t z = 0; z < (1ULL << cols); ++z) expected.insert(m.multiply(BitString::from_uint(z, cols)) ^ c);
    std::vector<BitString> got;
    img.for_each_ascending([&](const BitString& v) {
      got.push_back(v);
      return true;
    });
    ASSERT_EQ(got, std::vector<BitString>(expected.begin(), expected.end()));
    EXPECT_EQ(img.rank(), m.rank());
    for (std::size_t k = 0; k + 1 < got.size(); ++k) EXPECT_EQ(img.successor(got[k]), got[k + 1]);
    EXPECT_FALSE(img.successor(got.back()).has_value());
    // Every prefix of every length agrees with the exhaustive image.
    for (std::size_t len = 0; len <= std::min<std::size_t>(rows, 6); ++len) {
      for (std::uint64_t p = 0; p < (1ULL << len); ++p) {
        const BitString prefix = BitString::from_uint(p, len);
        const bool any = std::any_of(expected.begin(), expected.end(),
                                     [&](const BitString& v) { return v.prefix(len) == prefix; });
        EXPECT_EQ(img.extendable(prefix), any);
      }
    }
  }
}

TEST(FindMin, MatchesBruteImage) {
  f0mc::Rng rng(5, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.uniform(7);
    const auto f = f0mc::random_dnf(n, 1 + rng.uniform(8), 1, n, rng);
    const Hash h = Hash::sample_toeplitz(n, 3 * n, rng);
    const auto image = brute_image(f, h);
    for (std::size_t p : {1u, 3u, 17u, 200u}) {
      const auto got = f0mc::find_min(f, h, p);
      ASSERT_EQ(got, std::vector<BitString>(image.begin(), image.begin() + std::min(p, image.size())));
    }
  }
}

TEST(FindMin, OracleRouteAgreesAndCallBound) {
  f0mc::Rng rng(6, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng.uniform(5);
    const auto cnf = f0mc::random_cnf(n, 2 + rng.uniform(6), 1, 3, rng);
    const Hash h = Hash::sample_toeplitz(n, 2 * n, rng);
    const auto image = brute_image(cnf, h);
    const std::size_t p = 5;
    f0mc::NpOracle oracle;
    const auto got = f0mc::find_min_cnf(cnf, h, p, oracle);
    ASSERT_EQ(got, std::vector<BitString>(image.begin(), image.begin() + std::min(p, image.size())));
    EXPECT_LE(oracle.calls(), p * (h.output_bits() + 1) + 1);
  }
}

TEST(BoundedSat, DnfCountsAndWitnesses) {
  f0mc::Rng rng(7, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.uniform(8);
    const auto f = f0mc::random_dnf(n, 1 + rng.uniform(6), 1, n, rng);
    const Hash full = Hash::sample_toeplitz(n, n, rng);
    const std::size_t m = rng.uniform(n + 1);
    const Hash h = full.prefix(m);
    const std::size_t exact = brute_zero_cell(f, h);
    for (std::size_t p : {1u, 4u, 1000u}) {
      const auto r = f0mc::bounded_sat_dnf(f, h, p);
      ASSERT_EQ(r.count, std::min(p, exact));
      std::set<BitString> distinct(r.witnesses.begin(), r.witnesses.end());
      EXPECT_EQ(distinct.size(), r.count);
      for (const BitString& x : r.witnesses) {
        EXPECT_TRUE(f.satisfied_by(x));
        EXPECT_TRUE(h.eval(x).none());
      }
    }
  }
}

TEST(BoundedSat, CnfThroughOracle) {
  f0mc::Rng rng(8, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng.uniform(5);
    const auto f = f0mc::random_cnf(n, 3, 1, 3, rng);
    const Hash h = Hash::sample_toeplitz(n, n, rng).prefix(rng.uniform(4));
    const std::size_t exact = brute_zero_cell(f, h);
    f0mc::NpOracle oracle;
    const std::size_t p = 6;
    const auto r = f0mc::bounded_sat_cnf(f, h, p, oracle);
    EXPECT_EQ(r.count, std::min(p, exact));
    EXPECT_LE(oracle.calls(), p + 1);
  }
}

TEST(FindMaxRange, MatchesBruteMaximum) {
  f0mc::Rng rng(9, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.uniform(6);
    const auto dnf = f0mc::random_dnf(n, 1 + rng.uniform(4), 1, n, rng);
    const auto cnf = f0mc::random_cnf(n, 2 + rng.uniform(4), 1, 3, rng);
    const Hash h = trial % 2 == 0 ? Hash::sample_xor(n, n, rng) : Hash::sample_poly(n, 3, rng);
    auto brute_max = [&](const auto& f) {
      std::size_t best = 0;
      for (const BitString& x : f0mc::brute_solutions(f)) best = std::max(best, h.eval(x).trailing_zeros());
      return best;
    };
    f0mc::NpOracle oracle;
    EXPECT_EQ(f0mc::find_max_range(dnf, h, oracle), brute_max(dnf));
    if (f0mc::brute_count(cnf) == 0) {
      EXPECT_THROW(f0mc::find_max_range(cnf, h, oracle), f0mc::Error);
    } else {
      oracle.reset_calls();
      EXPECT_EQ(f0mc::find_max_range(cnf, h, oracle), brute_max(cnf));
      // one satisfiability check plus a binary search over n + 1 values
      EXPECT_LE(oracle.calls(), 1 + static_cast<std::uint64_t>(std::ceil(std::log2(n + 1))));
    }
  }
}

TEST(AffineFindMin, MatchesEnumeration) {
  f0mc::Rng rng(10, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.uniform(8);
    const std::size_t k = rng.uniform(n + 1);
    const BitMatrix a = random_matrix(k, n, rng);
    const BitString b = f0mc::random_bitstring(k, rng);
    const Hash h = Hash::sample_toeplitz(n, 3 * n, rng);
    std::set<BitString> image;
    for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
      const BitString x = BitString::from_uint(v, n);
      if (a.multiply(x) == b) image.insert(h.eval(x));
    }
    const auto got = f0mc::affine_find_min(a, b, h, 10);
    ASSERT_EQ(got, std::vector<BitString>(image.begin(), std::next(image.begin(), std::min<std::size_t>(10, image.size()))));
  }
}

TEST(Oracle, StubAndCaps) {
  f0mc::Rng rng(1, 0);
  const auto f = f0mc::random_cnf(6, 3, 1, 3, rng);
  const Hash h = Hash::sample_toeplitz(6, 6, rng);
  f0mc::NpOracle stub(f0mc::OracleBackend::kExternalStub);
  try {
    stub.has_trailing_zeros(f, h, 0);
    FAIL();
  } catch (const f0mc::Error& e) {
    EXPECT_EQ(e.code(), f0mc::ErrorCode::kOracleUnavailable);
  }
  f0mc::NpOracle capped(f0mc::OracleBackend::kBruteForce, 5);
  try {
    capped.has_trailing_zeros(f, h, 0);
    FAIL();
  } catch (const f0mc::Error& e) {
    EXPECT_EQ(e.code(), f0mc::ErrorCode::kOracleCap);
  }
  f0mc::NpOracle budget(f0mc::OracleBackend::kBruteForce, 24, 2);
  budget.has_trailing_zeros(f, h, 0);
  budget.has_trailing_zeros(f, h, 0);
  try {
    budget.has_trailing_zeros(f, h, 0);
    FAIL();
  } catch (const f0mc::Error& e) {
    EXPECT_EQ(e.code(), f0mc::ErrorCode::kOracleBudget);
  }
}
