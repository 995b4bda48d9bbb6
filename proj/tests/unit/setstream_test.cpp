#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "f0mc/counting.hpp"
#include "f0mc/error.hpp"
#include "f0mc/harness.hpp"
#include "f0mc/setstream.hpp"

using f0mc::ApproxParams;
using f0mc::BitMatrix;
using f0mc::BitString;
using f0mc::DimRange;
using f0mc::DnfFormula;
using f0mc::RangeSpec;
using f0mc::Strategy;

namespace {

RangeSpec random_range(std::size_t n, std::size_t d, f0mc::Rng& rng, bool steps = false) {
  RangeSpec r;
  r.n = n;
  for (std::size_t j = 0; j < d; ++j) {
    std::uint64_t a = rng.uniform(std::uint64_t{1} << n);
    std::uint64_t b = rng.uniform(std::uint64_t{1} << n);
    if (a > b) std::swap(a, b);
    r.dims.push_back({a, b, steps ? static_cast<unsigned>(rng.uniform(3)) : 0u});
  }
  return r;
}

std::set<BitString> points(const RangeSpec& r) {
  std::set<BitString> out;
  const std::size_t total = r.n * r.d();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << total); ++v) {
    const BitString x = BitString::from_uint(v, total);
    if (r.contains(x)) out.insert(x);
  }
  return out;
}

std::set<BitString> solution_set(const DnfFormula& f) {
  const auto s = f0mc::brute_solutions(f);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(RangeToDnf, MatchesPointEnumeration) {
  f0mc::Rng rng(1, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform(5);
    const std::size_t d = 1 + rng.uniform(2);
    const RangeSpec r = random_range(n, d, rng);
    const DnfFormula f = f0mc::range_to_dnf(r);
    ASSERT_EQ(solution_set(f), points(r));
    EXPECT_LE(f.num_terms(), static_cast<std::size_t>(std::pow(2.0 * n, static_cast<double>(d))));
    for (const DimRange& dim : r.dims) EXPECT_LE(f0mc::dim_term_count(n, dim.a, dim.b), 2 * n);
  }
}

TEST(RangeToDnf, OneSidedPiecesHaveAtMostNTerms) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::uint64_t c = 0; c < (1ULL << n); ++c) {
      const auto le = f0mc::le_terms(n, c, n, 0);
      const auto ge = f0mc::ge_terms(n, c, n, 0);
      EXPECT_LE(le.size(), n);
      EXPECT_LE(ge.size(), n);
      std::set<std::uint64_t> le_pts;
      std::set<std::uint64_t> ge_pts;
      for (const BitString& x : f0mc::brute_solutions(DnfFormula(n, le))) le_pts.insert(x.to_uint());
      for (const BitString& x : f0mc::brute_solutions(DnfFormula(n, ge))) ge_pts.insert(x.to_uint());
      EXPECT_EQ(le_pts.size(), c + 1);
      EXPECT_EQ(*le_pts.rbegin(), c);
      EXPECT_EQ(ge_pts.size(), (1ULL << n) - c);
      EXPECT_EQ(*ge_pts.begin(), c);
    }
  }
}

TEST(RangeToDnf, Examples) {
  const DnfFormula full = f0mc::range_to_dnf(RangeSpec{4, {{0, 15, 0}}});
  ASSERT_EQ(full.num_terms(), 1u);
  EXPECT_EQ(full.term(0).width(), 0u);

  const DnfFormula small = f0mc::range_to_dnf(RangeSpec{2, {{1, 2, 0}}});
  EXPECT_LE(small.num_terms(), 4u);
  EXPECT_EQ(solution_set(small), (std::set<BitString>{BitString::parse_binary("01"), BitString::parse_binary("10")}));

  const RangeSpec box{3, {{1, 6, 0}, {2, 5, 0}}};
  const DnfFormula f = f0mc::range_to_dnf(box);
  EXPECT_EQ(f0mc::brute_count(f), 24u);
  EXPECT_LE(f.num_terms(), 36u);

  const RangeSpec witness{3, {{1, 7, 0}, {1, 7, 0}}};
  const DnfFormula w = f0mc::range_to_dnf(witness);
  EXPECT_EQ(f0mc::brute_count(w), 49u);
  EXPECT_GE(w.num_terms(), 9u);
}

TEST(RangeToDnf, LazyGeneratorMatchesEager) {
  f0mc::Rng rng(2, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const RangeSpec r = random_range(2 + rng.uniform(5), 1 + rng.uniform(3), rng);
    const DnfFormula eager = f0mc::range_to_dnf(r);
    const f0mc::RangeTermGenerator gen(r);
    ASSERT_EQ(gen.count(), eager.num_terms());
    for (std::size_t i = 0; i < gen.count(); ++i) EXPECT_EQ(*gen.term(i), eager.term(i));
  }
}

TEST(Progression, Examples) {
  const DnfFormula f = f0mc::progression_to_dnf(RangeSpec{4, {{1, 13, 2}}});
  std::set<std::uint64_t> got;
  for (const BitString& x : f0mc::brute_solutions(f)) got.insert(x.to_uint());
  EXPECT_EQ(got, (std::set<std::uint64_t>{1, 5, 9, 13}));

  const RangeSpec plain{4, {{3, 11, 0}}};
  EXPECT_EQ(f0mc::progression_to_dnf(plain).terms(), f0mc::range_to_dnf(plain).terms());

  f0mc::Rng rng(3, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const RangeSpec r = random_range(1 + rng.uniform(4), 1 + rng.uniform(2), rng, true);
    EXPECT_EQ(solution_set(f0mc::progression_to_dnf(r)), points(r));
    EXPECT_EQ(points(r).size(), r.cardinality());
  }
}

TEST(DnfStream, SingleItemMatchesCounter) {
  f0mc::Rng rng(4, 0);
  const auto params = ApproxParams::custom(0.8, 0.2, 20, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = f0mc::random_dnf(10, 4, 2, 8, rng);
    f0mc::DnfStreamEstimator est(10, Strategy::kMinimum, params, trial);
    est.add(f);
    const auto c = f0mc::approx_model_count_min(f, params, trial);
    EXPECT_EQ(est.min_sketch().rows, c.min->rows);
    EXPECT_EQ(est.estimate(), c.estimate);
  }
}

TEST(DnfStream, TermItemsMatchWholeFormulaAndOrder) {
  f0mc::Rng rng(5, 0);
  const auto params = ApproxParams::custom(0.8, 0.2, 20, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = f0mc::random_dnf(10, 5, 2, 8, rng);
    f0mc::DnfStreamEstimator whole(10, Strategy::kMinimum, params, trial);
    whole.add(f);
    f0mc::DnfStreamEstimator split(10, Strategy::kMinimum, params, trial);
    for (const auto& t : f.terms()) split.add_term(t);
    f0mc::DnfStreamEstimator reversed(10, Strategy::kMinimum, params, trial);
    for (std::size_t i = f.num_terms(); i-- > 0;) reversed.add_term(f.term(i));
    EXPECT_EQ(whole.min_sketch().rows, split.min_sketch().rows);
    EXPECT_EQ(whole.min_sketch().rows, reversed.min_sketch().rows);
  }
}

TEST(DnfStream, BucketingMatchesCounterOnUnion) {
  f0mc::Rng rng(6, 0);
  const auto params = ApproxParams::custom(0.8, 0.2, 12, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = f0mc::random_dnf(9, 5, 1, 6, rng);
    f0mc::DnfStreamEstimator stream(9, Strategy::kBucketing, params, trial);
    for (const auto& t : f.terms()) stream.add_term(t);
    const auto c = f0mc::approx_mc(f, params, trial);
    for (std::size_t i = 0; i < params.rows; ++i) EXPECT_EQ(stream.bucket_sketch().rows[i], c.bucket->rows[i]);
    EXPECT_EQ(stream.estimate(), c.estimate);
  }
}

TEST(DnfStream, TwoPointsAndWidthMismatch) {
  const auto a = f0mc::parse_dnf("p dnf 3 1\n1 2 3 0\n");
  const auto b = f0mc::parse_dnf("p dnf 3 1\n-1 -2 -3 0\n");
  EXPECT_EQ(f0mc::f0_dnf_stream({a, b}, ApproxParams::make(0.8, 0.2), 1), 2.0);
  EXPECT_EQ(f0mc::f0_dnf_stream({a, b}, ApproxParams::make(0.8, 0.2), 1, Strategy::kBucketing), 2.0);
  const auto c = f0mc::parse_dnf("p dnf 4 1\n1 0\n");
  EXPECT_THROW(f0mc::f0_dnf_stream({a, c}, ApproxParams::make(0.8, 0.2), 1), f0mc::Error);
  EXPECT_EQ(f0mc::f0_dnf_stream({}, ApproxParams::make(0.8, 0.2), 1), 0.0);
}

TEST(Ranges, UnionExamples) {
  const auto params = ApproxParams::make(0.8, 0.2);
  const std::vector<RangeSpec> overlap{{4, {{0, 7, 0}}}, {4, {{4, 11, 0}}}};
  EXPECT_EQ(f0mc::exact_range_union(overlap), 12u);
  EXPECT_EQ(f0mc::f0_ranges(overlap, params, 2), 12.0);
  const std::vector<RangeSpec> witness{{3, {{1, 7, 0}, {1, 7, 0}}}};
  EXPECT_EQ(f0mc::f0_ranges(witness, params, 2), 49.0);
}

TEST(Ranges, ExactUnionMatchesEnumeration) {
  f0mc::Rng rng(7, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform(4);
    const std::size_t d = 1 + rng.uniform(2);
    std::vector<RangeSpec> items;
    std::set<BitString> all;
    for (std::size_t k = 0, count = 1 + rng.uniform(6); k < count; ++k) {
      items.push_back(random_range(n, d, rng));
      const auto p = points(items.back());
      all.insert(p.begin(), p.end());
    }
    EXPECT_EQ(f0mc::exact_range_union(items), all.size());
  }
}

TEST(Ranges, SingleLargeRangeStatistically) {
  const RangeSpec r{8, {{3, 200, 0}, {17, 250, 0}}};
  const double truth = static_cast<double>(r.cardinality());
  const auto params = ApproxParams::make(0.8, 0.2);
  const auto report = f0mc::statistical_accept(
      [&](std::size_t t) { return f0mc::f0_ranges({r}, params, t); }, 40, 0.8, 0.2, truth);
  EXPECT_TRUE(report.pass) << report.fraction;
}

TEST(Affine, Examples) {
  const auto params = ApproxParams::make(0.8, 0.2);
  f0mc::Rng rng(8, 0);
  const BitString b = f0mc::random_bitstring(6, rng);
  EXPECT_EQ(f0mc::f0_affine_stream({{BitMatrix::identity(6), b}}, params, 1), 1.0);

  // x0 = 0 and x0 = 1 together cover the cube.
  BitMatrix first(1, 6);
  first.set(0, 0);
  const f0mc::AffineSet lo{first, BitString(1)};
  const f0mc::AffineSet hi{first, BitString::parse_binary("1")};
  EXPECT_EQ(f0mc::f0_affine_stream({lo, hi}, params, 1), 64.0);

  f0mc::AffineStreamEstimator once(6, params, 3);
  once.add(lo);
  f0mc::AffineStreamEstimator twice(6, params, 3);
  twice.add(lo);
  twice.add(lo);
  EXPECT_EQ(once.min_sketch().rows, twice.min_sketch().rows);
}

TEST(Weighted, Examples) {
  const auto params = ApproxParams::make(0.8, 0.2);
  f0mc::WeightedDnf single{f0mc::parse_dnf("p dnf 1 1\n1 0\n"), {{1, 1}}};
  EXPECT_EQ(f0mc::weighted_exact(single), 0.5);
  EXPECT_EQ(f0mc::weighted_dnf_count(single, params, 1), 0.5);

  f0mc::WeightedDnf two{f0mc::parse_dnf("p dnf 2 2\n1 0\n-2 0\n"), {{3, 2}, {1, 2}}};
  EXPECT_EQ(f0mc::weighted_exact(two), 15.0 / 16.0);
  EXPECT_EQ(f0mc::brute_weighted_numerator(two), 15u);
  EXPECT_EQ(f0mc::weighted_dnf_count(two, params, 1), 15.0 / 16.0);

  f0mc::Rng rng(9, 0);
  const auto f = f0mc::random_dnf(6, 3, 1, 4, rng);
  f0mc::WeightedDnf half{f, std::vector<f0mc::VarWeight>(6, {1, 1})};
  EXPECT_EQ(f0mc::weighted_exact(half), std::ldexp(static_cast<double>(f0mc::brute_count(f)), -6));
}

TEST(Weighted, ReductionIsLossless) {
  f0mc::Rng rng(10, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform(8);
    f0mc::WeightedDnf w{f0mc::random_dnf(n, 1 + rng.uniform(6), 1, n, rng), {}};
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned m = 1 + static_cast<unsigned>(rng.uniform(4));
      w.weights.push_back({1 + rng.uniform((1ULL << m) - 1), m});
    }
    EXPECT_EQ(f0mc::exact_range_union(f0mc::weighted_to_ranges(w)), f0mc::brute_weighted_numerator(w));
  }
}

TEST(Parsing, RangeStream) {
  const auto s = f0mc::parse_range_stream("n=4 d=2\n# comment\n1 5 ; 2 9 2\n0 15 ; 3 3\n");
  ASSERT_EQ(s.items.size(), 2u);
  EXPECT_EQ(s.items[0].dims[1].step_log, 1u);
  EXPECT_EQ(s.items[1].dims[1].a, 3u);
  auto code_of = [](const char* text) {
    try {
      f0mc::parse_range_stream(text);
    } catch (const f0mc::Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(code_of("n=4 d=1\n5 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(code_of("n=4 d=1\n1 20\n").find("does not fit"), std::string::npos);
  EXPECT_NE(code_of("n=4 d=2\n1 2\n").find("expected 2 dimensions"), std::string::npos);
  EXPECT_NE(code_of("n=4 d=1\n1 9 3\n").find("power of two"), std::string::npos);
}

TEST(Parsing, AffineDnfAndWeighted) {
  const auto a = f0mc::parse_affine_stream("n=3\n4 2 1 | 5\n0 0 0 | 0\n");
  ASSERT_EQ(a.items.size(), 2u);
  EXPECT_EQ(a.items[0].a, BitMatrix::identity(3));
  EXPECT_EQ(a.items[0].b, BitString::parse_binary("101"));
  EXPECT_THROW(f0mc::parse_affine_stream("n=3\n4 2 | 5\n"), f0mc::Error);

  const auto items = f0mc::parse_dnf_stream("p dnf 3 1\n1 0\n---\np dnf 3 2\n2 0\n-3 0\n");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[1].num_terms(), 2u);
  EXPECT_THROW(f0mc::parse_dnf_stream("p dnf 3 1\n1 0\n---\np dnf 4 1\n1 0\n"), f0mc::Error);

  const auto w = f0mc::parse_weighted_dnf("p dnf 2 1\nw 1 3 2\n1 -2 0\n");
  EXPECT_EQ(w.weights[0].k, 3u);
  EXPECT_EQ(w.weights[0].m, 2u);
  EXPECT_EQ(w.weights[1].m, 1u);
  EXPECT_THROW(f0mc::parse_weighted_dnf("p dnf 2 1\nw 1 4 2\n1 0\n"), f0mc::Error);
}
