#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "f0mc/counting.hpp"
#include "f0mc/dist.hpp"
#include "f0mc/error.hpp"
#include "f0mc/harness.hpp"

using f0mc::ApproxParams;
using f0mc::BitString;
using f0mc::DnfFormula;
using f0mc::SiteInput;
using f0mc::Strategy;

namespace {

std::vector<SiteInput> random_split(const DnfFormula& f, std::size_t k, f0mc::Rng& rng) {
  std::vector<std::vector<std::size_t>> parts(k);
  for (std::size_t t = 0; t < f.num_terms(); ++t) parts[rng.uniform(k)].push_back(t);
  return f0mc::split_sites(f, parts);
}

DnfFormula formula_with_count(std::uint64_t seed, std::size_t n, std::uint64_t lo, std::uint64_t hi) {
  f0mc::Rng rng(seed, 0);
  for (;;) {
    auto f = f0mc::random_dnf(n, 8, 2, n - 2, rng);
    const auto c = f0mc::brute_count(f);
    if (c >= lo && c <= hi) return f;
  }
}

}  // namespace

TEST(BitIo, RoundTrip) {
  f0mc::BitWriter w;
  w.write(5, 3);
  w.write(BitString::parse_binary("1100101"));
  w.write(0x1234, 16);
  EXPECT_EQ(w.bits(), 26u);
  f0mc::BitReader r(w.bytes(), w.bits());
  EXPECT_EQ(r.read(3), 5u);
  EXPECT_EQ(r.read_bits(7), BitString::parse_binary("1100101"));
  EXPECT_EQ(r.read(16), 0x1234u);
  EXPECT_THROW(r.read(1), f0mc::Error);
  EXPECT_EQ(f0mc::width_for(0), 1u);
  EXPECT_EQ(f0mc::width_for(150), 8u);
  EXPECT_EQ(f0mc::width_for(12), 4u);
}

TEST(GWidth, FormulaAndGrowth) {
  EXPECT_EQ(f0mc::derive_g_width(1, 0.5, 10), 9u);
  for (std::size_t k = 1; k <= 64; k *= 2) {
    EXPECT_LE(f0mc::derive_g_width(2 * k, 0.2, 1000), f0mc::derive_g_width(k, 0.2, 1000) + 2);
  }
}

TEST(GWidth, CollisionAudit) {
  const double delta = 0.5;
  const std::size_t tuples = 10;
  const std::size_t m = f0mc::derive_g_width(1, delta, tuples);
  f0mc::Rng rng(77, 0);
  int collisions = 0;
  for (int run = 0; run < 1000; ++run) {
    const auto g = f0mc::Hash::sample_toeplitz(16, m, rng);
    std::set<BitString> xs;
    while (xs.size() < tuples) xs.insert(f0mc::random_bitstring(16, rng));
    std::set<BitString> images;
    for (const BitString& x : xs) images.insert(g.eval(x));
    collisions += images.size() < tuples ? 1 : 0;
  }
  EXPECT_LE(collisions / 1000.0, delta / 2);
}

TEST(Dist, SingleSiteMinimumMatchesCentralized) {
  const auto params = ApproxParams::custom(0.8, 0.2, 40, 7);
  f0mc::NpOracle oracle;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = formula_with_count(seed, 10, 100, 400);
    const auto d = f0mc::dist_count({{1, f}}, params, seed, Strategy::kMinimum, oracle);
    const auto c = f0mc::approx_model_count_min(f, params, seed);
    ASSERT_EQ(d.min->rows, c.min->rows);
    EXPECT_EQ(d.estimate, c.estimate);
  }
}

TEST(Dist, MinimumMergeMatchesCentralizedForAnySplit) {
  const auto params = ApproxParams::make(0.8, 0.2);
  f0mc::NpOracle oracle;
  f0mc::Rng rng(3, 0);
  const auto f = formula_with_count(3, 12, 200, 200);
  const auto c = f0mc::approx_model_count_min(f, params, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = f0mc::dist_count(random_split(f, 4, rng), params, 5, Strategy::kMinimum, oracle);
    EXPECT_EQ(d.min->rows, c.min->rows);
  }
}

TEST(Dist, MergeOrderDoesNotMatter) {
  f0mc::Rng rng(4, 0);
  std::vector<std::vector<BitString>> parts(5);
  for (auto& p : parts) {
    for (int i = 0; i < 12; ++i) f0mc::insert_smallest(p, f0mc::random_bitstring(8, rng), 10);
  }
  auto fold = [&](const std::vector<std::size_t>& order) {
    std::vector<BitString> acc;
    for (std::size_t i : order) acc = f0mc::merge_min_rows(acc, parts[i], 10);
    return acc;
  };
  const auto base = fold({0, 1, 2, 3, 4});
  EXPECT_EQ(fold({4, 2, 0, 3, 1}), base);
  const auto left = f0mc::merge_min_rows(f0mc::merge_min_rows(parts[0], parts[1], 10), parts[2], 10);
  const auto right = f0mc::merge_min_rows(parts[0], f0mc::merge_min_rows(parts[1], parts[2], 10), 10);
  EXPECT_EQ(left, right);
}

TEST(Dist, BucketingMatchesCentralizedLevels) {
  const auto params = ApproxParams::custom(0.8, 0.2, 30, 9);
  f0mc::NpOracle oracle;
  f0mc::Rng rng(5, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = formula_with_count(seed, 11, 100, 1500);
    const auto c = f0mc::approx_mc(f, params, seed);
    for (std::size_t k : {1u, 3u}) {
      const auto d = f0mc::dist_count(random_split(f, k, rng), params, seed, Strategy::kBucketing, oracle);
      for (std::size_t i = 0; i < params.rows; ++i) {
        EXPECT_EQ(d.bucket_rows[i].first, c.bucket->rows[i].cell.size());
        EXPECT_EQ(d.bucket_rows[i].second, c.bucket->rows[i].level);
      }
      EXPECT_EQ(d.estimate, c.estimate);
    }
  }
}

TEST(Dist, EstimationCellsAreGlobalMaxima) {
  const auto params = ApproxParams::custom(0.8, 0.2, 12, 5);
  f0mc::NpOracle oracle;
  f0mc::Rng rng(6, 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = formula_with_count(seed, 9, 20, 300);
    const auto d = f0mc::dist_count(random_split(f, 3, rng), params, seed, Strategy::kEstimation, oracle);
    const auto hashes = f0mc::choose_hash_functions(Strategy::kEstimation, 9, params, seed);
    for (std::size_t c = 0; c < d.est->cells.size(); ++c) {
      std::size_t best = 0;
      for (const BitString& x : f0mc::brute_solutions(f)) best = std::max(best, hashes.entries[c].eval(x).trailing_zeros());
      ASSERT_EQ(d.est->cells[c], best);
    }
    f0mc::CountOptions opt;
    opt.r = *d.r;
    EXPECT_EQ(d.estimate, f0mc::approx_model_count_est(f, params, seed, oracle, opt).estimate);
  }
}

TEST(Dist, TransportIndependenceAndConservation) {
  const auto params = ApproxParams::custom(0.8, 0.2, 20, 5);
  f0mc::NpOracle oracle;
  f0mc::Rng rng(7, 0);
  const auto f = formula_with_count(7, 9, 50, 300);
  const auto sites = random_split(f, 3, rng);
  for (Strategy s : {Strategy::kBucketing, Strategy::kMinimum, Strategy::kEstimation}) {
    f0mc::DistOptions queue;
    f0mc::DistOptions direct;
    direct.transport = f0mc::TransportMode::kDirect;
    f0mc::DistOptions parallel;
    parallel.parallel = true;
    const auto a = f0mc::dist_count(sites, params, 9, s, oracle, queue);
    const auto b = f0mc::dist_count(sites, params, 9, s, oracle, direct);
    const auto c = f0mc::dist_count(sites, params, 9, s, oracle, parallel);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.estimate, c.estimate);
    EXPECT_EQ(a.ledger.entries(), b.ledger.entries());
    for (auto dir : {f0mc::Direction::kToSite, f0mc::Direction::kToCoordinator}) {
      EXPECT_EQ(a.ledger.sent(dir), a.ledger.received(dir));
    }
    EXPECT_EQ(a.ledger.messages[0], 3u);
    EXPECT_EQ(a.ledger.messages[1], 3u);
  }
}

TEST(Dist, MinimumCostScalesLinearlyInSites) {
  const auto params = ApproxParams::make(0.8, 0.2);
  f0mc::NpOracle oracle;
  f0mc::Rng rng(8, 0);
  const auto f = formula_with_count(8, 12, 800, 3000);
  std::vector<double> per_site;
  for (std::size_t k : {1u, 2u, 4u, 8u}) {
    std::vector<SiteInput> sites;
    // Every site holds the whole formula so per-site load is fixed.
    for (std::size_t j = 0; j < k; ++j) sites.push_back({j + 1, f});
    const auto d = f0mc::dist_count(sites, params, 1, Strategy::kMinimum, oracle);
    per_site.push_back(static_cast<double>(d.ledger.total_bits()) / static_cast<double>(k));
  }
  for (double v : per_site) {
    EXPECT_LE(v, 2 * per_site[0]);
    EXPECT_GE(v, per_site[0] / 2);
  }
}

TEST(Dist, WidthMismatchAndScenario) {
  f0mc::NpOracle oracle;
  const auto a = f0mc::parse_dnf("p dnf 3 1\n1 0\n");
  const auto b = f0mc::parse_dnf("p dnf 4 1\n1 0\n");
  EXPECT_THROW(f0mc::dist_count({{1, a}, {2, b}}, ApproxParams::make(0.8, 0.2), 1, Strategy::kMinimum, oracle),
               f0mc::Error);

  const auto s = f0mc::parse_scenario("p dnf 4 3\n1 0\n2 0\n-3 4 0\nsite 1: 1 3\nsite 2: 2\n");
  ASSERT_EQ(s.partition.size(), 2u);
  EXPECT_EQ(s.partition[0], (std::vector<std::size_t>{0, 2}));
  const auto sites = f0mc::split_sites(s.formula, s.partition);
  EXPECT_EQ(sites[1].formula.num_terms(), 1u);
  EXPECT_THROW(f0mc::parse_scenario("p dnf 4 2\n1 0\n2 0\nsite 1: 1\n"), f0mc::Error);
  EXPECT_THROW(f0mc::parse_scenario("p dnf 4 1\n1 0\nsite 2: 1\n"), f0mc::Error);
  EXPECT_THROW(f0mc::parse_scenario("p dnf 4 1\n1 0\nsite 1: 5\n"), f0mc::Error);
}
