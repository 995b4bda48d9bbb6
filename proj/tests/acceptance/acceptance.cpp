// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "f0mc/counting.hpp"
#include "f0mc/dist.hpp"
#include "f0mc/harness.hpp"
#include "f0mc/hashing.hpp"
#include "f0mc/rng.hpp"
#include "f0mc/setstream.hpp"
#include "f0mc/solvers.hpp"

using namespace f0mc;

namespace {

constexpr double kEps = 0.8;
constexpr double kDelta = 0.2;
constexpr std::size_t kTrials = 100;
constexpr double kFractionFloor = 0.68;    // (1 - delta) - 3 sqrt(delta (1 - delta) / 100)
constexpr double kFmFloor = 0.55;          // 3/5 less Monte-Carlo slack over 500 draws
constexpr double kScalingSlack = 2.0;      // ledger bits within 2x of linear in k

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---- independent oracles: plain integer enumeration, no library solvers ----

// Bit of variable i in an n-bit assignment value (variable 0 is the MSB).
bool var_bit(std::uint64_t v, std::size_t n, std::size_t i) { return (v >> (n - 1 - i)) & 1; }

bool term_holds(const Term& t, std::uint64_t v, std::size_t n) {
  for (const Literal& l : t.literals())
    if (var_bit(v, n, l.var) != l.positive) return false;
  return true;
}

bool dnf_holds(const DnfFormula& f, std::uint64_t v) {
  for (const Term& t : f.terms())
    if (term_holds(t, v, f.num_vars())) return true;
  return false;
}

bool cnf_holds(const CnfFormula& f, std::uint64_t v) {
  for (const Clause& c : f.clauses()) {
    bool any = false;
    for (const Literal& l : c.literals()) any = any || var_bit(v, f.num_vars(), l.var) == l.positive;
    if (!any) return false;
  }
  return true;
}

template <class F>
std::vector<std::uint64_t> solutions(const F& f, bool (*holds)(const F&, std::uint64_t)) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << f.num_vars()); ++v)
    if (holds(f, v)) out.push_back(v);
  return out;
}

// Affine hash from its matrix entries, output MSB-first as a string of '0'/'1'.
std::string affine_eval(const Hash& h, std::uint64_t v) {
  const std::size_t n = h.input_bits();
  std::string out(h.output_bits(), '0');
  for (std::size_t i = 0; i < h.output_bits(); ++i) {
    bool acc = h.offset().test(i);
    for (std::size_t j = 0; j < n; ++j) acc ^= h.matrix().get(i, j) && var_bit(v, n, j);
    out[i] = acc ? '1' : '0';
  }
  return out;
}

std::size_t trailing_zeros(const std::string& bits) {
  std::size_t t = 0;
  while (t < bits.size() && bits[bits.size() - 1 - t] == '0') ++t;
  return t;
}

std::vector<std::string> smallest_images(const std::vector<std::uint64_t>& sols, const Hash& h, std::size_t p) {
  std::set<std::string> image;
  for (std::uint64_t v : sols) image.insert(affine_eval(h, v));
  std::vector<std::string> out(image.begin(), image.end());
  if (out.size() > p) out.resize(p);
  return out;
}

std::vector<std::string> as_strings(const std::vector<BitString>& values) {
  std::vector<std::string> out;
  for (const BitString& b : values) out.push_back(b.to_binary());
  return out;
}

// ---- corpora ----

std::vector<std::pair<DnfFormula, std::uint64_t>> dnf_corpus() {
  std::vector<std::pair<DnfFormula, std::uint64_t>> out;
  for (std::uint64_t attempt = 0; out.size() < 20; ++attempt) {
    Rng rng(101, attempt);
    const DnfFormula f = random_dnf(12, 2 + rng.uniform(5), 5, 9, rng);
    const std::uint64_t count = solutions(f, dnf_holds).size();
    if (count >= 50 && count <= 2000) out.emplace_back(f, count);
  }
  return out;
}

std::vector<std::pair<CnfFormula, std::uint64_t>> cnf_corpus() {
  std::vector<std::pair<CnfFormula, std::uint64_t>> out;
  for (std::uint64_t attempt = 0; out.size() < 10; ++attempt) {
    Rng rng(303, attempt);
    const CnfFormula f = random_cnf(12, 6 + rng.uniform(12), 2, 4, rng);
    const std::uint64_t count = solutions(f, cnf_holds).size();
    if (count >= 50 && count <= 2000) out.emplace_back(f, count);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Runs `trials` seeded estimates per formula; all formulas must reach the floor.
template <class Runner>
Outcome contract_over(std::size_t formulas, Runner runner, const std::function<double(std::size_t)>& truth) {
  Outcome o;
  double worst = 1.0;
  for (std::size_t i = 0; i < formulas; ++i) {
    const AcceptReport r = statistical_accept([&](std::size_t t) { return runner(i, t); }, kTrials, kEps, kDelta,
                                              truth(i));
    worst = std::min(worst, r.fraction);
    if (!r.pass || r.fraction < kFractionFloor) o.pass = false;
  }
  o.detail = "worst within-factor fraction " + fmt(worst) + " over " + std::to_string(formulas) + " formulas";
  return o;
}

// ---- criteria ----

Outcome bucketing_contract() {
  const auto corpus = dnf_corpus();
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  return contract_over(
      corpus.size(),
      [&](std::size_t i, std::size_t t) { return approx_mc(corpus[i].first, params, 1000 + t).estimate; },
      [&](std::size_t i) { return static_cast<double>(corpus[i].second); });
}

Outcome minimum_contract() {
  const auto corpus = dnf_corpus();
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  Outcome o = contract_over(
      corpus.size(),
      [&](std::size_t i, std::size_t t) { return approx_model_count_min(corpus[i].first, params, 2000 + t).estimate; },
      [&](std::size_t i) { return static_cast<double>(corpus[i].second); });

  std::size_t mismatches = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(202, k);
    const std::size_t n = 2 + rng.uniform(7);
    const DnfFormula f = random_dnf(n, 1 + rng.uniform(5), 1, n, rng);
    const Hash h = pick_hash_functions(HashFamily::kToeplitz, n, 3 * n, 1, 7000 + k).at(0);
    const std::size_t p = 1 + rng.uniform(20);
    if (as_strings(find_min(f, h, p)) != smallest_images(solutions(f, dnf_holds), h, p)) ++mismatches;
  }
  if (mismatches != 0) o.pass = false;
  o.detail += "; FindMin mismatches " + std::to_string(mismatches) + "/100";
  return o;
}

Outcome estimation_contract() {
  const auto corpus = cnf_corpus();
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  std::deque<NpOracle> oracles(corpus.size());
  Outcome o = contract_over(
      corpus.size(),
      [&](std::size_t i, std::size_t t) {
        CountOptions opts;
        // smallest r with 2^r >= 2 F0, so 2 F0 <= 2^r < 4 F0 <= 50 F0
        opts.r = static_cast<std::size_t>(std::ceil(std::log2(2.0 * static_cast<double>(corpus[i].second))));
        return approx_model_count_est(corpus[i].first, params, 3000 + t, oracles[i], opts).estimate;
      },
      [&](std::size_t i) { return static_cast<double>(corpus[i].second); });

  std::size_t mismatches = 0;
  NpOracle oracle;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(404, k);
    const std::size_t n = 3 + rng.uniform(6);
    CnfFormula f = random_cnf(n, 1 + rng.uniform(4), 1, 3, rng);
    std::vector<std::uint64_t> sols = solutions(f, cnf_holds);
    if (sols.empty()) {
      f = random_cnf(n, 1, 2, 3, rng);
      sols = solutions(f, cnf_holds);
    }
    const HashFamily fam = k % 2 == 0 ? HashFamily::kXor : HashFamily::kToeplitz;
    const Hash h = pick_hash_functions(fam, n, n, 1, 8000 + k).at(0);
    std::size_t best = 0;
    for (std::uint64_t v : sols) best = std::max(best, trailing_zeros(affine_eval(h, v)));
    if (find_max_range(f, h, oracle) != best) ++mismatches;
  }
  if (mismatches != 0) o.pass = false;
  o.detail += "; FindMaxRange mismatches " + std::to_string(mismatches) + "/100";
  return o;
}

Outcome flajolet_martin() {
  DnfFormula f;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(505, attempt);
    f = random_dnf(12, 2 + rng.uniform(4), 2, 5, rng);
    if (solutions(f, dnf_holds).size() == 1024) break;
  }
  const double f0 = 1024;
  std::size_t hits = 0;
  const std::size_t draws = 500;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const double est = std::ldexp(1.0, static_cast<int>(*flajolet_martin_raw(f, 9000 + s, 1)));
    if (est >= f0 / 5 && est <= 5 * f0) ++hits;
  }
  const double fraction = static_cast<double>(hits) / draws;
  return {fraction >= kFmFloor, "fraction with 2^r in [F0/5, 5 F0] " + fmt(fraction) + " (F0 = 1024)"};
}

RangeSpec random_range(Rng& rng, bool steps) {
  RangeSpec r;
  r.n = 1 + rng.uniform(5);
  const std::size_t d = 1 + rng.uniform(2);
  for (std::size_t j = 0; j < d; ++j) {
    const std::uint64_t hi = std::uint64_t{1} << r.n;
    std::uint64_t a = rng.uniform(hi), b = rng.uniform(hi);
    if (a > b) std::swap(a, b);
    DimRange dim{a, b, 0};
    if (steps) dim.step_log = static_cast<unsigned>(rng.uniform(std::min<std::size_t>(r.n, 3)));
    r.dims.push_back(dim);
  }
  return r;
}

// Points of the range by direct coordinate enumeration, as nd-bit values.
std::vector<std::uint64_t> range_points(const RangeSpec& r) {
  std::vector<std::uint64_t> out{0};
  for (const DimRange& dim : r.dims) {
    std::vector<std::uint64_t> next;
    const std::uint64_t step = std::uint64_t{1} << dim.step_log;
    for (std::uint64_t prefix : out)
      for (std::uint64_t x = dim.a; x <= dim.b; x += step) next.push_back((prefix << r.n) | x);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome range_compiler() {
  std::size_t wrong_sets = 0, over_bound = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng(606, k);
    const bool steps = k % 4 == 3;
    const RangeSpec r = random_range(rng, steps);
    const DnfFormula f = steps ? progression_to_dnf(r) : range_to_dnf(r);
    if (solutions(f, dnf_holds) != range_points(r)) ++wrong_sets;
    if (static_cast<double>(f.num_terms()) > std::pow(2.0 * static_cast<double>(r.n), static_cast<double>(r.d())))
      ++over_bound;
  }
  RangeSpec witness{3, {{1, 7, 0}, {1, 7, 0}}};
  const DnfFormula w = range_to_dnf(witness);
  const std::size_t f0 = solutions(w, dnf_holds).size();
  const bool pass = wrong_sets == 0 && over_bound == 0 && f0 == 49 && w.num_terms() >= 9;
  return {pass, "set mismatches " + std::to_string(wrong_sets) + "/200, over (2n)^d " + std::to_string(over_bound) +
                    "; witness F0 " + std::to_string(f0) + " with " + std::to_string(w.num_terms()) + " terms"};
}

WeightedDnf random_weighted(Rng& rng, std::size_t max_n, std::size_t max_width) {
  const std::size_t n = 1 + rng.uniform(max_n);
  WeightedDnf w;
  w.formula = random_dnf(n, 1 + rng.uniform(5), 1, std::min(n, max_width), rng);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned m = 1 + static_cast<unsigned>(rng.uniform(4));
    w.weights.push_back({1 + rng.uniform((std::uint64_t{1} << m) - 1), m});
  }
  return w;
}

// sum over satisfying assignments of prod rho, times 2^(sum m_i).
std::uint64_t weighted_numerator(const WeightedDnf& w) {
  const std::size_t n = w.formula.num_vars();
  std::uint64_t total = 0;
  for (std::uint64_t v : solutions(w.formula, dnf_holds)) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const VarWeight& vw = w.weights[i];
      prod *= var_bit(v, n, i) ? vw.k : (std::uint64_t{1} << vw.m) - vw.k;
    }
    total += prod;
  }
  return total;
}

Outcome weighted_reduction() {
  std::size_t mismatches = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng(707, k);
    const WeightedDnf w = random_weighted(rng, 8, 8);
    unsigned bits = 0;
    for (const VarWeight& vw : w.weights) bits += vw.m;
    const double expected = std::ldexp(static_cast<double>(weighted_numerator(w)), -static_cast<int>(bits));
    if (weighted_exact(w) != expected) ++mismatches;
  }
  Outcome o{mismatches == 0, "exact mismatches " + std::to_string(mismatches) + "/50"};
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  std::vector<WeightedDnf> cases;
  std::vector<double> truths;
  for (std::uint64_t k = 0; cases.size() < 3; ++k) {
    Rng rng(708, k);
    WeightedDnf w = random_weighted(rng, 6, 3);
    const std::uint64_t num = weighted_numerator(w);
    if (num == 0) continue;
    truths.push_back(std::ldexp(static_cast<double>(num), -static_cast<int>(w.total_bits())));
    cases.push_back(std::move(w));
  }
  const Outcome s = contract_over(
      cases.size(), [&](std::size_t i, std::size_t t) { return weighted_dnf_count(cases[i], params, 4000 + t); },
      [&](std::size_t i) { return truths[i]; });
  o.pass = o.pass && s.pass;
  o.detail += "; estimated: " + s.detail;
  return o;
}

AffineSet random_affine(Rng& rng, std::size_t n, std::size_t max_rows) {
  const std::size_t rows = rng.uniform(max_rows + 1);
  AffineSet s{BitMatrix(rows, n), BitString(rows)};
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) s.a.set(i, j, rng.uniform(2) == 1);
    s.b.set(i, rng.uniform(2) == 1);
  }
  return s;
}

std::vector<std::uint64_t> affine_points(const AffineSet& s, std::size_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    bool ok = true;
    for (std::size_t i = 0; i < s.a.rows() && ok; ++i) {
      bool acc = false;
      for (std::size_t j = 0; j < n; ++j) acc ^= s.a.get(i, j) && var_bit(v, n, j);
      ok = acc == s.b.test(i);
    }
    if (ok) out.push_back(v);
  }
  return out;
}

Outcome affine_streams() {
  std::size_t mismatches = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(808, k);
    const std::size_t n = 1 + rng.uniform(8);
    const AffineSet s = random_affine(rng, n, n);
    const Hash h = pick_hash_functions(HashFamily::kToeplitz, n, 3 * n, 1, 10000 + k).at(0);
    const std::size_t t = 1 + rng.uniform(20);
    if (as_strings(affine_find_min(s.a, s.b, h, t)) != smallest_images(affine_points(s, n), h, t)) ++mismatches;
  }
  Outcome o{mismatches == 0, "affine_find_min mismatches " + std::to_string(mismatches) + "/100"};

  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  const std::size_t n = 10;
  std::vector<std::vector<AffineSet>> unions;
  std::vector<double> truths;
  for (std::uint64_t k = 0; unions.size() < 3; ++k) {
    Rng rng(809, k);
    std::vector<AffineSet> items;
    std::set<std::uint64_t> points;
    for (std::size_t i = 0; i < 6; ++i) {
      items.push_back(random_affine(rng, n, 4));
      for (std::uint64_t v : affine_points(items.back(), n)) points.insert(v);
    }
    if (points.size() < 100) continue;
    unions.push_back(std::move(items));
    truths.push_back(static_cast<double>(points.size()));
  }
  const Outcome s = contract_over(
      unions.size(), [&](std::size_t i, std::size_t t) { return f0_affine_stream(unions[i], params, 5000 + t); },
      [&](std::size_t i) { return truths[i]; });
  o.pass = o.pass && s.pass;
  o.detail += "; unions: " + s.detail;
  return o;
}

std::vector<std::vector<std::size_t>> round_robin(std::size_t terms, std::size_t k) {
  std::vector<std::vector<std::size_t>> parts(k);
  for (std::size_t t = 0; t < terms; ++t) parts[t % k].push_back(t);
  return parts;
}

Outcome distributed() {
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  NpOracle oracle;
  std::size_t k1_bad = 0, k4_bad = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(909, s);
    const DnfFormula f = random_dnf(12, 4 + rng.uniform(5), 4, 8, rng);
    const CountResult central = approx_model_count_min(f, params, 11000 + s);
    const DistResult one = dist_count({SiteInput{1, f}}, params, 11000 + s, Strategy::kMinimum, oracle);
    if (one.min->rows != central.min->rows) ++k1_bad;
    const DistResult four = dist_count(split_sites(f, round_robin(f.num_terms(), 4)), params, 11000 + s,
                                       Strategy::kMinimum, oracle);
    if (four.min->rows != central.min->rows) ++k4_bad;
  }

  // Eight disjoint terms of 1024 solutions each: every site holds at least
  // thresh solutions whatever the split, so each site answers a full sketch.
  std::vector<Term> terms;
  for (std::uint64_t t = 0; t < 8; ++t) {
    std::vector<Literal> lits;
    for (std::size_t b = 0; b < 3; ++b) lits.push_back({b, ((t >> (2 - b)) & 1) == 1});
    lits.push_back({3 + t % 4, true});
    terms.emplace_back(14, lits);
  }
  const DnfFormula f(14, terms);
  std::vector<double> per_site;
  std::string bits;
  for (std::size_t k : {1, 2, 4, 8}) {
    const DistResult r = dist_count(split_sites(f, round_robin(8, k)), params, 77, Strategy::kMinimum, oracle);
    per_site.push_back(static_cast<double>(r.ledger.total_bits()) / static_cast<double>(k));
    bits += (bits.empty() ? "" : ", ") + std::to_string(r.ledger.total_bits());
  }
  bool linear = true;
  for (double v : per_site) linear = linear && v <= kScalingSlack * per_site[0] && v * kScalingSlack >= per_site[0];
  const bool pass = k1_bad == 0 && k4_bad == 0 && linear;
  return {pass, "k=1 row mismatches " + std::to_string(k1_bad) + "/50, k=4 " + std::to_string(k4_bad) +
                    "/50; minimum ledger bits for k=1,2,4,8: " + bits};
}

Outcome call_counts() {
  BenchSpec spec;
  spec.n = {8, 12, 16};
  spec.terms = {4, 8, 16};
  spec.seeds = 3;
  spec.strategies = {Strategy::kBucketing};
  spec.search = SearchMode::kLinear;
  const auto linear = run_bench(spec);
  spec.search = SearchMode::kBinary;
  const auto binary = run_bench(spec);
  bool pass = !linear.empty() && linear.size() == binary.size();
  std::string detail;
  for (std::size_t n : spec.n) {
    std::uint64_t worst_calls = 0;
    std::size_t worst_probes = 0;
    for (const BenchRow& r : linear)
      if (r.n == n) worst_calls = std::max(worst_calls, r.max_row_calls);
    for (const BenchRow& r : binary)
      if (r.n == n) worst_probes = std::max(worst_probes, r.max_probes);
    const double probe_cap = 2 * (std::log2(static_cast<double>(n)) + 2);
    pass = pass && worst_calls <= 2 * (n + 1) && worst_probes <= probe_cap;
    detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " calls/row " +
              std::to_string(worst_calls) + " <= " + std::to_string(2 * (n + 1)) + ", probes/row " +
              std::to_string(worst_probes) + " <= " + fmt(probe_cap);
  }
  for (std::size_t i = 0; i < linear.size() && i < binary.size(); ++i)
    pass = pass && linear[i].estimate == binary[i].estimate;
  return {pass, detail};
}

Outcome bridge() {
  const ApproxParams params = ApproxParams::make(kEps, kDelta);
  std::size_t failures = 0;
  std::string first;
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng(1212, k);
    const std::size_t n = 3 + rng.uniform(8);
    const DnfFormula f = random_dnf(n, rng.uniform(6), 1, n, rng);
    const Strategy s = std::array{Strategy::kBucketing, Strategy::kMinimum, Strategy::kEstimation}[k % 3];
    const BridgeReport r = bridge_equivalence_check(f, s, 12000 + k, params);
    if (!r.pass) {
      ++failures;
      if (first.empty()) first = " (first: " + r.diff + ")";
    }
  }
  return {failures == 0, "sketch mismatches " + std::to_string(failures) + "/200" + first};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"bucketing estimator contract", bucketing_contract},
      {"minimum estimator contract and FindMin", minimum_contract},
      {"estimation contract and FindMaxRange", estimation_contract},
      {"Flajolet-Martin 5-factor guarantee", flajolet_martin},
      {"range compiler", range_compiler},
      {"weighted reduction", weighted_reduction},
      {"affine streams", affine_streams},
      {"distributed consistency", distributed},
      {"call-count complexity", call_counts},
      {"bridge equivalence", bridge},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s -- %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
