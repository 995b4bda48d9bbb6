#include "f0mc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "f0mc/error.hpp"

namespace f0mc {

namespace {

std::vector<Literal> random_literals(std::size_t n, std::size_t min_width, std::size_t max_width, Rng& rng) {
  if (min_width > max_width || max_width > n) fail(ErrorCode::kInvalidArgument, "bad width range for random literals");
  const std::size_t w = min_width + rng.uniform(max_width - min_width + 1);
  std::vector<std::size_t> vars(n);
  std::iota(vars.begin(), vars.end(), 0);
  // Partial Fisher-Yates for the first w positions.
  for (std::size_t i = 0; i < w; ++i) std::swap(vars[i], vars[i + rng.uniform(n - i)]);
  std::sort(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(w));
  std::vector<Literal> lits;
  for (std::size_t i = 0; i < w; ++i) lits.push_back(Literal{vars[i], rng.next_bit()});
  return lits;
}

void inclusion_exclusion(const std::vector<Term>& terms, std::size_t next, const BitString& care, const BitString& value,
                         int depth, std::size_t n, __int128& total) {
  for (std::size_t i = next; i < terms.size(); ++i) {
    const Term& t = terms[i];
    // Conflict if both fix a shared variable to different values.
    const BitString shared = care & t.care();
    if ((value & shared) != (t.value() & shared)) continue;
    const BitString merged_care = care | t.care();
    const BitString merged_value = value | t.value();
    const __int128 size = static_cast<__int128>(1) << (n - merged_care.popcount());
    total += (depth % 2 == 0) ? size : -size;
    inclusion_exclusion(terms, i + 1, merged_care, merged_value, depth + 1, n, total);
  }
}

}  // namespace

Term random_term(std::size_t n, std::size_t min_width, std::size_t max_width, Rng& rng) {
  return Term(n, random_literals(n, min_width, max_width, rng));
}

DnfFormula random_dnf(std::size_t n, std::size_t terms, std::size_t min_width, std::size_t max_width, Rng& rng) {
  std::vector<Term> out;
  out.reserve(terms);
  for (std::size_t i = 0; i < terms; ++i) out.push_back(random_term(n, min_width, max_width, rng));
  return DnfFormula(n, std::move(out));
}

CnfFormula random_cnf(std::size_t n, std::size_t clauses, std::size_t min_width, std::size_t max_width, Rng& rng) {
  std::vector<Clause> out;
  out.reserve(clauses);
  for (std::size_t i = 0; i < clauses; ++i) out.emplace_back(n, random_literals(n, min_width, max_width, rng));
  return CnfFormula(n, std::move(out));
}

BitString random_bitstring(std::size_t n, Rng& rng) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng.next_bit());
  return b;
}

std::uint64_t inclusion_exclusion_count(const DnfFormula& f) {
  if (f.num_terms() > 24) fail(ErrorCode::kBruteForceCap, "inclusion-exclusion limited to 24 terms");
  __int128 total = 0;
  const std::size_t n = f.num_vars();
  inclusion_exclusion(f.terms(), 0, BitString(n), BitString(n), 0, n, total);
  return static_cast<std::uint64_t>(total);
}

}  // namespace f0mc

namespace f0mc {

bool within_factor(double estimate, double truth, double epsilon) {
  return estimate >= truth / (1.0 + epsilon) && estimate <= truth * (1.0 + epsilon);
}

double accept_threshold(double delta, std::size_t trials) {
  return (1.0 - delta) - 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
}

AcceptReport statistical_accept(const std::function<double(std::size_t)>& runner, std::size_t trials, double epsilon,
                                double delta, double truth) {
  if (trials < 30) fail(ErrorCode::kInvalidArgument, "statistical acceptance needs at least 30 trials");
  AcceptReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) report.within += within_factor(runner(t), truth, epsilon) ? 1 : 0;
  report.fraction = static_cast<double>(report.within) / static_cast<double>(trials);
  report.threshold = accept_threshold(delta, trials);
  report.pass = report.fraction >= report.threshold;
  return report;
}

namespace {

std::string row_text(const std::vector<BitString>& row) {
  std::string s = "{";
  for (const BitString& v : row) s += " " + v.to_hex();
  return s + " }";
}

}  // namespace

BridgeReport bridge_equivalence_check(const DnfFormula& f, Strategy strategy, std::uint64_t seed,
                                      const ApproxParams& params) {
  const std::size_t n = f.num_vars();
  const std::vector<BitString> solutions = brute_solutions(f);
  // A fixed r keeps the stream side from needing its own rough-count pass;
  // sketch contents do not depend on r.
  CountOptions options;
  options.r = 1;
  options.sketch_only = true;
  F0Estimator stream(n, strategy, params, seed, strategy == Strategy::kEstimation ? std::optional<std::size_t>(1)
                                                                                  : std::nullopt);
  for (const BitString& x : solutions) stream.add(x);
  NpOracle oracle;
  const CountResult formula = approx_count(strategy, f, params, seed, oracle, options);

  BridgeReport report;
  auto mismatch = [&](std::size_t row, const std::string& what) {
    report.diff = "row " + std::to_string(row) + ": " + what;
    return report;
  };
  switch (strategy) {
    case Strategy::kBucketing:
      for (std::size_t i = 0; i < params.rows; ++i) {
        const BucketRow& a = stream.bucket_sketch().rows[i];
        const BucketRow& b = formula.bucket->rows[i];
        if (a.level != b.level) {
          return mismatch(i, "stream level " + std::to_string(a.level) + " vs formula level " + std::to_string(b.level));
        }
        if (a.cell != b.cell) return mismatch(i, "stream cell " + row_text(a.cell) + " vs formula cell " + row_text(b.cell));
      }
      break;
    case Strategy::kMinimum:
      for (std::size_t i = 0; i < params.rows; ++i) {
        const auto& a = stream.min_sketch().rows[i];
        const auto& b = formula.min->rows[i];
        if (a != b) return mismatch(i, "stream " + row_text(a) + " vs formula " + row_text(b));
      }
      break;
    case Strategy::kEstimation:
      for (std::size_t i = 0; i < params.rows; ++i) {
        for (std::size_t j = 0; j < params.thresh; ++j) {
          if (stream.est_sketch().at(i, j) != formula.est->at(i, j)) {
            return mismatch(i, "cell " + std::to_string(j) + " stream " + std::to_string(stream.est_sketch().at(i, j)) +
                                   " vs formula " + std::to_string(formula.est->at(i, j)));
          }
        }
      }
      break;
  }
  if (solutions.empty() && (stream.estimate() != 0.0 || approx_count(strategy, f, params, seed, oracle).estimate != 0.0)) {
    report.diff = "unsatisfiable formula with nonzero estimate";
    return report;
  }
  report.pass = true;
  return report;
}

}  // namespace f0mc
