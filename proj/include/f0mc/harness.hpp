#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "f0mc/counting.hpp"
#include "f0mc/f0stream.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/rng.hpp"

namespace f0mc {

// Random instance generators. Widths are drawn uniformly from [min_width, max_width].
Term random_term(std::size_t n, std::size_t min_width, std::size_t max_width, Rng& rng);
DnfFormula random_dnf(std::size_t n, std::size_t terms, std::size_t min_width, std::size_t max_width, Rng& rng);
CnfFormula random_cnf(std::size_t n, std::size_t clauses, std::size_t min_width, std::size_t max_width, Rng& rng);
BitString random_bitstring(std::size_t n, Rng& rng);

/// |sol(f)| by inclusion-exclusion over the terms: every nonempty subset of
/// consistent terms contributes +-2^(n - |merged care|). Independent of the
/// enumeration-based brute_count; exponential in the term count (k <= 20).
std::uint64_t inclusion_exclusion_count(const DnfFormula& f);

/// estimate in [truth / (1 + eps), (1 + eps) truth].
bool within_factor(double estimate, double truth, double epsilon);

/// Pass mark for a seeded trial batch: (1 - delta) - 3 sqrt(delta (1 - delta) / trials).
double accept_threshold(double delta, std::size_t trials);

struct AcceptReport {
  bool pass = false;
  std::size_t trials = 0;
  std::size_t within = 0;
  double fraction = 0.0;
  double threshold = 0.0;
};

/// Runs runner(0..trials-1) and checks that the fraction of estimates within
/// a factor 1 + eps of truth reaches accept_threshold. Fewer than 30 trials
/// is rejected as too small to judge.
AcceptReport statistical_accept(const std::function<double(std::size_t)>& runner, std::size_t trials, double epsilon,
                                double delta, double truth);

struct BridgeReport {
  bool pass = false;
  std::string diff;  // first mismatch, empty on success
};

/// Feeds brute_solutions(f) through the streaming estimator and runs the
/// formula-side counter with the same seed, then compares the sketches row
/// by row (bucketing: cell and level; minimum: value lists; estimation: cells)
/// and, for an unsatisfiable f, that both estimates are 0.
BridgeReport bridge_equivalence_check(const DnfFormula& f, Strategy strategy, std::uint64_t seed,
                                      const ApproxParams& params);

}  // namespace f0mc
