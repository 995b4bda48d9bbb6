#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "f0mc/counting.hpp"
#include "f0mc/f0stream.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/gf2.hpp"

namespace f0mc {

/// One dimension of a range item: a <= x <= b and x = a mod 2^step_log.
struct DimRange {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  unsigned step_log = 0;
};

/// A d-dimensional box (optionally an arithmetic progression per dimension)
/// over n-bit coordinates. Tuples are encoded as the concatenation of the
/// coordinates, dimension j on variables [j n, (j + 1) n), MSB first.
struct RangeSpec {
  std::size_t n = 0;
  std::vector<DimRange> dims;

  std::size_t d() const noexcept { return dims.size(); }
  /// Throws unless 1 <= n <= 64, n d <= BitString::kMaxBits, a <= b < 2^n.
  void validate() const;
  /// Number of tuples (saturating at 2^64 - 1).
  std::uint64_t cardinality() const;
  bool contains(const BitString& x) const;
};

/// Terms of one dimension's constraint a <= x <= b over n bits: the common
/// prefix of a and b, then either the suffix is >= a's (next bit 0) or <= b's
/// (next bit 1). Each side contributes at most n - 1 - prefix terms, so the
/// total is at most 2n. Terms are over `total_vars` variables with the
/// dimension starting at `offset`.
std::size_t dim_term_count(std::size_t n, std::uint64_t a, std::uint64_t b);
Term dim_term(std::size_t n, std::uint64_t a, std::uint64_t b, std::size_t k, std::size_t total_vars,
              std::size_t offset);
/// Terms for x <= c and for x >= c alone (each at most n terms).
std::vector<Term> le_terms(std::size_t n, std::uint64_t c, std::size_t total_vars, std::size_t offset);
std::vector<Term> ge_terms(std::size_t n, std::uint64_t c, std::size_t total_vars, std::size_t offset);

/// The i-th term of a range's DNF computed from the spec alone, for
/// term-at-a-time streaming. With steps, a product term can contradict the
/// fixed low bits; those indices yield nullopt.
class RangeTermGenerator {
 public:
  explicit RangeTermGenerator(RangeSpec spec);
  std::size_t count() const noexcept { return count_; }
  std::optional<Term> term(std::size_t index) const;

 private:
  RangeSpec spec_;
  std::vector<std::size_t> radix_;
  std::size_t count_ = 1;
};

/// Eager compilation; steps are ignored by range_to_dnf (they must be 0) and
/// honoured by progression_to_dnf.
DnfFormula range_to_dnf(const RangeSpec& r);
DnfFormula progression_to_dnf(const RangeSpec& r);

/// F0 over a stream of DNF items: Minimum keeps per row the thresh smallest
/// hash values of everything seen so far; Bucketing keeps the current cell
/// and level and replays the logged items whenever the level rises.
class DnfStreamEstimator {
 public:
  DnfStreamEstimator(std::size_t n, Strategy strategy, const ApproxParams& params, std::uint64_t seed,
                     bool parallel = false);

  void add(const DnfFormula& item);
  void add_term(const Term& term);
  double estimate() const;

  std::size_t num_vars() const noexcept { return n_; }
  const MinSketch& min_sketch() const { return min_; }
  const BucketSketch& bucket_sketch() const { return bucket_; }
  std::uint64_t items() const noexcept { return items_; }
  std::uint64_t solver_calls() const noexcept { return solver_calls_; }

 private:
  void add_bucketing_row(std::size_t i, const DnfFormula& item);

  std::size_t n_;
  Strategy strategy_;
  ApproxParams params_;
  bool parallel_;
  HashCollection hashes_;
  MinSketch min_;
  BucketSketch bucket_;
  std::vector<DnfFormula> log_;
  std::uint64_t items_ = 0;
  std::uint64_t solver_calls_ = 0;
};

double f0_dnf_stream(const std::vector<DnfFormula>& items, const ApproxParams& params, std::uint64_t seed,
                     Strategy strategy = Strategy::kMinimum);

/// Ranges compiled term by term into a DnfStreamEstimator over n d variables.
class RangeStreamEstimator {
 public:
  RangeStreamEstimator(std::size_t n, std::size_t d, const ApproxParams& params, std::uint64_t seed,
                       Strategy strategy = Strategy::kMinimum, bool parallel = false);
  void add(const RangeSpec& r);
  double estimate() const { return inner_.estimate(); }
  const DnfStreamEstimator& inner() const noexcept { return inner_; }

 private:
  std::size_t n_;
  std::size_t d_;
  DnfStreamEstimator inner_;
};

double f0_ranges(const std::vector<RangeSpec>& items, const ApproxParams& params, std::uint64_t seed,
                 Strategy strategy = Strategy::kMinimum);
/// |union of the ranges| by inclusion-exclusion over box intersections
/// (steps must be 0). Exponential in the item count.
std::uint64_t exact_range_union(const std::vector<RangeSpec>& items);

/// {x in {0,1}^n : a x = b}.
struct AffineSet {
  BitMatrix a;
  BitString b;
};

class AffineStreamEstimator {
 public:
  AffineStreamEstimator(std::size_t n, const ApproxParams& params, std::uint64_t seed, bool parallel = false);
  void add(const AffineSet& item);
  double estimate() const { return compute_est(min_); }
  const MinSketch& min_sketch() const noexcept { return min_; }

 private:
  std::size_t n_;
  ApproxParams params_;
  bool parallel_;
  HashCollection hashes_;
  MinSketch min_;
};

double f0_affine_stream(const std::vector<AffineSet>& items, const ApproxParams& params, std::uint64_t seed);

/// rho(x_i) = k_i / 2^m_i with 1 <= k_i < 2^m_i.
struct VarWeight {
  std::uint64_t k = 1;
  unsigned m = 1;
};

struct WeightedDnf {
  DnfFormula formula;
  std::vector<VarWeight> weights;  // one per variable

  void validate() const;
  unsigned total_bits() const;
};

/// One range per term over n dimensions of width max m_i. Variable i maps to
/// coordinate interval [0, k_i - 1] when the term asserts it, [k_i, 2^m_i - 1]
/// when it negates it, and [0, 2^m_i - 1] when absent. W(f) = F0 / 2^(sum m_i).
std::vector<RangeSpec> weighted_to_ranges(const WeightedDnf& w);
/// sum over satisfying assignments of prod rho, scaled by 2^(sum m_i): an integer.
std::uint64_t brute_weighted_numerator(const WeightedDnf& w);
double weighted_dnf_count(const WeightedDnf& w, const ApproxParams& params, std::uint64_t seed);
/// Exact W(f) through the same reduction with F0 computed exactly.
double weighted_exact(const WeightedDnf& w);

// Stream file formats.
struct RangeStream {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<RangeSpec> items;
};
/// Header "n=<int> d=<int>", then one item per line: "a1 b1 [c1] ; a2 b2 [c2] ; ...",
/// c a power-of-two step.
RangeStream parse_range_stream(std::string_view text);

struct AffineStream {
  std::size_t n = 0;
  std::vector<AffineSet> items;
};
/// Header "n=<int>", then one item per line: n hex rows of A, "|", hex B.
AffineStream parse_affine_stream(std::string_view text);

/// DNF blocks in the usual text form separated by lines holding "---".
std::vector<DnfFormula> parse_dnf_stream(std::string_view text);

/// A DNF text with extra lines "w <var> <k> <m>" (var 1-based) giving
/// rho(x_var) = k / 2^m. Unlisted variables weigh 1/2.
WeightedDnf parse_weighted_dnf(std::string_view text);

}  // namespace f0mc
