#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/hashing.hpp"

namespace f0mc {

enum class Strategy { kBucketing, kMinimum, kEstimation };

std::string_view strategy_name(Strategy s);
/// Accepts bucketing|minimum|estimation and the short forms bucket|min|est.
Strategy parse_strategy(std::string_view name);

/// Thresh = ceil(96 / eps^2); rows = smallest odd integer >= 35 ln(1/delta).
struct ApproxParams {
  double epsilon = 0.8;
  double delta = 0.2;
  std::size_t thresh = 0;
  std::size_t rows = 0;

  /// eps in (0, 1], delta in (0, 1).
  static ApproxParams make(double epsilon, double delta);
  /// Explicit sizes, for tests that need tiny sketches.
  static ApproxParams custom(double epsilon, double delta, std::size_t thresh, std::size_t rows);
};

std::size_t thresh_for(double epsilon);
std::size_t rows_for(double delta);

/// PRNG stream ids that keep the hash draws of different roles disjoint.
inline constexpr std::uint64_t kBucketingStream = 1;
inline constexpr std::uint64_t kMinimumStream = 2;
inline constexpr std::uint64_t kEstimationStream = 3;
inline constexpr std::uint64_t kFlajoletMartinStream = 4;
inline constexpr std::uint64_t kTupleHashStream = 5;

/// The hash functions each strategy uses for n-bit elements:
///   bucketing  - rows Toeplitz(n, n)
///   minimum    - rows Toeplitz(n, 3n)
///   estimation - rows x thresh PolyHash over GF(2^n) of degree poly_degree_for(eps)
/// Stream-side and formula-side code both draw through here, so equal seeds
/// give equal hashes.
HashCollection choose_hash_functions(Strategy strategy, std::size_t n, const ApproxParams& params,
                                     std::uint64_t seed);

/// Per row: the elements whose level-prefix hashes to zero, and the level.
/// Elements are kept sorted; `zeros` holds the leading-zero count of each
/// element's full hash so raising the level needs no re-hashing.
struct BucketRow {
  std::vector<BitString> cell;
  std::vector<std::uint16_t> zeros;
  std::size_t level = 0;

  friend bool operator==(const BucketRow& a, const BucketRow& b) { return a.cell == b.cell && a.level == b.level; }
};

struct BucketSketch {
  std::size_t n = 0;
  std::size_t thresh = 0;
  std::vector<BucketRow> rows;

  BucketSketch(std::size_t n, std::size_t thresh, std::size_t rows);
};

/// Per row: the thresh smallest distinct hash values seen, ascending.
struct MinSketch {
  std::size_t n = 0;
  std::size_t thresh = 0;
  std::vector<std::vector<BitString>> rows;

  MinSketch(std::size_t n, std::size_t thresh, std::size_t rows);
};

/// rows x thresh cells of maximum trailing-zero counts.
struct EstSketch {
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint16_t> cells;

  EstSketch(std::size_t n, std::size_t rows, std::size_t cols);
  std::uint16_t& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
  std::uint16_t at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

/// Inserts x into every row whose level prefix hashes it to zero. A row whose
/// cell reaches thresh raises its level, dropping elements that fail the
/// longer prefix, until the cell is below thresh again. Throws
/// kPathologicalHash if that would push the level past n.
void process_update_bucketing(BucketSketch& sk, const HashCollection& h, const BitString& x);
/// Same for row i only (rows are independent).
void process_update_bucketing_row(BucketSketch& sk, std::size_t i, const Hash& h, const BitString& x);

void process_update_minimum(MinSketch& sk, const HashCollection& h, const BitString& x);
/// Inserts one hash value into a row kept as the `limit` smallest distinct values.
void insert_smallest(std::vector<BitString>& row, const BitString& value, std::size_t limit);

void process_update_estimation(EstSketch& sk, const HashCollection& h, const BitString& x);
/// Faster form for polynomial collections, given their flattened grid.
void process_update_estimation(EstSketch& sk, const PolyGrid& grid, const BitString& x);

double median(std::vector<double> values);

/// Median over rows of |cell| * 2^level.
double compute_est(const BucketSketch& sk);
/// Median over rows of the row estimate: the row size when the row holds fewer
/// than thresh values (the image is then known exactly), otherwise
/// thresh * 2^(3n) / max(row) with max read as an unsigned integer.
double compute_est(const MinSketch& sk);
double min_row_estimate(const std::vector<BitString>& row, std::size_t thresh, std::size_t hash_bits);
/// Median over rows of ln(1 - q) / ln(1 - 2^-r), q the fraction of the row's
/// cells that are >= r; q = 1 gives +inf. Throws kRTooSmall when the median
/// is infinite.
double compute_est(const EstSketch& sk, std::size_t r);
double est_row_estimate(const std::uint16_t* cells, std::size_t count, std::size_t r);

/// r from a rough distinct-count: the median over repetitions of the largest
/// trailing-zero count, shifted up by 3 and clamped to [1, n] so that 2^r
/// lands in the estimator's valid window of [2 F0, 50 F0] for typical draws.
std::size_t r_from_raw(std::size_t r_raw, std::size_t n);
inline constexpr std::size_t kRShift = 3;

/// Streaming F0 estimator: owns the hash functions and one sketch.
class F0Estimator {
 public:
  /// For estimation, `r` fixes the evaluation point; when absent it is
  /// derived from a Flajolet-Martin pass run alongside the sketch.
  F0Estimator(std::size_t n, Strategy strategy, const ApproxParams& params, std::uint64_t seed,
              std::optional<std::size_t> r = std::nullopt, std::size_t fm_repetitions = 0);

  void add(const BitString& x);
  double estimate() const;

  std::size_t num_vars() const noexcept { return n_; }
  Strategy strategy() const noexcept { return strategy_; }
  const HashCollection& hashes() const noexcept { return hashes_; }
  const BucketSketch& bucket_sketch() const { return bucket_; }
  const MinSketch& min_sketch() const { return min_; }
  const EstSketch& est_sketch() const { return est_; }
  /// The r used by estimate() (estimation only).
  std::size_t chosen_r() const;
  std::uint64_t items() const noexcept { return items_; }
  /// Stable text dump of the sketch, one row per line.
  std::string dump() const;

 private:
  std::size_t n_;
  Strategy strategy_;
  ApproxParams params_;
  std::optional<std::size_t> r_;
  HashCollection hashes_;
  std::optional<PolyGrid> grid_;
  HashCollection fm_hashes_;
  std::vector<std::size_t> fm_max_;
  BucketSketch bucket_;
  MinSketch min_;
  EstSketch est_;
  std::uint64_t items_ = 0;
};

double compute_f0(const std::vector<BitString>& stream, std::size_t n, Strategy strategy,
                  const ApproxParams& params, std::uint64_t seed, std::optional<std::size_t> r = std::nullopt);

std::string dump_sketch(const BucketSketch& sk);
std::string dump_sketch(const MinSketch& sk);
std::string dump_sketch(const EstSketch& sk);

/// Element stream text: a header line "n=<int>", then one element per line as
/// 0b<binary>, 0x<hex> or a decimal integer; blank lines and '#' comments are skipped.
struct ElementStream {
  std::size_t n = 0;
  std::vector<BitString> elements;
};
ElementStream parse_element_stream(std::string_view text);

}  // namespace f0mc
