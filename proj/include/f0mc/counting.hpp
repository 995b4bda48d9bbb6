#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "f0mc/f0stream.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/oracle.hpp"

namespace f0mc {

/// How the bucketing counter finds each row's level.
enum class SearchMode { kLinear, kBinary };
std::string_view search_name(SearchMode mode);
SearchMode parse_search(std::string_view name);

struct CountOptions {
  SearchMode search = SearchMode::kLinear;
  bool parallel = false;
  /// Estimation only: the evaluation point. Derived from a Flajolet-Martin
  /// pass when absent.
  std::optional<std::size_t> r;
  /// Flajolet-Martin repetitions; 0 means one per sketch row.
  std::size_t fm_repetitions = 0;
  /// Build the sketch but leave estimate at 0 (sketch comparisons).
  bool sketch_only = false;
};

struct CountStats {
  /// BoundedSAT / FindMin / FindMaxRange invocations, all rows together.
  std::uint64_t solver_calls = 0;
  std::uint64_t oracle_calls = 0;
  /// Per row: BoundedSAT calls (bucketing) or FindMin calls (minimum).
  std::vector<std::uint64_t> row_calls;
};

/// Per-row record of a bucketing level search: every (level, capped cell size) probed.
struct LevelTrace {
  std::vector<std::pair<std::size_t, std::size_t>> probes;
};

/// Formula-side sketches mirror the stream-side ones so the two can be compared.
struct CountResult {
  double estimate = 0.0;
  Strategy strategy = Strategy::kMinimum;
  ApproxParams params;
  CountStats stats;
  std::optional<BucketSketch> bucket;
  std::optional<MinSketch> min;
  std::optional<EstSketch> est;
  std::vector<LevelTrace> traces;  // bucketing only
  std::optional<std::size_t> r;    // estimation only
};

/// One bucketing row: the smallest level m whose cell {x |= f : h_m(x) = 0^m}
/// is below thresh, and that cell. Binary mode checks both sides of the
/// boundary before accepting m and falls back to a linear scan otherwise.
/// Throws kPathologicalHash if even level n leaves a full cell.
BucketRow bucketing_row(const DnfFormula& f, const Hash& h, std::size_t thresh, SearchMode mode, LevelTrace& trace);
BucketRow bucketing_row(const CnfFormula& f, const Hash& h, std::size_t thresh, SearchMode mode, NpOracle& oracle,
                        LevelTrace& trace);

/// Bucketing counter: median over rows of |cell| * 2^level.
CountResult approx_mc(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                      const CountOptions& options = {});
CountResult approx_mc(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed, NpOracle& oracle,
                      const CountOptions& options = {});

/// Minimum counter: rows are the thresh smallest values of h(sol(f)) for
/// h in Toeplitz(n, 3n). An unsatisfiable formula gives 0.
CountResult approx_model_count_min(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   const CountOptions& options = {});
CountResult approx_model_count_min(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options = {});

/// Estimation counter: cell (i, j) is the largest trailing-zero count of
/// H[i, j] over sol(f), found by oracle binary search. An unsatisfiable
/// formula gives 0; an r below every row's cells throws kRTooSmall.
CountResult approx_model_count_est(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options = {});
CountResult approx_model_count_est(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options = {});

/// Median over `repetitions` xor hashes of the largest trailing-zero count
/// over sol(f); nullopt when f is unsatisfiable. The DNF route needs no
/// oracle: per term, the largest trailing-zero count is the leading-zero
/// count of the smallest value of the bit-reversed affine image.
std::optional<std::size_t> flajolet_martin_raw(const DnfFormula& f, std::uint64_t seed, std::size_t repetitions);
std::optional<std::size_t> flajolet_martin_raw(const CnfFormula& f, std::uint64_t seed, std::size_t repetitions,
                                               NpOracle& oracle);
/// The raw value moved into the estimator's window by r_from_raw.
std::optional<std::size_t> flajolet_martin_count(const DnfFormula& f, std::uint64_t seed, std::size_t repetitions);
std::optional<std::size_t> flajolet_martin_count(const CnfFormula& f, std::uint64_t seed, std::size_t repetitions,
                                                 NpOracle& oracle);
/// Largest trailing-zero count of an affine h over sol(f), nullopt if unsatisfiable.
std::optional<std::size_t> max_trailing_zeros_dnf(const DnfFormula& f, const Hash& h);

/// Dispatch on strategy.
CountResult approx_count(Strategy strategy, const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                         NpOracle& oracle, const CountOptions& options = {});
CountResult approx_count(Strategy strategy, const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                         NpOracle& oracle, const CountOptions& options = {});

}  // namespace f0mc
