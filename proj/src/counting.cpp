#include "f0mc/counting.hpp"

#include <algorithm>
#include <atomic>
#include <map>

#include "f0mc/error.hpp"
#include "f0mc/parallel.hpp"
#include "f0mc/solvers.hpp"

namespace f0mc {

std::string_view search_name(SearchMode mode) { return mode == SearchMode::kLinear ? "linear" : "binary"; }

SearchMode parse_search(std::string_view name) {
  if (name == "linear") return SearchMode::kLinear;
  if (name == "binary") return SearchMode::kBinary;
  fail(ErrorCode::kInvalidArgument, "unknown search mode '" + std::string(name) + "' (expected linear or binary)");
}

namespace {

// `cell(m)` returns bounded_sat at level m capped at thresh.
template <class Cell>
BucketRow search_level(const Hash& h, std::size_t thresh, SearchMode mode, LevelTrace& trace, Cell&& cell) {
  const std::size_t n = h.output_bits();
  std::map<std::size_t, BoundedResult> probed;
  auto probe = [&](std::size_t m) -> const BoundedResult& {
    auto it = probed.find(m);
    if (it == probed.end()) {
      it = probed.emplace(m, cell(m)).first;
      trace.probes.emplace_back(m, it->second.count);
    }
    return it->second;
  };
  auto below = [&](std::size_t m) { return probe(m).count < thresh; };
  auto pathological = [&] {
    fail(ErrorCode::kPathologicalHash,
         "cell still holds " + std::to_string(thresh) + " solutions at level " + std::to_string(n));
  };

  std::size_t level = 0;
  bool found = false;
  if (mode == SearchMode::kBinary) {
    if (below(0)) {
      level = 0;
      found = true;
    } else {
      if (!below(n)) pathological();
      std::size_t lo = 0;  // full cell
      std::size_t hi = n;  // cell below thresh
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (below(mid) ? hi : lo) = mid;
      }
      // Accept only when the level below is known to be full.
      if (below(hi) && !below(hi - 1)) {
        level = hi;
        found = true;
      }
    }
  }
  if (!found) {
    for (level = 0; !below(level); ++level) {
      if (level == n) pathological();
    }
  }

  BucketRow row;
  row.level = level;
  row.cell = probe(level).witnesses;
  std::sort(row.cell.begin(), row.cell.end());
  for (const BitString& x : row.cell) row.zeros.push_back(static_cast<std::uint16_t>(h.eval(x).leading_zeros()));
  return row;
}

std::size_t reps_or_rows(const CountOptions& options, const ApproxParams& params) {
  return options.fm_repetitions == 0 ? params.rows : options.fm_repetitions;
}

template <class F, class RowFn>
CountResult run_bucketing(const F& f, const ApproxParams& params, std::uint64_t seed, const CountOptions& options,
                          RowFn&& row_fn) {
  const std::size_t n = f.num_vars();
  const HashCollection hashes = choose_hash_functions(Strategy::kBucketing, n, params, seed);
  CountResult result;
  result.strategy = Strategy::kBucketing;
  result.params = params;
  result.bucket.emplace(n, params.thresh, params.rows);
  result.traces.resize(params.rows);
  for_each_index(params.rows, options.parallel, [&](std::size_t i) {
    result.bucket->rows[i] = row_fn(hashes.at(i), result.traces[i]);
  });
  for (const LevelTrace& t : result.traces) {
    result.stats.row_calls.push_back(t.probes.size());
    result.stats.solver_calls += t.probes.size();
  }
  if (!options.sketch_only) result.estimate = compute_est(*result.bucket);
  return result;
}

template <class F, class FindFn>
CountResult run_minimum(const F& f, const ApproxParams& params, std::uint64_t seed, const CountOptions& options,
                        FindFn&& find_fn) {
  const std::size_t n = f.num_vars();
  const HashCollection hashes = choose_hash_functions(Strategy::kMinimum, n, params, seed);
  CountResult result;
  result.strategy = Strategy::kMinimum;
  result.params = params;
  result.min.emplace(n, params.thresh, params.rows);
  for_each_index(params.rows, options.parallel,
                 [&](std::size_t i) { result.min->rows[i] = find_fn(hashes.at(i), params.thresh); });
  result.stats.row_calls.assign(params.rows, 1);
  result.stats.solver_calls = params.rows;
  if (!options.sketch_only) result.estimate = compute_est(*result.min);
  return result;
}

template <class F>
bool satisfiable(const F& f, NpOracle& oracle) {
  // Any hash works: zero trailing zeros is always reachable from a solution.
  const Hash any = Hash::affine(BitMatrix(1, f.num_vars()), BitString(1));
  return oracle.has_trailing_zeros(f, any, 0);
}

template <class F, class RFn>
CountResult run_estimation(const F& f, const ApproxParams& params, std::uint64_t seed, NpOracle& oracle,
                           const CountOptions& options, RFn&& derive_r) {
  const std::size_t n = f.num_vars();
  CountResult result;
  result.strategy = Strategy::kEstimation;
  result.params = params;
  result.est.emplace(n, params.rows, params.thresh);
  const std::uint64_t calls_before = oracle.calls();
  if (!satisfiable(f, oracle)) {
    result.stats.oracle_calls = oracle.calls() - calls_before;
    result.estimate = 0.0;
    return result;
  }
  const std::size_t r = options.r ? *options.r : derive_r();
  if (r == 0 || r > n) fail(ErrorCode::kInvalidArgument, "r must lie in [1, n]");
  result.r = r;
  const HashCollection hashes = choose_hash_functions(Strategy::kEstimation, n, params, seed);
  for_each_index(params.rows, options.parallel, [&](std::size_t i) {
    for (std::size_t j = 0; j < params.thresh; ++j) {
      result.est->at(i, j) = static_cast<std::uint16_t>(find_max_range(f, hashes.at(i, j), oracle));
    }
  });
  result.stats.row_calls.assign(params.rows, params.thresh);
  result.stats.solver_calls = params.rows * params.thresh;
  result.stats.oracle_calls = oracle.calls() - calls_before;
  if (!options.sketch_only) result.estimate = compute_est(*result.est, r);
  return result;
}

std::optional<std::size_t> median_raw(std::vector<std::optional<std::size_t>> maxima) {
  std::vector<double> values;
  for (const auto& m : maxima) {
    if (!m) return std::nullopt;
    values.push_back(static_cast<double>(*m));
  }
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "at least one repetition is required");
  return static_cast<std::size_t>(median(values));
}

}  // namespace

BucketRow bucketing_row(const DnfFormula& f, const Hash& h, std::size_t thresh, SearchMode mode, LevelTrace& trace) {
  return search_level(h, thresh, mode, trace, [&](std::size_t m) { return bounded_sat_dnf(f, h.prefix(m), thresh); });
}

BucketRow bucketing_row(const CnfFormula& f, const Hash& h, std::size_t thresh, SearchMode mode, NpOracle& oracle,
                        LevelTrace& trace) {
  return search_level(h, thresh, mode, trace,
                      [&](std::size_t m) { return bounded_sat_cnf(f, h.prefix(m), thresh, oracle); });
}

CountResult approx_mc(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                      const CountOptions& options) {
  return run_bucketing(f, params, seed, options, [&](const Hash& h, LevelTrace& trace) {
    return bucketing_row(f, h, params.thresh, options.search, trace);
  });
}

CountResult approx_mc(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed, NpOracle& oracle,
                      const CountOptions& options) {
  const std::uint64_t before = oracle.calls();
  CountResult result = run_bucketing(f, params, seed, options, [&](const Hash& h, LevelTrace& trace) {
    return bucketing_row(f, h, params.thresh, options.search, oracle, trace);
  });
  result.stats.oracle_calls = oracle.calls() - before;
  return result;
}

CountResult approx_model_count_min(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   const CountOptions& options) {
  return run_minimum(f, params, seed, options,
                     [&](const Hash& h, std::size_t p) { return find_min(f, h, p); });
}

CountResult approx_model_count_min(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options) {
  const std::uint64_t before = oracle.calls();
  CountResult result = run_minimum(
      f, params, seed, options, [&](const Hash& h, std::size_t p) { return find_min_cnf(f, h, p, oracle); });
  result.stats.oracle_calls = oracle.calls() - before;
  return result;
}

CountResult approx_model_count_est(const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options) {
  return run_estimation(f, params, seed, oracle, options, [&] {
    return *flajolet_martin_count(f, seed, reps_or_rows(options, params), oracle);
  });
}

CountResult approx_model_count_est(const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                                   NpOracle& oracle, const CountOptions& options) {
  return run_estimation(f, params, seed, oracle, options,
                        [&] { return *flajolet_martin_count(f, seed, reps_or_rows(options, params)); });
}

std::optional<std::size_t> max_trailing_zeros_dnf(const DnfFormula& f, const Hash& h) {
  if (!h.is_affine()) fail(ErrorCode::kUnsupportedHash, "the direct route needs an affine hash");
  // Reversing the output rows turns trailing zeros into leading zeros, and
  // the image minimum has the most leading zeros.
  const std::size_t m = h.output_bits();
  BitMatrix reversed(m, h.input_bits());
  BitString offset(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < h.input_bits(); ++c) reversed.set(r, c, h.matrix().get(m - 1 - r, c));
    offset.set(r, h.offset().test(m - 1 - r));
  }
  const Hash flipped = Hash::affine(reversed, offset);
  std::optional<std::size_t> best;
  for (const Term& term : f.terms()) {
    const std::size_t z = term_image(term, flipped).minimum().leading_zeros();
    best = std::max(best.value_or(0), z);
  }
  return best;
}

std::optional<std::size_t> flajolet_martin_raw(const DnfFormula& f, std::uint64_t seed, std::size_t repetitions) {
  const HashCollection hashes =
      pick_hash_functions(HashFamily::kXor, f.num_vars(), f.num_vars(), repetitions, seed, kFlajoletMartinStream);
  std::vector<std::optional<std::size_t>> maxima;
  for (std::size_t k = 0; k < repetitions; ++k) maxima.push_back(max_trailing_zeros_dnf(f, hashes.at(k)));
  return median_raw(std::move(maxima));
}

std::optional<std::size_t> flajolet_martin_raw(const CnfFormula& f, std::uint64_t seed, std::size_t repetitions,
                                               NpOracle& oracle) {
  if (!satisfiable(f, oracle)) return std::nullopt;
  const HashCollection hashes =
      pick_hash_functions(HashFamily::kXor, f.num_vars(), f.num_vars(), repetitions, seed, kFlajoletMartinStream);
  std::vector<std::optional<std::size_t>> maxima;
  for (std::size_t k = 0; k < repetitions; ++k) maxima.push_back(find_max_range(f, hashes.at(k), oracle));
  return median_raw(std::move(maxima));
}

std::optional<std::size_t> flajolet_martin_count(const DnfFormula& f, std::uint64_t seed, std::size_t repetitions) {
  const auto raw = flajolet_martin_raw(f, seed, repetitions);
  if (!raw) return std::nullopt;
  return r_from_raw(*raw, f.num_vars());
}

std::optional<std::size_t> flajolet_martin_count(const CnfFormula& f, std::uint64_t seed, std::size_t repetitions,
                                                 NpOracle& oracle) {
  const auto raw = flajolet_martin_raw(f, seed, repetitions, oracle);
  if (!raw) return std::nullopt;
  return r_from_raw(*raw, f.num_vars());
}

CountResult approx_count(Strategy strategy, const DnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                         NpOracle& oracle, const CountOptions& options) {
  switch (strategy) {
    case Strategy::kBucketing:
      return approx_mc(f, params, seed, options);
    case Strategy::kMinimum:
      return approx_model_count_min(f, params, seed, options);
    case Strategy::kEstimation:
      break;
  }
  return approx_model_count_est(f, params, seed, oracle, options);
}

CountResult approx_count(Strategy strategy, const CnfFormula& f, const ApproxParams& params, std::uint64_t seed,
                         NpOracle& oracle, const CountOptions& options) {
  switch (strategy) {
    case Strategy::kBucketing:
      return approx_mc(f, params, seed, oracle, options);
    case Strategy::kMinimum:
      return approx_model_count_min(f, params, seed, oracle, options);
    case Strategy::kEstimation:
      break;
  }
  return approx_model_count_est(f, params, seed, oracle, options);
}

}  // namespace f0mc
