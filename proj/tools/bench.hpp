#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "f0mc/counting.hpp"
#include "f0mc/f0stream.hpp"

namespace f0mc {

/// Sweep description. Text form, one "key = v1, v2, ..." per line:
///   n        variable counts (no default: absent or empty means no rows)
///   k        site counts; 0 runs the centralized counter (default 0)
///   terms    DNF term counts (default 8)
///   eps      epsilons (default 0.8)
///   delta    deltas (default 0.2)
///   strategy bucketing|minimum|estimation (default bucketing)
///   search   linear|binary (default linear)
///   seeds    number of seeds per point (default 1)
///   seed     first seed (default 1)
struct BenchSpec {
  std::vector<std::size_t> n;
  std::vector<std::size_t> k{0};
  std::vector<std::size_t> terms{8};
  std::vector<double> eps{0.8};
  std::vector<double> delta{0.2};
  std::vector<Strategy> strategies{Strategy::kBucketing};
  SearchMode search = SearchMode::kLinear;
  std::size_t seeds = 1;
  std::uint64_t seed = 1;
};

BenchSpec parse_bench_spec(std::string_view text);

struct BenchRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t terms = 0;
  double eps = 0;
  double delta = 0;
  Strategy strategy = Strategy::kBucketing;
  SearchMode search = SearchMode::kLinear;
  std::uint64_t seed = 0;
  double estimate = 0;
  std::optional<std::uint64_t> exact;
  std::size_t rows = 0;
  std::size_t thresh = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t oracle_calls = 0;
  /// Largest per-row BoundedSAT (bucketing) or FindMin (minimum) count.
  std::uint64_t max_row_calls = 0;
  /// Largest number of levels probed in one bucketing row.
  std::size_t max_probes = 0;
  std::uint64_t comm_bits = 0;
  double elapsed_ms = 0;
};

/// The formula used for one sweep point: terms of width n/2 to n/2 + 1.
DnfFormula bench_formula(std::size_t n, std::size_t terms, std::uint64_t seed);

std::vector<BenchRow> run_bench(const BenchSpec& spec, bool parallel = false, std::size_t oracle_cap = 24);
/// Whitespace-separated table with a header line; elapsed_ms only if asked.
std::string format_bench(const std::vector<BenchRow>& rows, bool with_time);

}  // namespace f0mc
