#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include "f0mc/dist.hpp"
#include "f0mc/error.hpp"
#include "f0mc/harness.hpp"
#include "f0mc/rng.hpp"
#include "f0mc/textio.hpp"
#include "format.hpp"

namespace f0mc {

namespace {

template <class T, class Parse>
std::vector<T> parse_list(const LineReader& in, std::string_view value, Parse parse) {
  std::vector<T> out;
  for (std::string_view item : split_on(value, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse(item));
    } catch (const Error& e) {
      in.error(e.what());
    }
  }
  return out;
}

double parse_real(const LineReader& in, std::string_view token) {
  const std::string s(token);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) in.error("bad number '" + s + "'");
  return v;
}

}  // namespace

BenchSpec parse_bench_spec(std::string_view text) {
  BenchSpec spec;
  LineReader in(text);
  while (auto line = in.next()) {
    const std::size_t eq = line->find('=');
    if (eq == std::string_view::npos) in.error("expected key = values");
    const std::string_view key = trim(line->substr(0, eq));
    const std::string_view value = trim(line->substr(eq + 1));
    auto sizes = [&] { return parse_list<std::size_t>(in, value, [&](auto t) { return in.parse_uint(t, key); }); };
    if (key == "n") {
      spec.n = sizes();
      for (std::size_t n : spec.n)
        if (n == 0 || n > 64) in.error("n must be in [1, 64]");
    } else if (key == "k") {
      spec.k = sizes();
    } else if (key == "terms") {
      spec.terms = sizes();
    } else if (key == "eps") {
      spec.eps = parse_list<double>(in, value, [&](auto t) { return parse_real(in, t); });
    } else if (key == "delta") {
      spec.delta = parse_list<double>(in, value, [&](auto t) { return parse_real(in, t); });
    } else if (key == "strategy") {
      spec.strategies = parse_list<Strategy>(in, value, [](auto t) { return parse_strategy(t); });
    } else if (key == "search") {
      try {
        spec.search = parse_search(value);
      } catch (const Error& e) {
        in.error(e.what());
      }
    } else if (key == "seeds") {
      spec.seeds = in.parse_uint(value, key);
    } else if (key == "seed") {
      spec.seed = in.parse_uint(value, key);
    } else {
      in.error("unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

DnfFormula bench_formula(std::size_t n, std::size_t terms, std::uint64_t seed) {
  Rng rng(seed, 0xbe7c0000 + n * 1000 + terms);
  const std::size_t w = std::max<std::size_t>(1, n / 2);
  return random_dnf(n, terms, w, std::min(n, w + 1), rng);
}

std::vector<BenchRow> run_bench(const BenchSpec& spec, bool parallel, std::size_t oracle_cap) {
  std::vector<BenchRow> out;
  for (std::size_t n : spec.n) {
    for (std::size_t terms : spec.terms) {
      for (std::size_t s = 0; s < spec.seeds; ++s) {
        const std::uint64_t seed = spec.seed + s;
        const DnfFormula f = bench_formula(n, terms, seed);
        std::optional<std::uint64_t> exact;
        if (n <= oracle_cap) exact = brute_count(f, oracle_cap);
        for (std::size_t k : spec.k) {
          for (double eps : spec.eps) {
            for (double delta : spec.delta) {
              for (Strategy strategy : spec.strategies) {
                const ApproxParams params = ApproxParams::make(eps, delta);
                BenchRow row;
                row.n = n;
                row.k = k;
                row.terms = terms;
                row.eps = eps;
                row.delta = delta;
                row.strategy = strategy;
                row.search = spec.search;
                row.seed = seed;
                row.exact = exact;
                row.rows = params.rows;
                row.thresh = params.thresh;
                NpOracle oracle(OracleBackend::kBruteForce, oracle_cap);
                const auto start = std::chrono::steady_clock::now();
                if (k == 0) {
                  CountOptions opts;
                  opts.search = spec.search;
                  opts.parallel = parallel;
                  const CountResult r = approx_count(strategy, f, params, seed, oracle, opts);
                  row.estimate = r.estimate;
                  row.solver_calls = r.stats.solver_calls;
                  row.oracle_calls = r.stats.oracle_calls;
                  for (std::uint64_t c : r.stats.row_calls) row.max_row_calls = std::max(row.max_row_calls, c);
                  for (const LevelTrace& t : r.traces) row.max_probes = std::max(row.max_probes, t.probes.size());
                } else {
                  std::vector<std::vector<std::size_t>> partition(k);
                  for (std::size_t t = 0; t < f.num_terms(); ++t) partition[t % k].push_back(t);
                  DistOptions opts;
                  opts.parallel = parallel;
                  const DistResult r = dist_count(split_sites(f, partition), params, seed, strategy, oracle, opts);
                  row.estimate = r.estimate;
                  row.oracle_calls = oracle.calls();
                  row.comm_bits = r.ledger.total_bits();
                }
                row.elapsed_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                out.push_back(row);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::string format_bench(const std::vector<BenchRow>& rows, bool with_time) {
  std::ostringstream os;
  os << "n k terms eps delta strategy search seed estimate exact rows thresh solver_calls oracle_calls"
        " max_row_calls max_probes comm_bits";
  if (with_time) os << " elapsed_ms";
  os << '\n';
  for (const BenchRow& r : rows) {
    os << r.n << ' ' << r.k << ' ' << r.terms << ' ' << format_number(r.eps) << ' ' << format_number(r.delta) << ' '
       << strategy_name(r.strategy) << ' ' << search_name(r.search) << ' ' << r.seed << ' '
       << format_number(r.estimate) << ' ' << (r.exact ? std::to_string(*r.exact) : "-") << ' ' << r.rows << ' '
       << r.thresh << ' ' << r.solver_calls << ' ' << r.oracle_calls << ' ' << r.max_row_calls << ' '
       << r.max_probes << ' ' << r.comm_bits;
    if (with_time) os << ' ' << format_number(r.elapsed_ms);
    os << '\n';
  }
  return os.str();
}

}  // namespace f0mc
