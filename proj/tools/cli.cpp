#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench.hpp"
#include "f0mc/counting.hpp"
#include "f0mc/dist.hpp"
#include "f0mc/error.hpp"
#include "f0mc/f0stream.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/harness.hpp"
#include "f0mc/oracle.hpp"
#include "f0mc/setstream.hpp"
#include "format.hpp"

namespace f0mc {

namespace {

constexpr const char* kFormatsHelp = R"(File formats ('#' starts a comment line unless noted):

  DNF / CNF (count, oracle-check; 'c' lines are comments too)
    p dnf 4 2
    1 -3 0
    2 4 0
  Each line after the header is one term (or clause) of signed 1-based
  variables ending in 0. Use 'p cnf' for CNF.

  Element stream (stream-f0): header n=, one element per line as 0b.., 0x.. or decimal
    n=8
    0b00010110
    0x2a
    200

  Range stream (ranges-f0): header n= d=, one item per line, a dimension per
  ';' field as 'a b' or 'a b c' (c a power-of-two step)
    n=4 d=2
    0 7 ; 3 9
    2 14 4 ; 0 15

  Affine stream (affine-f0): header n=, one item per line, the rows of A in
  hex (each n bits), then '|' and B in hex (one bit per row)
    n=4
    8 4 0 0 | c

  DNF stream (dnf-stream-f0): DNF blocks separated by '---'
    p dnf 4 1
    1 2 0
    ---
    p dnf 4 1
    -1 3 0

  Weighted DNF (weighted): a DNF plus 'w <var> <k> <m>' lines giving the
  variable weight k/2^m; unlisted variables weigh 1/2
    p dnf 3 2
    1 2 0
    -3 0
    w 1 3 2

  Scenario (dist-sim): a DNF plus 'site <j>: <term indices>' lines, sites
  numbered from 1, terms from 1, every term on some site
    p dnf 4 3
    1 2 0
    -1 3 0
    4 0
    site 1: 1 2
    site 2: 3

  Bench spec (bench): 'key = v1, v2, ...' lines; keys n, k (sites, 0 for the
  centralized counter), terms, eps, delta, strategy, search, seeds, seed.
  An absent or empty n gives an empty table.
    n = 8, 12, 16
    eps = 0.8
    strategy = bucketing
    seeds = 3

Exit status: 0 success, 2 input error, 3 algorithmic error.)";

struct Common {
  std::uint64_t seed = 1;
  double eps = 0.8;
  double delta = 0.2;
  std::string strategy = "minimum";
  std::size_t oracle_cap = kDefaultBruteCap;
  bool stats = false;
  bool parallel = false;
  std::string report;
};

using Value = std::variant<std::uint64_t, double, std::string>;

struct Outcome {
  std::optional<double> estimate;
  std::vector<std::string> lines;  // printed after the estimate line
  std::vector<std::pair<std::string, Value>> report;
  std::optional<CommLedger> ledger;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses a file, naming it in any error.
template <class F>
auto load(const std::string& path, F parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    throw Error(e.code(), path + ": " + msg);
  }
}

std::string value_text(const Value& v) {
  if (const auto* u = std::get_if<std::uint64_t>(&v)) return std::to_string(*u);
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

nlohmann::ordered_json value_json(const Value& v) {
  if (const auto* u = std::get_if<std::uint64_t>(&v)) return *u;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();
  app->add_option("--eps", c.eps, "approximation factor epsilon, in (0, 1]")->capture_default_str();
  app->add_option("--delta", c.delta, "failure probability delta, in (0, 1)")->capture_default_str();
  app->add_option("--strategy", c.strategy, "bucketing|minimum|estimation")->capture_default_str();
  app->add_option("--oracle-cap", c.oracle_cap, "largest variable count the brute-force oracle accepts")
      ->capture_default_str();
  app->add_flag("--stats", c.stats, "print the report, with elapsed_ms");
  app->add_flag("--parallel,!--deterministic", c.parallel, "spread rows over worker threads (default deterministic)");
  app->add_option("--report", c.report, "report format")->check(CLI::IsMember({"kv", "json-lines"}));
}

void base_report(Outcome& o, const Common& c, const ApproxParams& params, Strategy strategy) {
  o.report.insert(o.report.begin(), {{"estimate", o.estimate.value_or(0.0)},
                                     {"epsilon", c.eps},
                                     {"delta", c.delta},
                                     {"seed", c.seed},
                                     {"strategy", std::string(strategy_name(strategy))},
                                     {"rows", std::uint64_t{params.rows}}});
}

void print(const Outcome& o, const Common& c, double elapsed_ms, std::ostream& out) {
  if (o.estimate) out << "estimate " << format_number(*o.estimate) << '\n';
  for (const std::string& line : o.lines) out << line << '\n';
  const std::string mode = c.report.empty() ? (c.stats ? "kv" : "") : c.report;
  auto report = o.report;
  if (c.stats && !report.empty()) report.emplace_back("elapsed_ms", elapsed_ms);
  if (mode == "json-lines") {
    if (o.ledger) {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : o.ledger->entries()) j["ledger"][k] = v;
      out << j.dump() << '\n';
    }
    if (!report.empty()) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& [k, v] : report) j[k] = value_json(v);
      out << j.dump() << '\n';
    }
    return;
  }
  if (o.ledger) {
    for (const auto& [k, v] : o.ledger->entries()) out << "ledger." << k << '=' << v << '\n';
  }
  if (mode == "kv") {
    for (const auto& [k, v] : report) out << k << '=' << value_text(v) << '\n';
  }
}

struct CountArgs {
  std::string dnf, cnf, search = "linear", oracle = "brute";
  std::optional<std::size_t> r;
  std::size_t fm_reps = 0;
  std::optional<std::uint64_t> budget;
};

Outcome run_count(const Common& c, const CountArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  NpOracle oracle(a.oracle == "stub" ? OracleBackend::kExternalStub : OracleBackend::kBruteForce, c.oracle_cap,
                  a.budget);
  CountOptions opts;
  opts.search = parse_search(a.search);
  opts.parallel = c.parallel;
  opts.r = a.r;
  opts.fm_repetitions = a.fm_reps;
  const CountResult r = a.dnf.empty()
                            ? approx_count(strategy, load(a.cnf, parse_cnf), params, c.seed, oracle, opts)
                            : approx_count(strategy, load(a.dnf, parse_dnf), params, c.seed, oracle, opts);
  Outcome o;
  o.estimate = r.estimate;
  o.report = {{"solver_calls", r.stats.solver_calls}, {"oracle_calls", oracle.calls()}};
  base_report(o, c, params, strategy);
  return o;
}

struct StreamArgs {
  std::string in;
  std::optional<std::size_t> r;
  bool dump = false;
  bool exact = false;
};

Outcome run_stream_f0(const Common& c, const StreamArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const ElementStream s = load(a.in, parse_element_stream);
  F0Estimator est(s.n, strategy, params, c.seed, a.r);
  for (const BitString& x : s.elements) est.add(x);
  Outcome o;
  o.estimate = est.estimate();
  if (a.dump) {
    std::istringstream lines(est.dump());
    for (std::string line; std::getline(lines, line);) o.lines.push_back(line);
  }
  o.report = {{"solver_calls", std::uint64_t{0}}, {"oracle_calls", std::uint64_t{0}}};
  base_report(o, c, params, strategy);
  return o;
}

Outcome run_ranges_f0(const Common& c, const StreamArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const RangeStream s = load(a.in, parse_range_stream);
  RangeStreamEstimator est(s.n, s.d, params, c.seed, strategy, c.parallel);
  for (const RangeSpec& r : s.items) est.add(r);
  Outcome o;
  o.estimate = est.estimate();
  if (a.exact) o.lines.push_back("exact " + std::to_string(exact_range_union(s.items)));
  o.report = {{"solver_calls", est.inner().solver_calls()}, {"oracle_calls", std::uint64_t{0}}};
  base_report(o, c, params, strategy);
  return o;
}

Outcome run_affine_f0(const Common& c, const StreamArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  if (strategy != Strategy::kMinimum) fail(ErrorCode::kInvalidArgument, "affine streams support --strategy minimum only");
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const AffineStream s = load(a.in, parse_affine_stream);
  AffineStreamEstimator est(s.n, params, c.seed, c.parallel);
  for (const AffineSet& item : s.items) est.add(item);
  Outcome o;
  o.estimate = est.estimate();
  const std::uint64_t calls = s.items.size() * params.rows;
  o.report = {{"solver_calls", calls}, {"oracle_calls", std::uint64_t{0}}};
  base_report(o, c, params, strategy);
  return o;
}

Outcome run_dnf_stream_f0(const Common& c, const StreamArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const std::vector<DnfFormula> items = load(a.in, parse_dnf_stream);
  Outcome o;
  std::uint64_t calls = 0;
  if (items.empty()) {
    o.estimate = 0.0;
  } else {
    DnfStreamEstimator est(items.front().num_vars(), strategy, params, c.seed, c.parallel);
    for (const DnfFormula& f : items) est.add(f);
    o.estimate = est.estimate();
    calls = est.solver_calls();
  }
  o.report = {{"solver_calls", calls}, {"oracle_calls", std::uint64_t{0}}};
  base_report(o, c, params, strategy);
  return o;
}

Outcome run_weighted(const Common& c, const StreamArgs& a) {
  const Strategy strategy = parse_strategy(c.strategy);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const WeightedDnf w = load(a.in, parse_weighted_dnf);
  const std::vector<RangeSpec> ranges = weighted_to_ranges(w);
  Outcome o;
  std::uint64_t calls = 0;
  if (ranges.empty()) {
    o.estimate = 0.0;
  } else {
    RangeStreamEstimator est(ranges.front().n, ranges.front().d(), params, c.seed, strategy, c.parallel);
    for (const RangeSpec& r : ranges) est.add(r);
    o.estimate = std::ldexp(est.estimate(), -static_cast<int>(w.total_bits()));
    calls = est.inner().solver_calls();
  }
  if (a.exact) o.lines.push_back("exact " + format_number(weighted_exact(w)));
  o.report = {{"solver_calls", calls}, {"oracle_calls", std::uint64_t{0}}};
  base_report(o, c, params, strategy);
  return o;
}

struct DistArgs {
  std::string scenario, protocol, transport = "queue";
  std::optional<std::size_t> r;
};

Outcome run_dist(const Common& c, const DistArgs& a) {
  const Strategy strategy = parse_strategy(a.protocol.empty() ? c.strategy : a.protocol);
  const ApproxParams params = ApproxParams::make(c.eps, c.delta);
  const Scenario sc = load(a.scenario, parse_scenario);
  NpOracle oracle(OracleBackend::kBruteForce, c.oracle_cap);
  DistOptions opts;
  opts.transport = a.transport == "direct" ? TransportMode::kDirect : TransportMode::kQueue;
  opts.parallel = c.parallel;
  opts.r = a.r;
  const DistResult r = dist_count(split_sites(sc.formula, sc.partition), params, c.seed, strategy, oracle, opts);
  Outcome o;
  o.estimate = r.estimate;
  o.ledger = r.ledger;
  o.report = {{"solver_calls", std::uint64_t{0}}, {"oracle_calls", oracle.calls()},
              {"comm_bits", r.ledger.total_bits()}};
  base_report(o, c, params, strategy);
  return o;
}

struct CheckArgs {
  std::string dnf, cnf;
};

// Brute-force count, cross-checked against inclusion-exclusion for DNFs.
int run_oracle_check(const Common& c, const CheckArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.dnf.empty()) {
    const DnfFormula f = load(a.dnf, parse_dnf);
    const std::uint64_t brute = brute_count(f, c.oracle_cap);
    const std::uint64_t ie = inclusion_exclusion_count(f);
    out << "count " << brute << '\n' << "inclusion_exclusion " << ie << '\n';
    out << "agree " << (brute == ie ? "yes" : "no") << '\n';
    if (brute != ie) {
      err << "f0mc: error: brute-force and inclusion-exclusion counts differ\n";
      return kExitAlgorithm;
    }
    return kExitOk;
  }
  out << "count " << brute_count(load(a.cnf, parse_cnf), c.oracle_cap) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Approximate distinct counting and model counting from one hashing toolkit.", "f0mc");
  app.footer(kFormatsHelp);
  app.require_subcommand(1);

  Common common;
  CountArgs count_args;
  StreamArgs stream_args;
  DistArgs dist_args;
  CheckArgs check_args;
  std::string bench_spec;

  CLI::App* count = app.add_subcommand("count", "approximate model count of a DNF or CNF");
  add_common(count, common);
  auto* dnf_opt = count->add_option("--dnf", count_args.dnf, "DNF file")->check(CLI::ExistingFile);
  auto* cnf_opt = count->add_option("--cnf", count_args.cnf, "CNF file")->check(CLI::ExistingFile);
  dnf_opt->excludes(cnf_opt);
  count->add_option("--search", count_args.search, "bucketing level search")
      ->check(CLI::IsMember({"linear", "binary"}))
      ->capture_default_str();
  count->add_option("--r", count_args.r, "estimation: evaluation point r (default from Flajolet-Martin)");
  count->add_option("--fm-reps", count_args.fm_reps, "Flajolet-Martin repetitions (0: one per row)");
  count->add_option("--oracle", count_args.oracle, "oracle backend")
      ->check(CLI::IsMember({"brute", "stub"}))
      ->capture_default_str();
  count->add_option("--oracle-budget", count_args.budget, "fail after this many oracle calls");

  CLI::App* stream = app.add_subcommand("stream-f0", "distinct elements of an element stream");
  add_common(stream, common);
  stream->add_option("--in", stream_args.in, "element stream file")->required()->check(CLI::ExistingFile);
  stream->add_option("--r", stream_args.r, "estimation: evaluation point r");
  stream->add_flag("--dump", stream_args.dump, "print the final sketch");

  CLI::App* ranges = app.add_subcommand("ranges-f0", "distinct points of a stream of ranges");
  add_common(ranges, common);
  ranges->add_option("--in", stream_args.in, "range stream file")->required()->check(CLI::ExistingFile);
  ranges->add_flag("--exact", stream_args.exact, "also print the exact union size");

  CLI::App* affine = app.add_subcommand("affine-f0", "distinct points of a stream of affine spaces");
  add_common(affine, common);
  affine->add_option("--in", stream_args.in, "affine stream file")->required()->check(CLI::ExistingFile);

  CLI::App* dnfs = app.add_subcommand("dnf-stream-f0", "distinct solutions of a stream of DNFs");
  add_common(dnfs, common);
  dnfs->add_option("--in", stream_args.in, "DNF stream file")->required()->check(CLI::ExistingFile);

  CLI::App* weighted = app.add_subcommand("weighted", "weighted model count of a DNF");
  add_common(weighted, common);
  weighted->add_option("--in", stream_args.in, "weighted DNF file")->required()->check(CLI::ExistingFile);
  weighted->add_flag("--exact", stream_args.exact, "also print the exact weight");

  CLI::App* dist = app.add_subcommand("dist-sim", "simulated coordinator/site DNF counting");
  add_common(dist, common);
  dist->add_option("--scenario", dist_args.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  dist->add_option("--protocol", dist_args.protocol, "bucketing|minimum|estimation (overrides --strategy)");
  dist->add_option("--transport", dist_args.transport, "message passing mode")
      ->check(CLI::IsMember({"queue", "direct"}))
      ->capture_default_str();
  dist->add_option("--r", dist_args.r, "estimation: evaluation point r");

  CLI::App* check = app.add_subcommand("oracle-check", "exact count by enumeration, checked against inclusion-exclusion");
  add_common(check, common);
  auto* check_dnf = check->add_option("--dnf", check_args.dnf, "DNF file")->check(CLI::ExistingFile);
  auto* check_cnf = check->add_option("--cnf", check_args.cnf, "CNF file")->check(CLI::ExistingFile);
  check_dnf->excludes(check_cnf);

  CLI::App* bench = app.add_subcommand("bench", "parameter sweep with call counts");
  add_common(bench, common);
  bench->add_option("--spec", bench_spec, "bench spec file")->required()->check(CLI::ExistingFile);

  for (CLI::App* sub : app.get_subcommands({})) sub->footer(kFormatsHelp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (check->parsed() || count->parsed()) {
      const bool has_file = check->parsed() ? !(check_args.dnf.empty() && check_args.cnf.empty())
                                            : !(count_args.dnf.empty() && count_args.cnf.empty());
      if (!has_file) fail(ErrorCode::kInvalidArgument, "one of --dnf or --cnf is required");
    }
    if (check->parsed()) return run_oracle_check(common, check_args, out, err);
    if (bench->parsed()) {
      const BenchSpec spec = load(bench_spec, parse_bench_spec);
      out << format_bench(run_bench(spec, common.parallel, common.oracle_cap), common.stats);
      return kExitOk;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    if (count->parsed()) o = run_count(common, count_args);
    else if (stream->parsed()) o = run_stream_f0(common, stream_args);
    else if (ranges->parsed()) o = run_ranges_f0(common, stream_args);
    else if (affine->parsed()) o = run_affine_f0(common, stream_args);
    else if (dnfs->parsed()) o = run_dnf_stream_f0(common, stream_args);
    else if (weighted->parsed()) o = run_weighted(common, stream_args);
    else o = run_dist(common, dist_args);
    const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    print(o, common, elapsed, out);
    return kExitOk;
  } catch (const Error& e) {
    err << "f0mc: error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitInput : kExitAlgorithm;
  } catch (const std::exception& e) {
    err << "f0mc: error: " << e.what() << '\n';
    return kExitAlgorithm;
  }
}

}  // namespace f0mc
