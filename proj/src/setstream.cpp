#include "f0mc/setstream.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "f0mc/error.hpp"
#include "f0mc/parallel.hpp"
#include "f0mc/solvers.hpp"
#include "f0mc/textio.hpp"

namespace f0mc {

namespace {

bool bit_of(std::uint64_t v, std::size_t n, std::size_t pos) { return ((v >> (n - 1 - pos)) & 1U) != 0; }

std::uint64_t max_value(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Partial term over one dimension: which positions are fixed and to what.
struct DimTerm {
  std::uint64_t care = 0;
  std::uint64_t value = 0;

  void fix(std::size_t n, std::size_t pos, bool bit) {
    const std::uint64_t m = std::uint64_t{1} << (n - 1 - pos);
    care |= m;
    if (bit) value |= m;
  }
  void copy(std::size_t n, std::uint64_t v, std::size_t from, std::size_t to) {
    for (std::size_t p = from; p < to; ++p) fix(n, p, bit_of(v, n, p));
  }
};

// Terms over positions [from, n) saying the suffix is >= v's suffix (ge) or
// <= it. Every term starts from `base`. Calls emit(term) and stops when it
// returns false.
template <class Emit>
bool side_terms(std::size_t n, std::uint64_t v, std::size_t from, bool ge, const DimTerm& base, Emit&& emit) {
  // For >=, positions after v's last 1 are free; for <=, after its last 0.
  const bool binding = ge;
  std::size_t last = n;
  for (std::size_t p = n; p-- > from;) {
    if (bit_of(v, n, p) == binding) {
      last = p;
      break;
    }
  }
  if (last == n) return emit(base);  // no constraint
  for (std::size_t p = from; p < last; ++p) {
    if (bit_of(v, n, p) == binding) continue;
    // Agree with v before p, then go strictly past it at p.
    DimTerm t = base;
    t.copy(n, v, from, p);
    t.fix(n, p, ge);
    if (!emit(t)) return false;
  }
  DimTerm t = base;
  t.copy(n, v, from, last + 1);
  return emit(t);
}

template <class Emit>
void range_terms(std::size_t n, std::uint64_t a, std::uint64_t b, Emit&& emit) {
  if (a == b) {
    DimTerm t;
    t.copy(n, a, 0, n);
    emit(t);
    return;
  }
  std::size_t l = 0;
  while (bit_of(a, n, l) == bit_of(b, n, l)) ++l;
  DimTerm prefix;
  prefix.copy(n, a, 0, l);
  const bool a_rest_zero = (a & max_value(n - 1 - l)) == 0;
  const bool b_rest_ones = (b & max_value(n - 1 - l)) == max_value(n - 1 - l);
  if (a_rest_zero && b_rest_ones) {
    emit(prefix);
    return;
  }
  DimTerm low = prefix;
  low.fix(n, l, false);
  if (!side_terms(n, a, l + 1, true, low, emit)) return;
  DimTerm high = prefix;
  high.fix(n, l, true);
  side_terms(n, b, l + 1, false, high, emit);
}

void place(const DimTerm& t, std::size_t n, std::size_t offset, BitString& care, BitString& value) {
  for (std::size_t p = 0; p < n; ++p) {
    if (bit_of(t.care, n, p)) {
      care.set(offset + p);
      value.set(offset + p, bit_of(t.value, n, p));
    }
  }
}

Term to_term(const DimTerm& t, std::size_t n, std::size_t total_vars, std::size_t offset) {
  BitString care(total_vars);
  BitString value(total_vars);
  place(t, n, offset, care, value);
  return Term::from_masks(care, value);
}

DimTerm nth_dim_term(std::size_t n, std::uint64_t a, std::uint64_t b, std::size_t k) {
  std::size_t seen = 0;
  DimTerm found;
  bool ok = false;
  range_terms(n, a, b, [&](const DimTerm& t) {
    if (seen++ == k) {
      found = t;
      ok = true;
      return false;
    }
    return true;
  });
  if (!ok) fail(ErrorCode::kInvalidArgument, "range term index out of range");
  return found;
}

}  // namespace

void RangeSpec::validate() const {
  if (n == 0 || n > 64) fail(ErrorCode::kInvalidArgument, "range coordinate width must be in 1..64");
  if (dims.empty()) fail(ErrorCode::kInvalidArgument, "range needs at least one dimension");
  if (n * dims.size() > BitString::kMaxBits) {
    fail(ErrorCode::kInvalidArgument, "n*d exceeds the " + std::to_string(BitString::kMaxBits) + "-bit limit");
  }
  for (const DimRange& r : dims) {
    if (r.a > r.b) fail(ErrorCode::kInvalidArgument, "range bound a > b");
    if (r.b > max_value(n)) fail(ErrorCode::kInvalidArgument, "range bound exceeds n bits");
    if (r.step_log > 63) fail(ErrorCode::kInvalidArgument, "range step too large");
  }
}

std::uint64_t RangeSpec::cardinality() const {
  unsigned __int128 total = 1;
  for (const DimRange& r : dims) {
    const unsigned __int128 span = static_cast<unsigned __int128>(r.b - r.a) >> r.step_log;
    total *= span + 1;
    if (total > ~std::uint64_t{0}) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(total);
}

bool RangeSpec::contains(const BitString& x) const {
  if (x.size() != n * dims.size()) return false;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    const std::uint64_t v = x.slice(j * n, n).to_uint();
    const DimRange& r = dims[j];
    if (v < r.a || v > r.b) return false;
    if (r.step_log > 0 && ((v - r.a) & max_value(r.step_log)) != 0) return false;
  }
  return true;
}

std::size_t dim_term_count(std::size_t n, std::uint64_t a, std::uint64_t b) {
  std::size_t count = 0;
  range_terms(n, a, b, [&](const DimTerm&) {
    ++count;
    return true;
  });
  return count;
}

Term dim_term(std::size_t n, std::uint64_t a, std::uint64_t b, std::size_t k, std::size_t total_vars,
              std::size_t offset) {
  return to_term(nth_dim_term(n, a, b, k), n, total_vars, offset);
}

std::vector<Term> le_terms(std::size_t n, std::uint64_t c, std::size_t total_vars, std::size_t offset) {
  std::vector<Term> out;
  side_terms(n, c, 0, false, DimTerm{}, [&](const DimTerm& t) {
    out.push_back(to_term(t, n, total_vars, offset));
    return true;
  });
  return out;
}

std::vector<Term> ge_terms(std::size_t n, std::uint64_t c, std::size_t total_vars, std::size_t offset) {
  std::vector<Term> out;
  side_terms(n, c, 0, true, DimTerm{}, [&](const DimTerm& t) {
    out.push_back(to_term(t, n, total_vars, offset));
    return true;
  });
  return out;
}

RangeTermGenerator::RangeTermGenerator(RangeSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (const DimRange& r : spec_.dims) {
    radix_.push_back(dim_term_count(spec_.n, r.a, r.b));
    count_ *= radix_.back();
  }
}

std::optional<Term> RangeTermGenerator::term(std::size_t index) const {
  if (index >= count_) fail(ErrorCode::kInvalidArgument, "range term index out of range");
  const std::size_t n = spec_.n;
  const std::size_t total = n * spec_.d();
  BitString care(total);
  BitString value(total);
  // Mixed radix with the last dimension varying fastest.
  for (std::size_t j = spec_.d(); j-- > 0;) {
    const DimRange& r = spec_.dims[j];
    DimTerm t = nth_dim_term(n, r.a, r.b, index % radix_[j]);
    index /= radix_[j];
    // Progressions also fix the low step_log bits to those of a.
    for (std::size_t p = n - std::min<std::size_t>(r.step_log, n); p < n; ++p) {
      const std::uint64_t m = std::uint64_t{1} << (n - 1 - p);
      const bool want = bit_of(r.a, n, p);
      if ((t.care & m) != 0) {
        if (((t.value & m) != 0) != want) return std::nullopt;
      } else {
        t.fix(n, p, want);
      }
    }
    place(t, n, j * n, care, value);
  }
  return Term::from_masks(care, value);
}

DnfFormula range_to_dnf(const RangeSpec& r) {
  for (const DimRange& dim : r.dims) {
    if (dim.step_log != 0) fail(ErrorCode::kInvalidArgument, "range_to_dnf takes plain ranges; use progression_to_dnf");
  }
  return progression_to_dnf(r);
}

DnfFormula progression_to_dnf(const RangeSpec& r) {
  const RangeTermGenerator gen(r);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < gen.count(); ++i) {
    if (auto t = gen.term(i)) terms.push_back(std::move(*t));
  }
  return DnfFormula(r.n * r.d(), std::move(terms));
}

DnfStreamEstimator::DnfStreamEstimator(std::size_t n, Strategy strategy, const ApproxParams& params,
                                       std::uint64_t seed, bool parallel)
    : n_(n),
      strategy_(strategy),
      params_(params),
      parallel_(parallel),
      hashes_(),
      min_(n, params.thresh, strategy == Strategy::kMinimum ? params.rows : 0),
      bucket_(n, params.thresh, strategy == Strategy::kBucketing ? params.rows : 0) {
  if (strategy == Strategy::kEstimation) {
    fail(ErrorCode::kInvalidArgument, "DNF streams support the minimum and bucketing strategies");
  }
  hashes_ = choose_hash_functions(strategy, n, params, seed);
}

void DnfStreamEstimator::add(const DnfFormula& item) {
  if (item.num_vars() != n_) {
    fail(ErrorCode::kWidthMismatch,
         "stream item over " + std::to_string(item.num_vars()) + " variables, expected " + std::to_string(n_));
  }
  ++items_;
  if (strategy_ == Strategy::kMinimum) {
    for_each_index(params_.rows, parallel_,
                   [&](std::size_t i) { merge_min(item, hashes_.at(i), params_.thresh, min_.rows[i]); });
    solver_calls_ += params_.rows;
    return;
  }
  log_.push_back(item);
  for_each_index(params_.rows, parallel_, [&](std::size_t i) { add_bucketing_row(i, item); });
}

void DnfStreamEstimator::add_bucketing_row(std::size_t i, const DnfFormula& item) {
  BucketRow& row = bucket_.rows[i];
  const Hash& h = hashes_.at(i);
  auto absorb = [&](const DnfFormula& f) {
    for (const BitString& x : bounded_sat_dnf(f, h.prefix(row.level), params_.thresh).witnesses) {
      const auto it = std::lower_bound(row.cell.begin(), row.cell.end(), x);
      if (it == row.cell.end() || *it != x) row.cell.insert(it, x);
    }
  };
  absorb(item);
  while (row.cell.size() >= params_.thresh) {
    if (row.level == n_) {
      fail(ErrorCode::kPathologicalHash,
           "cell still holds " + std::to_string(params_.thresh) + " solutions at level " + std::to_string(n_));
    }
    ++row.level;
    // Earlier items may have been cut off at the cap, so rebuild from the log.
    row.cell.clear();
    for (const DnfFormula& f : log_) {
      absorb(f);
      if (row.cell.size() >= params_.thresh) break;
    }
  }
  row.zeros.clear();
  for (const BitString& x : row.cell) row.zeros.push_back(static_cast<std::uint16_t>(h.eval(x).leading_zeros()));
}

void DnfStreamEstimator::add_term(const Term& term) { add(DnfFormula(n_, {term})); }

double DnfStreamEstimator::estimate() const {
  if (items_ == 0) return 0.0;
  return strategy_ == Strategy::kMinimum ? compute_est(min_) : compute_est(bucket_);
}

double f0_dnf_stream(const std::vector<DnfFormula>& items, const ApproxParams& params, std::uint64_t seed,
                     Strategy strategy) {
  if (items.empty()) return 0.0;
  DnfStreamEstimator est(items.front().num_vars(), strategy, params, seed);
  for (const DnfFormula& f : items) est.add(f);
  return est.estimate();
}

RangeStreamEstimator::RangeStreamEstimator(std::size_t n, std::size_t d, const ApproxParams& params,
                                           std::uint64_t seed, Strategy strategy, bool parallel)
    : n_(n), d_(d), inner_(n * d, strategy, params, seed, parallel) {}

void RangeStreamEstimator::add(const RangeSpec& r) {
  if (r.n != n_ || r.d() != d_) {
    fail(ErrorCode::kWidthMismatch, "range item with n=" + std::to_string(r.n) + " d=" + std::to_string(r.d()) +
                                        ", expected n=" + std::to_string(n_) + " d=" + std::to_string(d_));
  }
  const RangeTermGenerator gen(r);
  for (std::size_t i = 0; i < gen.count(); ++i) {
    if (auto t = gen.term(i)) inner_.add_term(*t);
  }
}

double f0_ranges(const std::vector<RangeSpec>& items, const ApproxParams& params, std::uint64_t seed,
                 Strategy strategy) {
  if (items.empty()) return 0.0;
  RangeStreamEstimator est(items.front().n, items.front().d(), params, seed, strategy);
  for (const RangeSpec& r : items) est.add(r);
  return est.estimate();
}

namespace {

struct Box {
  std::vector<std::uint64_t> lo;
  std::vector<std::uint64_t> hi;
};

void union_dfs(const std::vector<Box>& boxes, std::size_t next, const Box& current, bool odd, __int128& total) {
  for (std::size_t i = next; i < boxes.size(); ++i) {
    Box meet = current;
    bool empty = false;
    unsigned __int128 size = 1;
    for (std::size_t j = 0; j < meet.lo.size(); ++j) {
      meet.lo[j] = std::max(meet.lo[j], boxes[i].lo[j]);
      meet.hi[j] = std::min(meet.hi[j], boxes[i].hi[j]);
      if (meet.lo[j] > meet.hi[j]) {
        empty = true;
        break;
      }
      size *= static_cast<unsigned __int128>(meet.hi[j] - meet.lo[j]) + 1;
    }
    // Supersets of an empty intersection are empty too.
    if (empty) continue;
    total += odd ? static_cast<__int128>(size) : -static_cast<__int128>(size);
    union_dfs(boxes, i + 1, meet, !odd, total);
  }
}

}  // namespace

std::uint64_t exact_range_union(const std::vector<RangeSpec>& items) {
  if (items.empty()) return 0;
  std::vector<Box> boxes;
  for (const RangeSpec& r : items) {
    r.validate();
    if (r.d() != items.front().d()) fail(ErrorCode::kWidthMismatch, "range items differ in dimension");
    Box b;
    for (const DimRange& dim : r.dims) {
      if (dim.step_log != 0) fail(ErrorCode::kInvalidArgument, "exact union takes plain ranges");
      b.lo.push_back(dim.a);
      b.hi.push_back(dim.b);
    }
    boxes.push_back(std::move(b));
  }
  Box everything{std::vector<std::uint64_t>(items.front().d(), 0),
                 std::vector<std::uint64_t>(items.front().d(), ~std::uint64_t{0})};
  __int128 total = 0;
  union_dfs(boxes, 0, everything, true, total);
  if (total < 0 || total > static_cast<__int128>(~std::uint64_t{0})) {
    fail(ErrorCode::kInvalidArgument, "range union size does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

AffineStreamEstimator::AffineStreamEstimator(std::size_t n, const ApproxParams& params, std::uint64_t seed,
                                             bool parallel)
    : n_(n),
      params_(params),
      parallel_(parallel),
      hashes_(choose_hash_functions(Strategy::kMinimum, n, params, seed)),
      min_(n, params.thresh, params.rows) {}

void AffineStreamEstimator::add(const AffineSet& item) {
  if (item.a.cols() != n_) fail(ErrorCode::kWidthMismatch, "affine item width differs from the stream's n");
  for_each_index(params_.rows, parallel_, [&](std::size_t i) {
    const auto img = affine_image(item.a, item.b, hashes_.at(i));
    if (!img) return;
    std::vector<BitString>& row = min_.rows[i];
    img->for_each_ascending([&](const BitString& v) {
      if (row.size() >= params_.thresh && !(v < row.back())) return false;
      insert_smallest(row, v, params_.thresh);
      return true;
    });
  });
}

double f0_affine_stream(const std::vector<AffineSet>& items, const ApproxParams& params, std::uint64_t seed) {
  if (items.empty()) return 0.0;
  AffineStreamEstimator est(items.front().a.cols(), params, seed);
  for (const AffineSet& s : items) est.add(s);
  return est.estimate();
}

void WeightedDnf::validate() const {
  if (weights.size() != formula.num_vars()) fail(ErrorCode::kInvalidArgument, "one weight per variable is required");
  for (const VarWeight& w : weights) {
    if (w.m == 0 || w.m > 62) fail(ErrorCode::kInvalidArgument, "weight exponent m must be in 1..62");
    if (w.k == 0 || w.k >= (std::uint64_t{1} << w.m)) fail(ErrorCode::kInvalidArgument, "weight needs 1 <= k < 2^m");
  }
}

unsigned WeightedDnf::total_bits() const {
  unsigned total = 0;
  for (const VarWeight& w : weights) total += w.m;
  return total;
}

std::vector<RangeSpec> weighted_to_ranges(const WeightedDnf& w) {
  w.validate();
  unsigned width = 1;
  for (const VarWeight& v : w.weights) width = std::max(width, v.m);
  std::vector<RangeSpec> out;
  for (const Term& term : w.formula.terms()) {
    RangeSpec r;
    r.n = width;
    for (std::size_t i = 0; i < w.formula.num_vars(); ++i) {
      const VarWeight& v = w.weights[i];
      const std::uint64_t top = (std::uint64_t{1} << v.m) - 1;
      if (!term.care().test(i)) {
        r.dims.push_back({0, top, 0});
      } else if (term.value().test(i)) {
        r.dims.push_back({0, v.k - 1, 0});
      } else {
        r.dims.push_back({v.k, top, 0});
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::uint64_t brute_weighted_numerator(const WeightedDnf& w) {
  w.validate();
  if (w.total_bits() > 63) fail(ErrorCode::kInvalidArgument, "total weight bits exceed 63");
  std::uint64_t total = 0;
  for (const BitString& x : brute_solutions(w.formula)) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
      const VarWeight& v = w.weights[i];
      prod *= x.test(i) ? v.k : (std::uint64_t{1} << v.m) - v.k;
    }
    total += prod;
  }
  return total;
}

double weighted_dnf_count(const WeightedDnf& w, const ApproxParams& params, std::uint64_t seed) {
  const auto ranges = weighted_to_ranges(w);
  return std::ldexp(f0_ranges(ranges, params, seed), -static_cast<int>(w.total_bits()));
}

double weighted_exact(const WeightedDnf& w) {
  const auto ranges = weighted_to_ranges(w);
  return std::ldexp(static_cast<double>(exact_range_union(ranges)), -static_cast<int>(w.total_bits()));
}

RangeStream parse_range_stream(std::string_view text) {
  LineReader lines(text);
  const auto fields = lines.header();
  RangeStream out;
  out.n = lines.require_size(fields, "n");
  out.d = lines.require_size(fields, "d");
  if (out.n == 0 || out.n > 64) lines.error("n must be in 1..64");
  if (out.d == 0 || out.n * out.d > BitString::kMaxBits) {
    lines.error("d must be at least 1 with n*d <= " + std::to_string(BitString::kMaxBits));
  }
  while (auto line = lines.next()) {
    const auto groups = split_on(*line, ';');
    if (groups.size() != out.d) {
      lines.error("expected " + std::to_string(out.d) + " dimensions, found " + std::to_string(groups.size()));
    }
    RangeSpec r;
    r.n = out.n;
    for (std::string_view g : groups) {
      const auto tokens = split_ws(g);
      if (tokens.size() != 2 && tokens.size() != 3) lines.error("each dimension needs 'a b' or 'a b c'");
      DimRange dim;
      dim.a = lines.parse_uint(tokens[0], "lower bound");
      dim.b = lines.parse_uint(tokens[1], "upper bound");
      if (dim.a > dim.b) lines.error("lower bound " + std::to_string(dim.a) + " exceeds upper bound " + std::to_string(dim.b));
      if (dim.b > max_value(out.n)) lines.error("bound " + std::to_string(dim.b) + " does not fit in n bits");
      if (tokens.size() == 3) {
        const std::uint64_t c = lines.parse_uint(tokens[2], "step");
        if (c == 0 || !std::has_single_bit(c)) lines.error("step must be a power of two");
        dim.step_log = static_cast<unsigned>(std::countr_zero(c));
      }
      r.dims.push_back(dim);
    }
    out.items.push_back(std::move(r));
  }
  return out;
}

AffineStream parse_affine_stream(std::string_view text) {
  LineReader lines(text);
  AffineStream out;
  out.n = lines.header_size("n");
  if (out.n == 0 || out.n > BitString::kMaxBits) lines.error("n must be in 1.." + std::to_string(BitString::kMaxBits));
  while (auto line = lines.next()) {
    const auto tokens = split_ws(*line);
    if (tokens.size() != out.n + 2 || tokens[out.n] != "|") {
      lines.error("expected " + std::to_string(out.n) + " hex rows, '|', and the hex right-hand side");
    }
    AffineSet item{BitMatrix(out.n, out.n), BitString(out.n)};
    try {
      for (std::size_t r = 0; r < out.n; ++r) {
        const BitString row = BitString::parse_hex(tokens[r], out.n);
        for (std::size_t c = 0; c < out.n; ++c) item.a.set(r, c, row.test(c));
      }
      item.b = BitString::parse_hex(tokens[out.n + 1], out.n);
    } catch (const Error& e) {
      lines.error(e.what());
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

std::vector<DnfFormula> parse_dnf_stream(std::string_view text) {
  std::vector<DnfFormula> out;
  std::size_t block_start_line = 1;
  std::size_t line_no = 0;
  std::string block;
  auto flush = [&] {
    if (trim(block).empty()) {
      block.clear();
      return;
    }
    try {
      out.push_back(parse_dnf(block));
    } catch (const Error& e) {
      fail(e.code(), "item " + std::to_string(out.size() + 1) + " (starting at line " +
                         std::to_string(block_start_line) + "): " + e.what());
    }
    if (out.back().num_vars() != out.front().num_vars()) {
      fail(ErrorCode::kWidthMismatch, "item " + std::to_string(out.size()) + " has " +
                                          std::to_string(out.back().num_vars()) + " variables, expected " +
                                          std::to_string(out.front().num_vars()));
    }
    block.clear();
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (trim(line) == "---") {
      flush();
      block_start_line = line_no + 1;
    } else {
      block.append(line);
      block.push_back('\n');
    }
    pos = end + 1;
  }
  flush();
  return out;
}

WeightedDnf parse_weighted_dnf(std::string_view text) {
  std::string dnf_text;
  struct Pending {
    std::size_t line;
    std::uint64_t var, k, m;
  };
  std::vector<Pending> pending;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    const auto tokens = split_ws(line);
    if (!tokens.empty() && tokens[0] == "w") {
      if (tokens.size() != 4) fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 'w <var> <k> <m>'");
      Pending p{line_no, 0, 0, 0};
      try {
        p.var = std::stoull(std::string(tokens[1]));
        p.k = std::stoull(std::string(tokens[2]));
        p.m = std::stoull(std::string(tokens[3]));
      } catch (const std::exception&) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": weight fields must be integers");
      }
      pending.push_back(p);
      dnf_text += "c\n";  // keeps line numbers aligned for formula diagnostics
    } else {
      dnf_text.append(line);
      dnf_text.push_back('\n');
    }
    pos = end + 1;
  }
  WeightedDnf w;
  w.formula = parse_dnf(dnf_text);
  w.weights.assign(w.formula.num_vars(), VarWeight{});
  for (const Pending& p : pending) {
    const std::string where = "line " + std::to_string(p.line) + ": ";
    if (p.var == 0 || p.var > w.formula.num_vars()) fail(ErrorCode::kParse, where + "weight for unknown variable");
    if (p.m == 0 || p.m > 62) fail(ErrorCode::kParse, where + "m must be in 1..62");
    if (p.k == 0 || p.k >= (std::uint64_t{1} << p.m)) fail(ErrorCode::kParse, where + "k must satisfy 1 <= k < 2^m");
    w.weights[p.var - 1] = VarWeight{p.k, static_cast<unsigned>(p.m)};
  }
  return w;
}

}  // namespace f0mc
