#include "f0mc/f0stream.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "f0mc/error.hpp"
#include "f0mc/textio.hpp"

namespace f0mc {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kBucketing: return "bucketing";
    case Strategy::kMinimum: return "minimum";
    case Strategy::kEstimation: return "estimation";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "bucketing" || name == "bucket") return Strategy::kBucketing;
  if (name == "minimum" || name == "min") return Strategy::kMinimum;
  if (name == "estimation" || name == "est") return Strategy::kEstimation;
  fail(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "' (bucketing|minimum|estimation)");
}

std::size_t thresh_for(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(96.0 / (epsilon * epsilon) - 1e-9));
}

std::size_t rows_for(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  auto t = static_cast<std::size_t>(std::ceil(35.0 * std::log(1.0 / delta) - 1e-9));
  if (t == 0) t = 1;
  if (t % 2 == 0) ++t;
  return t;
}

ApproxParams ApproxParams::make(double epsilon, double delta) {
  return ApproxParams{epsilon, delta, thresh_for(epsilon), rows_for(delta)};
}

ApproxParams ApproxParams::custom(double epsilon, double delta, std::size_t thresh, std::size_t rows) {
  if (thresh == 0 || rows == 0) fail(ErrorCode::kInvalidArgument, "sketch sizes must be positive");
  return ApproxParams{epsilon, delta, thresh, rows};
}

HashCollection choose_hash_functions(Strategy strategy, std::size_t n, const ApproxParams& params, std::uint64_t seed) {
  switch (strategy) {
    case Strategy::kBucketing:
      return pick_hash_functions(HashFamily::kToeplitz, n, n, params.rows, seed, kBucketingStream);
    case Strategy::kMinimum:
      return pick_hash_functions(HashFamily::kToeplitz, n, 3 * n, params.rows, seed, kMinimumStream);
    case Strategy::kEstimation:
      return pick_hash_grid(HashFamily::kPoly, n, poly_degree_for(params.epsilon), params.rows, params.thresh, seed,
                            kEstimationStream);
  }
  fail(ErrorCode::kInvalidArgument, "unknown strategy");
}

BucketSketch::BucketSketch(std::size_t n_, std::size_t thresh_, std::size_t rows_)
    : n(n_), thresh(thresh_), rows(rows_) {}

MinSketch::MinSketch(std::size_t n_, std::size_t thresh_, std::size_t rows_) : n(n_), thresh(thresh_), rows(rows_) {}

EstSketch::EstSketch(std::size_t n_, std::size_t rows_, std::size_t cols_)
    : n(n_), rows(rows_), cols(cols_), cells(rows_ * cols_, 0) {}

void process_update_bucketing_row(BucketSketch& sk, std::size_t i, const Hash& h, const BitString& x) {
  BucketRow& row = sk.rows[i];
  const std::size_t zeros = h.eval(x).leading_zeros();
  if (zeros < row.level) return;
  auto it = std::lower_bound(row.cell.begin(), row.cell.end(), x);
  if (it != row.cell.end() && *it == x) return;
  const auto pos = it - row.cell.begin();
  row.cell.insert(it, x);
  row.zeros.insert(row.zeros.begin() + pos, static_cast<std::uint16_t>(zeros));
  while (row.cell.size() >= sk.thresh) {
    if (row.level == sk.n) {
      fail(ErrorCode::kPathologicalHash, "bucketing row " + std::to_string(i) + " still holds " +
                                             std::to_string(row.cell.size()) + " elements at level n");
    }
    ++row.level;
    std::size_t keep = 0;
    for (std::size_t k = 0; k < row.cell.size(); ++k) {
      if (row.zeros[k] >= row.level) {
        row.cell[keep] = row.cell[k];
        row.zeros[keep] = row.zeros[k];
        ++keep;
      }
    }
    row.cell.resize(keep);
    row.zeros.resize(keep);
  }
}

void process_update_bucketing(BucketSketch& sk, const HashCollection& h, const BitString& x) {
  if (x.size() != sk.n) fail(ErrorCode::kWidthMismatch, "stream element width differs from n");
  for (std::size_t i = 0; i < sk.rows.size(); ++i) process_update_bucketing_row(sk, i, h.at(i), x);
}

void insert_smallest(std::vector<BitString>& row, const BitString& value, std::size_t limit) {
  if (row.size() >= limit && !(value < row.back())) return;
  auto it = std::lower_bound(row.begin(), row.end(), value);
  if (it != row.end() && *it == value) return;
  row.insert(it, value);
  if (row.size() > limit) row.pop_back();
}

void process_update_minimum(MinSketch& sk, const HashCollection& h, const BitString& x) {
  if (x.size() != sk.n) fail(ErrorCode::kWidthMismatch, "stream element width differs from n");
  for (std::size_t i = 0; i < sk.rows.size(); ++i) insert_smallest(sk.rows[i], h.at(i).eval(x), sk.thresh);
}

void process_update_estimation(EstSketch& sk, const HashCollection& h, const BitString& x) {
  if (h.family == HashFamily::kPoly) {
    process_update_estimation(sk, PolyGrid(h), x);
    return;
  }
  if (x.size() != sk.n) fail(ErrorCode::kWidthMismatch, "stream element width differs from n");
  for (std::size_t i = 0; i < sk.rows; ++i) {
    for (std::size_t j = 0; j < sk.cols; ++j) {
      const auto tz = static_cast<std::uint16_t>(trail_zero(h.at(i, j).eval(x)));
      std::uint16_t& cell = sk.at(i, j);
      if (tz > cell) cell = tz;
    }
  }
}

void process_update_estimation(EstSketch& sk, const PolyGrid& grid, const BitString& x) {
  if (x.size() != sk.n) fail(ErrorCode::kWidthMismatch, "stream element width differs from n");
  if (grid.cells != sk.cells.size()) fail(ErrorCode::kInvalidArgument, "hash grid does not match the sketch shape");
  const GF2nMulTable table = grid.table_for(x.to_uint());
  for (std::size_t c = 0; c < grid.cells; ++c) {
    const std::uint64_t v = grid.eval(c, table);
    const auto tz = static_cast<std::uint16_t>(v == 0 ? sk.n : static_cast<std::size_t>(std::countr_zero(v)));
    if (tz > sk.cells[c]) sk.cells[c] = tz;
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double compute_est(const BucketSketch& sk) {
  std::vector<double> per_row;
  per_row.reserve(sk.rows.size());
  for (const BucketRow& row : sk.rows) {
    per_row.push_back(std::ldexp(static_cast<double>(row.cell.size()), static_cast<int>(row.level)));
  }
  return median(std::move(per_row));
}

double min_row_estimate(const std::vector<BitString>& row, std::size_t thresh, std::size_t hash_bits) {
  if (row.size() < thresh) return static_cast<double>(row.size());
  const double top = row.back().to_double();
  // A full row whose maximum is the zero string cannot occur with distinct values.
  return std::ldexp(static_cast<double>(thresh), static_cast<int>(hash_bits)) / top;
}

double compute_est(const MinSketch& sk) {
  std::vector<double> per_row;
  per_row.reserve(sk.rows.size());
  for (const auto& row : sk.rows) per_row.push_back(min_row_estimate(row, sk.thresh, 3 * sk.n));
  return median(std::move(per_row));
}

double est_row_estimate(const std::uint16_t* cells, std::size_t count, std::size_t r) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j < count; ++j) hits += cells[j] >= r ? 1 : 0;
  if (hits == count) return std::numeric_limits<double>::infinity();
  const double q = static_cast<double>(hits) / static_cast<double>(count);
  return std::log1p(-q) / std::log1p(-std::ldexp(1.0, -static_cast<int>(r)));
}

double compute_est(const EstSketch& sk, std::size_t r) {
  if (r < 1) fail(ErrorCode::kInvalidArgument, "estimation needs r >= 1");
  std::vector<double> per_row;
  per_row.reserve(sk.rows);
  for (std::size_t i = 0; i < sk.rows; ++i) per_row.push_back(est_row_estimate(&sk.cells[i * sk.cols], sk.cols, r));
  const double est = median(std::move(per_row));
  if (std::isinf(est)) {
    fail(ErrorCode::kRTooSmall, "r too small: r=" + std::to_string(r) + " saturates the median row");
  }
  return est;
}

std::size_t r_from_raw(std::size_t r_raw, std::size_t n) {
  return std::clamp<std::size_t>(r_raw + kRShift, 1, std::max<std::size_t>(n, 1));
}

F0Estimator::F0Estimator(std::size_t n, Strategy strategy, const ApproxParams& params, std::uint64_t seed,
                         std::optional<std::size_t> r, std::size_t fm_repetitions)
    : n_(n),
      strategy_(strategy),
      params_(params),
      r_(r),
      hashes_(choose_hash_functions(strategy, n, params, seed)),
      bucket_(n, params.thresh, strategy == Strategy::kBucketing ? params.rows : 0),
      min_(n, params.thresh, strategy == Strategy::kMinimum ? params.rows : 0),
      est_(n, strategy == Strategy::kEstimation ? params.rows : 0, params.thresh) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "stream elements need at least one bit");
  if (strategy == Strategy::kEstimation) grid_.emplace(hashes_);
  if (strategy == Strategy::kEstimation && !r) {
    const std::size_t reps = fm_repetitions == 0 ? params.rows : fm_repetitions;
    fm_hashes_ = pick_hash_functions(HashFamily::kXor, n, n, reps, seed, kFlajoletMartinStream);
    fm_max_.assign(reps, 0);
  }
}

void F0Estimator::add(const BitString& x) {
  ++items_;
  switch (strategy_) {
    case Strategy::kBucketing: process_update_bucketing(bucket_, hashes_, x); break;
    case Strategy::kMinimum: process_update_minimum(min_, hashes_, x); break;
    case Strategy::kEstimation:
      process_update_estimation(est_, *grid_, x);
      for (std::size_t k = 0; k < fm_max_.size(); ++k) {
        fm_max_[k] = std::max(fm_max_[k], trail_zero(fm_hashes_.at(k).eval(x)));
      }
      break;
  }
}

std::size_t F0Estimator::chosen_r() const {
  if (strategy_ != Strategy::kEstimation) fail(ErrorCode::kInvalidArgument, "r applies to the estimation strategy only");
  if (r_) return *r_;
  std::vector<double> raw(fm_max_.begin(), fm_max_.end());
  return r_from_raw(static_cast<std::size_t>(median(raw)), n_);
}

double F0Estimator::estimate() const {
  if (items_ == 0) return 0.0;
  switch (strategy_) {
    case Strategy::kBucketing: return compute_est(bucket_);
    case Strategy::kMinimum: return compute_est(min_);
    case Strategy::kEstimation: return compute_est(est_, chosen_r());
  }
  return 0.0;
}

std::string F0Estimator::dump() const {
  switch (strategy_) {
    case Strategy::kBucketing: return dump_sketch(bucket_);
    case Strategy::kMinimum: return dump_sketch(min_);
    case Strategy::kEstimation: return dump_sketch(est_);
  }
  return {};
}

double compute_f0(const std::vector<BitString>& stream, std::size_t n, Strategy strategy, const ApproxParams& params,
                  std::uint64_t seed, std::optional<std::size_t> r) {
  F0Estimator est(n, strategy, params, seed, r);
  for (const BitString& x : stream) est.add(x);
  return est.estimate();
}

std::string dump_sketch(const BucketSketch& sk) {
  std::ostringstream os;
  os << "sketch bucketing n=" << sk.n << " rows=" << sk.rows.size() << " thresh=" << sk.thresh << '\n';
  for (std::size_t i = 0; i < sk.rows.size(); ++i) {
    const BucketRow& row = sk.rows[i];
    os << "row " << i << " level=" << row.level << " size=" << row.cell.size() << " :";
    for (const BitString& x : row.cell) os << ' ' << x.to_hex();
    os << '\n';
  }
  return os.str();
}

std::string dump_sketch(const MinSketch& sk) {
  std::ostringstream os;
  os << "sketch minimum n=" << sk.n << " rows=" << sk.rows.size() << " thresh=" << sk.thresh << '\n';
  for (std::size_t i = 0; i < sk.rows.size(); ++i) {
    os << "row " << i << " size=" << sk.rows[i].size() << " :";
    for (const BitString& v : sk.rows[i]) os << ' ' << v.to_hex();
    os << '\n';
  }
  return os.str();
}

std::string dump_sketch(const EstSketch& sk) {
  std::ostringstream os;
  os << "sketch estimation n=" << sk.n << " rows=" << sk.rows << " thresh=" << sk.cols << '\n';
  for (std::size_t i = 0; i < sk.rows; ++i) {
    os << "row " << i << " :";
    for (std::size_t j = 0; j < sk.cols; ++j) os << ' ' << sk.at(i, j);
    os << '\n';
  }
  return os.str();
}

ElementStream parse_element_stream(std::string_view text) {
  LineReader lines(text);
  ElementStream out;
  out.n = lines.header_size("n");
  if (out.n == 0 || out.n > BitString::kMaxBits) lines.error("n must be in 1.." + std::to_string(BitString::kMaxBits));
  while (auto line = lines.next()) {
    out.elements.push_back(lines.parse_element(*line, out.n));
  }
  return out;
}

}  // namespace f0mc
