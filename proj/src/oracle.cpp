#include "f0mc/oracle.hpp"

#include <algorithm>
#include <bit>

#include "f0mc/error.hpp"

namespace f0mc {

namespace {

constexpr std::size_t kListCacheLimit = 4096;
constexpr std::size_t kNumberCacheLimit = 1 << 18;
constexpr std::size_t kTableLimit = 4096;

}  // namespace

NpOracle::NpOracle(OracleBackend backend, std::size_t var_cap, std::optional<std::uint64_t> call_budget)
    : backend_(backend), var_cap_(var_cap), budget_(call_budget) {}

void NpOracle::charge(std::size_t n) {
  if (backend_ == OracleBackend::kExternalStub) {
    fail(ErrorCode::kOracleUnavailable, "no external SAT backend is configured; use the brute-force oracle");
  }
  if (n > var_cap_) {
    fail(ErrorCode::kOracleCap, "oracle query over " + std::to_string(n) + " variables exceeds the brute-force cap of " +
                                    std::to_string(var_cap_));
  }
  const std::uint64_t made = calls_.fetch_add(1) + 1;
  if (budget_ && made > *budget_) {
    fail(ErrorCode::kOracleBudget, "oracle call budget of " + std::to_string(*budget_) + " exhausted");
  }
}

std::shared_ptr<NpOracle::Solutions> NpOracle::solutions_for(
    std::uint64_t fingerprint, std::size_t n, const std::function<std::vector<std::uint64_t>()>& enumerate) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = solution_cache_.find(fingerprint);
    if (it != solution_cache_.end() && it->second->n == n) return it->second;
  }
  auto sols = std::make_shared<Solutions>();
  sols->n = n;
  sols->values = enumerate();
  std::lock_guard<std::mutex> lock(mutex_);
  if (solution_cache_.size() > 64) solution_cache_.clear();
  solution_cache_[fingerprint] = sols;
  return sols;
}

template <class F>
std::shared_ptr<NpOracle::Solutions> NpOracle::solutions(const F& f) {
  const std::size_t cap = var_cap_;
  return solutions_for(f.fingerprint(), f.num_vars(), [&f, cap] { return brute_solution_values(f, cap); });
}

std::vector<BitString> NpOracle::image(const Solutions& sols, const Hash& h) {
  std::vector<BitString> out;
  out.reserve(sols.values.size());
  for (std::uint64_t v : sols.values) out.push_back(h.eval(BitString::from_uint(v, sols.n)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BitString> NpOracle::cell(const Solutions& sols, const Hash& h) {
  std::vector<BitString> out;
  for (std::uint64_t v : sols.values) {
    const BitString x = BitString::from_uint(v, sols.n);
    if (h.eval(x).none()) out.push_back(x);
  }
  return out;
}

std::size_t NpOracle::max_trailing(Solutions& sols, const Hash& h) {
  std::size_t best = 0;
  if (h.family() == HashFamily::kPoly && sols.values.size() <= kTableLimit) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (sols.tables.size() != sols.values.size()) {
        const GF2nField field(static_cast<unsigned>(sols.n));
        sols.tables.clear();
        for (std::uint64_t v : sols.values) sols.tables.emplace_back(field, v);
      }
    }
    const auto& coeffs = h.coefficients();
    std::vector<std::uint64_t> c;
    for (const auto& e : coeffs) c.push_back(e.value);
    for (const GF2nMulTable& t : sols.tables) {
      const std::uint64_t y = t.eval(c.data(), c.size());
      const std::size_t tz = y == 0 ? sols.n : static_cast<std::size_t>(std::countr_zero(y));
      best = std::max(best, tz);
      if (best == sols.n) break;
    }
    return best;
  }
  for (std::uint64_t v : sols.values) {
    best = std::max(best, trail_zero(h.eval(BitString::from_uint(v, sols.n))));
    if (best == h.output_bits()) break;
  }
  return best;
}

template <class F>
bool NpOracle::image_above(const F& f, const Hash& h, const BitString& prefix, const std::optional<BitString>& lower) {
  charge(f.num_vars());
  if (!h.is_affine() || h.input_bits() != f.num_vars()) {
    fail(ErrorCode::kWidthMismatch, "image query needs an affine hash over the formula's variables");
  }
  if (prefix.size() > h.output_bits() || (lower && lower->size() != h.output_bits())) {
    fail(ErrorCode::kWidthMismatch, "image query prefix or bound wider than the hash output");
  }
  auto sols = solutions(f);
  const SummaryKey key{f.fingerprint(), h.fingerprint(), static_cast<int>(Summary::kImage)};
  std::shared_ptr<const std::vector<BitString>> img;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = list_cache_.find(key);
    if (it != list_cache_.end()) img = it->second;
  }
  if (!img) {
    img = std::make_shared<const std::vector<BitString>>(image(*sols, h));
    std::lock_guard<std::mutex> lock(mutex_);
    if (list_cache_.size() > kListCacheLimit) list_cache_.clear();
    list_cache_[key] = img;
  }
  BitString lo(h.output_bits());
  for (std::size_t i = 0; i < prefix.size(); ++i) lo.set(i, prefix.test(i));
  auto it = std::lower_bound(img->begin(), img->end(), lo);
  if (lower) it = std::max(it, std::upper_bound(img->begin(), img->end(), *lower));
  return it != img->end() && it->prefix(prefix.size()) == prefix;
}

template <class F>
bool NpOracle::trailing(const F& f, const Hash& h, std::size_t t) {
  charge(f.num_vars());
  if (h.input_bits() != f.num_vars()) fail(ErrorCode::kWidthMismatch, "hash input width differs from formula");
  auto sols = solutions(f);
  if (sols->values.empty()) return false;
  const SummaryKey key{f.fingerprint(), h.fingerprint(), static_cast<int>(Summary::kMaxTrailing)};
  std::optional<std::size_t> best;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = number_cache_.find(key);
    if (it != number_cache_.end()) best = it->second;
  }
  if (!best) {
    best = max_trailing(*sols, h);
    std::lock_guard<std::mutex> lock(mutex_);
    if (number_cache_.size() > kNumberCacheLimit) number_cache_.clear();
    number_cache_[key] = *best;
  }
  return *best >= t;
}

template <class F>
std::optional<BitString> NpOracle::next(const F& f, const Hash& h,
                                        const std::unordered_set<BitString, BitStringHash>& blocked) {
  charge(f.num_vars());
  if (!h.is_affine() || h.input_bits() != f.num_vars()) {
    fail(ErrorCode::kWidthMismatch, "solution query needs an affine hash over the formula's variables");
  }
  auto sols = solutions(f);
  const SummaryKey key{f.fingerprint(), h.fingerprint(), static_cast<int>(Summary::kCell)};
  std::shared_ptr<const std::vector<BitString>> members;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = list_cache_.find(key);
    if (it != list_cache_.end()) members = it->second;
  }
  if (!members) {
    members = std::make_shared<const std::vector<BitString>>(cell(*sols, h));
    std::lock_guard<std::mutex> lock(mutex_);
    if (list_cache_.size() > kListCacheLimit) list_cache_.clear();
    list_cache_[key] = members;
  }
  for (const BitString& x : *members) {
    if (!blocked.contains(x)) return x;
  }
  return std::nullopt;
}

bool NpOracle::has_image_above(const CnfFormula& f, const Hash& h, const BitString& prefix,
                               const std::optional<BitString>& lower) {
  return image_above(f, h, prefix, lower);
}

bool NpOracle::has_image_above(const DnfFormula& f, const Hash& h, const BitString& prefix,
                               const std::optional<BitString>& lower) {
  return image_above(f, h, prefix, lower);
}

bool NpOracle::has_trailing_zeros(const CnfFormula& f, const Hash& h, std::size_t t) { return trailing(f, h, t); }

bool NpOracle::has_trailing_zeros(const DnfFormula& f, const Hash& h, std::size_t t) { return trailing(f, h, t); }

std::optional<BitString> NpOracle::next_solution(const CnfFormula& f, const Hash& h,
                                                 const std::unordered_set<BitString, BitStringHash>& blocked) {
  return next(f, h, blocked);
}

std::optional<BitString> NpOracle::next_solution(const DnfFormula& f, const Hash& h,
                                                 const std::unordered_set<BitString, BitStringHash>& blocked) {
  return next(f, h, blocked);
}

}  // namespace f0mc
