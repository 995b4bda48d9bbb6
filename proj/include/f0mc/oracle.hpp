#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/gf2n.hpp"
#include "f0mc/hashing.hpp"

namespace f0mc {

enum class OracleBackend {
  kBruteForce,    // exact answers by enumerating {0,1}^n, n <= var cap
  kExternalStub,  // placeholder for a SAT/MaxSAT backend; every query fails
};

/// Decision oracle for the three query shapes the formula-side algorithms
/// need. Every query counts as one call. The brute-force backend enumerates
/// a formula's solutions once and caches them (keyed by fingerprint), and
/// also caches per-(formula, hash) summaries, so repeated queries on the same
/// pair are cheap; the call count is unaffected by caching.
class NpOracle {
 public:
  explicit NpOracle(OracleBackend backend = OracleBackend::kBruteForce, std::size_t var_cap = kDefaultBruteCap,
                    std::optional<std::uint64_t> call_budget = std::nullopt);

  /// Is there x |= f whose h(x) starts with `prefix` and, if `lower` is
  /// given, is lexicographically greater than it?
  bool has_image_above(const CnfFormula& f, const Hash& h, const BitString& prefix,
                       const std::optional<BitString>& lower);
  bool has_image_above(const DnfFormula& f, const Hash& h, const BitString& prefix,
                       const std::optional<BitString>& lower);

  /// Is there x |= f with at least t trailing zeros in h(x)?
  bool has_trailing_zeros(const CnfFormula& f, const Hash& h, std::size_t t);
  bool has_trailing_zeros(const DnfFormula& f, const Hash& h, std::size_t t);

  /// A solution x |= f with h(x) = 0^m that is not in `blocked`, if any.
  std::optional<BitString> next_solution(const CnfFormula& f, const Hash& h,
                                         const std::unordered_set<BitString, BitStringHash>& blocked);
  std::optional<BitString> next_solution(const DnfFormula& f, const Hash& h,
                                         const std::unordered_set<BitString, BitStringHash>& blocked);

  std::uint64_t calls() const noexcept { return calls_.load(); }
  void reset_calls() noexcept { calls_.store(0); }
  OracleBackend backend() const noexcept { return backend_; }
  std::size_t var_cap() const noexcept { return var_cap_; }

 private:
  struct Solutions {
    std::size_t n = 0;
    std::vector<std::uint64_t> values;   // ascending
    std::vector<GF2nMulTable> tables;    // per solution, built on first poly query
  };
  enum class Summary { kImage, kMaxTrailing, kCell };
  using SummaryKey = std::tuple<std::uint64_t, std::uint64_t, int>;

  void charge(std::size_t n);
  std::shared_ptr<Solutions> solutions_for(std::uint64_t fingerprint, std::size_t n,
                                           const std::function<std::vector<std::uint64_t>()>& enumerate);
  template <class F>
  std::shared_ptr<Solutions> solutions(const F& f);

  std::vector<BitString> image(const Solutions& sols, const Hash& h);
  std::size_t max_trailing(Solutions& sols, const Hash& h);
  std::vector<BitString> cell(const Solutions& sols, const Hash& h);

  template <class F>
  bool image_above(const F& f, const Hash& h, const BitString& prefix, const std::optional<BitString>& lower);
  template <class F>
  bool trailing(const F& f, const Hash& h, std::size_t t);
  template <class F>
  std::optional<BitString> next(const F& f, const Hash& h,
                                const std::unordered_set<BitString, BitStringHash>& blocked);

  OracleBackend backend_;
  std::size_t var_cap_;
  std::optional<std::uint64_t> budget_;
  std::atomic<std::uint64_t> calls_{0};
  std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<Solutions>> solution_cache_;
  std::map<SummaryKey, std::shared_ptr<const std::vector<BitString>>> list_cache_;
  std::map<SummaryKey, std::size_t> number_cache_;
};

}  // namespace f0mc
