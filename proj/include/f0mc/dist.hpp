#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/f0stream.hpp"
#include "f0mc/formula.hpp"
#include "f0mc/oracle.hpp"

namespace f0mc {

/// Append-only bit buffer with exact length accounting.
class BitWriter {
 public:
  void write(std::uint64_t value, std::size_t bits);
  void write(const BitString& bits);
  void write(const std::vector<bool>& bits);
  std::size_t bits() const noexcept { return bits_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(const std::vector<std::uint8_t>& bytes, std::size_t bits) : bytes_(bytes), bits_(bits) {}
  std::uint64_t read(std::size_t bits);
  BitString read_bits(std::size_t bits);
  std::vector<bool> read_vector(std::size_t bits);
  std::size_t remaining() const noexcept { return bits_ - pos_; }

 private:
  bool next();
  const std::vector<std::uint8_t>& bytes_;
  std::size_t bits_;
  std::size_t pos_ = 0;
};

/// Bits needed to write any value in [0, max_value]; at least 1.
std::size_t width_for(std::uint64_t max_value);

enum class Direction { kToSite, kToCoordinator };
enum class PayloadKind { kHashFunctions, kBucketingTuples, kMinValues, kEstCells };
std::string_view payload_kind_name(PayloadKind kind);

/// Per-direction, per-kind bit totals, counted once when a message is sent
/// and once when it is received.
struct CommLedger {
  std::array<std::array<std::uint64_t, 4>, 2> sent_bits{};
  std::array<std::array<std::uint64_t, 4>, 2> received_bits{};
  std::array<std::uint64_t, 2> messages{};

  void record_send(Direction d, PayloadKind k, std::size_t bits);
  void record_receive(Direction d, PayloadKind k, std::size_t bits);
  std::uint64_t sent(Direction d) const;
  std::uint64_t received(Direction d) const;
  std::uint64_t total_bits() const { return sent(Direction::kToSite) + sent(Direction::kToCoordinator); }
  std::uint64_t kind_bits(PayloadKind k) const;
  /// Stable key/value listing for reports.
  std::vector<std::pair<std::string, std::uint64_t>> entries() const;
};

struct SiteInput {
  std::size_t id = 0;
  DnfFormula formula;
};

/// Queue: every message is serialized, queued and decoded by its receiver.
/// Direct: payloads are handed over as objects; their size is still measured
/// on the serialized form. Results must not depend on the choice.
enum class TransportMode { kQueue, kDirect };

struct DistOptions {
  TransportMode transport = TransportMode::kQueue;
  bool parallel = false;
  std::optional<std::size_t> r;     // estimation only
  std::size_t fm_repetitions = 0;   // 0: one per row
};

struct DistResult {
  double estimate = 0.0;
  CommLedger ledger;
  std::optional<MinSketch> min;
  /// Bucketing: per row (distinct tuples at the final level, level).
  std::vector<std::pair<std::size_t, std::size_t>> bucket_rows;
  std::optional<EstSketch> est;
  std::size_t g_width = 0;
  std::optional<std::size_t> r;
};

/// Output width of the tuple hash G: the birthday bound
/// ceil(log2(2 (k * tuples_per_site)^2 / delta)) makes every hashed element
/// distinct with probability at least 1 - delta / 2.
std::size_t derive_g_width(std::size_t k, double delta, std::uint64_t tuples_per_site);

/// One-shot protocol: the coordinator broadcasts the hash functions, every
/// site answers once, the coordinator combines.
///   minimum    - sites send their thresh smallest values per row; merged.
///   bucketing  - sites find their own level per row and send
///                <G(x), leading-zero count of H(x)> for their cell; the
///                coordinator starts from the highest site level and raises it
///                until the merged cell is below thresh.
///   estimation - sites send per-cell maxima of trailing zeros (oracle); the
///                coordinator takes cellwise maxima.
DistResult dist_count(const std::vector<SiteInput>& sites, const ApproxParams& params, std::uint64_t seed,
                      Strategy protocol, NpOracle& oracle, const DistOptions& options = {});

/// Merge of two minimum rows, each the thresh smallest of its part.
std::vector<BitString> merge_min_rows(const std::vector<BitString>& a, const std::vector<BitString>& b,
                                      std::size_t thresh);

/// Scenario text: a DNF followed (or interleaved) by lines
/// "site <j>: <term indices>" with 1-based term indices and sites 1..k.
struct Scenario {
  DnfFormula formula;
  std::vector<std::vector<std::size_t>> partition;  // 0-based term indices per site
};
Scenario parse_scenario(std::string_view text);
std::vector<SiteInput> split_sites(const DnfFormula& f, const std::vector<std::vector<std::size_t>>& partition);

}  // namespace f0mc
