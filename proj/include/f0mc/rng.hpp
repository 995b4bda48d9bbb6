#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace f0mc {

/// Philox4x32-10 counter-based generator. A stream is identified by
/// (seed, stream id); outputs depend only on those and the draw index, so
/// independent rows can be sampled in any order with identical results.
class Rng {
 public:
  static constexpr std::string_view kName = "philox4x32-10/v1";

  Rng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  bool next_bit() noexcept;
  /// Uniform in [0, bound); bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1).
  double uniform01() noexcept;

  /// A derived stream id; used to carve independent sub-streams out of one
  /// logical stream (e.g. per-cell streams inside a row).
  static std::uint64_t substream(std::uint64_t stream, std::uint64_t index) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
  std::uint64_t bit_buffer_ = 0;
  unsigned bits_left_ = 0;
};

}  // namespace f0mc
