#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "f0mc/bitstring.hpp"

namespace f0mc {

/// Line-oriented reader shared by the stream file formats. Skips blank lines
/// and lines whose first non-space character is '#'; errors name the line.
class LineReader {
 public:
  explicit LineReader(std::string_view text);

  /// Next content line, trimmed; nullopt at end.
  std::optional<std::string_view> next();
  /// Puts the last line back so the following next() returns it again.
  void unread();
  std::size_t line_number() const noexcept { return line_; }

  [[noreturn]] void error(const std::string& what) const;

  /// Reads the first content line as "k1=v1 k2=v2 ..." and returns the map.
  std::map<std::string, std::string, std::less<>> header();
  /// Reads a header with a single required key, e.g. "n=8".
  std::size_t header_size(std::string_view key);
  std::size_t require_size(const std::map<std::string, std::string, std::less<>>& fields, std::string_view key) const;

  /// 0b<binary>, 0x<hex> or decimal, right-aligned into n bits.
  BitString parse_element(std::string_view token, std::size_t n) const;
  std::uint64_t parse_uint(std::string_view token, std::string_view what) const;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
  std::size_t prev_pos_ = 0;
  std::size_t prev_line_ = 0;
};

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_on(std::string_view s, char sep);

}  // namespace f0mc
