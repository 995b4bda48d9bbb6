#include "f0mc/textio.hpp"

#include <charconv>

#include "f0mc/error.hpp"

namespace f0mc {

std::string_view trim(std::string_view s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i == s.size()) break;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

LineReader::LineReader(std::string_view text) : text_(text) {}

std::optional<std::string_view> LineReader::next() {
  prev_pos_ = pos_;
  prev_line_ = line_;
  while (pos_ < text_.size()) {
    const std::size_t end = text_.find('\n', pos_);
    const std::string_view raw = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
    pos_ = end == std::string_view::npos ? text_.size() : end + 1;
    ++line_;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    return line;
  }
  return std::nullopt;
}

void LineReader::unread() {
  pos_ = prev_pos_;
  line_ = prev_line_;
}

void LineReader::error(const std::string& what) const {
  fail(ErrorCode::kParse, "line " + std::to_string(line_) + ": " + what);
}

std::map<std::string, std::string, std::less<>> LineReader::header() {
  const auto line = next();
  if (!line) error("missing header line");
  std::map<std::string, std::string, std::less<>> fields;
  for (std::string_view tok : split_ws(*line)) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) error("header field '" + std::string(tok) + "' is not key=value");
    fields.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
  }
  return fields;
}

std::size_t LineReader::require_size(const std::map<std::string, std::string, std::less<>>& fields,
                                     std::string_view key) const {
  const auto it = fields.find(key);
  if (it == fields.end()) error("header lacks " + std::string(key) + "=<int>");
  return static_cast<std::size_t>(parse_uint(it->second, key));
}

std::size_t LineReader::header_size(std::string_view key) { return require_size(header(), key); }

std::uint64_t LineReader::parse_uint(std::string_view token, std::string_view what) const {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    error("expected unsigned integer for " + std::string(what) + ", got '" + std::string(token) + "'");
  }
  return v;
}

BitString LineReader::parse_element(std::string_view token, std::size_t n) const {
  try {
    if (token.starts_with("0b") || token.starts_with("0B")) {
      const BitString raw = BitString::parse_binary(token);
      if (raw.size() > n) {
        // Leading zeros beyond n are harmless; anything else overflows.
        const std::size_t extra = raw.size() - n;
        for (std::size_t i = 0; i < extra; ++i) {
          if (raw.test(i)) error("element " + std::string(token) + " wider than n=" + std::to_string(n));
        }
        return raw.slice(extra, n);
      }
      BitString out(n);
      for (std::size_t i = 0; i < raw.size(); ++i) out.set(n - raw.size() + i, raw.test(i));
      return out;
    }
    if (token.starts_with("0x") || token.starts_with("0X")) return BitString::parse_hex(token, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    error(e.what());
  }
  const std::uint64_t v = parse_uint(token, "element");
  if (n < 64 && (v >> n) != 0) error("element " + std::string(token) + " does not fit in n=" + std::to_string(n) + " bits");
  if (n > 64) {
    BitString out(n);
    const BitString low = BitString::from_uint(v, 64);
    for (std::size_t i = 0; i < 64; ++i) out.set(n - 64 + i, low.test(i));
    return out;
  }
  return BitString::from_uint(v, n);
}

}  // namespace f0mc
