#include "f0mc/hashing.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "f0mc/error.hpp"
#include "f0mc/rng.hpp"

namespace f0mc {

namespace {

void check_affine_shape(std::size_t n, std::size_t m) {
  if (n == 0 || n > BitString::kMaxBits || m > BitString::kMaxBits) {
    fail(ErrorCode::kUnsupportedHash, "affine hash " + std::to_string(n) + " -> " + std::to_string(m) +
                                          " bits outside the supported widths (n in 1.." +
                                          std::to_string(BitString::kMaxBits) + ")");
  }
}

BitString bits_from_vector(const std::vector<bool>& bits, std::size_t begin, std::size_t count) {
  BitString out(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (bits[begin + i]) out.set(i);
  }
  return out;
}

void append_bits(std::vector<bool>& out, const BitString& s) {
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.test(i));
}

std::size_t parse_size_field(std::string_view token, std::string_view key) {
  if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=') {
    fail(ErrorCode::kParse, "expected " + std::string(key) + "=<int> in hash text, got '" + std::string(token) + "'");
  }
  std::size_t value = 0;
  const char* first = token.data() + key.size() + 1;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(ErrorCode::kParse, "bad integer in '" + std::string(token) + "'");
  return value;
}

std::string_view hex_field(std::string_view token, std::string_view key) {
  if (!token.starts_with(key) || token.size() < key.size() + 1 || token[key.size()] != '=') {
    fail(ErrorCode::kParse, "expected " + std::string(key) + "=<hex> in hash text, got '" + std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

std::string_view family_name(HashFamily family) {
  switch (family) {
    case HashFamily::kToeplitz: return "toeplitz";
    case HashFamily::kXor: return "xor";
    case HashFamily::kPoly: return "poly";
  }
  return "?";
}

HashFamily parse_family(std::string_view name) {
  if (name == "toeplitz") return HashFamily::kToeplitz;
  if (name == "xor") return HashFamily::kXor;
  if (name == "poly") return HashFamily::kPoly;
  fail(ErrorCode::kUnsupportedHash, "unknown hash family '" + std::string(name) + "'");
}

Hash Hash::toeplitz(std::size_t n, std::size_t m, std::vector<bool> diagonal, BitString b) {
  check_affine_shape(n, m);
  if (diagonal.size() != m + n - 1 || b.size() != m) {
    fail(ErrorCode::kWidthMismatch, "Toeplitz parameters need m + n - 1 diagonal bits and m offset bits");
  }
  Hash h;
  h.family_ = HashFamily::kToeplitz;
  h.n_ = n;
  h.m_ = m;
  h.a_ = BitMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (diagonal[i + n - 1 - j]) h.a_.set(i, j);
    }
  }
  h.b_ = std::move(b);
  h.diagonal_ = std::move(diagonal);
  h.seal();
  return h;
}

Hash Hash::affine(BitMatrix a, BitString b) {
  check_affine_shape(a.cols(), a.rows());
  if (b.size() != a.rows()) fail(ErrorCode::kWidthMismatch, "offset length differs from matrix height");
  Hash h;
  h.family_ = HashFamily::kXor;
  h.n_ = a.cols();
  h.m_ = a.rows();
  h.a_ = std::move(a);
  h.b_ = std::move(b);
  h.seal();
  return h;
}

Hash Hash::poly(std::size_t n, std::vector<GF2nElement> coeffs) {
  if (n == 0 || n > kMaxFieldDegree) {
    fail(ErrorCode::kUnsupportedHash, "polynomial hash needs 1 <= n <= " + std::to_string(kMaxFieldDegree));
  }
  if (coeffs.empty()) fail(ErrorCode::kInvalidArgument, "polynomial hash needs at least one coefficient");
  for (const GF2nElement& c : coeffs) {
    if (c.degree != n) fail(ErrorCode::kModulusMismatch, "coefficient field differs from GF(2^n)");
  }
  Hash h;
  h.family_ = HashFamily::kPoly;
  h.n_ = n;
  h.m_ = n;
  for (const GF2nElement& c : coeffs) h.coeff_values_.push_back(c.value);
  h.field_ = GF2nField(static_cast<unsigned>(n));
  h.coeffs_ = std::move(coeffs);
  h.seal();
  return h;
}

Hash Hash::sample_toeplitz(std::size_t n, std::size_t m, Rng& rng) {
  check_affine_shape(n, m);
  std::vector<bool> diagonal(m + n - 1);
  for (std::size_t k = 0; k < diagonal.size(); ++k) diagonal[k] = rng.next_bit();
  BitString b(m);
  for (std::size_t i = 0; i < m; ++i) b.set(i, rng.next_bit());
  return toeplitz(n, m, std::move(diagonal), b);
}

Hash Hash::sample_xor(std::size_t n, std::size_t m, Rng& rng) {
  check_affine_shape(n, m);
  BitMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, rng.next_bit());
  }
  BitString b(m);
  for (std::size_t i = 0; i < m; ++i) b.set(i, rng.next_bit());
  return affine(std::move(a), b);
}

Hash Hash::sample_poly(std::size_t n, std::size_t s, Rng& rng) {
  if (n == 0 || n > kMaxFieldDegree) {
    fail(ErrorCode::kUnsupportedHash, "polynomial hash needs 1 <= n <= " + std::to_string(kMaxFieldDegree));
  }
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<GF2nElement> coeffs;
  coeffs.reserve(s + 1);
  for (std::size_t i = 0; i <= s; ++i) coeffs.push_back(GF2nElement{rng.next_u64() & mask, static_cast<unsigned>(n)});
  return poly(n, std::move(coeffs));
}

void Hash::seal() {
  std::uint64_t f = 0x68617368ULL ^ (static_cast<std::uint64_t>(family_) << 56) ^ (n_ << 16) ^ m_;
  auto absorb = [&f](std::uint64_t w) {
    f ^= w + 0x9e3779b97f4a7c15ULL + (f << 6) + (f >> 2);
    f *= 0xff51afd7ed558ccdULL;
    f ^= f >> 33;
  };
  if (family_ == HashFamily::kPoly) {
    for (std::uint64_t c : coeff_values_) absorb(c);
  } else {
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::uint64_t w : a_.row(r).words()) absorb(w);
    }
    for (std::uint64_t w : b_.words()) absorb(w);
  }
  fingerprint_ = f;
}

const BitMatrix& Hash::matrix() const {
  if (!is_affine()) fail(ErrorCode::kUnsupportedHash, "polynomial hash has no matrix form");
  return a_;
}

const BitString& Hash::offset() const {
  if (!is_affine()) fail(ErrorCode::kUnsupportedHash, "polynomial hash has no offset vector");
  return b_;
}

const std::vector<GF2nElement>& Hash::coefficients() const {
  if (is_affine()) fail(ErrorCode::kUnsupportedHash, "affine hash has no polynomial coefficients");
  return coeffs_;
}

BitString Hash::eval(const BitString& x) const {
  if (x.size() != n_) {
    fail(ErrorCode::kWidthMismatch,
         "hash input has " + std::to_string(x.size()) + " bits, expected " + std::to_string(n_));
  }
  if (family_ == HashFamily::kPoly) {
    return BitString::from_uint(eval_poly_value(x.to_uint()), n_);
  }
  BitString out = b_;
  for (std::size_t r = 0; r < m_; ++r) {
    if (a_.row(r).dot(x)) out.flip(r);
  }
  return out;
}

Hash Hash::prefix(std::size_t bits) const {
  if (family_ == HashFamily::kPoly) fail(ErrorCode::kUnsupportedHash, "prefix slicing is not defined for polynomial hashes");
  if (bits > m_) {
    fail(ErrorCode::kInvalidArgument,
         "prefix of " + std::to_string(bits) + " bits from a " + std::to_string(m_) + "-bit hash");
  }
  if (family_ == HashFamily::kToeplitz) {
    std::vector<bool> diagonal(diagonal_.begin(), diagonal_.begin() + static_cast<std::ptrdiff_t>(bits + n_ - 1));
    return toeplitz(n_, bits, std::move(diagonal), b_.prefix(bits));
  }
  return affine(a_.top_rows(bits), b_.prefix(bits));
}

std::size_t Hash::parameter_bits() const {
  switch (family_) {
    case HashFamily::kToeplitz: return diagonal_.size() + m_;
    case HashFamily::kXor: return m_ * n_ + m_;
    case HashFamily::kPoly: return coeffs_.size() * n_;
  }
  return 0;
}

std::vector<bool> Hash::parameters() const {
  std::vector<bool> out;
  out.reserve(parameter_bits());
  switch (family_) {
    case HashFamily::kToeplitz:
      out = diagonal_;
      append_bits(out, b_);
      break;
    case HashFamily::kXor:
      for (std::size_t r = 0; r < m_; ++r) append_bits(out, a_.row(r));
      append_bits(out, b_);
      break;
    case HashFamily::kPoly:
      for (const GF2nElement& c : coeffs_) append_bits(out, c.to_bits());
      break;
  }
  return out;
}

std::string Hash::serialize() const {
  std::ostringstream os;
  os << family_name(family_) << " n=" << n_;
  if (family_ == HashFamily::kPoly) {
    os << " s=" << degree() << " c=" << bits_to_hex(parameters());
    return os.str();
  }
  std::vector<bool> params = parameters();
  const std::size_t a_bits = params.size() - m_;
  std::vector<bool> a(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(a_bits));
  std::vector<bool> b(params.begin() + static_cast<std::ptrdiff_t>(a_bits), params.end());
  os << " m=" << m_ << " a=" << bits_to_hex(a) << " b=" << bits_to_hex(b);
  return os.str();
}

Hash Hash::deserialize(std::string_view text) {
  std::vector<std::string_view> tokens;
  while (!text.empty()) {
    const std::size_t start = text.find_first_not_of(' ');
    if (start == std::string_view::npos) break;
    text.remove_prefix(start);
    const std::size_t end = text.find(' ');
    tokens.push_back(text.substr(0, end));
    text.remove_prefix(end == std::string_view::npos ? text.size() : end);
  }
  if (tokens.empty()) fail(ErrorCode::kParse, "empty hash text");
  const HashFamily family = parse_family(tokens[0]);
  if (family == HashFamily::kPoly) {
    if (tokens.size() != 4) fail(ErrorCode::kParse, "poly hash text needs n=, s=, c= fields");
    const std::size_t n = parse_size_field(tokens[1], "n");
    const std::size_t s = parse_size_field(tokens[2], "s");
    if (n == 0 || n > kMaxFieldDegree) fail(ErrorCode::kUnsupportedHash, "poly hash width out of range");
    const std::vector<bool> bits = hex_to_bits(hex_field(tokens[3], "c"), (s + 1) * n);
    std::vector<GF2nElement> coeffs;
    for (std::size_t i = 0; i <= s; ++i) coeffs.push_back(GF2nElement::from_bits(bits_from_vector(bits, i * n, n)));
    return poly(n, std::move(coeffs));
  }
  if (tokens.size() != 5) fail(ErrorCode::kParse, "affine hash text needs n=, m=, a=, b= fields");
  const std::size_t n = parse_size_field(tokens[1], "n");
  const std::size_t m = parse_size_field(tokens[2], "m");
  check_affine_shape(n, m);
  const BitString b = bits_from_vector(hex_to_bits(hex_field(tokens[4], "b"), m), 0, m);
  if (family == HashFamily::kToeplitz) {
    return toeplitz(n, m, hex_to_bits(hex_field(tokens[3], "a"), m + n - 1), b);
  }
  const std::vector<bool> a_bits = hex_to_bits(hex_field(tokens[3], "a"), m * n);
  BitMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, a_bits[i * n + j]);
  }
  return affine(std::move(a), b);
}

Hash Hash::from_parameters(HashFamily family, std::size_t n, std::size_t shape, const std::vector<bool>& bits) {
  if (family == HashFamily::kPoly) {
    if (bits.size() != (shape + 1) * n) fail(ErrorCode::kWidthMismatch, "poly parameters need (s + 1) n bits");
    std::vector<GF2nElement> coeffs;
    for (std::size_t i = 0; i <= shape; ++i) coeffs.push_back(GF2nElement::from_bits(bits_from_vector(bits, i * n, n)));
    return poly(n, std::move(coeffs));
  }
  const std::size_t m = shape;
  check_affine_shape(n, m);
  const std::size_t a_bits = family == HashFamily::kToeplitz ? m + n - 1 : m * n;
  if (bits.size() != a_bits + m) fail(ErrorCode::kWidthMismatch, "affine parameter bit count does not match the shape");
  const BitString b = bits_from_vector(bits, a_bits, m);
  if (family == HashFamily::kToeplitz) return toeplitz(n, m, std::vector<bool>(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(a_bits)), b);
  BitMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, bits[i * n + j]);
  }
  return affine(std::move(a), b);
}

bool operator==(const Hash& a, const Hash& b) {
  return a.family_ == b.family_ && a.n_ == b.n_ && a.m_ == b.m_ && a.a_ == b.a_ && a.b_ == b.b_ &&
         a.coeffs_ == b.coeffs_;
}

PolyGrid::PolyGrid(const HashCollection& h) : n(h.n), cells(h.entries.size()), field(static_cast<unsigned>(h.n)) {
  if (h.family != HashFamily::kPoly) fail(ErrorCode::kUnsupportedHash, "poly grid needs polynomial hashes");
  terms = h.entries.empty() ? 0 : h.entries[0].coefficients().size();
  coeffs.reserve(cells * terms);
  for (const Hash& e : h.entries) {
    if (e.coefficients().size() != terms) fail(ErrorCode::kInvalidArgument, "poly grid members differ in degree");
    for (const GF2nElement& c : e.coefficients()) coeffs.push_back(c.value);
  }
}

std::size_t poly_degree_for(double epsilon) {
  const double s = std::ceil(10.0 * std::log(1.0 / epsilon));
  return s < 2.0 ? 2 : static_cast<std::size_t>(s);
}

HashCollection pick_hash_functions(HashFamily family, std::size_t n, std::size_t m, std::size_t count,
                                   std::uint64_t seed, std::uint64_t stream) {
  return pick_hash_grid(family, n, m, count, 1, seed, stream);
}

HashCollection pick_hash_grid(HashFamily family, std::size_t n, std::size_t m, std::size_t rows, std::size_t cols,
                              std::uint64_t seed, std::uint64_t stream) {
  if (rows == 0 || cols == 0) fail(ErrorCode::kInvalidArgument, "hash collection needs at least one entry");
  if (family != HashFamily::kPoly && m == 0) fail(ErrorCode::kInvalidArgument, "hash output width must be >= 1");
  HashCollection out;
  out.family = family;
  out.n = n;
  out.m = family == HashFamily::kPoly ? n : m;
  out.rows = rows;
  out.cols = cols;
  out.entries.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    Rng rng(seed, Rng::substream(stream, k));
    switch (family) {
      case HashFamily::kToeplitz: out.entries.push_back(Hash::sample_toeplitz(n, m, rng)); break;
      case HashFamily::kXor: out.entries.push_back(Hash::sample_xor(n, m, rng)); break;
      case HashFamily::kPoly: out.entries.push_back(Hash::sample_poly(n, m, rng)); break;
    }
  }
  return out;
}

std::string bits_to_hex(const std::vector<bool>& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (bits.size() + 3) / 4;
  const std::size_t pad = digits * 4 - bits.size();
  std::string s(digits == 0 ? 1 : digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    int v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t padded = d * 4 + k;
      v <<= 1;
      if (padded >= pad && bits[padded - pad]) v |= 1;
    }
    s[d] = kDigits[v];
  }
  return s;
}

std::vector<bool> hex_to_bits(std::string_view hex, std::size_t count) {
  std::vector<bool> out(count, false);
  std::size_t bit = count;
  for (std::size_t k = hex.size(); k-- > 0;) {
    const char c = hex[k];
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      fail(ErrorCode::kParse, "invalid hex digit '" + std::string(1, c) + "'");
    }
    for (int b = 0; b < 4; ++b) {
      if (((v >> b) & 1) == 0) continue;
      if (bit < static_cast<std::size_t>(b) + 1) fail(ErrorCode::kParse, "hex value wider than " + std::to_string(count) + " bits");
      out[bit - 1 - static_cast<std::size_t>(b)] = true;
    }
    bit = bit >= 4 ? bit - 4 : 0;
  }
  return out;
}

}  // namespace f0mc
