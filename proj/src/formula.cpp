#include "f0mc/formula.hpp"

#include <bit>
#include <charconv>
#include <sstream>

#include "f0mc/error.hpp"
#include "f0mc/hashing.hpp"

namespace f0mc {

namespace {

void check_var(std::size_t n, const Literal& lit) {
  if (lit.var >= n) {
    fail(ErrorCode::kInvalidArgument,
         "variable " + std::to_string(lit.var + 1) + " out of range for " + std::to_string(n) + " variables");
  }
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xff51afd7ed558ccdULL;
  return h ^ (h >> 33);
}

std::uint64_t mix_bits(std::uint64_t h, const BitString& b) {
  for (std::uint64_t w : b.words()) h = mix(h, w);
  return h;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap || n > 62) {
    fail(ErrorCode::kBruteForceCap, "brute-force enumeration over " + std::to_string(n) +
                                        " variables exceeds the cap of " + std::to_string(cap) +
                                        "; use an estimator instead");
  }
}

// Bitmap of satisfying assignments, indexed by MSB-first value.
std::vector<std::uint64_t> dnf_bitmap(const DnfFormula& f) {
  const std::size_t n = f.num_vars();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint64_t> bitmap((total + 63) / 64, 0);
  const std::uint64_t all = total - 1;
  for (const Term& t : f.terms()) {
    const std::uint64_t care = n == 0 ? 0 : t.care().to_uint();
    const std::uint64_t value = n == 0 ? 0 : t.value().to_uint();
    const std::uint64_t free = all & ~care;
    // Walk every submask of the free variables.
    std::uint64_t s = 0;
    while (true) {
      const std::uint64_t x = value | s;
      bitmap[x >> 6] |= std::uint64_t{1} << (x & 63);
      if (s == free) break;
      s = (s - free) & free;
    }
  }
  return bitmap;
}

std::vector<std::uint64_t> cnf_bitmap(const CnfFormula& f) {
  const std::size_t n = f.num_vars();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint64_t> bitmap((total + 63) / 64, 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
  for (const Clause& c : f.clauses()) {
    masks.emplace_back(n == 0 ? 0 : c.positive().to_uint(), n == 0 ? 0 : c.negative().to_uint());
  }
  for (std::uint64_t x = 0; x < total; ++x) {
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if ((x & pos) == 0 && (x & neg) == neg) {
        ok = false;
        break;
      }
    }
    if (ok) bitmap[x >> 6] |= std::uint64_t{1} << (x & 63);
  }
  return bitmap;
}

std::vector<std::uint64_t> bitmap_values(const std::vector<std::uint64_t>& bitmap) {
  std::vector<std::uint64_t> out;
  for (std::size_t w = 0; w < bitmap.size(); ++w) {
    std::uint64_t word = bitmap[w];
    while (word != 0) {
      out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::uint64_t bitmap_count(const std::vector<std::uint64_t>& bitmap) {
  std::uint64_t total = 0;
  for (std::uint64_t w : bitmap) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::vector<BitString> to_bitstrings(const std::vector<std::uint64_t>& values, std::size_t n) {
  std::vector<BitString> out;
  out.reserve(values.size());
  for (std::uint64_t v : values) out.push_back(BitString::from_uint(v, n));
  return out;
}

// Tokenizer for the DIMACS-like formats.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParse, "line " + std::to_string(tok_line_) + ", column " + std::to_string(tok_col_) + ": " + what);
  }

  // Next whitespace-separated token, skipping comment lines. Empty at end.
  std::string_view next() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        at_line_start_ = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
        continue;
      }
      if (at_line_start_ && (c == 'c' || c == '#' || c == '%')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      at_line_start_ = false;
      tok_line_ = line_;
      tok_col_ = col_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\n' &&
             text_[pos_] != '\r') {
        ++pos_;
        ++col_;
      }
      return text_.substr(start, pos_ - start);
    }
    tok_line_ = line_;
    tok_col_ = col_;
    return {};
  }

  long long integer(std::string_view tok, const char* what) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      error(std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t tok_line_ = 1;
  std::size_t tok_col_ = 1;
  bool at_line_start_ = true;
};

struct RawFormula {
  std::size_t n = 0;
  std::vector<std::vector<Literal>> groups;
};

RawFormula parse_raw(std::string_view text, std::string_view kind) {
  Reader r(text);
  if (r.next() != "p") r.error("expected header 'p " + std::string(kind) + " <vars> <count>'");
  if (r.next() != kind) r.error("expected format '" + std::string(kind) + "' in header");
  const long long n = r.integer(r.next(), "variable count");
  if (n < 0 || n > static_cast<long long>(BitString::kMaxBits)) {
    r.error("variable count must be in 0.." + std::to_string(BitString::kMaxBits));
  }
  const long long k = r.integer(r.next(), "term/clause count");
  if (k < 0) r.error("negative term/clause count");
  RawFormula raw;
  raw.n = static_cast<std::size_t>(n);
  std::vector<Literal> current;
  std::vector<bool> seen_pos(raw.n, false);
  std::vector<bool> seen_neg(raw.n, false);
  while (true) {
    const std::string_view tok = r.next();
    if (tok.empty()) break;
    const long long v = r.integer(tok, "literal");
    if (v == 0) {
      if (static_cast<long long>(raw.groups.size()) == k) r.error("more than the declared " + std::to_string(k) + " entries");
      for (const Literal& lit : current) {
        seen_pos[lit.var] = false;
        seen_neg[lit.var] = false;
      }
      raw.groups.push_back(std::move(current));
      current.clear();
      continue;
    }
    const long long mag = v < 0 ? -v : v;
    if (mag > n) r.error("variable " + std::to_string(mag) + " out of range 1.." + std::to_string(n));
    const Literal lit{static_cast<std::size_t>(mag - 1), v > 0};
    auto& same = lit.positive ? seen_pos : seen_neg;
    auto& other = lit.positive ? seen_neg : seen_pos;
    if (same[lit.var]) r.error("duplicate literal " + std::to_string(v));
    if (other[lit.var] && kind == "dnf") r.error("variable " + std::to_string(mag) + " appears with both signs in a term");
    same[lit.var] = true;
    current.push_back(lit);
  }
  if (!current.empty()) r.error("last entry is not terminated by 0");
  if (static_cast<long long>(raw.groups.size()) != k) {
    r.error("header declares " + std::to_string(k) + " entries but " + std::to_string(raw.groups.size()) + " were given");
  }
  return raw;
}

template <class Group>
void write_group(std::ostringstream& os, const Group& g) {
  for (const Literal& lit : g.literals()) {
    os << (lit.positive ? "" : "-") << lit.var + 1 << ' ';
  }
  os << "0\n";
}

}  // namespace

Term::Term(std::size_t n, const std::vector<Literal>& literals) : care_(n), value_(n) {
  for (const Literal& lit : literals) {
    check_var(n, lit);
    if (care_.test(lit.var)) {
      fail(ErrorCode::kInvalidArgument, "variable " + std::to_string(lit.var + 1) + " appears twice in a term");
    }
    care_.set(lit.var);
    value_.set(lit.var, lit.positive);
  }
  width_ = literals.size();
}

Term Term::from_masks(BitString care, BitString value) {
  if (care.size() != value.size()) fail(ErrorCode::kWidthMismatch, "term masks differ in width");
  if ((value & care) != value) fail(ErrorCode::kInvalidArgument, "term value set outside its care mask");
  Term t;
  t.width_ = care.popcount();
  t.care_ = std::move(care);
  t.value_ = std::move(value);
  return t;
}

std::vector<Literal> Term::literals() const {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < care_.size(); ++i) {
    if (care_.test(i)) out.push_back(Literal{i, value_.test(i)});
  }
  return out;
}

Clause::Clause(std::size_t n, const std::vector<Literal>& literals) : pos_(n), neg_(n) {
  for (const Literal& lit : literals) {
    check_var(n, lit);
    BitString& side = lit.positive ? pos_ : neg_;
    if (side.test(lit.var)) {
      fail(ErrorCode::kInvalidArgument, "literal on variable " + std::to_string(lit.var + 1) + " repeated in a clause");
    }
    side.set(lit.var);
  }
}

std::vector<Literal> Clause::literals() const {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (pos_.test(i)) out.push_back(Literal{i, true});
    if (neg_.test(i)) out.push_back(Literal{i, false});
  }
  return out;
}

DnfFormula::DnfFormula(std::size_t n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n > BitString::kMaxBits) fail(ErrorCode::kInvalidArgument, "too many variables");
  fingerprint_ = mix(0x646e66, n);
  for (const Term& t : terms_) {
    if (t.num_vars() != n) fail(ErrorCode::kWidthMismatch, "term width differs from formula variable count");
    fingerprint_ = mix_bits(mix_bits(fingerprint_, t.care()), t.value());
  }
  fingerprint_ = mix(fingerprint_, terms_.size());
}

bool DnfFormula::satisfied_by(const BitString& x) const noexcept {
  for (const Term& t : terms_) {
    if (t.satisfied_by(x)) return true;
  }
  return false;
}

DnfFormula DnfFormula::subformula(const std::vector<std::size_t>& indices) const {
  std::vector<Term> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= terms_.size()) fail(ErrorCode::kInvalidArgument, "term index " + std::to_string(i + 1) + " out of range");
    picked.push_back(terms_[i]);
  }
  return DnfFormula(n_, std::move(picked));
}

CnfFormula::CnfFormula(std::size_t n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
  if (n > BitString::kMaxBits) fail(ErrorCode::kInvalidArgument, "too many variables");
  fingerprint_ = mix(0x636e66, n);
  for (const Clause& c : clauses_) {
    if (c.positive().size() != n) fail(ErrorCode::kWidthMismatch, "clause width differs from formula variable count");
    fingerprint_ = mix_bits(mix_bits(fingerprint_, c.positive()), c.negative());
  }
  fingerprint_ = mix(fingerprint_, clauses_.size());
}

bool CnfFormula::satisfied_by(const BitString& x) const noexcept {
  for (const Clause& c : clauses_) {
    if (!c.satisfied_by(x)) return false;
  }
  return true;
}

DnfFormula parse_dnf(std::string_view text) {
  RawFormula raw = parse_raw(text, "dnf");
  std::vector<Term> terms;
  terms.reserve(raw.groups.size());
  for (const auto& g : raw.groups) terms.emplace_back(raw.n, g);
  return DnfFormula(raw.n, std::move(terms));
}

CnfFormula parse_cnf(std::string_view text) {
  RawFormula raw = parse_raw(text, "cnf");
  std::vector<Clause> clauses;
  clauses.reserve(raw.groups.size());
  for (const auto& g : raw.groups) clauses.emplace_back(raw.n, g);
  return CnfFormula(raw.n, std::move(clauses));
}

std::string serialize(const DnfFormula& f) {
  std::ostringstream os;
  os << "p dnf " << f.num_vars() << ' ' << f.num_terms() << '\n';
  for (const Term& t : f.terms()) write_group(os, t);
  return os.str();
}

std::string serialize(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) write_group(os, c);
  return os.str();
}

BitString TermAffineForm::lift(const BitString& free_values) const {
  if (free_values.size() != free_vars.size()) fail(ErrorCode::kWidthMismatch, "free-variable vector has the wrong width");
  BitString x = fixed;
  for (std::size_t k = 0; k < free_vars.size(); ++k) {
    if (free_values.test(k)) x.set(free_vars[k]);
  }
  return x;
}

TermAffineForm term_affine_form(const Term& term, const Hash& h) {
  const BitMatrix& a = h.matrix();
  const std::size_t n = term.num_vars();
  if (h.input_bits() != n) fail(ErrorCode::kWidthMismatch, "hash input width differs from term variable count");
  TermAffineForm form;
  form.fixed = term.value();
  form.b = h.offset();
  for (std::size_t v = 0; v < n; ++v) {
    if (!term.care().test(v)) {
      form.free_vars.push_back(v);
    } else if (term.value().test(v)) {
      form.b ^= a.column(v);
    }
  }
  std::vector<BitString> rows;
  rows.reserve(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    BitString row(form.free_vars.size());
    for (std::size_t k = 0; k < form.free_vars.size(); ++k) {
      if (a.get(r, form.free_vars[k])) row.set(k);
    }
    rows.push_back(row);
  }
  form.a = BitMatrix(std::move(rows), form.free_vars.size());
  return form;
}

std::uint64_t brute_count(const DnfFormula& f, std::size_t cap) {
  check_cap(f.num_vars(), cap);
  return bitmap_count(dnf_bitmap(f));
}

std::uint64_t brute_count(const CnfFormula& f, std::size_t cap) {
  check_cap(f.num_vars(), cap);
  return bitmap_count(cnf_bitmap(f));
}

std::vector<std::uint64_t> brute_solution_values(const DnfFormula& f, std::size_t cap) {
  check_cap(f.num_vars(), cap);
  return bitmap_values(dnf_bitmap(f));
}

std::vector<std::uint64_t> brute_solution_values(const CnfFormula& f, std::size_t cap) {
  check_cap(f.num_vars(), cap);
  return bitmap_values(cnf_bitmap(f));
}

std::vector<BitString> brute_solutions(const DnfFormula& f, std::size_t cap) {
  return to_bitstrings(brute_solution_values(f, cap), f.num_vars());
}

std::vector<BitString> brute_solutions(const CnfFormula& f, std::size_t cap) {
  return to_bitstrings(brute_solution_values(f, cap), f.num_vars());
}

}  // namespace f0mc
