#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "f0mc/bitstring.hpp"
#include "f0mc/gf2.hpp"

namespace f0mc {

class Hash;

struct Literal {
  std::size_t var = 0;  // 0-based
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of literals over n variables, stored as a care mask (which
/// variables are fixed) and a value mask (their required values).
class Term {
 public:
  Term() = default;
  /// Throws on an out-of-range variable or a variable listed twice.
  Term(std::size_t n, const std::vector<Literal>& literals);
  /// `value` must be zero outside `care`.
  static Term from_masks(BitString care, BitString value);

  std::size_t num_vars() const noexcept { return care_.size(); }
  std::size_t width() const noexcept { return width_; }
  const BitString& care() const noexcept { return care_; }
  const BitString& value() const noexcept { return value_; }
  std::vector<Literal> literals() const;

  bool satisfied_by(const BitString& x) const noexcept { return ((x & care_) == value_); }

  friend bool operator==(const Term& a, const Term& b) noexcept { return a.care_ == b.care_ && a.value_ == b.value_; }

 private:
  BitString care_;
  BitString value_;
  std::size_t width_ = 0;
};

/// Disjunction of literals. A clause may mention x and not-x together (it is
/// then always true) but not the same literal twice.
class Clause {
 public:
  Clause() = default;
  Clause(std::size_t n, const std::vector<Literal>& literals);

  const BitString& positive() const noexcept { return pos_; }
  const BitString& negative() const noexcept { return neg_; }
  std::vector<Literal> literals() const;
  bool empty() const noexcept { return pos_.none() && neg_.none(); }

  bool satisfied_by(const BitString& x) const noexcept { return (x & pos_).any() || (x & neg_) != neg_; }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  BitString pos_;
  BitString neg_;
};

class DnfFormula {
 public:
  DnfFormula() = default;
  DnfFormula(std::size_t n, std::vector<Term> terms);

  std::size_t num_vars() const noexcept { return n_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const Term& term(std::size_t i) const noexcept { return terms_[i]; }
  /// Cheap identity for caches; equal formulas share it.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  bool satisfied_by(const BitString& x) const noexcept;
  /// Formula over the chosen terms (indices into terms()).
  DnfFormula subformula(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const DnfFormula& a, const DnfFormula& b) noexcept {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
  std::uint64_t fingerprint_ = 0;
};

class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::size_t n, std::vector<Clause> clauses);

  std::size_t num_vars() const noexcept { return n_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  bool satisfied_by(const BitString& x) const noexcept;

  friend bool operator==(const CnfFormula& a, const CnfFormula& b) noexcept {
    return a.n_ == b.n_ && a.clauses_ == b.clauses_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Clause> clauses_;
  std::uint64_t fingerprint_ = 0;
};

/// DIMACS-style text: "p dnf <n> <k>" (or "p cnf"), then k zero-terminated
/// lists of signed 1-based variables. Lines starting with 'c' or '#' are
/// comments. Errors carry "line L, column C".
DnfFormula parse_dnf(std::string_view text);
CnfFormula parse_cnf(std::string_view text);
std::string serialize(const DnfFormula& f);
std::string serialize(const CnfFormula& f);

/// Image of a term's solutions under an affine hash, as an affine map of the
/// term's free variables: {h(x) : x |= T} = {a x' + b : x'}.
struct TermAffineForm {
  BitMatrix a;                          // m x (n - w)
  BitString b;                          // length m
  std::vector<std::size_t> free_vars;   // column k of `a` is variable free_vars[k]
  BitString fixed;                      // the term's forced values, zero elsewhere

  /// Full n-bit assignment from values of the free variables.
  BitString lift(const BitString& free_values) const;
};

TermAffineForm term_affine_form(const Term& term, const Hash& h);

inline constexpr std::size_t kDefaultBruteCap = 24;

/// Exact solution counts and lists by enumerating {0,1}^n; n above `cap`
/// raises kBruteForceCap. Solutions come out in lexicographic order.
std::uint64_t brute_count(const DnfFormula& f, std::size_t cap = kDefaultBruteCap);
std::uint64_t brute_count(const CnfFormula& f, std::size_t cap = kDefaultBruteCap);
std::vector<BitString> brute_solutions(const DnfFormula& f, std::size_t cap = kDefaultBruteCap);
std::vector<BitString> brute_solutions(const CnfFormula& f, std::size_t cap = kDefaultBruteCap);
/// Same lists as integers (MSB-first value of each assignment).
std::vector<std::uint64_t> brute_solution_values(const DnfFormula& f, std::size_t cap = kDefaultBruteCap);
std::vector<std::uint64_t> brute_solution_values(const CnfFormula& f, std::size_t cap = kDefaultBruteCap);

}  // namespace f0mc
