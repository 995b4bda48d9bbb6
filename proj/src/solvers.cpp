#include "f0mc/solvers.hpp"

#include <algorithm>
#include <unordered_set>

#include "f0mc/error.hpp"
#include "f0mc/f0stream.hpp"

namespace f0mc {

AffineImage::AffineImage(const BitMatrix& m, const BitString& offset) : min_(offset) {
  if (offset.size() != m.rows()) fail(ErrorCode::kWidthMismatch, "image offset length differs from matrix height");
  for (std::size_t c = 0; c < m.cols(); ++c) {
    BitString v = reduce(m.column(c));
    if (v.none()) continue;
    const std::size_t pivot = v.leading_zeros();
    // Clear the new pivot from the existing vectors to stay fully reduced.
    for (BitString& b : basis_) {
      if (b.test(pivot)) b ^= v;
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, pivot);
    basis_.insert(basis_.begin() + pos, v);
  }
  min_ = reduce(min_);
}

BitString AffineImage::reduce(BitString v) const {
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (v.test(pivots_[k])) v ^= basis_[k];
  }
  return v;
}

bool AffineImage::contains(const BitString& y) const {
  if (y.size() != min_.size()) return false;
  return reduce(y ^ min_).none();
}

bool AffineImage::extendable(const BitString& prefix) const {
  const std::size_t len = prefix.size();
  if (len > min_.size()) return false;
  // Pivots inside the prefix choose their bits freely; the rest must match.
  BitString target = min_.prefix(len) ^ prefix;
  for (std::size_t k = 0; k < basis_.size() && pivots_[k] < len; ++k) {
    if (target.test(pivots_[k])) target ^= basis_[k].prefix(len);
  }
  return target.none();
}

std::optional<BitString> AffineImage::successor(const BitString& y) const {
  for (std::size_t k = basis_.size(); k-- > 0;) {
    if (y.test(pivots_[k])) continue;
    BitString next = y ^ basis_[k];
    for (std::size_t later = k + 1; later < basis_.size(); ++later) {
      if (y.test(pivots_[later])) next ^= basis_[later];
    }
    return next;
  }
  return std::nullopt;
}

std::vector<BitString> AffineImage::smallest(std::size_t count) const {
  std::vector<BitString> out;
  if (count == 0) return out;
  for_each_ascending([&](const BitString& v) {
    out.push_back(v);
    return out.size() < count;
  });
  return out;
}

AffineImage term_image(const Term& term, const Hash& h) {
  const TermAffineForm form = term_affine_form(term, h);
  return AffineImage(form.a, form.b);
}

BoundedResult bounded_sat_dnf(const DnfFormula& f, const Hash& h, std::size_t p) {
  BoundedResult result;
  if (p == 0) return result;
  if (h.input_bits() != f.num_vars()) fail(ErrorCode::kWidthMismatch, "hash input width differs from formula");
  const bool narrow = f.num_vars() <= 64;
  std::unordered_set<std::uint64_t> seen_narrow;
  std::unordered_set<BitString, BitStringHash> seen_wide;
  for (const Term& term : f.terms()) {
    const TermAffineForm form = term_affine_form(term, h);
    // h(x) = 0^m  <=>  A_T x' = b_T
    const SolutionSpace space = gaussian_solve(AffineSystem{form.a, form.b});
    if (!space.consistent) continue;
    for_each_solution(space, ~std::size_t{0}, [&](const BitString& free_values) {
      BitString x = form.lift(free_values);
      const bool fresh = narrow ? seen_narrow.insert(x.to_uint()).second : seen_wide.insert(x).second;
      if (fresh) result.witnesses.push_back(std::move(x));
      return result.witnesses.size() < p;
    });
    if (result.witnesses.size() >= p) break;
  }
  result.count = result.witnesses.size();
  return result;
}

BoundedResult bounded_sat_cnf(const CnfFormula& f, const Hash& h, std::size_t p, NpOracle& oracle) {
  BoundedResult result;
  std::unordered_set<BitString, BitStringHash> blocked;
  while (result.witnesses.size() < p) {
    auto x = oracle.next_solution(f, h, blocked);
    if (!x) break;
    blocked.insert(*x);
    result.witnesses.push_back(*x);
  }
  result.count = result.witnesses.size();
  return result;
}

std::vector<BitString> find_min(const DnfFormula& f, const Hash& h, std::size_t p) {
  std::vector<BitString> buffer;
  merge_min(f, h, p, buffer);
  return buffer;
}

void merge_min(const DnfFormula& f, const Hash& h, std::size_t p, std::vector<BitString>& buffer) {
  if (p == 0) return;
  for (const Term& term : f.terms()) {
    const AffineImage img = term_image(term, h);
    img.for_each_ascending([&](const BitString& v) {
      if (buffer.size() >= p && !(v < buffer.back())) return false;
      insert_smallest(buffer, v, p);
      return true;
    });
  }
}

std::vector<BitString> find_min_cnf(const CnfFormula& f, const Hash& h, std::size_t p, NpOracle& oracle) {
  std::vector<BitString> out;
  std::optional<BitString> lower;
  const std::size_t m = h.output_bits();
  while (out.size() < p) {
    if (!oracle.has_image_above(f, h, BitString(0), lower)) break;
    // Greedy bit-by-bit: keep 0 whenever some image value above `lower` allows it.
    BitString prefix(0);
    for (std::size_t i = 0; i < m; ++i) {
      BitString zero = prefix.concat(BitString(1));
      if (oracle.has_image_above(f, h, zero, lower)) {
        prefix = zero;
      } else {
        BitString one(1);
        one.set(0);
        prefix = prefix.concat(one);
      }
    }
    out.push_back(prefix);
    lower = prefix;
  }
  return out;
}

namespace {

template <class F>
std::size_t max_range(const F& f, const Hash& h, NpOracle& oracle) {
  if (!oracle.has_trailing_zeros(f, h, 0)) fail(ErrorCode::kUnsatisfiable, "formula has no solutions");
  std::size_t lo = 0;
  std::size_t hi = h.output_bits();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (oracle.has_trailing_zeros(f, h, mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace

std::size_t find_max_range(const CnfFormula& f, const Hash& h, NpOracle& oracle) { return max_range(f, h, oracle); }

std::size_t find_max_range(const DnfFormula& f, const Hash& h, NpOracle& oracle) { return max_range(f, h, oracle); }

std::optional<AffineImage> affine_image(const BitMatrix& a, const BitString& b, const Hash& h) {
  if (a.cols() != h.input_bits()) fail(ErrorCode::kWidthMismatch, "affine system width differs from hash input");
  const SolutionSpace space = gaussian_solve(AffineSystem{a, b});
  if (!space.consistent) return std::nullopt;
  // x = particular + N z, so h(x) = (H N) z + h(particular).
  const BitMatrix& hm = h.matrix();
  BitMatrix image_matrix(hm.rows(), space.dimension());
  for (std::size_t k = 0; k < space.dimension(); ++k) {
    const BitString col = hm.multiply(space.nullspace_basis[k]);
    for (std::size_t r = 0; r < hm.rows(); ++r) image_matrix.set(r, k, col.test(r));
  }
  return AffineImage(image_matrix, h.eval(space.particular));
}

std::vector<BitString> affine_find_min(const BitMatrix& a, const BitString& b, const Hash& h, std::size_t t) {
  const auto img = affine_image(a, b, h);
  if (!img) return {};
  return img->smallest(t);
}

}  // namespace f0mc
