#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/twisting.hpp"

namespace kmd {

/// Words of length ≤ W in a graded alphabet, ordered by length and then
/// lexicographically by letter index. Word degrees are sums of letter degrees.
class WordBasis {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  WordBasis(GradedVectorSpace letters, std::size_t max_length) : letters_(std::move(letters)), max_length_(max_length) {
    const std::size_t g = letters_.dim();
    offsets_.push_back(0);
    std::size_t count = 1;
    for (std::size_t l = 0; l <= max_length_; ++l) {
      offsets_.push_back(offsets_.back() + count);
      count = (g == 0) ? 0 : count * g;
    }
    words_.push_back({});
    for (std::size_t l = 1; l <= max_length_ && g > 0; ++l) {
      const std::size_t lo = offsets_[l - 1], hi = offsets_[l];
      for (std::size_t w = lo; w < hi; ++w)
        for (std::uint32_t x = 0; x < g; ++x) {
          auto word = words_[w];
          word.push_back(x);
          words_.push_back(std::move(word));
        }
    }
    for (const auto& w : words_) {
      int deg = 0;
      for (auto x : w) deg += letters_.degree(x);
      degrees_.push_back(deg);
    }
  }

  [[nodiscard]] const GradedVectorSpace& letters() const { return letters_; }
  [[nodiscard]] std::size_t max_length() const { return max_length_; }
  [[nodiscard]] std::size_t size() const { return words_.size(); }
  [[nodiscard]] const std::vector<std::uint32_t>& word(std::size_t w) const { return words_[w]; }
  [[nodiscard]] std::size_t length(std::size_t w) const { return words_[w].size(); }
  [[nodiscard]] int degree(std::size_t w) const { return degrees_[w]; }

  /// Index of a word, or npos if longer than W.
  [[nodiscard]] std::size_t index(const std::vector<std::uint32_t>& word) const {
    if (word.size() > max_length_) return npos;
    std::size_t n = 0;
    for (auto x : word) n = n * letters_.dim() + x;
    return offsets_[word.size()] + n;
  }
  [[nodiscard]] std::size_t letter(std::uint32_t x) const { return index({x}); }

  /// Concatenation, npos if the result is too long.
  [[nodiscard]] std::size_t concat(std::size_t a, std::size_t b) const {
    const auto& u = words_[a];
    const auto& v = words_[b];
    if (u.size() + v.size() > max_length_) return npos;
    std::size_t n = (a - offsets_[u.size()]);
    for (std::size_t k = 0; k < v.size(); ++k) n *= letters_.dim();
    return offsets_[u.size() + v.size()] + n + (b - offsets_[v.size()]);
  }

  [[nodiscard]] std::string label(std::size_t w) const {
    std::string s = "[";
    for (std::size_t k = 0; k < words_[w].size(); ++k) s += (k ? "|" : "") + letters_.label(words_[w][k]);
    return s + "]";
  }

 private:
  GradedVectorSpace letters_;
  std::size_t max_length_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::uint32_t>> words_;
  std::vector<int> degrees_;
};

/// T(V)_{≤W} ⊗ C as a curved dg algebra, with basis (word, coefficient basis
/// vector) in word-major order. The product is
///   (w⊗c)(w'⊗c') = (-1)^{|c||w'|} ww' ⊗ cc'   (zero past length W),
/// d extends the letter differentials as a derivation and adds (-1)^{|w|} w⊗d_C c,
/// and the curvature is h_T ⊗ 1 + 1 ⊗ h_C.
template <Field K>
struct TruncatedTensorAlgebra {
  std::shared_ptr<const WordBasis> words;
  AlgebraPtr<K> coefficient;
  AlgebraPtr<K> algebra;

  [[nodiscard]] std::size_t dim() const { return algebra->dim(); }
  [[nodiscard]] std::size_t index(std::size_t w, std::size_t c) const { return w * coefficient->dim() + c; }
  [[nodiscard]] std::size_t word_of(std::size_t i) const { return i / coefficient->dim(); }
  [[nodiscard]] std::size_t coeff_of(std::size_t i) const { return i % coefficient->dim(); }
  [[nodiscard]] std::size_t arity(std::size_t i) const { return words->length(word_of(i)); }

  /// x ⊗ 1_C for x a combination of words.
  [[nodiscard]] Element<K> lift(const Element<K>& x) const {
    Accumulator<K> acc;
    for (const auto& [w, a] : x)
      for (const auto& [c, u] : coefficient->unit()) acc.add(index(w, c), a * u);
    return acc.finish();
  }
  /// 1 ⊗ c
  [[nodiscard]] Element<K> coefficient_element(const Element<K>& c) const {
    Accumulator<K> acc;
    for (const auto& [j, a] : c) acc.add(index(0, j), a);
    return acc.finish();
  }

  [[nodiscard]] TruncatedTensorAlgebra with_algebra(AlgebraPtr<K> a) const { return {words, coefficient, std::move(a)}; }
};

namespace detail {

/// For each coefficient basis vector c, a degree 0 basis vector u with u·c = c
/// exactly, preferring the unit. Empty if some c has none.
template <Field K>
std::vector<std::size_t> left_idempotents(const CurvedDgAlgebra<K>& c) {
  std::vector<std::size_t> out;
  const auto unit = c.unit_index();
  for (std::size_t j = 0; j < c.dim(); ++j) {
    auto target = Element<K>::single(j);
    std::size_t found = WordBasis::npos;
    if (unit) found = *unit;
    for (std::size_t u = 0; u < c.dim() && found == WordBasis::npos; ++u)
      if (c.degree(u) == 0 && c.product(u, j) == target) found = u;
    if (found == WordBasis::npos) return {};
    out.push_back(found);
  }
  return out;
}

}  // namespace detail

/// Build T(V)_{≤W} ⊗ C. letter_diff[x] is d(x) as a combination of words of
/// length ≥ 1; word_curvature is h_T as a combination of words.
template <Field K>
TruncatedTensorAlgebra<K> build_tensor_algebra(std::shared_ptr<const WordBasis> words, AlgebraPtr<K> coefficient,
                                               const std::vector<Element<K>>& letter_diff,
                                               const Element<K>& word_curvature) {
  const auto& wb = *words;
  const auto& c = *coefficient;
  const std::size_t nw = wb.size(), nc = c.dim(), n = nw * nc;
  if (letter_diff.size() != wb.letters().dim()) throw std::invalid_argument("build_tensor_algebra: one differential per letter");
  for (const auto& dx : letter_diff)
    for (const auto& [w, a] : dx)
      if (wb.length(w) == 0) throw std::invalid_argument("build_tensor_algebra: letter differential has an arity 0 term");
  TruncatedTensorAlgebra<K> t{words, coefficient, nullptr};

  std::vector<BasisElement> basis;
  basis.reserve(n);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t j = 0; j < nc; ++j) {
      std::string label = wb.label(w);
      if (nc > 1 || c.space().label(0) != "1") label += "⊗" + c.space().label(j);
      basis.push_back({std::move(label), wb.degree(w) + c.degree(j)});
    }
  GradedVectorSpace v(std::move(basis));

  std::vector<Element<K>> mult(n * n);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t w2 = 0; w2 < nw; ++w2) {
      const std::size_t ww = wb.concat(w, w2);
      if (ww == WordBasis::npos) continue;
      for (std::size_t j = 0; j < nc; ++j) {
        const bool flip = odd(static_cast<long>(c.degree(j)) * wb.degree(w2));
        for (std::size_t j2 = 0; j2 < nc; ++j2) {
          const auto& cc = c.product(j, j2);
          if (cc.empty()) continue;
          std::vector<typename SparseVec<K>::Term> terms;
          for (const auto& [k, a] : cc) terms.emplace_back(t.index(ww, k), flip ? -a : a);
          mult[t.index(w, j) * n + t.index(w2, j2)] = SparseVec<K>::from_terms(std::move(terms));
        }
      }
    }

  // d on words (coefficient 1): derivation extension of the letter differentials.
  std::vector<Element<K>> dword(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const auto& word = wb.word(w);
    Accumulator<K> acc;
    int prefix_degree = 0;
    for (std::size_t k = 0; k < word.size(); ++k) {
      const K s = sign<K>(prefix_degree);
      std::vector<std::uint32_t> before(word.begin(), word.begin() + static_cast<long>(k));
      std::vector<std::uint32_t> after(word.begin() + static_cast<long>(k) + 1, word.end());
      for (const auto& [u, a] : letter_diff[word[k]]) {
        std::vector<std::uint32_t> full = before;
        full.insert(full.end(), wb.word(u).begin(), wb.word(u).end());
        full.insert(full.end(), after.begin(), after.end());
        const std::size_t idx = wb.index(full);
        if (idx != WordBasis::npos) acc.add(idx, s * a);
      }
      prefix_degree += wb.letters().degree(word[k]);
    }
    dword[w] = acc.finish();
  }
  std::vector<Element<K>> dcols(n);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t j = 0; j < nc; ++j) {
      Accumulator<K> acc;
      for (const auto& [u, a] : dword[w]) acc.add(t.index(u, j), a);
      const K s = sign<K>(wb.degree(w));
      for (const auto& [k, a] : c.d(j)) acc.add(t.index(w, k), s * a);
      dcols[t.index(w, j)] = acc.finish();
    }

  Accumulator<K> h;
  h.add(t.lift(word_curvature));
  h.add(t.coefficient_element(c.curvature()));

  // Generators: letter⊗u for the left idempotents u, and 1⊗c.
  std::optional<Factorization> fact;
  auto idem = detail::left_idempotents(c);
  if (!idem.empty()) {
    Factorization f;
    f.split.assign(n, std::nullopt);
    for (std::size_t w = 1; w < nw; ++w) {
      const auto& word = wb.word(w);
      const std::size_t head = wb.letter(word.front());
      const std::size_t rest = wb.index(std::vector<std::uint32_t>(word.begin() + 1, word.end()));
      for (std::size_t j = 0; j < nc; ++j) f.split[t.index(w, j)] = std::make_pair(t.index(head, idem[j]), t.index(rest, j));
    }
    std::set<std::size_t> used(idem.begin(), idem.end());
    for (std::uint32_t x = 0; x < wb.letters().dim(); ++x)
      for (auto u : used) f.split[t.index(wb.letter(x), u)] = std::nullopt;
    fact = std::move(f);
  }

  t.algebra = share(CurvedDgAlgebra<K>(v, t.coefficient_element(c.unit()), std::move(mult),
                                       GradedMap<K>(v, v, 1, std::move(dcols)), h.finish(), std::move(fact)));
  return t;
}

/// d never lowers arity and products add arities, so arity > W is a two-sided
/// dg ideal and the truncation is a legitimate quotient. Checked on the basis.
template <Field K>
bool respects_arity_filtration(const TruncatedTensorAlgebra<K>& t) {
  const auto& a = *t.algebra;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (const auto& [k, c] : a.d(i))
      if (t.arity(k) < t.arity(i)) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (const auto& [k, c] : a.product(i, j))
        if (t.arity(k) != t.arity(i) + t.arity(j)) return false;
  return true;
}

}  // namespace kmd
