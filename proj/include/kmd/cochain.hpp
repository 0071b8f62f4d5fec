#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/bar.hpp"

namespace kmd {

/// Reduced Hochschild cochains written out directly: Hom(T^c(sA₊)_{≤W}, P) with
/// basis E_{v,p} (the cochain sending the tensor word v to p and every other
/// word to 0), cup product
///   (f⌣g)(v⊗v') = (-1)^{|g||v|} f(v) g(v'),
/// and differential
///   Df = d_P∘f - (-1)^{|f|} f∘b' + τ_L⌣f - (-1)^{|f|} f⌣τ_R,
/// where b' is the coderivation extending b1(sa) = -s π(da) and
/// b2(sa⊗sb) = (-1)^{|a|} s π(ab), π kills the unit, and τ(sa) is the image
/// of a in the coefficients. |sa| = |a| - 1.
///
/// This does not use the bar construction's letter differentials; only the
/// word enumeration is shared.
namespace cochain {

/// b' on every tensor word, as combinations of words.
template <Field K>
std::vector<Element<K>> coderivation(const FakeAugmentation<K>& fa, const WordBasis& words) {
  const auto& a = *fa.algebra;
  const auto& plus = fa.plus;
  std::vector<long> letter_of(a.dim(), -1);
  for (std::size_t x = 0; x < plus.size(); ++x) letter_of[plus[x]] = static_cast<long>(x);
  auto susp = [&](std::uint32_t x) { return a.degree(plus[x]) - 1; };

  std::vector<Element<K>> out(words.size());
  for (std::size_t u = 0; u < words.size(); ++u) {
    const auto& word = words.word(u);
    Accumulator<K> acc;
    int prefix = 0;
    for (std::size_t k = 0; k < word.size(); ++k) {
      const K s = sign<K>(prefix);
      // b1 at position k
      for (const auto& [t, c] : a.d(plus[word[k]])) {
        if (letter_of[t] < 0) continue;
        auto nw = word;
        nw[k] = static_cast<std::uint32_t>(letter_of[t]);
        acc.add(words.index(nw), -s * c);
      }
      // b2 at positions k, k+1
      if (k + 1 < word.size()) {
        const std::size_t i = plus[word[k]], j = plus[word[k + 1]];
        const K s2 = s * sign<K>(a.degree(i));
        for (const auto& [t, c] : a.product(i, j)) {
          if (letter_of[t] < 0) continue;
          std::vector<std::uint32_t> nw(word.begin(), word.begin() + static_cast<long>(k));
          nw.push_back(static_cast<std::uint32_t>(letter_of[t]));
          nw.insert(nw.end(), word.begin() + static_cast<long>(k) + 2, word.end());
          acc.add(words.index(nw), s2 * c);
        }
      }
      prefix += susp(word[k]);
    }
    out[u] = acc.finish();
  }
  return out;
}

/// Coefficients P with the two-sided τ actions needed by the differential.
template <Field K>
struct Coefficients {
  GradedVectorSpace space;
  GradedMap<K> diff;
  std::vector<std::vector<Element<K>>> left_tau;   // [letter][p] = τ_L(letter)·p
  std::vector<std::vector<Element<K>>> right_tau;  // [letter][p] = p·τ_R(letter)
};

/// |v| for a tensor word: minus the degree of the dual word.
inline int tensor_degree(const WordBasis& words, std::size_t v) { return -words.degree(v); }

/// Differential columns on the basis E_{v,p} (index v·dim P + p).
template <Field K>
std::vector<Element<K>> differential(const WordBasis& words, const std::vector<Element<K>>& bprime,
                                     const Coefficients<K>& p) {
  const std::size_t np = p.space.dim(), n = words.size() * np;
  auto idx = [np](std::size_t v, std::size_t q) { return v * np + q; };
  auto fdeg = [&](std::size_t v, std::size_t q) { return p.space.degree(q) - tensor_degree(words, v); };
  std::vector<Accumulator<K>> acc(n);
  for (std::size_t v = 0; v < words.size(); ++v)
    for (std::size_t q = 0; q < np; ++q) {
      auto& a = acc[idx(v, q)];
      const int f = fdeg(v, q);
      for (const auto& [r, c] : p.diff.column(q)) a.add(idx(v, r), c);
      // τ_L ⌣ f
      for (std::uint32_t x = 0; x < words.letters().dim(); ++x) {
        std::vector<std::uint32_t> nw{x};
        nw.insert(nw.end(), words.word(v).begin(), words.word(v).end());
        const std::size_t xv = words.index(nw);
        if (xv == WordBasis::npos) continue;
        const K s = sign<K>(static_cast<long>(f) * (-words.letters().degree(x)));
        for (const auto& [r, c] : p.left_tau[x][q]) a.add(idx(xv, r), s * c);
      }
      // -(-1)^{|f|} f ⌣ τ_R
      for (std::uint32_t x = 0; x < words.letters().dim(); ++x) {
        auto nw = words.word(v);
        nw.push_back(x);
        const std::size_t vx = words.index(nw);
        if (vx == WordBasis::npos) continue;
        const K s = -sign<K>(f) * sign<K>(tensor_degree(words, v));
        for (const auto& [r, c] : p.right_tau[x][q]) a.add(idx(vx, r), s * c);
      }
    }
  // -(-1)^{|f|} f∘b': (E_{v,q}∘b')(u) = [b'u]_v q
  for (std::size_t u = 0; u < words.size(); ++u)
    for (const auto& [v, c] : bprime[u])
      for (std::size_t q = 0; q < np; ++q) acc[idx(v, q)].add(idx(u, q), -sign<K>(fdeg(v, q)) * c);
  std::vector<Element<K>> cols;
  cols.reserve(n);
  for (auto& a : acc) cols.push_back(a.finish());
  return cols;
}

/// Signs of the identification w⊗p ↦ (-1)^{|p||w|} ⟨w, v⟩ E_{v,p} with the
/// tensor-algebra basis, ⟨x1…xn, v1…vn⟩ = (-1)^{Σ_{a>b} |x_a||x_b|}.
template <Field K>
std::vector<K> identification_signs(const WordBasis& words, const GradedVectorSpace& p) {
  std::vector<K> out;
  for (std::size_t w = 0; w < words.size(); ++w) {
    long e = 0;
    const auto& word = words.word(w);
    for (std::size_t a = 0; a < word.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) e += static_cast<long>(words.letters().degree(word[a])) * words.letters().degree(word[b]);
    for (std::size_t q = 0; q < p.dim(); ++q) out.push_back(sign<K>(e + static_cast<long>(p.degree(q)) * words.degree(w)));
  }
  return out;
}

template <Field K>
Element<K> resign(const Element<K>& x, const std::vector<K>& s, const K& factor) {
  std::vector<typename SparseVec<K>::Term> t;
  for (const auto& [i, c] : x) t.emplace_back(i, c * s[i] * factor);
  return SparseVec<K>::from_terms(std::move(t));
}

}  // namespace cochain

/// Reduced Hochschild algebra Hochb(A, C)_{≤W} from cochains, for a unital dg
/// map φ: A → C (on the re-based basis of A), expressed in the tensor-algebra
/// basis (word ⊗ c) so that it can be compared with hochschild_via_twist.
template <Field K>
TruncatedTensorAlgebra<K> hochschild_direct(const BarConstruction<K>& b, AlgebraPtr<K> c, const GradedMap<K>& phi) {
  if (!b.reduced) throw std::invalid_argument("hochschild_direct: needs the reduced bar words");
  const auto& words = *b.bar.words;
  const auto& fa = b.augmentation;
  const std::size_t nc = c->dim(), nw = words.size(), n = nw * nc;

  cochain::Coefficients<K> p{c->space(), c->diff(), {}, {}};
  for (std::uint32_t x = 0; x < words.letters().dim(); ++x) {
    const auto& tau = phi.column(fa.plus[x]);
    std::vector<Element<K>> l, r;
    for (std::size_t q = 0; q < nc; ++q) {
      l.push_back(c->mul(tau, Element<K>::single(q)));
      r.push_back(c->mul(Element<K>::single(q), tau));
    }
    p.left_tau.push_back(std::move(l));
    p.right_tau.push_back(std::move(r));
  }
  auto bprime = cochain::coderivation(fa, words);
  auto dcols = cochain::differential(words, bprime, p);

  // cup product on the E basis
  std::vector<Element<K>> mult(n * n);
  for (std::size_t v1 = 0; v1 < nw; ++v1)
    for (std::size_t v2 = 0; v2 < nw; ++v2) {
      const std::size_t v = words.concat(v1, v2);
      if (v == WordBasis::npos) continue;
      for (std::size_t c1 = 0; c1 < nc; ++c1)
        for (std::size_t c2 = 0; c2 < nc; ++c2) {
          const auto& cc = c->product(c1, c2);
          if (cc.empty()) continue;
          const int g = c->degree(c2) - cochain::tensor_degree(words, v2);
          const K s = sign<K>(static_cast<long>(g) * cochain::tensor_degree(words, v1));
          Accumulator<K> acc;
          for (const auto& [k, a] : cc) acc.add(v * nc + k, s * a);
          mult[(v1 * nc + c1) * n + v2 * nc + c2] = acc.finish();
        }
    }

  // change to the tensor basis: b_i = σ_i E_i
  auto sg = cochain::identification_signs<K>(words, c->space());
  for (std::size_t i = 0; i < n; ++i) {
    dcols[i] = cochain::resign(dcols[i], sg, sg[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (!mult[i * n + j].empty()) mult[i * n + j] = cochain::resign(mult[i * n + j], sg, sg[i] * sg[j]);
  }
  auto shape = with_coefficients(b, c);
  const auto& v = shape.algebra->space();
  return shape.with_algebra(share(CurvedDgAlgebra<K>(v, shape.algebra->unit(), std::move(mult),
                                                     GradedMap<K>(v, v, 1, std::move(dcols)), Element<K>{},
                                                     shape.algebra->factorization())));
}

/// E = Hochb(A, End M) from cochains.
template <Field K>
TruncatedTensorAlgebra<K> hochschild_direct(const CurvedModule<K>& m, std::size_t w) {
  if (m.dim() == 0) throw std::invalid_argument("hochschild_direct: M must be nonzero");
  auto b = reduced_bar(m.algebra(), w);
  auto mm = rebased_module(b.augmentation, m);
  auto end = share(endomorphism_algebra(mm.complex()));
  return hochschild_direct(b, end, action_structure_map(mm, *end));
}

/// True when two algebras have identical bases, units, products, differentials and curvature.
template <Field K>
bool same_structure(const TruncatedTensorAlgebra<K>& x, const TruncatedTensorAlgebra<K>& y) {
  return same_algebra(*x.algebra, *y.algebra);
}

}  // namespace kmd
