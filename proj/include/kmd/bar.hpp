#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/tensor_algebra.hpp"

namespace kmd {

/// Linear ε: A → k with ε(1) = 1. The algebra is re-based so that 1 is a basis
/// vector; ε is 1 there and 0 on every other basis vector, so it vanishes on
/// nonzero degrees and on the complement A₊ spanned by the remaining basis.
template <Field K>
struct FakeAugmentation {
  AlgebraPtr<K> algebra;           // re-based copy, unit = basis vector unit_index
  Matrix<K> basis;                 // re-based basis in the original coordinates
  std::size_t unit_index = 0;
  std::vector<K> eps;              // on the re-based basis
  std::vector<K> eps_original;     // on the original basis
  std::vector<std::size_t> plus;   // basis of A₊ (re-based indices, in order)
};

template <Field K>
FakeAugmentation<K> fake_augmentation(const CurvedDgAlgebra<K>& a) {
  auto r = rebase_unit(a);
  FakeAugmentation<K> fa;
  fa.unit_index = r.unit_index;
  fa.basis = r.basis;
  fa.algebra = share(std::move(r.algebra));
  const std::size_t n = a.dim();
  fa.eps.assign(n, K(0));
  fa.eps[fa.unit_index] = K(1);
  auto inv = inverse(fa.basis).value();
  for (std::size_t i = 0; i < n; ++i) fa.eps_original.push_back(inv(fa.unit_index, i));
  for (std::size_t i = 0; i < n; ++i)
    if (i != fa.unit_index) fa.plus.push_back(i);
  return fa;
}

/// h(a, b) = ε(ab) - ε(a)ε(b) on pairs of re-based basis vectors.
template <Field K>
Matrix<K> homutator(const FakeAugmentation<K>& fa) {
  const auto& a = *fa.algebra;
  Matrix<K> h(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) h(i, j) = a.product(i, j).coefficient(fa.unit_index) - fa.eps[i] * fa.eps[j];
  return h;
}

/// h_d(a) = ε(da) on re-based basis vectors.
template <Field K>
std::vector<K> differentiator(const FakeAugmentation<K>& fa) {
  const auto& a = *fa.algebra;
  std::vector<K> h;
  for (std::size_t i = 0; i < a.dim(); ++i) h.push_back(a.d(i).coefficient(fa.unit_index));
  return h;
}

/// Reduced (letters dual to A₊) or unreduced (letters dual to all of A) bar
/// construction, truncated at word length W. The letter of e_i has degree
/// 1 - |e_i|. With e_i e_j = Σ m_ij^k e_k and d e_i = Σ δ_i^k e_k,
///   d(x_k) = Σ_i (-1)^{|e_i|} δ_i^k x_i - Σ_{i,j} (-1)^{|e_i|(1-|e_j|)} m_ij^k x_i x_j
/// with i, j, k running over the letters, and in the reduced case
///   h = Σ_i (-1)^{|e_i|} δ_i^1 x_i - Σ_{i,j} (-1)^{|e_i|(1-|e_j|)} m_ij^1 x_i x_j,
/// the homutator and differentiator parts. These are exactly the conditions for
/// Σ x_i ⊗ e_i to be Maurer–Cartan in the bar construction tensored with A.
template <Field K>
struct BarConstruction {
  FakeAugmentation<K> augmentation;
  bool reduced = true;
  std::vector<std::size_t> letter_basis;  // re-based index of the basis vector dual to each letter
  std::vector<Element<K>> letter_diff;     // over words
  Element<K> word_curvature;               // over words
  TruncatedTensorAlgebra<K> bar;           // coefficients in k

  [[nodiscard]] std::size_t max_length() const { return bar.words->max_length(); }
  [[nodiscard]] const WordBasis& words() const { return *bar.words; }

  /// Least letter degree; cohomology is only finite per degree when it is ≥ 1.
  [[nodiscard]] std::optional<int> min_letter_degree() const {
    const auto& l = bar.words->letters();
    if (l.dim() == 0) return std::nullopt;
    return l.min_degree();
  }
};

namespace detail {

template <Field K>
BarConstruction<K> make_bar(FakeAugmentation<K> fa, bool reduced, std::size_t w) {
  const auto& a = *fa.algebra;
  if (a.is_curved()) throw std::invalid_argument("bar construction: the algebra must be an uncurved dg algebra");
  BarConstruction<K> b;
  b.reduced = reduced;
  b.letter_basis = reduced ? fa.plus : [&] {
    std::vector<std::size_t> all(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) all[i] = i;
    return all;
  }();
  std::vector<BasisElement> letters;
  for (auto i : b.letter_basis) letters.push_back({a.space().label(i), 1 - a.degree(i)});
  auto words = std::make_shared<const WordBasis>(GradedVectorSpace(std::move(letters)), w);
  const std::size_t g = b.letter_basis.size();
  std::vector<std::optional<std::uint32_t>> letter_of(a.dim());
  for (std::uint32_t x = 0; x < g; ++x) letter_of[b.letter_basis[x]] = x;

  // Coefficient of x_i (or x_i x_j) in the "d(x_k)" expression, keyed by target k.
  std::vector<Accumulator<K>> acc(a.dim());
  for (std::uint32_t x = 0; x < g; ++x) {
    const std::size_t i = b.letter_basis[x];
    const K s = sign<K>(a.degree(i));
    for (const auto& [k, c] : a.d(i)) acc[k].add(words->letter(x), s * c);
  }
  for (std::uint32_t x = 0; x < g; ++x)
    for (std::uint32_t y = 0; y < g; ++y) {
      const std::size_t i = b.letter_basis[x], j = b.letter_basis[y];
      const K s = -sign<K>(static_cast<long>(a.degree(i)) * (1 - a.degree(j)));
      const std::size_t xy = words->index({x, y});
      if (xy == WordBasis::npos) continue;
      for (const auto& [k, c] : a.product(i, j)) acc[k].add(xy, s * c);
    }
  for (std::uint32_t x = 0; x < g; ++x) b.letter_diff.push_back(acc[b.letter_basis[x]].finish());
  if (reduced) b.word_curvature = acc[fa.unit_index].finish();
  b.augmentation = std::move(fa);
  b.bar = build_tensor_algebra<K>(words, share(ground_field<K>()), b.letter_diff, b.word_curvature);
  return b;
}

}  // namespace detail

template <Field K>
BarConstruction<K> reduced_bar(const FakeAugmentation<K>& fa, std::size_t w) {
  return detail::make_bar(fa, true, w);
}
template <Field K>
BarConstruction<K> reduced_bar(const CurvedDgAlgebra<K>& a, std::size_t w) {
  return detail::make_bar(fake_augmentation(a), true, w);
}
template <Field K>
BarConstruction<K> unreduced_bar(const CurvedDgAlgebra<K>& a, std::size_t w) {
  return detail::make_bar(fake_augmentation(a), false, w);
}

/// The bar construction tensored with a coefficient algebra C (same letters and W).
template <Field K>
TruncatedTensorAlgebra<K> with_coefficients(const BarConstruction<K>& b, AlgebraPtr<K> c) {
  return build_tensor_algebra<K>(b.bar.words, std::move(c), b.letter_diff, b.word_curvature);
}

/// ξ = Σ x_i ⊗ φ(e_i) in (bar ⊗ C), φ: A → C given on the re-based basis of A.
template <Field K>
Element<K> canonical_mc(const BarConstruction<K>& b, const TruncatedTensorAlgebra<K>& bc, const GradedMap<K>& phi) {
  if (!(phi.source() == b.augmentation.algebra->space()) || !(phi.target() == bc.coefficient->space()))
    throw std::invalid_argument("canonical_mc: φ must go from the re-based algebra to the coefficients");
  Accumulator<K> acc;
  if (b.max_length() == 0) return {};
  for (std::uint32_t x = 0; x < b.letter_basis.size(); ++x)
    for (const auto& [c, a] : phi.column(b.letter_basis[x])) acc.add(bc.index(b.bar.words->letter(x), c), a);
  return acc.finish();
}

/// Identity of A (re-based) as the structure map A → A.
template <Field K>
GradedMap<K> identity_structure_map(const BarConstruction<K>& b) {
  return GradedMap<K>::identity(b.augmentation.algebra->space());
}

/// Action map δ: A → End M, e_i ↦ (m_j ↦ e_i · m_j), for a module over the re-based algebra.
template <Field K>
GradedMap<K> action_structure_map(const CurvedModule<K>& m, const CurvedDgAlgebra<K>& end_m) {
  const auto& a = m.algebra();
  const std::size_t dm = m.dim();
  std::vector<Element<K>> cols;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Accumulator<K> acc;
    for (std::size_t j = 0; j < dm; ++j)
      for (const auto& [k, c] : m.act(i, j)) acc.add(hom_index(j, k, dm), c);
    cols.push_back(acc.finish());
  }
  return GradedMap<K>(a.space(), end_m.space(), 0, std::move(cols));
}

/// (bar ⊗ C)^ξ for ξ the canonical element of φ: the reduced (or unreduced)
/// Hochschild algebra of A with coefficients in C.
template <Field K>
TruncatedTensorAlgebra<K> hochschild_via_twist(const BarConstruction<K>& b, AlgebraPtr<K> c, const GradedMap<K>& phi,
                                               Check check = Check::full) {
  auto bc = with_coefficients(b, std::move(c));
  auto xi = canonical_mc(b, bc, phi);
  auto twisted = twist_algebra(*bc.algebra, xi, check);
  if (check == Check::full && twisted.is_curved())
    throw std::logic_error("hochschild_via_twist: canonical element is not Maurer–Cartan");
  return bc.with_algebra(share(std::move(twisted)));
}

/// Hochb(A, A) (or Hoch(A, A) when b is unreduced).
template <Field K>
TruncatedTensorAlgebra<K> hochschild_self(const BarConstruction<K>& b, Check check = Check::full) {
  return hochschild_via_twist(b, b.augmentation.algebra, identity_structure_map(b), check);
}

/// Module M (over the original algebra) transported to the re-based algebra.
template <Field K>
CurvedModule<K> rebased_module(const FakeAugmentation<K>& fa, const CurvedModule<K>& m) {
  if (m.algebra().dim() != fa.algebra->dim()) throw std::invalid_argument("rebased_module: module over another algebra");
  return rebase_module(m, fa.algebra, fa.basis);
}

template <Field K>
struct KoszulDual {
  BarConstruction<K> bar;
  CurvedModule<K> module;        // M over the re-based algebra
  AlgebraPtr<K> end;             // End M
  GradedMap<K> delta;            // action map A → End M
  TruncatedTensorAlgebra<K> e;   // E = Hochb(A, End M)_{≤W}
};

/// E = Hochb(A, End M) via the twist of B̄A ⊗ End M by Σ x_i ⊗ δ(e_i).
template <Field K>
KoszulDual<K> koszul_dual(const CurvedModule<K>& m, std::size_t w, Check check = Check::full) {
  if (m.dim() == 0) throw std::invalid_argument("koszul_dual: M must be nonzero");
  auto b = reduced_bar(m.algebra(), w);
  auto mm = rebased_module(b.augmentation, m);
  auto end = share(endomorphism_algebra(mm.complex()));
  auto delta = action_structure_map(mm, *end);
  auto e = hochschild_via_twist(b, end, delta, check);
  return {std::move(b), std::move(mm), std::move(end), std::move(delta), std::move(e)};
}

/// Cohomological degrees n for which H^n of a truncation at W agrees with the
/// untruncated value: n ≤ (W+1)·g_min + c_min - 2, where g_min is the least
/// letter degree and c_min the least coefficient degree. Requires g_min ≥ 1.
struct StableWindow {
  bool exists = false;
  int lo = 0;
  int hi = 0;
};

template <Field K>
StableWindow stable_window(const TruncatedTensorAlgebra<K>& t) {
  const auto& l = t.words->letters();
  const int cmin = t.coefficient->space().min_degree();
  const int cmax = t.coefficient->space().max_degree();
  if (l.dim() == 0) return {true, cmin, cmax};
  const int gmin = l.min_degree();
  if (gmin < 1) return {};
  const int w = static_cast<int>(t.words->max_length());
  return {true, cmin, (w + 1) * gmin + cmin - 2};
}

/// The underlying complex of a truncated (uncurved) algebra.
template <Field K>
Complex<K> underlying_complex(const TruncatedTensorAlgebra<K>& t) {
  return Complex<K>(t.algebra->space(), t.algebra->diff());
}

}  // namespace kmd
