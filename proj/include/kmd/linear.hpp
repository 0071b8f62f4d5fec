#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "kmd/algebra.hpp"

namespace kmd {

/// Elements g of Hom(V, W) of every degree with g(a·v) = (-1)^{|a||g|} a·g(v)
/// for the given degree-homogeneous operators (one pair per generator a:
/// its action on V and on W). Returns kernel bases per degree, flattened over hom(V, W).
template <Field K>
std::vector<Element<K>> intertwiners(const GradedVectorSpace& v, const GradedVectorSpace& w,
                                     const std::vector<std::pair<GradedMap<K>, GradedMap<K>>>& ops) {
  const auto hs = hom(v, w);
  std::vector<Element<K>> out;
  for (int n : hs.support()) {
    const auto& comp = hs.component(n);
    std::vector<std::vector<K>> rows;
    for (const auto& [av, aw] : ops) {
      const K s = sign<K>(static_cast<long>(av.degree()) * n);
      for (std::size_t x = 0; x < v.dim(); ++x) {
        // coefficient of w_t in g(a v_x) - s·a g(v_x), as a linear form in g
        std::vector<std::vector<K>> eq(w.dim(), std::vector<K>(comp.size()));
        for (std::size_t c = 0; c < comp.size(); ++c) {
          const std::size_t gi = comp[c];
          const std::size_t src = gi / w.dim(), tgt = gi % w.dim();
          // g = E(src → tgt)
          for (const auto& [y, coef] : av.column(x))
            if (y == src) eq[tgt][c] += coef;
          if (x == src)
            for (const auto& [t, coef] : aw.column(tgt)) eq[t][c] -= s * coef;
        }
        for (auto& r : eq)
          if (!is_zero(std::span<const K>(r))) rows.push_back(std::move(r));
      }
    }
    Matrix<K> m(rows.size(), comp.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < comp.size(); ++c) m(r, c) = rows[r][c];
    for (const auto& k : eliminate(m).kernel_basis) {
      Accumulator<K> acc;
      for (std::size_t c = 0; c < comp.size(); ++c) acc.add(comp[c], k[c]);
      out.push_back(acc.finish());
    }
  }
  return out;
}

/// Coordinates in the span of an independent family, read off at pivot rows;
/// throws if the vector is outside the span.
template <Field K>
class SpanCoordinates {
 public:
  SpanCoordinates(std::vector<Element<K>> basis, std::size_t ambient) : basis_(std::move(basis)) {
    if (basis_.empty()) return;
    std::vector<Vec<K>> rows(ambient, Vec<K>(basis_.size()));
    for (std::size_t k = 0; k < basis_.size(); ++k)
      for (const auto& [i, c] : basis_[k]) rows[i][k] = c;
    pivots_ = independent_subset(rows, basis_.size());
    if (pivots_.size() != basis_.size()) throw std::invalid_argument("span coordinates: family is dependent");
    Matrix<K> sq(pivots_.size(), pivots_.size());
    for (std::size_t r = 0; r < pivots_.size(); ++r)
      for (std::size_t k = 0; k < basis_.size(); ++k) sq(r, k) = rows[pivots_[r]][k];
    inv_ = inverse(sq).value();
  }
  [[nodiscard]] Element<K> operator()(const Element<K>& x) const {
    if (x.empty()) return {};
    Accumulator<K> out;
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
      const K v = x.coefficient(pivots_[r]);
      if (v.is_zero()) continue;
      for (std::size_t k = 0; k < basis_.size(); ++k) out.add(k, inv_(k, r) * v);
    }
    auto c = out.finish();
    Accumulator<K> back;
    for (const auto& [k, v] : c) back.add(basis_[k], v);
    if (!(back.finish() == x)) throw std::logic_error("span coordinates: vector outside the span");
    return c;
  }

 private:
  std::vector<Element<K>> basis_;
  std::vector<std::size_t> pivots_;
  Matrix<K> inv_;
};

/// Composition of elementary maps in hom(U, V) ⊗ hom(T, U) → hom(T, V).
template <Field K>
Element<K> compose_hom(const Element<K>& g, std::size_t du, std::size_t dv, const Element<K>& f) {
  Accumulator<K> acc;
  for (const auto& [gi, a] : g) {
    const std::size_t u = gi / dv, vv = gi % dv;
    for (const auto& [fi, b] : f) {
      const std::size_t t = fi / du, u2 = fi % du;
      if (u2 == u) acc.add(hom_index(t, vv, dv), a * b);
    }
  }
  return acc.finish();
}

/// g∘X for g in hom(U, V) (flattened) and X: U → U.
template <Field K>
Element<K> precompose(const Element<K>& g, const GradedMap<K>& x, std::size_t dv) {
  Accumulator<K> acc;
  const std::size_t du = x.source().dim();
  std::vector<Element<K>> rows(du);
  for (std::size_t l = 0; l < du; ++l)
    for (const auto& [y, c] : x.column(l))
      for (const auto& [gi, a] : g)
        if (gi / dv == y) acc.add(hom_index(l, gi % dv, dv), a * c);
  return acc.finish();
}

/// Y∘g for g in hom(U, V) and Y: V → V.
template <Field K>
Element<K> postcompose(const GradedMap<K>& y, const Element<K>& g, std::size_t dv) {
  Accumulator<K> acc;
  for (const auto& [gi, a] : g)
    for (const auto& [t, c] : y.column(gi % dv)) acc.add(hom_index(gi / dv, t, dv), a * c);
  return acc.finish();
}

}  // namespace kmd
