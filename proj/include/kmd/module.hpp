#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/algebra.hpp"

namespace kmd {

/// Left module over a curved dg algebra: action table a_i · m_j plus a degree 1
/// map d_M. As with algebras, construction checks shapes and degrees only.
template <Field K>
class CurvedModule {
 public:
  CurvedModule() = default;

  CurvedModule(AlgebraPtr<K> algebra, GradedVectorSpace space, std::vector<Element<K>> action, GradedMap<K> diff)
      : algebra_(std::move(algebra)), space_(std::move(space)), action_(std::move(action)), diff_(std::move(diff)) {
    if (!algebra_) throw std::invalid_argument("CurvedModule: null algebra");
    const std::size_t na = algebra_->dim(), n = space_.dim();
    if (action_.size() != na * n) throw std::invalid_argument("CurvedModule: action table must be dim A × dim M");
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [k, c] : action_[i * n + j]) {
          if (k >= n) throw std::invalid_argument("CurvedModule: action index out of range");
          if (space_.degree(k) != algebra_->degree(i) + space_.degree(j))
            throw std::invalid_argument("CurvedModule: action " + algebra_->space().label(i) + "·" + space_.label(j) +
                                        " has the wrong degree");
        }
    if (!(diff_.source() == space_) || !(diff_.target() == space_) || diff_.degree() != 1)
      throw std::invalid_argument("CurvedModule: differential must be a degree 1 endomorphism");
  }

  [[nodiscard]] const AlgebraPtr<K>& algebra_ptr() const { return algebra_; }
  [[nodiscard]] const CurvedDgAlgebra<K>& algebra() const { return *algebra_; }
  [[nodiscard]] const GradedVectorSpace& space() const { return space_; }
  [[nodiscard]] std::size_t dim() const { return space_.dim(); }
  [[nodiscard]] int degree(std::size_t j) const { return space_.degree(j); }
  [[nodiscard]] const GradedMap<K>& diff() const { return diff_; }
  [[nodiscard]] const std::vector<Element<K>>& action_table() const { return action_; }

  /// a_i · m_j
  [[nodiscard]] const Element<K>& act(std::size_t i, std::size_t j) const { return action_[i * dim() + j]; }

  [[nodiscard]] Element<K> act(const Element<K>& a, const Element<K>& x) const {
    Accumulator<K> acc;
    for (const auto& [i, c] : a)
      for (const auto& [j, e] : x) acc.add(act(i, j), c * e);
    return acc.finish();
  }
  [[nodiscard]] Element<K> act(std::size_t i, const Element<K>& x) const {
    Accumulator<K> acc;
    for (const auto& [j, e] : x) acc.add(act(i, j), e);
    return acc.finish();
  }
  [[nodiscard]] Element<K> act(const Element<K>& a, std::size_t j) const {
    Accumulator<K> acc;
    for (const auto& [i, c] : a) acc.add(act(i, j), c);
    return acc.finish();
  }

  [[nodiscard]] Element<K> d(const Element<K>& x) const { return diff_.apply(x); }
  [[nodiscard]] const Element<K>& d(std::size_t j) const { return diff_.column(j); }

  /// Left multiplication by a as a graded map of degree |a|.
  [[nodiscard]] GradedMap<K> action_map(const Element<K>& a) const {
    auto deg = degree_of(algebra_->space(), a).value_or(0);
    std::vector<Element<K>> cols;
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(act(a, j));
    return GradedMap<K>(space_, space_, deg, std::move(cols));
  }

  [[nodiscard]] CurvedModule with_differential(GradedMap<K> d) const {
    return CurvedModule(algebra_, space_, action_, std::move(d));
  }
  [[nodiscard]] CurvedModule over(AlgebraPtr<K> a) const { return CurvedModule(std::move(a), space_, action_, diff_); }

  [[nodiscard]] Complex<K> complex() const { return Complex<K>(space_, diff_); }

 private:
  AlgebraPtr<K> algebra_;
  GradedVectorSpace space_;
  std::vector<Element<K>> action_;
  GradedMap<K> diff_;
};

/// A over itself by left multiplication.
template <Field K>
CurvedModule<K> regular_module(const AlgebraPtr<K>& a) {
  return CurvedModule<K>(a, a->space(), a->mult_table(), a->diff());
}

/// A* as a left module: (a·φ)(b) = (-1)^{|a|(|φ|+|b|)} φ(ba), dφ = -(-1)^{|φ|} φ∘d.
template <Field K>
CurvedModule<K> dual_module(const AlgebraPtr<K>& a) {
  const std::size_t n = a->dim();
  auto v = dual(a->space());
  std::vector<Element<K>> action(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Accumulator<K> acc;
      for (std::size_t k = 0; k < n; ++k) {
        auto c = a->product(k, i).coefficient(j);
        if (c.is_zero()) continue;
        acc.add(k, c * sign<K>(static_cast<long>(a->degree(i)) * (v.degree(j) + a->degree(k))));
      }
      action[i * n + j] = acc.finish();
    }
  std::vector<Element<K>> dcols(n);
  for (std::size_t j = 0; j < n; ++j) {
    Accumulator<K> acc;
    for (std::size_t k = 0; k < n; ++k) {
      auto c = a->d(k).coefficient(j);
      if (!c.is_zero()) acc.add(k, -c * sign<K>(v.degree(j)));
    }
    dcols[j] = acc.finish();
  }
  return CurvedModule<K>(a, v, std::move(action), GradedMap<K>(v, v, 1, std::move(dcols)));
}

/// One-dimensional module in degree 0 on which e_i acts by chi[i].
template <Field K>
CurvedModule<K> character_module(const AlgebraPtr<K>& a, const std::vector<K>& chi, const std::string& label = "m") {
  if (chi.size() != a->dim()) throw std::invalid_argument("character_module: one value per basis vector");
  GradedVectorSpace v({{label, 0}});
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < a->dim(); ++i)
    action.push_back(a->degree(i) == 0 ? Element<K>::single(0, chi[i]) : Element<K>{});
  return CurvedModule<K>(a, v, std::move(action), GradedMap<K>::zero(v, v, 1));
}

/// A as a left module over A ⊗ A^op: (a⊗b)·x = (-1)^{|b||x|} a x b.
/// `envelope` must be bimodule_envelope(*a).
template <Field K>
CurvedModule<K> bimodule(const AlgebraPtr<K>& a, const AlgebraPtr<K>& envelope) {
  const std::size_t n = a->dim();
  if (envelope->dim() != n * n) throw std::invalid_argument("bimodule: algebra is not the envelope");
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t x = 0; x < n; ++x)
        action.push_back(a->mul(a->product(i, x), Element<K>::single(j))
                             .scaled(sign<K>(static_cast<long>(a->degree(j)) * a->degree(x))));
  return CurvedModule<K>(envelope, a->space(), std::move(action), a->diff());
}

/// V as a module over End(V, D) (curved when D² ≠ 0).
template <Field K>
CurvedModule<K> tautological_module(const AlgebraPtr<K>& end, const GradedVectorSpace& v, const GradedMap<K>& dv) {
  const std::size_t m = v.dim();
  if (end->dim() != m * m) throw std::invalid_argument("tautological_module: algebra is not End(V)");
  std::vector<Element<K>> action(m * m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) action[hom_index(i, j, m) * m + i] = Element<K>::single(j);
  return CurvedModule<K>(end, v, std::move(action), dv);
}

/// Restriction of scalars along a (degree 0) algebra map f: B → A.
template <Field K>
CurvedModule<K> restrict_module(const CurvedModule<K>& m, const AlgebraPtr<K>& b, const GradedMap<K>& f) {
  if (!(f.source() == b->space()) || !(f.target() == m.algebra().space()))
    throw std::invalid_argument("restrict_module: map does not go from the new algebra to the old one");
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < b->dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) action.push_back(m.act(f.column(i), j));
  return CurvedModule<K>(b, m.space(), std::move(action), m.diff());
}

/// The same module over a re-based copy of its algebra.
template <Field K>
CurvedModule<K> rebase_module(const CurvedModule<K>& m, const AlgebraPtr<K>& rebased, const Matrix<K>& basis) {
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < rebased->dim(); ++i) {
    auto col = Element<K>::from_dense(basis.column(i));
    for (std::size_t j = 0; j < m.dim(); ++j) action.push_back(m.act(col, j));
  }
  return CurvedModule<K>(rebased, m.space(), std::move(action), m.diff());
}

template <Field K>
CurvedModule<K> direct_sum(const CurvedModule<K>& m, const CurvedModule<K>& n) {
  if (m.algebra_ptr() != n.algebra_ptr() && !(m.algebra().space() == n.algebra().space()))
    throw std::invalid_argument("direct_sum: modules over different algebras");
  std::vector<BasisElement> b;
  for (const auto& e : m.space().basis()) b.push_back({"(" + e.label + ",0)", e.degree});
  for (const auto& e : n.space().basis()) b.push_back({"(0," + e.label + ")", e.degree});
  GradedVectorSpace v(std::move(b));
  const std::size_t dm = m.dim(), dn = n.dim();
  auto shifted = [](const Element<K>& x, std::size_t off) {
    std::vector<typename SparseVec<K>::Term> t;
    for (const auto& [i, y] : x) t.emplace_back(i + off, y);
    return SparseVec<K>::from_terms(std::move(t));
  };
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < m.algebra().dim(); ++i) {
    for (std::size_t j = 0; j < dm; ++j) action.push_back(m.act(i, j));
    for (std::size_t j = 0; j < dn; ++j) action.push_back(shifted(n.act(i, j), dm));
  }
  std::vector<Element<K>> d;
  for (std::size_t j = 0; j < dm; ++j) d.push_back(m.d(j));
  for (std::size_t j = 0; j < dn; ++j) d.push_back(shifted(n.d(j), dm));
  return CurvedModule<K>(m.algebra_ptr(), v, std::move(action), GradedMap<K>(v, v, 1, std::move(d)));
}

/// Transport a module along a homogeneous change of basis (columns = new basis in old coordinates).
template <Field K>
CurvedModule<K> change_basis(const CurvedModule<K>& m, const Matrix<K>& basis, const std::vector<std::string>& labels) {
  const std::size_t n = m.dim();
  auto inv = inverse(basis);
  if (!inv || labels.size() != n) throw std::invalid_argument("change_basis: need an invertible matrix and one label per vector");
  std::vector<BasisElement> b;
  std::vector<Element<K>> cols;
  for (std::size_t k = 0; k < n; ++k) {
    auto col = Element<K>::from_dense(basis.column(k));
    auto deg = degree_of(m.space(), col);
    if (!deg) throw std::invalid_argument("change_basis: zero basis vector");
    b.push_back({labels[k], *deg});
    cols.push_back(std::move(col));
  }
  GradedVectorSpace v(std::move(b));
  auto to_new = [&](const Element<K>& x) { return Element<K>::from_dense(inv->apply(std::span<const K>(x.to_dense(n)))); };
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < m.algebra().dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) action.push_back(to_new(m.act(i, cols[j])));
  std::vector<Element<K>> d;
  for (std::size_t j = 0; j < n; ++j) d.push_back(to_new(m.d(cols[j])));
  return CurvedModule<K>(m.algebra_ptr(), v, std::move(action), GradedMap<K>(v, v, 1, std::move(d)));
}

/// Submodule generated by homogeneous vectors (closed under the action and d),
/// with basis chosen greedily from the spanning set in the order produced.
template <Field K>
CurvedModule<K> submodule(const CurvedModule<K>& m, const std::vector<Element<K>>& generators, const std::string& prefix = "s") {
  const std::size_t n = m.dim();
  std::vector<Element<K>> basis;
  std::vector<Vec<K>> dense;
  auto try_add = [&](const Element<K>& x) {
    if (x.empty()) return false;
    auto cand = dense;
    cand.push_back(x.to_dense(n));
    if (independent_subset(cand, n).size() == cand.size()) {
      dense = std::move(cand);
      basis.push_back(x);
      return true;
    }
    return false;
  };
  for (const auto& g : generators) try_add(g);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto x = basis[k];
    for (std::size_t i = 0; i < m.algebra().dim(); ++i) try_add(m.act(i, x));
    try_add(m.d(x));
  }
  std::vector<BasisElement> b;
  for (std::size_t k = 0; k < basis.size(); ++k)
    b.push_back({prefix + std::to_string(k), degree_of(m.space(), basis[k]).value()});
  GradedVectorSpace v(std::move(b));
  auto coords = [&](const Element<K>& x) {
    auto c = coordinates(dense, std::span<const K>(x.to_dense(n)));
    if (!c) throw std::logic_error("submodule: span is not closed");
    return Element<K>::from_dense(*c);
  };
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < m.algebra().dim(); ++i)
    for (const auto& x : basis) action.push_back(coords(m.act(i, x)));
  std::vector<Element<K>> d;
  for (const auto& x : basis) d.push_back(coords(m.d(x)));
  return CurvedModule<K>(m.algebra_ptr(), v, std::move(action), GradedMap<K>(v, v, 1, std::move(d)));
}

/// Structural equality: same algebra structure, space, action and differential.
template <Field K>
bool same_module(const CurvedModule<K>& m, const CurvedModule<K>& n) {
  const auto& a = m.algebra();
  const auto& b = n.algebra();
  return a.space() == b.space() && a.mult_table() == b.mult_table() && a.diff() == b.diff() &&
         a.curvature() == b.curvature() && m.space() == n.space() && m.action_table() == n.action_table() &&
         m.diff() == n.diff();
}

template <Field K>
bool same_algebra(const CurvedDgAlgebra<K>& a, const CurvedDgAlgebra<K>& b) {
  return a.space() == b.space() && a.unit() == b.unit() && a.mult_table() == b.mult_table() && a.diff() == b.diff() &&
         a.curvature() == b.curvature();
}

}  // namespace kmd
