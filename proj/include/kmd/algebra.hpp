#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/complex.hpp"

namespace kmd {

/// Algebra and module elements are sparse coordinate vectors in the basis.
template <Field K>
using Element = SparseVec<K>;

/// Witness that the algebra is generated: split[i] is nullopt for a generator,
/// otherwise (g, r) with e_i = e_g · e_r exactly, g a generator and r strictly
/// "shorter" (the chain of r's terminates). Validators use it to check the
/// trilinear identities on generator-first tuples only.
struct Factorization {
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> split;
};

/// Degree of a homogeneous element, nullopt for zero; throws if inhomogeneous.
template <Field K>
std::optional<int> degree_of(const GradedVectorSpace& v, const Element<K>& x) {
  std::optional<int> deg;
  for (const auto& [i, c] : x) {
    if (!deg)
      deg = v.degree(i);
    else if (*deg != v.degree(i))
      throw std::invalid_argument("element is not homogeneous");
  }
  return deg;
}

template <Field K>
bool is_homogeneous(const GradedVectorSpace& v, const Element<K>& x) {
  for (const auto& [i, c] : x)
    if (v.degree(i) != v.degree(x.begin()->first)) return false;
  return true;
}

/// Graded algebra with a degree 1 derivation d and a degree 2 curvature h.
/// A dg algebra is the case h = 0.
///
/// Construction checks the structural data only (table shapes, degree
/// homogeneity of products, d and h, unit in degree 0, h in degree 2); the
/// axioms themselves are checked by validate(), which reports witnesses.
template <Field K>
class CurvedDgAlgebra {
 public:
  CurvedDgAlgebra() = default;

  CurvedDgAlgebra(GradedVectorSpace space, Element<K> unit, std::vector<Element<K>> mult, GradedMap<K> diff,
                  Element<K> curvature = {}, std::optional<Factorization> factorization = std::nullopt)
      : space_(std::move(space)),
        unit_(std::move(unit)),
        mult_(std::move(mult)),
        diff_(std::move(diff)),
        curvature_(std::move(curvature)),
        factorization_(std::move(factorization)) {
    const std::size_t n = space_.dim();
    if (mult_.size() != n * n) throw std::invalid_argument("CurvedDgAlgebra: multiplication table must be dim × dim");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [k, c] : mult_[i * n + j]) {
          if (k >= n) throw std::invalid_argument("CurvedDgAlgebra: product index out of range");
          if (space_.degree(k) != space_.degree(i) + space_.degree(j))
            throw std::invalid_argument("CurvedDgAlgebra: product " + space_.label(i) + "·" + space_.label(j) +
                                        " is not of degree " + std::to_string(space_.degree(i) + space_.degree(j)));
        }
    if (!(diff_.source() == space_) || !(diff_.target() == space_) || diff_.degree() != 1)
      throw std::invalid_argument("CurvedDgAlgebra: differential must be a degree 1 endomorphism");
    if (unit_.empty()) throw std::invalid_argument("CurvedDgAlgebra: unit must be nonzero");
    for (const auto& [i, c] : unit_)
      if (space_.degree(i) != 0) throw std::invalid_argument("CurvedDgAlgebra: unit must have degree 0");
    for (const auto& [i, c] : curvature_)
      if (space_.degree(i) != 2)
        throw std::invalid_argument("CurvedDgAlgebra: curvature must have degree 2, found a term of degree " +
                                    std::to_string(space_.degree(i)));
    if (factorization_ && factorization_->split.size() != n)
      throw std::invalid_argument("CurvedDgAlgebra: factorization has wrong length");
  }

  [[nodiscard]] const GradedVectorSpace& space() const { return space_; }
  [[nodiscard]] std::size_t dim() const { return space_.dim(); }
  [[nodiscard]] int degree(std::size_t i) const { return space_.degree(i); }
  [[nodiscard]] const Element<K>& unit() const { return unit_; }
  [[nodiscard]] const GradedMap<K>& diff() const { return diff_; }
  [[nodiscard]] const Element<K>& curvature() const { return curvature_; }
  [[nodiscard]] bool is_curved() const { return !curvature_.empty(); }
  [[nodiscard]] const std::optional<Factorization>& factorization() const { return factorization_; }
  [[nodiscard]] const std::vector<Element<K>>& mult_table() const { return mult_; }

  /// e_i · e_j
  [[nodiscard]] const Element<K>& product(std::size_t i, std::size_t j) const { return mult_[i * dim() + j]; }

  /// Flat index of the unit if it is a single basis vector with coefficient 1.
  [[nodiscard]] std::optional<std::size_t> unit_index() const {
    if (unit_.size() == 1 && unit_.begin()->second == K(1)) return unit_.begin()->first;
    return std::nullopt;
  }

  [[nodiscard]] Element<K> mul(const Element<K>& a, const Element<K>& b) const {
    Accumulator<K> acc;
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b) acc.add(product(i, j), x * y);
    return acc.finish();
  }
  [[nodiscard]] Element<K> mul(std::size_t i, const Element<K>& b) const {
    Accumulator<K> acc;
    for (const auto& [j, y] : b) acc.add(product(i, j), y);
    return acc.finish();
  }
  [[nodiscard]] Element<K> mul(const Element<K>& a, std::size_t j) const {
    Accumulator<K> acc;
    for (const auto& [i, x] : a) acc.add(product(i, j), x);
    return acc.finish();
  }

  [[nodiscard]] Element<K> d(const Element<K>& a) const { return diff_.apply(a); }
  [[nodiscard]] const Element<K>& d(std::size_t i) const { return diff_.column(i); }

  /// Graded commutator [a, b] = ab - (-1)^{|a||b|} ba, extended bilinearly over basis terms.
  [[nodiscard]] Element<K> commutator(const Element<K>& a, const Element<K>& b) const {
    Accumulator<K> acc;
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b) {
        acc.add(product(i, j), x * y);
        const bool flip = odd(static_cast<long>(degree(i)) * degree(j));
        acc.add(product(j, i), flip ? x * y : -(x * y));
      }
    return acc.finish();
  }

  [[nodiscard]] CurvedDgAlgebra with_differential(GradedMap<K> d, Element<K> curvature) const {
    return CurvedDgAlgebra(space_, unit_, mult_, std::move(d), std::move(curvature), factorization_);
  }

 private:
  GradedVectorSpace space_;
  Element<K> unit_;
  std::vector<Element<K>> mult_;
  GradedMap<K> diff_;
  Element<K> curvature_;
  std::optional<Factorization> factorization_;
};

template <Field K>
using AlgebraPtr = std::shared_ptr<const CurvedDgAlgebra<K>>;

template <Field K>
AlgebraPtr<K> share(CurvedDgAlgebra<K> a) {
  return std::make_shared<const CurvedDgAlgebra<K>>(std::move(a));
}

/// Multiplication table from (i, j, product) triples; unspecified products are 0.
template <Field K>
std::vector<Element<K>> mult_table(std::size_t dim,
                                   const std::vector<std::tuple<std::size_t, std::size_t, Element<K>>>& entries) {
  std::vector<Element<K>> t(dim * dim);
  for (const auto& [i, j, p] : entries) t.at(i * dim + j) = p;
  return t;
}

/// The ground field k as an algebra.
template <Field K>
CurvedDgAlgebra<K> ground_field() {
  GradedVectorSpace v({{"1", 0}});
  return CurvedDgAlgebra<K>(v, Element<K>::single(0), {Element<K>::single(0)}, GradedMap<K>::zero(v, v, 1));
}

/// The two-dimensional acyclic dg algebra: basis {1, x}, x² = 0, d(x) = 1, with
/// x in degree -1 so that d has degree +1.
template <Field K>
CurvedDgAlgebra<K> acyclic_two_dim() {
  GradedVectorSpace v({{"1", 0}, {"x", -1}});
  auto mult = mult_table<K>(2, {{0, 0, Element<K>::single(0)}, {0, 1, Element<K>::single(1)}, {1, 0, Element<K>::single(1)}});
  GradedMap<K> d(v, v, 1, {Element<K>{}, Element<K>::single(0)});
  return CurvedDgAlgebra<K>(v, Element<K>::single(0), std::move(mult), std::move(d));
}

/// A^op: a ·op b = (-1)^{|a||b|} b a, same d, curvature -h.
template <Field K>
CurvedDgAlgebra<K> opposite(const CurvedDgAlgebra<K>& a) {
  const std::size_t n = a.dim();
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mult[i * n + j] = a.product(j, i).scaled(sign<K>(static_cast<long>(a.degree(i)) * a.degree(j)));
  return CurvedDgAlgebra<K>(a.space(), a.unit(), std::move(mult), a.diff(), a.curvature().scaled(K(-1)));
}

/// Tensor product A ⊗ B: (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb',
/// d = d_A ⊗ 1 + 1 ⊗ d_B, h = h_A ⊗ 1 + 1 ⊗ h_B. Basis in (i, j) order.
template <Field K>
CurvedDgAlgebra<K> tensor_product(const CurvedDgAlgebra<K>& a, const CurvedDgAlgebra<K>& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  auto v = tensor(a.space(), b.space());
  auto idx = [nb](std::size_t i, std::size_t j) { return i * nb + j; };
  auto pure = [&](const Element<K>& x, const Element<K>& y) {
    Accumulator<K> acc;
    for (const auto& [i, c] : x)
      for (const auto& [j, e] : y) acc.add(idx(i, j), c * e);
    return acc.finish();
  };
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l) {
          const auto& p = a.product(i, k);
          const auto& q = b.product(j, l);
          if (p.empty() || q.empty()) continue;
          mult[idx(i, j) * n + idx(k, l)] = pure(p, q).scaled(sign<K>(static_cast<long>(b.degree(j)) * a.degree(k)));
        }
  auto d = linear_combination(K(1), tensor(a.diff(), GradedMap<K>::identity(b.space())), K(1),
                              tensor(GradedMap<K>::identity(a.space()), b.diff()));
  auto h = pure(a.curvature(), b.unit()) + pure(a.unit(), b.curvature());
  return CurvedDgAlgebra<K>(v, pure(a.unit(), b.unit()), std::move(mult), std::move(d), std::move(h));
}

/// A ⊗ A^op, whose curvature is h⊗1 - 1⊗h.
template <Field K>
CurvedDgAlgebra<K> bimodule_envelope(const CurvedDgAlgebra<K>& a) {
  return tensor_product(a, opposite(a));
}

template <Field K>
struct ProductAlgebra {
  CurvedDgAlgebra<K> algebra;
  GradedMap<K> first;   // projection A × C → A
  GradedMap<K> second;  // projection A × C → C
};

/// Cartesian product with componentwise structure; basis (a, 0) then (0, c).
template <Field K>
ProductAlgebra<K> product(const CurvedDgAlgebra<K>& a, const CurvedDgAlgebra<K>& c) {
  const std::size_t na = a.dim(), nc = c.dim(), n = na + nc;
  std::vector<BasisElement> b;
  for (const auto& e : a.space().basis()) b.push_back({"(" + e.label + ",0)", e.degree});
  for (const auto& e : c.space().basis()) b.push_back({"(0," + e.label + ")", e.degree});
  GradedVectorSpace v(std::move(b));
  auto shifted = [](const Element<K>& x, std::size_t off) {
    std::vector<typename SparseVec<K>::Term> t;
    for (const auto& [i, y] : x) t.emplace_back(i + off, y);
    return SparseVec<K>::from_terms(std::move(t));
  };
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) mult[i * n + j] = a.product(i, j);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j) mult[(na + i) * n + na + j] = shifted(c.product(i, j), na);
  std::vector<Element<K>> dcols;
  for (std::size_t i = 0; i < na; ++i) dcols.push_back(a.d(i));
  for (std::size_t i = 0; i < nc; ++i) dcols.push_back(shifted(c.d(i), na));
  GradedMap<K> d(v, v, 1, std::move(dcols));
  auto unit = a.unit() + shifted(c.unit(), na);
  auto h = a.curvature() + shifted(c.curvature(), na);
  std::vector<Element<K>> p1, p2;
  for (std::size_t i = 0; i < n; ++i) {
    p1.push_back(i < na ? Element<K>::single(i) : Element<K>{});
    p2.push_back(i < na ? Element<K>{} : Element<K>::single(i - na));
  }
  return {CurvedDgAlgebra<K>(v, std::move(unit), std::move(mult), std::move(d), std::move(h)),
          GradedMap<K>(v, a.space(), 0, std::move(p1)), GradedMap<K>(v, c.space(), 0, std::move(p2))};
}

/// End(V) with composition, differential [D, -] and curvature D². For a
/// complex (D² = 0) this is the usual dg algebra End M.
template <Field K>
CurvedDgAlgebra<K> endomorphism_algebra(const GradedVectorSpace& v, const GradedMap<K>& dv) {
  if (!(dv.source() == v) || !(dv.target() == v) || dv.degree() != 1)
    throw std::invalid_argument("endomorphism_algebra: D must be a degree 1 endomorphism of V");
  const std::size_t m = v.dim(), n = m * m;
  auto hs = hom(v, v);
  // E(i→j) ∘ E(k→l) = δ_{l i} E(k→j)
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        mult[hom_index(i, j, m) * n + hom_index(k, i, m)] = Element<K>::single(hom_index(k, j, m));
  std::vector<typename SparseVec<K>::Term> unit_terms;
  for (std::size_t i = 0; i < m; ++i) unit_terms.emplace_back(hom_index(i, i, m), K(1));
  auto unit = Element<K>::from_terms(std::move(unit_terms));
  auto delta = Element<K>::from_dense(hom_element(dv));
  CurvedDgAlgebra<K> bare(hs, unit, mult, GradedMap<K>::zero(hs, hs, 1));
  std::vector<Element<K>> dcols;
  for (std::size_t e = 0; e < n; ++e) dcols.push_back(bare.commutator(delta, Element<K>::single(e)));
  auto h = bare.mul(delta, delta);
  return CurvedDgAlgebra<K>(hs, std::move(unit), std::move(mult), GradedMap<K>(hs, hs, 1, std::move(dcols)), std::move(h));
}

template <Field K>
CurvedDgAlgebra<K> endomorphism_algebra(const Complex<K>& m) {
  return endomorphism_algebra(m.space(), m.differential());
}

/// Re-express A in a new homogeneous basis; column k of `basis` holds the k-th
/// new basis vector in old coordinates. Labels are taken from `labels`.
template <Field K>
CurvedDgAlgebra<K> change_basis(const CurvedDgAlgebra<K>& a, const Matrix<K>& basis, const std::vector<std::string>& labels) {
  const std::size_t n = a.dim();
  if (basis.rows() != n || basis.cols() != n || labels.size() != n)
    throw std::invalid_argument("change_basis: need a square matrix and one label per vector");
  auto inv = inverse(basis);
  if (!inv) throw std::invalid_argument("change_basis: matrix is singular");
  std::vector<BasisElement> b;
  std::vector<Element<K>> cols;
  for (std::size_t k = 0; k < n; ++k) {
    auto col = Element<K>::from_dense(basis.column(k));
    auto deg = degree_of(a.space(), col);
    if (!deg) throw std::invalid_argument("change_basis: zero basis vector");
    b.push_back({labels[k], *deg});
    cols.push_back(std::move(col));
  }
  GradedVectorSpace v(std::move(b));
  auto to_new = [&](const Element<K>& x) { return Element<K>::from_dense(inv->apply(std::span<const K>(x.to_dense(n)))); };
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mult[i * n + j] = to_new(a.mul(cols[i], cols[j]));
  std::vector<Element<K>> dcols;
  for (std::size_t i = 0; i < n; ++i) dcols.push_back(to_new(a.d(cols[i])));
  return CurvedDgAlgebra<K>(v, to_new(a.unit()), std::move(mult), GradedMap<K>(v, v, 1, std::move(dcols)),
                            to_new(a.curvature()));
}

template <Field K>
struct RebasedAlgebra {
  CurvedDgAlgebra<K> algebra;  // unit is a basis vector
  Matrix<K> basis;             // new basis vectors in old coordinates (columns)
  std::size_t unit_index = 0;
};

/// Make the unit a basis vector by replacing the first basis vector that
/// occurs in it; a no-op when the unit already is a basis vector.
template <Field K>
RebasedAlgebra<K> rebase_unit(const CurvedDgAlgebra<K>& a) {
  const std::size_t n = a.dim();
  if (auto u = a.unit_index()) return {a, Matrix<K>::identity(n), *u};
  const std::size_t first = a.unit().begin()->first;
  auto basis = Matrix<K>::identity(n);
  for (const auto& [i, c] : a.unit()) basis(i, first) = c;
  std::string one = "1";
  for (bool clash = true; clash;) {
    clash = false;
    for (std::size_t i = 0; i < n; ++i)
      if (i != first && a.space().label(i) == one) clash = true;
    if (clash) one += "'";
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(i == first ? one : a.space().label(i));
  auto b = change_basis(a, basis, labels);
  return {std::move(b), std::move(basis), first};
}

}  // namespace kmd
