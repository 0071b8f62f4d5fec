#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/graded.hpp"

namespace kmd {

/// Cochain complex: graded space with a degree +1 differential squaring to zero.
/// The d∘d = 0 check runs at construction.
template <Field K>
class Complex {
 public:
  Complex() = default;
  Complex(GradedVectorSpace space, GradedMap<K> differential) : space_(std::move(space)), d_(std::move(differential)) {
    if (!(d_.source() == space_) || !(d_.target() == space_) || d_.degree() != 1)
      throw std::invalid_argument("Complex: differential must be a degree 1 endomorphism of the space");
    for (std::size_t j = 0; j < space_.dim(); ++j)
      if (!d_.apply(d_.column(j)).empty())
        throw std::invalid_argument("Complex: d∘d ≠ 0 on basis vector '" + space_.label(j) + "'");
  }

  static Complex zero_differential(GradedVectorSpace v) {
    auto d = GradedMap<K>::zero(v, v, 1);
    return Complex(std::move(v), std::move(d));
  }

  [[nodiscard]] const GradedVectorSpace& space() const { return space_; }
  [[nodiscard]] const GradedMap<K>& differential() const { return d_; }

 private:
  GradedVectorSpace space_;
  GradedMap<K> d_;
};

inline GradedVectorSpace shift(const GradedVectorSpace& v, int k) {
  std::vector<BasisElement> b;
  for (const auto& e : v.basis()) b.push_back({e.label, e.degree + k});
  return GradedVectorSpace(std::move(b));
}

/// Σ^k C, with differential (-1)^k d.
template <Field K>
Complex<K> shift(const Complex<K>& c, int k) {
  auto v = shift(c.space(), k);
  std::vector<SparseVec<K>> cols;
  for (const auto& col : c.differential().columns()) cols.push_back(col.scaled(sign<K>(k)));
  return Complex<K>(v, GradedMap<K>(v, v, 1, std::move(cols)));
}

inline std::string dual_label(const std::string& l) { return l + "*"; }

/// Linear dual: the dual of the degree n component sits in degree -n.
inline GradedVectorSpace dual(const GradedVectorSpace& v) {
  std::vector<BasisElement> b;
  for (const auto& e : v.basis()) b.push_back({dual_label(e.label), -e.degree});
  return GradedVectorSpace(std::move(b));
}

/// Transpose f*: W* → V* of f: V → W, (f*φ)(v) = (-1)^{|f||φ|} φ(f v).
template <Field K>
GradedMap<K> dual(const GradedMap<K>& f) {
  auto vs = dual(f.source());
  auto ws = dual(f.target());
  std::vector<std::vector<typename SparseVec<K>::Term>> terms(ws.dim());
  for (std::size_t j = 0; j < f.source().dim(); ++j)
    for (const auto& [i, c] : f.column(j)) {
      // φ = w_i^* has degree -|w_i|
      const bool flip = odd(static_cast<long>(f.degree()) * ws.degree(i));
      terms[i].emplace_back(j, flip ? -c : c);
    }
  std::vector<SparseVec<K>> cols;
  for (auto& t : terms) cols.push_back(SparseVec<K>::from_terms(std::move(t)));
  return GradedMap<K>(ws, vs, f.degree(), std::move(cols));
}

/// Dual complex, with the Hom(-, k) differential dφ = -(-1)^{|φ|} φ∘d, so that
/// dual(C) coincides with hom(C, k).
template <Field K>
Complex<K> dual(const Complex<K>& c) {
  auto t = dual(c.differential());
  std::vector<SparseVec<K>> cols;
  for (const auto& col : t.columns()) cols.push_back(col.scaled(K(-1)));
  return Complex<K>(t.source(), GradedMap<K>(t.source(), t.target(), 1, std::move(cols)));
}

/// Basis v_i ⊗ w_j in lexicographic (i, j) order.
inline GradedVectorSpace tensor(const GradedVectorSpace& v, const GradedVectorSpace& w) {
  std::vector<BasisElement> b;
  b.reserve(v.dim() * w.dim());
  for (const auto& x : v.basis())
    for (const auto& y : w.basis()) b.push_back({x.label + "⊗" + y.label, x.degree + y.degree});
  return GradedVectorSpace(std::move(b));
}

/// f ⊗ g with the Koszul rule (f⊗g)(v⊗w) = (-1)^{|g||v|} f(v) ⊗ g(w).
template <Field K>
GradedMap<K> tensor(const GradedMap<K>& f, const GradedMap<K>& g) {
  const auto& v = f.source();
  const auto& w = g.source();
  const std::size_t tw = g.target().dim();
  std::vector<SparseVec<K>> cols;
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < w.dim(); ++j) {
      const K s = sign<K>(static_cast<long>(g.degree()) * v.degree(i));
      std::vector<typename SparseVec<K>::Term> terms;
      for (const auto& [a, x] : f.column(i))
        for (const auto& [b, y] : g.column(j)) terms.emplace_back(a * tw + b, s * x * y);
      cols.push_back(SparseVec<K>::from_terms(std::move(terms)));
    }
  return GradedMap<K>(tensor(v, w), tensor(f.target(), g.target()), f.degree() + g.degree(), std::move(cols));
}

/// C ⊗ D with d(c⊗e) = dc⊗e + (-1)^{|c|} c⊗de.
template <Field K>
Complex<K> tensor(const Complex<K>& c, const Complex<K>& d) {
  auto sum = linear_combination(K(1), tensor(c.differential(), GradedMap<K>::identity(d.space())), K(1),
                                tensor(GradedMap<K>::identity(c.space()), d.differential()));
  auto space = sum.source();
  return Complex<K>(std::move(space), std::move(sum));
}

/// Hom(V, W): basis element (i, j) is the elementary map v_i ↦ w_j, of degree
/// |w_j| - |v_i|; ordered lexicographically by (i, j).
inline GradedVectorSpace hom(const GradedVectorSpace& v, const GradedVectorSpace& w) {
  std::vector<BasisElement> b;
  for (const auto& x : v.basis())
    for (const auto& y : w.basis()) b.push_back({"[" + x.label + "→" + y.label + "]", y.degree - x.degree});
  return GradedVectorSpace(std::move(b));
}

/// Flat index of the elementary map v_i ↦ w_j in hom(V, W).
inline std::size_t hom_index(std::size_t i, std::size_t j, std::size_t dim_w) { return i * dim_w + j; }

/// The element of hom(V, W) corresponding to a graded map f: V → W.
template <Field K>
Vec<K> hom_element(const GradedMap<K>& f) {
  const std::size_t dw = f.target().dim();
  Vec<K> x(f.source().dim() * dw);
  for (std::size_t i = 0; i < f.source().dim(); ++i)
    for (const auto& [j, c] : f.column(i)) x[hom_index(i, j, dw)] = c;
  return x;
}

/// Hom complex with D(g) = d_W∘g - (-1)^{|g|} g∘d_V.
template <Field K>
Complex<K> hom(const Complex<K>& v, const Complex<K>& w) {
  const auto& vs = v.space();
  const auto& ws = w.space();
  auto hs = hom(vs, ws);
  const std::size_t dw = ws.dim();
  // d_v_pre[i] lists (k, c) with d(v_k) = ... + c v_i
  std::vector<std::vector<std::pair<std::size_t, K>>> d_v_pre(vs.dim());
  for (std::size_t k = 0; k < vs.dim(); ++k)
    for (const auto& [i, c] : v.differential().column(k)) d_v_pre[i].emplace_back(k, c);
  std::vector<SparseVec<K>> cols;
  for (std::size_t i = 0; i < vs.dim(); ++i)
    for (std::size_t j = 0; j < dw; ++j) {
      const int g_deg = ws.degree(j) - vs.degree(i);
      std::vector<typename SparseVec<K>::Term> terms;
      // d_W∘E_{ij}: v_i ↦ d w_j
      for (const auto& [jj, c] : w.differential().column(j)) terms.emplace_back(hom_index(i, jj, dw), c);
      // E_{ij}∘d_V: v_k ↦ c w_j whenever d v_k = ... + c v_i
      for (const auto& [k, c] : d_v_pre[i]) terms.emplace_back(hom_index(k, j, dw), odd(g_deg) ? c : -c);
      cols.push_back(SparseVec<K>::from_terms(std::move(terms)));
    }
  return Complex<K>(hs, GradedMap<K>(hs, hs, 1, std::move(cols)));
}

template <Field K>
struct CohomologyGroup {
  std::size_t betti = 0;
  std::vector<Vec<K>> representatives;  // cocycles in the flat basis of the complex
};

template <Field K>
using Cohomology = std::map<int, CohomologyGroup<K>>;

namespace detail {

/// Flat vector from coordinates on a component.
template <Field K>
Vec<K> embed(const GradedVectorSpace& v, int degree, const Vec<K>& local) {
  Vec<K> x(v.dim());
  const auto& comp = v.component(degree);
  for (std::size_t p = 0; p < comp.size(); ++p) x[comp[p]] = local[p];
  return x;
}

template <Field K>
Vec<K> restrict_to(const GradedVectorSpace& v, int degree, std::span<const K> flat) {
  const auto& comp = v.component(degree);
  Vec<K> x(comp.size());
  for (std::size_t p = 0; p < comp.size(); ++p) x[p] = flat[comp[p]];
  return x;
}

}  // namespace detail

/// H^n for lo ≤ n ≤ hi. Representatives extend a basis of the coboundaries
/// greedily in kernel-basis order (first pivot wins), so output is deterministic.
template <Field K>
Cohomology<K> cohomology(const Complex<K>& c, int lo, int hi) {
  Cohomology<K> out;
  const auto& v = c.space();
  for (int n = lo; n <= hi; ++n) {
    const std::size_t dn = v.dim(n);
    CohomologyGroup<K> group;
    if (dn > 0) {
      auto ker = eliminate(c.differential().block(n)).kernel_basis;
      auto im = eliminate(c.differential().block(n - 1)).image_basis;
      std::vector<Vec<K>> family = im;
      family.insert(family.end(), ker.begin(), ker.end());
      for (auto idx : independent_subset(family, dn))
        if (idx >= im.size()) group.representatives.push_back(detail::embed(v, n, family[idx]));
      group.betti = group.representatives.size();
    }
    out.emplace(n, std::move(group));
  }
  return out;
}

template <Field K>
Cohomology<K> cohomology(const Complex<K>& c) {
  return cohomology(c, c.space().min_degree(), c.space().max_degree());
}

template <Field K>
std::map<int, std::size_t> betti_numbers(const Cohomology<K>& h) {
  std::map<int, std::size_t> b;
  for (const auto& [n, g] : h) b[n] = g.betti;
  return b;
}

template <Field K>
bool is_acyclic(const Complex<K>& c) {
  if (c.space().empty()) return true;
  for (const auto& [n, g] : cohomology(c))
    if (g.betti != 0) return false;
  return true;
}

template <Field K>
bool is_chain_map(const GradedMap<K>& f, const Complex<K>& c, const Complex<K>& d) {
  if (!(f.source() == c.space()) || !(f.target() == d.space())) return false;
  for (std::size_t j = 0; j < c.space().dim(); ++j)
    if (!(f.apply(c.differential().column(j)) == d.differential().apply(f.column(j)))) return false;
  return true;
}

/// True iff the degree 0 chain map f induces isomorphisms H^n(C) → H^n(D) for lo ≤ n ≤ hi.
template <Field K>
bool is_quasi_iso(const GradedMap<K>& f, const Complex<K>& c, const Complex<K>& d, int lo, int hi) {
  if (f.degree() != 0) throw std::invalid_argument("is_quasi_iso: map must have degree 0");
  if (!is_chain_map(f, c, d)) throw std::invalid_argument("is_quasi_iso: not a chain map");
  auto hc = cohomology(c, lo, hi);
  auto hd = cohomology(d, lo, hi);
  for (int n = lo; n <= hi; ++n) {
    const auto& gc = hc.at(n);
    if (gc.betti != hd.at(n).betti) return false;
    if (gc.betti == 0) continue;
    auto im = eliminate(d.differential().block(n - 1)).image_basis;
    const std::size_t base = im.size();
    for (const auto& rep : gc.representatives)
      im.push_back(detail::restrict_to(d.space(), n, std::span<const K>(f.apply(std::span<const K>(rep)))));
    if (rank(Matrix<K>::from_columns(im, d.space().dim(n))) != base + gc.betti) return false;
  }
  return true;
}

/// Cone(f)^n = C^{n+1} ⊕ D^n with d(sx, y) = (-s dx, f(x) + dy).
template <Field K>
Complex<K> cone(const GradedMap<K>& f, const Complex<K>& c, const Complex<K>& d) {
  if (!is_chain_map(f, c, d) || f.degree() != 0) throw std::invalid_argument("cone: f must be a degree 0 chain map");
  const std::size_t nc = c.space().dim();
  std::vector<BasisElement> b;
  for (const auto& e : c.space().basis()) b.push_back({"s" + e.label, e.degree - 1});
  for (const auto& e : d.space().basis()) b.push_back(e);
  GradedVectorSpace v(std::move(b));
  std::vector<SparseVec<K>> cols;
  for (std::size_t j = 0; j < nc; ++j) {
    std::vector<typename SparseVec<K>::Term> t;
    for (const auto& [i, x] : c.differential().column(j)) t.emplace_back(i, -x);
    for (const auto& [i, x] : f.column(j)) t.emplace_back(nc + i, x);
    cols.push_back(SparseVec<K>::from_terms(std::move(t)));
  }
  for (std::size_t j = 0; j < d.space().dim(); ++j) {
    std::vector<typename SparseVec<K>::Term> t;
    for (const auto& [i, x] : d.differential().column(j)) t.emplace_back(nc + i, x);
    cols.push_back(SparseVec<K>::from_terms(std::move(t)));
  }
  return Complex<K>(v, GradedMap<K>(v, v, 1, std::move(cols)));
}

/// Good truncation to [n, m]: coker(d: M^{n-1} → M^n) in degree n, M^i for
/// n < i < m, ker(d: M^m → M^{m+1}) in degree m, zero elsewhere.
template <Field K>
Complex<K> truncate_complex(const Complex<K>& mc, int n, int m) {
  if (!(n < m)) throw std::invalid_argument("truncate_complex: need n < m");
  const auto& v = mc.space();
  const auto& d = mc.differential();

  // bottom: quotient basis = standard vectors of M^n not absorbed by im(d_{n-1}), greedy
  const std::size_t dn = v.dim(n);
  auto im_bottom = eliminate(d.block(n - 1)).image_basis;
  std::vector<Vec<K>> family = im_bottom;
  for (std::size_t p = 0; p < dn; ++p) family.push_back(unit_vector<K>(dn, p));
  std::vector<std::size_t> quotient_pos;
  for (auto idx : independent_subset(family, dn))
    if (idx >= im_bottom.size()) quotient_pos.push_back(idx - im_bottom.size());
  // top: kernel basis of d_m
  auto ker_top = eliminate(d.block(m)).kernel_basis;

  std::vector<BasisElement> basis;
  std::vector<std::size_t> old_of_new;  // for middle and bottom: the source flat index
  for (auto p : quotient_pos) {
    basis.push_back({"[" + v.label(v.component(n)[p]) + "]", n});
    old_of_new.push_back(v.component(n)[p]);
  }
  for (int i = n + 1; i < m; ++i)
    for (auto idx : v.component(i)) {
      basis.push_back({v.label(idx), i});
      old_of_new.push_back(idx);
    }
  const std::size_t top_offset = basis.size();
  for (std::size_t k = 0; k < ker_top.size(); ++k) basis.push_back({"z" + std::to_string(m) + "_" + std::to_string(k), m});
  GradedVectorSpace t(std::move(basis));

  std::map<std::size_t, std::size_t> new_of_old;
  for (std::size_t k = 0; k < old_of_new.size(); ++k) new_of_old[old_of_new[k]] = k;

  // coordinates of a cocycle in M^m on the kernel basis
  auto reduce_top = [&](const SparseVec<K>& x) {
    Vec<K> local(v.dim(m));
    for (const auto& [i, c] : x) local[v.position(i)] = c;
    auto coords = coordinates(ker_top, std::span<const K>(local));
    if (!coords) throw std::logic_error("truncate_complex: image of d_{m-1} not inside ker d_m");
    std::vector<typename SparseVec<K>::Term> terms;
    for (std::size_t q = 0; q < ker_top.size(); ++q)
      if (!(*coords)[q].is_zero()) terms.emplace_back(top_offset + q, (*coords)[q]);
    return SparseVec<K>::from_terms(std::move(terms));
  };

  std::vector<SparseVec<K>> cols(t.dim());
  for (std::size_t k = 0; k < t.dim(); ++k) {
    const int deg = t.degree(k);
    if (deg == m) continue;  // d(ker d_m) = 0
    const auto& image = d.column(old_of_new[k]);
    if (deg + 1 == m) {
      cols[k] = reduce_top(image);
    } else {
      std::vector<typename SparseVec<K>::Term> terms;
      for (const auto& [i, c] : image) terms.emplace_back(new_of_old.at(i), c);
      cols[k] = SparseVec<K>::from_terms(std::move(terms));
    }
  }
  return Complex<K>(t, GradedMap<K>(t, t, 1, std::move(cols)));
}

}  // namespace kmd
