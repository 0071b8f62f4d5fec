#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kmd/builtins.hpp"
#include "kmd/koszul.hpp"

namespace kmd {

/// Seeded source for the property tests. Draws are reduced modulo the range
/// so a seed gives the same objects on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }

  template <Field K>
  K scalar(int bound = 2) {
    return K(static_cast<long>(between(-bound, bound)));
  }
  template <Field K>
  K nonzero_scalar(int bound = 2) {
    for (;;)
      if (auto x = scalar<K>(bound); !x.is_zero()) return x;
  }

 private:
  std::mt19937_64 engine_;
};

/// Random invertible matrix preserving the grading of v: one random block per degree.
template <Field K>
Matrix<K> random_graded_basis(Rng& rng, const GradedVectorSpace& v) {
  auto m = Matrix<K>::identity(v.dim());
  for (int n = v.min_degree(); !v.empty() && n <= v.max_degree(); ++n) {
    const auto& comp = v.component(n);
    if (comp.empty()) continue;
    for (;;) {
      Matrix<K> block(comp.size(), comp.size());
      for (std::size_t r = 0; r < comp.size(); ++r)
        for (std::size_t c = 0; c < comp.size(); ++c) block(r, c) = rng.scalar<K>();
      if (!inverse(block)) continue;
      for (std::size_t r = 0; r < comp.size(); ++r)
        for (std::size_t c = 0; c < comp.size(); ++c) m(comp[r], comp[c]) = block(r, c);
      break;
    }
  }
  return m;
}

inline std::vector<std::string> labels_of(const GradedVectorSpace& v) {
  std::vector<std::string> out;
  for (const auto& e : v.basis()) out.push_back(e.label);
  return out;
}

template <Field K>
CurvedDgAlgebra<K> random_rebase(Rng& rng, const CurvedDgAlgebra<K>& a) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a.dim(); ++i) labels.push_back("b" + std::to_string(i));
  return change_basis(a, random_graded_basis<K>(rng, a.space()), labels);
}

template <Field K>
CurvedModule<K> random_rebase(Rng& rng, const CurvedModule<K>& m) {
  return change_basis(m, random_graded_basis<K>(rng, m.space()), labels_of(m.space()));
}

/// Graded algebra of dimension ≤ 4 with degrees in [-1, 1], drawn from a
/// fixed list of families and then written in a random homogeneous basis.
template <Field K>
CurvedDgAlgebra<K> random_algebra(Rng& rng) {
  auto deg = [&] { return rng.between(-1, 1); };
  CurvedDgAlgebra<K> a;
  switch (rng.below(13)) {
    case 0: a = ground_field<K>(); break;
    case 1: a = split_semisimple<K>(rng.between(2, 4)); break;
    case 2: a = dual_numbers<K>(deg()); break;
    case 3: a = truncated_polynomial<K>(rng.between(3, 4)); break;
    case 4: a = exterior_pair<K>(); break;
    case 5: a = upper_triangular<K>(deg()); break;
    case 6: a = acyclic_two_dim<K>(); break;
    case 7: a = matrix_algebra_2<K>(deg()); break;
    case 8: {
      auto u = upper_triangular<K>(1);
      a = inner_differential(u, Element<K>::single(1, rng.nonzero_scalar<K>()));
      break;
    }
    case 9: a = koszul_pair<K>(); break;
    case 10: a = product(dual_numbers<K>(deg()), ground_field<K>()).algebra; break;
    case 11: a = product(acyclic_two_dim<K>(), rng.coin() ? ground_field<K>() : dual_numbers<K>(0)).algebra; break;
    default: a = tensor_product(dual_numbers<K>(deg()), dual_numbers<K>(deg())); break;
  }
  return random_rebase(rng, a);
}

/// Random degree d map on v.
template <Field K>
GradedMap<K> random_map(Rng& rng, const GradedVectorSpace& v, int d, int density = 2) {
  std::vector<Element<K>> cols;
  for (std::size_t j = 0; j < v.dim(); ++j) {
    std::vector<typename SparseVec<K>::Term> t;
    for (auto i : v.component(v.degree(j) + d))
      if (rng.below(static_cast<std::size_t>(density) + 1) != 0) t.emplace_back(i, rng.scalar<K>());
    cols.push_back(Element<K>::from_terms(std::move(t)));
  }
  return GradedMap<K>(v, v, d, std::move(cols));
}

inline GradedVectorSpace random_space(Rng& rng, std::size_t lo_dim, std::size_t hi_dim, int lo_deg, int hi_deg,
                                      const std::string& prefix = "v") {
  const std::size_t n = lo_dim + rng.below(hi_dim - lo_dim + 1);
  std::vector<int> degs;
  for (std::size_t i = 0; i < n; ++i) degs.push_back(rng.between(lo_deg, hi_deg));
  std::sort(degs.begin(), degs.end());
  std::vector<BasisElement> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back({prefix + std::to_string(i), degs[i]});
  return GradedVectorSpace(std::move(b));
}

template <Field K>
Element<K> random_element(Rng& rng, const GradedVectorSpace& v, int degree) {
  std::vector<typename SparseVec<K>::Term> t;
  for (auto i : v.component(degree)) t.emplace_back(i, rng.scalar<K>());
  return Element<K>::from_terms(std::move(t));
}

/// A curved module together with a degree 1 element of its algebra.
template <Field K>
struct CurvedSample {
  CurvedModule<K> module;
  Element<K> xi;
};

/// V (or V ⊕ V) over the curved algebra End(V, D) for random V, D and ξ.
template <Field K>
CurvedSample<K> random_curved_module(Rng& rng) {
  auto v = random_space(rng, 2, 3, -1, 1);
  auto dv = random_map<K>(rng, v, 1);
  auto end = share(endomorphism_algebra(v, dv));
  auto n = tautological_module(end, v, dv);
  if (rng.coin()) n = direct_sum(n, n);
  n = random_rebase(rng, n);
  return {std::move(n), random_element<K>(rng, end->space(), 1)};
}

/// Submodule of a free module generated by a few random homogeneous vectors,
/// in a random basis. Empty results are redrawn.
template <Field K>
CurvedModule<K> random_submodule(Rng& rng, const CurvedModule<K>& ambient, std::size_t max_generators = 2) {
  const auto& v = ambient.space();
  for (;;) {
    std::vector<Element<K>> gens;
    const std::size_t g = 1 + rng.below(max_generators);
    for (std::size_t k = 0; k < g; ++k) {
      const int deg = v.degree(rng.below(v.dim()));
      gens.push_back(random_element<K>(rng, v, deg));
    }
    auto s = submodule(ambient, gens, "n");
    if (s.dim() > 0) return random_rebase(rng, s);
  }
}

/// Random module over a: a submodule of A or A ⊕ A.
template <Field K>
CurvedModule<K> random_module(Rng& rng, const AlgebraPtr<K>& a, std::size_t max_generators = 2) {
  auto reg = regular_module(a);
  return random_submodule(rng, rng.coin() ? reg : direct_sum(reg, reg), max_generators);
}

/// Random direct sum of the given modules with total dimension ≤ max_dim, in a random basis.
template <Field K>
CurvedModule<K> random_sum(Rng& rng, const std::vector<CurvedModule<K>>& pieces, std::size_t max_dim) {
  std::vector<std::size_t> fit;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].dim() <= max_dim) fit.push_back(i);
  auto out = pieces[fit[rng.below(fit.size())]];
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& p = pieces[fit[rng.below(fit.size())]];
    if (out.dim() + p.dim() > max_dim || rng.coin()) continue;
    out = direct_sum(out, p);
  }
  return random_rebase(rng, out);
}

/// Random complex built from pieces k → k and k, conjugated by a random graded basis.
template <Field K>
Complex<K> random_complex(Rng& rng, int lo, int hi) {
  std::vector<BasisElement> b;
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  const std::size_t pieces = 1 + rng.below(5);
  for (std::size_t p = 0; p < pieces; ++p) {
    const int n = rng.between(lo, hi);
    b.push_back({"c" + std::to_string(b.size()), n});
    if (n < hi && rng.below(3) != 0) {
      arrows.emplace_back(b.size() - 1, b.size());
      b.push_back({"c" + std::to_string(b.size()), n + 1});
    }
  }
  GradedVectorSpace v(std::move(b));
  std::vector<Element<K>> cols(v.dim());
  for (auto [s, t] : arrows) cols[s] = Element<K>::single(t, rng.nonzero_scalar<K>());
  GradedMap<K> d(v, v, 1, std::move(cols));
  auto t = random_graded_basis<K>(rng, v);
  auto tinv = *inverse(t);
  auto as_map = [&](const Matrix<K>& m) {
    std::vector<Element<K>> c;
    for (std::size_t j = 0; j < v.dim(); ++j) c.push_back(Element<K>::from_dense(m.column(j)));
    return GradedMap<K>(v, v, 0, std::move(c));
  };
  return Complex<K>(v, compose(as_map(tinv), compose(d, as_map(t))));
}

/// Cone of a random chain isomorphism C → C', hence acyclic.
template <Field K>
Complex<K> random_acyclic_cone(Rng& rng, int lo, int hi) {
  auto c = random_complex<K>(rng, lo, hi);
  const auto& v = c.space();
  auto t = random_graded_basis<K>(rng, v);
  auto tinv = *inverse(t);
  auto as_map = [&](const Matrix<K>& m) {
    std::vector<Element<K>> cols;
    for (std::size_t j = 0; j < v.dim(); ++j) cols.push_back(Element<K>::from_dense(m.column(j)));
    return GradedMap<K>(v, v, 0, std::move(cols));
  };
  auto f = as_map(tinv);
  Complex<K> c2(v, compose(f, compose(c.differential(), as_map(t))));
  return cone(f, c, c2);
}

}  // namespace kmd
