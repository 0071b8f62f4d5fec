#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/linear.hpp"
#include "kmd/module.hpp"

namespace kmd {

/// Degree 0, zero differential, zero curvature.
template <Field K>
bool is_ordinary(const CurvedDgAlgebra<K>& a) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.degree(i) != 0) return false;
  return a.diff().is_zero() && a.curvature().empty();
}

template <Field K>
void require_ordinary(const CurvedDgAlgebra<K>& a, const char* what) {
  if (!is_ordinary(a)) throw std::invalid_argument(std::string(what) + ": needs an ordinary algebra (degree 0, d = 0)");
}

template <Field K>
bool is_ordinary(const CurvedModule<K>& m) {
  for (std::size_t j = 0; j < m.dim(); ++j)
    if (m.degree(j) != 0) return false;
  return is_ordinary(m.algebra()) && m.diff().is_zero();
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> out;
  if (n == 0) return out;
  if (n > mpz_class("1000000000000")) throw std::domain_error("root finding: coefficient too large to factor");
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  return out;
}

}  // namespace detail

/// Distinct roots in 𝐤 of Σ c_i x^i (coefficients from low to high degree).
inline std::vector<Rational> roots_in_field(const std::vector<Rational>& poly) {
  std::vector<mpq_class> c;
  for (const auto& x : poly) c.push_back(x.value());
  while (!c.empty() && c.back() == 0) c.pop_back();
  std::vector<Rational> out;
  if (c.size() <= 1) return out;
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) out.emplace_back(0);
  c.erase(c.begin(), c.begin() + static_cast<long>(low));
  if (c.size() <= 1) return out;
  mpz_class l = 1;
  for (const auto& x : c) l = lcm(l, mpz_class(x.get_den()));
  std::vector<mpz_class> z;
  for (const auto& x : c) z.emplace_back(mpz_class(x * l));
  auto eval = [&](const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = z.rbegin(); it != z.rend(); ++it) acc = acc * x + mpq_class(*it);
    return acc;
  };
  for (const auto& p : detail::divisors(z.front()))
    for (const auto& q : detail::divisors(z.back()))
      for (int s : {1, -1}) {
        mpq_class r(p * s, q);
        r.canonicalize();
        if (eval(r) != 0) continue;
        Rational rr(r);
        bool seen = false;
        for (const auto& o : out) seen = seen || o == rr;
        if (!seen) out.push_back(rr);
      }
  return out;
}

template <std::uint32_t P>
std::vector<Fp<P>> roots_in_field(const std::vector<Fp<P>>& poly) {
  if (P > (1U << 20)) throw std::domain_error("root finding: prime too large for exhaustive search");
  std::vector<Fp<P>> out;
  bool nonzero = false;
  for (const auto& x : poly) nonzero = nonzero || !x.is_zero();
  if (!nonzero) return out;
  for (std::uint32_t v = 0; v < P; ++v) {
    Fp<P> x(static_cast<long>(v)), acc(0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    if (acc.is_zero()) out.push_back(x);
  }
  return out;
}

/// Jacobson radical by the trace form: x ∈ rad A iff tr(L_{xy}) = 0 for all y.
template <Field K>
std::vector<Element<K>> radical(const CurvedDgAlgebra<K>& a) {
  require_ordinary(a, "radical");
  const std::size_t n = a.dim();
  if (K::characteristic() != 0 && K::characteristic() <= n)
    throw std::domain_error("radical: the trace criterion needs characteristic 0 or p > dim A = " + std::to_string(n));
  std::vector<K> tr(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t) tr[k] += a.product(k, t).coefficient(t);
  Matrix<K> g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : a.product(i, j)) g(j, i) += c * tr[k];
  std::vector<Element<K>> out;
  for (const auto& v : eliminate(g).kernel_basis) out.push_back(Element<K>::from_dense(v));
  return out;
}

/// Least k with rad^k = 0 (iterated products of basis vectors), or nullopt if
/// none up to dim A + 1.
template <Field K>
std::optional<std::size_t> nilpotency_index(const CurvedDgAlgebra<K>& a, const std::vector<Element<K>>& ideal) {
  const std::size_t n = a.dim();
  std::vector<Element<K>> power = ideal;
  for (std::size_t k = 1; k <= n + 1; ++k) {
    std::vector<Vec<K>> dense;
    for (const auto& x : power) dense.push_back(x.to_dense(n));
    auto idx = independent_subset(dense, n);
    if (idx.empty()) return k;
    std::vector<Element<K>> next;
    for (auto i : idx)
      for (const auto& r : ideal) {
        auto p = a.mul(power[i], r);
        if (!p.empty()) next.push_back(std::move(p));
      }
    power = std::move(next);
  }
  return std::nullopt;
}

/// A / I for a two-sided ideal I: basis = standard basis vectors completing I,
/// `projection` A → A/I.
template <Field K>
struct QuotientAlgebra {
  AlgebraPtr<K> algebra;
  GradedMap<K> projection;
};

template <Field K>
QuotientAlgebra<K> quotient_algebra(const CurvedDgAlgebra<K>& a, const std::vector<Element<K>>& ideal) {
  const std::size_t n = a.dim();
  std::vector<Vec<K>> dense;
  for (const auto& x : ideal) dense.push_back(x.to_dense(n));
  const std::size_t r = independent_subset(dense, n).size();
  if (r != ideal.size()) throw std::invalid_argument("quotient_algebra: ideal basis is dependent");
  for (std::size_t i = 0; i < n; ++i) dense.push_back(unit_vector<K>(n, i));
  auto chosen = independent_subset(dense, n);
  std::vector<Element<K>> all(ideal);
  std::vector<std::size_t> comp;
  for (auto c : chosen)
    if (c >= r) {
      comp.push_back(c - r);
      all.push_back(Element<K>::single(c - r));
    }
  SpanCoordinates<K> coords(all, n);
  auto project = [&](const Element<K>& x) {
    Accumulator<K> acc;
    for (const auto& [k, c] : coords(x))
      if (k >= r) acc.add(k - r, c);
    return acc.finish();
  };
  std::vector<BasisElement> b;
  for (auto c : comp) b.push_back({a.space().label(c), a.degree(c)});
  GradedVectorSpace q(std::move(b));
  const std::size_t m = comp.size();
  std::vector<Element<K>> mult(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mult[i * m + j] = project(a.product(comp[i], comp[j]));
  std::vector<Element<K>> proj;
  for (std::size_t i = 0; i < n; ++i) proj.push_back(project(Element<K>::single(i)));
  auto alg = share(CurvedDgAlgebra<K>(q, project(a.unit()), std::move(mult), GradedMap<K>::zero(q, q, 1)));
  return {alg, GradedMap<K>(a.space(), q, 0, std::move(proj))};
}

/// Elements commuting with every basis vector.
template <Field K>
std::vector<Element<K>> center(const CurvedDgAlgebra<K>& a) {
  const std::size_t n = a.dim();
  std::vector<std::vector<K>> rows;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<K>> eq(n, std::vector<K>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [k, c] : a.product(i, j)) eq[k][i] += c;
      for (const auto& [k, c] : a.product(j, i)) eq[k][i] -= c;
    }
    for (auto& r : eq) rows.push_back(std::move(r));
  }
  Matrix<K> m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  std::vector<Element<K>> out;
  for (const auto& v : eliminate(m).kernel_basis) out.push_back(Element<K>::from_dense(v));
  return out;
}

/// Minimal polynomial of y in the algebra with unit f (coefficients low to high).
template <Field K>
std::vector<K> minimal_polynomial(const CurvedDgAlgebra<K>& a, const Element<K>& y, const Element<K>& f) {
  const std::size_t n = a.dim();
  std::vector<Element<K>> powers{f};
  for (;;) {
    auto next = a.mul(powers.back(), y);
    std::vector<Vec<K>> dense;
    for (const auto& p : powers) dense.push_back(p.to_dense(n));
    if (auto c = coordinates(dense, std::span<const K>(next.to_dense(n)))) {
      std::vector<K> poly;
      for (const auto& x : *c) poly.push_back(-x);
      poly.push_back(K(1));
      return poly;
    }
    powers.push_back(std::move(next));
  }
}

/// Wedderburn data of an ordinary algebra: radical, semisimple quotient S,
/// primitive central idempotents of S (in S coordinates) and one simple
/// A-module per block.
template <Field K>
struct Wedderburn {
  std::vector<Element<K>> radical;
  QuotientAlgebra<K> quotient;
  std::vector<Element<K>> central_idempotents;
  std::vector<std::size_t> block_dims;
  std::vector<CurvedModule<K>> simples;
};

template <Field K>
Wedderburn<K> wedderburn(const AlgebraPtr<K>& a) {
  auto rad = radical(*a);
  auto q = quotient_algebra(*a, rad);
  const auto& s = *q.algebra;
  const std::size_t n = s.dim();
  if (!radical(s).empty()) throw std::logic_error("wedderburn: quotient by the radical is not semisimple");

  auto z = center(s);
  std::vector<Element<K>> idem{s.unit()};
  for (const auto& zb : z) {
    std::vector<Element<K>> next;
    for (const auto& f : idem) {
      auto y = s.mul(zb, f);
      auto poly = minimal_polynomial(s, y, f);
      auto roots = roots_in_field(poly);
      if (roots.size() + 1 != poly.size())
        throw std::domain_error("count_simples: the semisimple quotient does not split over " + K::name() + "; extend the field");
      for (std::size_t i = 0; i < roots.size(); ++i) {
        Element<K> e = f;
        for (std::size_t j = 0; j < roots.size(); ++j) {
          if (j == i) continue;
          auto factor = (y - f.scaled(roots[j])).scaled((roots[i] - roots[j]).inverse());
          e = s.mul(e, factor);
        }
        next.push_back(std::move(e));
      }
    }
    idem = std::move(next);
  }

  Wedderburn<K> w{rad, q, idem, {}, {}};
  for (const auto& f : idem) {
    // block S f and a minimal left ideal in it
    std::vector<Element<K>> block;
    for (std::size_t j = 0; j < n; ++j) block.push_back(s.mul(Element<K>::single(j), f));
    auto span_of = [&](const std::vector<Element<K>>& gens) {
      std::vector<Vec<K>> dense;
      for (const auto& g : gens) dense.push_back(g.to_dense(n));
      std::vector<Element<K>> out;
      for (auto i : independent_subset(dense, n)) out.push_back(gens[i]);
      return out;
    };
    auto left_ideal = [&](const Element<K>& u) {
      std::vector<Element<K>> gens;
      for (std::size_t j = 0; j < n; ++j) gens.push_back(s.mul(Element<K>::single(j), u));
      return span_of(gens);
    };
    block = span_of(block);
    w.block_dims.push_back(block.size());
    auto ideal = block;
    for (bool shrunk = true; shrunk;) {
      shrunk = false;
      for (const auto& u : ideal) {
        auto smaller = left_ideal(u);
        if (!smaller.empty() && smaller.size() < ideal.size()) {
          ideal = std::move(smaller);
          shrunk = true;
          break;
        }
      }
    }
    if (ideal.size() * ideal.size() != block.size())
      throw std::domain_error("count_simples: a Wedderburn block of dimension " + std::to_string(block.size()) +
                              " is not a split matrix algebra over " + K::name() + "; extend the field");
    SpanCoordinates<K> coords(ideal, n);
    std::vector<BasisElement> b;
    for (std::size_t k = 0; k < ideal.size(); ++k) b.push_back({"s" + std::to_string(w.simples.size() + 1) + "_" + std::to_string(k + 1), 0});
    GradedVectorSpace v(std::move(b));
    std::vector<Element<K>> action;
    for (std::size_t i = 0; i < a->dim(); ++i)
      for (const auto& u : ideal) action.push_back(coords(s.mul(q.projection.column(i), u)));
    w.simples.emplace_back(a, v, std::move(action), GradedMap<K>::zero(v, v, 1));
  }
  return w;
}

/// Number of isomorphism classes of simple modules (split case only).
template <Field K>
std::size_t count_simples(const AlgebraPtr<K>& a) {
  return wedderburn(a).simples.size();
}

template <Field K>
std::vector<CurvedModule<K>> simple_modules(const AlgebraPtr<K>& a) {
  return wedderburn(a).simples;
}

/// Basis of Hom_A(N, M) inside hom(N, M).
template <Field K>
std::vector<Element<K>> module_homs(const CurvedModule<K>& n, const CurvedModule<K>& m) {
  std::vector<std::pair<GradedMap<K>, GradedMap<K>>> ops;
  for (std::size_t i = 0; i < n.algebra().dim(); ++i)
    ops.emplace_back(n.action_map(Element<K>::single(i)), m.action_map(Element<K>::single(i)));
  return intertwiners(n.space(), m.space(), ops);
}

/// A* with (a·φ)(b) = φ(ba).
template <Field K>
CurvedModule<K> injective_cogenerator(const AlgebraPtr<K>& a) {
  require_ordinary(*a, "injective_cogenerator");
  return dual_module(a);
}

/// Every simple module has a nonzero (hence injective) map into M.
template <Field K>
bool cogenerates_simples(const AlgebraPtr<K>& a, const CurvedModule<K>& m) {
  for (const auto& s : simple_modules(a))
    if (module_homs(s, m).empty()) return false;
  return true;
}

/// Γ = End_A(M) acting on M on the left; `maps` are the basis endomorphisms
/// in hom(M, M) and `module` is M as a Γ-module.
template <Field K>
struct Gamma {
  AlgebraPtr<K> algebra;
  std::vector<Element<K>> maps;
  CurvedModule<K> module;
};

template <Field K>
Gamma<K> gamma(const CurvedModule<K>& m) {
  require_ordinary(m.algebra(), "gamma");
  const std::size_t dm = m.dim();
  auto maps = module_homs(m, m);
  SpanCoordinates<K> coords(maps, dm * dm);
  const std::size_t g = maps.size();
  std::vector<BasisElement> b;
  for (std::size_t k = 0; k < g; ++k) b.push_back({"γ" + std::to_string(k + 1), 0});
  GradedVectorSpace v(std::move(b));
  std::vector<Element<K>> mult(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) mult[i * g + j] = coords(compose_hom(maps[i], dm, dm, maps[j]));
  Accumulator<K> id;
  for (std::size_t i = 0; i < dm; ++i) id.add(hom_index(i, i, dm), K(1));
  auto alg = share(CurvedDgAlgebra<K>(v, coords(id.finish()), std::move(mult), GradedMap<K>::zero(v, v, 1)));
  std::vector<Element<K>> action;
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t x = 0; x < dm; ++x) {
      Accumulator<K> acc;
      for (const auto& [e, c] : maps[k])
        if (e / dm == x) acc.add(e % dm, c);
      action.push_back(acc.finish());
    }
  CurvedModule<K> mod(alg, m.space(), std::move(action), m.diff());
  return {alg, std::move(maps), std::move(mod)};
}

/// Hom_R(X, M) as a module over the algebra S acting on M (commuting with R),
/// by post-composition. `maps` is the basis inside hom(X, M).
template <Field K>
struct HomModule {
  CurvedModule<K> module;
  std::vector<Element<K>> maps;
};

namespace detail {

template <Field K>
HomModule<K> hom_into(const CurvedModule<K>& x, const CurvedModule<K>& m_over_r, const CurvedModule<K>& m_over_s,
                      const std::string& prefix) {
  const std::size_t dm = m_over_r.dim();
  auto maps = module_homs(x, m_over_r);
  SpanCoordinates<K> coords(maps, x.dim() * dm);
  std::vector<BasisElement> b;
  for (std::size_t k = 0; k < maps.size(); ++k) b.push_back({prefix + std::to_string(k + 1), 0});
  GradedVectorSpace v(std::move(b));
  std::vector<Element<K>> action;
  for (std::size_t i = 0; i < m_over_s.algebra().dim(); ++i) {
    auto op = m_over_s.action_map(Element<K>::single(i));
    for (const auto& f : maps) action.push_back(coords(postcompose(op, f, dm)));
  }
  return {CurvedModule<K>(m_over_s.algebra_ptr(), v, std::move(action), GradedMap<K>::zero(v, v, 1)), std::move(maps)};
}

}  // namespace detail

/// F(N) = Hom_A(N, M), a left Γ-module.
template <Field K>
HomModule<K> classical_F(const Gamma<K>& g, const CurvedModule<K>& m, const CurvedModule<K>& n) {
  return detail::hom_into(n, m, g.module, "f");
}

/// G(L) = Hom_Γ(L, M), a left A-module.
template <Field K>
HomModule<K> classical_G(const Gamma<K>& g, const CurvedModule<K>& m, const CurvedModule<K>& l) {
  return detail::hom_into(l, g.module, m, "g");
}

/// x ↦ (f ↦ f(x)) from X to Hom(Hom(X, M), M), in the bases of `first`
/// (maps X → M) and `second` (maps first → M).
template <Field K>
GradedMap<K> evaluation_map(const CurvedModule<K>& x, const HomModule<K>& first, const HomModule<K>& second, std::size_t dm) {
  const std::size_t nf = first.maps.size();
  SpanCoordinates<K> coords(second.maps, nf * dm);
  std::vector<Element<K>> cols;
  for (std::size_t e = 0; e < x.dim(); ++e) {
    Accumulator<K> acc;
    for (std::size_t k = 0; k < nf; ++k)
      for (const auto& [i, c] : first.maps[k])
        if (i / dm == e) acc.add(hom_index(k, i % dm, dm), c);
    cols.push_back(coords(acc.finish()));
  }
  return GradedMap<K>(x.space(), second.module.space(), 0, std::move(cols));
}

/// The unit N → G(F(N)) with its target.
template <Field K>
struct MoritaUnit {
  HomModule<K> f;
  HomModule<K> gf;
  GradedMap<K> unit;
};

template <Field K>
MoritaUnit<K> classical_unit(const Gamma<K>& g, const CurvedModule<K>& m, const CurvedModule<K>& n) {
  auto f = classical_F(g, m, n);
  auto gf = classical_G(g, m, f.module);
  auto u = evaluation_map(n, f, gf, m.dim());
  return {std::move(f), std::move(gf), std::move(u)};
}

/// dim Ext^n_A(M, N) for 0 ≤ n ≤ n_max from a free resolution of M whose
/// generators at each step lift a basis of K / rad·K.
template <Field K>
std::vector<std::size_t> ext_oracle(const CurvedModule<K>& m, const CurvedModule<K>& n, std::size_t n_max) {
  const auto& a = m.algebra();
  require_ordinary(a, "ext_oracle");
  if (!is_ordinary(m) || !is_ordinary(n)) throw std::invalid_argument("ext_oracle: modules must be ordinary");
  const std::size_t na = a.dim(), dn = n.dim();
  auto rad = radical(a);

  // Current module X ⊂ ambient (dense vectors) with an action of A.
  // gens[s] = generators of the s-th free module, as vectors in the previous ambient.
  std::vector<std::vector<Vec<K>>> gens;
  std::vector<Vec<K>> kernel;  // basis of the submodule to cover, in the current ambient
  std::size_t ambient = m.dim();
  std::function<Vec<K>(std::size_t, const Vec<K>&)> act = [&](std::size_t i, const Vec<K>& x) {
    return m.act(i, Element<K>::from_dense(x)).to_dense(m.dim());
  };
  for (std::size_t j = 0; j < m.dim(); ++j) kernel.push_back(unit_vector<K>(m.dim(), j));

  for (std::size_t step = 0; step <= n_max + 1; ++step) {
    // generators: complete rad·X to X
    std::vector<Vec<K>> pool;
    for (const auto& r : rad)
      for (const auto& x : kernel) {
        Vec<K> y(ambient);
        for (const auto& [i, c] : r) axpy(y, c, std::span<const K>(act(i, x)));
        pool.push_back(std::move(y));
      }
    const std::size_t rr = independent_subset(pool, ambient).size();
    std::vector<Vec<K>> basis;
    for (auto i : independent_subset(pool, ambient)) basis.push_back(pool[i]);
    for (const auto& x : kernel) basis.push_back(x);
    std::vector<Vec<K>> g;
    for (auto i : independent_subset(basis, ambient))
      if (i >= rr) g.push_back(basis[i]);
    gens.push_back(g);
    // free module A^{|g|} → X, e_i g_j ↦ e_i · g_j; its kernel
    const std::size_t r = g.size(), dim_free = r * na;
    Matrix<K> phi(ambient, dim_free);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < na; ++i) {
        auto y = act(i, g[j]);
        for (std::size_t t = 0; t < ambient; ++t) phi(t, j * na + i) = y[t];
      }
    kernel = eliminate(phi).kernel_basis;
    ambient = dim_free;
    act = [&a, na](std::size_t i, const Vec<K>& x) {
      Vec<K> y(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].is_zero()) continue;
        for (const auto& [t, c] : a.product(i, k % na)) y[(k / na) * na + t] += c * x[k];
      }
      return y;
    };
  }

  // C^s = N^{r_s}; (δf)_j = Σ_{g,i} (u_j)_{g,i} e_i · f_g for u_j the generators of step s+1.
  auto delta = [&](std::size_t s) {
    const std::size_t rs = gens[s].size(), rt = gens[s + 1].size();
    Matrix<K> d(rt * dn, rs * dn);
    for (std::size_t j = 0; j < rt; ++j) {
      const auto& u = gens[s + 1][j];
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k].is_zero()) continue;
        const std::size_t gi = k / na, i = k % na;
        for (std::size_t x = 0; x < dn; ++x)
          for (const auto& [y, c] : n.act(i, x)) d(j * dn + y, gi * dn + x) += u[k] * c;
      }
    }
    return d;
  };
  std::vector<std::size_t> out;
  std::size_t prev_rank = 0;
  for (std::size_t s = 0; s <= n_max; ++s) {
    auto d = delta(s);
    const std::size_t rk = rank(d);
    out.push_back(gens[s].size() * dn - rk - prev_rank);
    prev_rank = rk;
  }
  return out;
}

/// Largest n ≤ n_max with Ext^n(S, T) ≠ 0 over simples S, T; `exceeded` when
/// some Ext^{n_max} is nonzero.
struct GlobalDimension {
  bool exceeded = false;
  std::size_t dimension = 0;
};

template <Field K>
GlobalDimension global_dimension_probe(const AlgebraPtr<K>& a, std::size_t n_max) {
  auto simples = simple_modules(a);
  GlobalDimension g;
  for (const auto& s : simples)
    for (const auto& t : simples) {
      auto e = ext_oracle(s, t, n_max);
      for (std::size_t k = 0; k <= n_max; ++k)
        if (e[k] != 0) g.dimension = std::max(g.dimension, k);
      if (e[n_max] != 0) g.exceeded = true;
    }
  return g;
}

}  // namespace kmd
