#include "catch_amalgamated.hpp"
#include "kmd/builtins.hpp"
#include "kmd/koszul.hpp"
#include "kmd/morita.hpp"
#include "kmd/random.hpp"

using namespace kmd;
using Q = Rational;

namespace {

Element<Q> e(std::size_t i, long c = 1) { return Element<Q>::single(i, Q(c)); }

AlgebraPtr<Q> named(const std::string& name) { return share(builtin<Q>(name).algebra); }

// A random combination of module maps that is an isomorphism, if one is found.
bool isomorphic(Rng& rng, const CurvedModule<Q>& x, const CurvedModule<Q>& y) {
  if (x.dim() != y.dim()) return false;
  auto homs = module_homs(x, y);
  if (homs.empty()) return x.dim() == 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Accumulator<Q> acc;
    for (const auto& h : homs) acc.add(h, rng.scalar<Q>(3));
    auto flat = acc.finish();
    std::vector<Element<Q>> cols(x.dim());
    std::vector<std::vector<SparseVec<Q>::Term>> terms(x.dim());
    for (const auto& [idx, c] : flat) terms[idx / y.dim()].emplace_back(idx % y.dim(), c);
    for (std::size_t j = 0; j < x.dim(); ++j) cols[j] = Element<Q>::from_terms(std::move(terms[j]));
    if (is_module_isomorphism(x, y, GradedMap<Q>(x.space(), y.space(), 0, std::move(cols)))) return true;
  }
  return false;
}

// The projective A·e for a basis idempotent e.
CurvedModule<Q> projective(const AlgebraPtr<Q>& a, std::size_t idem) {
  return submodule(regular_module(a), {e(idem)}, "p");
}

std::map<int, std::size_t> betti(const TruncatedTensorAlgebra<Q>& t, int lo, int hi) {
  return betti_numbers(cohomology(underlying_complex(t), lo, hi));
}

}  // namespace

TEST_CASE("radicals") {
  CHECK(radical(split_semisimple<Q>(2)).empty());
  auto dn = radical(dual_numbers<Q>());
  REQUIRE(dn.size() == 1);
  CHECK(dn[0].size() == 1);
  CHECK(dn[0].begin()->first == 1);
  auto ut = upper_triangular<Q>();
  auto r = radical(ut);
  REQUIRE(r.size() == 1);
  CHECK(r[0].size() == 1);
  CHECK(r[0].begin()->first == 1);  // e12
  auto q = quotient_algebra(ut, r);
  CHECK(q.algebra->dim() == 2);
  CHECK(radical(*q.algebra).empty());
  CHECK(count_simples(q.algebra) == 2);
  CHECK(radical(matrix_algebra_2<Q>()).empty());
  CHECK(radical(truncated_polynomial<Q>(5)).size() == 4);
}

TEST_CASE("radical needs a large enough characteristic") {
  CHECK_THROWS_AS(radical(truncated_polynomial<Fp<3>>(5)), std::domain_error);
  CHECK(radical(truncated_polynomial<Fp<7>>(5)).size() == 4);
  CHECK_THROWS(radical(dual_numbers<Q>(1)));  // not ordinary
}

TEST_CASE("property: the radical is a nilpotent ideal") {
  Rng rng(30);
  int tested = 0;
  while (tested < 15) {
    auto a = random_algebra<Q>(rng);
    if (!is_ordinary(a)) continue;
    ++tested;
    auto r = radical(a);
    auto k = nilpotency_index(a, r);
    REQUIRE(k);
    CHECK(*k <= a.dim());
    // two-sided: products with basis vectors stay in the span
    std::vector<Vec<Q>> span;
    for (const auto& x : r) span.push_back(x.to_dense(a.dim()));
    for (const auto& x : r)
      for (std::size_t i = 0; i < a.dim(); ++i) {
        auto s1 = span, s2 = span;
        s1.push_back(a.mul(x, i).to_dense(a.dim()));
        s2.push_back(a.mul(i, x).to_dense(a.dim()));
        CHECK(independent_subset(s1, a.dim()).size() == r.size());
        CHECK(independent_subset(s2, a.dim()).size() == r.size());
      }
  }
}

TEST_CASE("simple module counts") {
  CHECK(count_simples(named("k")) == 1);
  CHECK(count_simples(named("kxk")) == 2);
  CHECK(count_simples(named("kxkxk")) == 3);
  CHECK(count_simples(named("upper_tri_2")) == 2);
  CHECK(count_simples(named("trunc_poly_5")) == 1);
  CHECK(count_simples(named("mat2")) == 1);
  CHECK(count_simples(named("dual_numbers")) == 1);
  CHECK_THROWS(count_simples(named("acyclic2")));
}

TEST_CASE("simple modules are pairwise distinct, split, and fill the semisimple quotient") {
  Rng rng(31);
  for (const auto* name : {"k", "kxk", "kxkxk", "upper_tri_2", "trunc_poly_5", "mat2", "dual_numbers"}) {
    INFO(name);
    auto a = named(name);
    auto w = wedderburn(a);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < w.simples.size(); ++i) {
      const auto& s = w.simples[i];
      CHECK(validate(s).ok());
      CHECK(module_homs(s, s).size() == 1);  // End = k
      sum += s.dim() * s.dim();
      for (std::size_t j = 0; j < w.simples.size(); ++j)
        if (i != j) CHECK(module_homs(s, w.simples[j]).empty());
      // simple: every nonzero vector generates
      for (int t = 0; t < 5; ++t) {
        auto v = random_element<Q>(rng, s.space(), 0);
        if (!v.empty()) CHECK(submodule(s, {v}).dim() == s.dim());
      }
    }
    CHECK(sum == w.quotient.algebra->dim());
  }
}

TEST_CASE("property: simple counts add over products") {
  Rng rng(32);
  int tested = 0;
  while (tested < 10) {
    auto a = random_algebra<Q>(rng);
    auto b = random_algebra<Q>(rng);
    if (!is_ordinary(a) || !is_ordinary(b) || a.dim() + b.dim() > 7) continue;
    std::size_t ca = 0, cb = 0;
    try {
      ca = count_simples(share(a));
      cb = count_simples(share(b));
    } catch (const std::domain_error&) {
      continue;  // a non-split block over Q
    }
    ++tested;
    auto p = share(product(a, b).algebra);
    CHECK(count_simples(p) == ca + cb);
  }
}

TEST_CASE("injective cogenerators") {
  Rng rng(33);
  auto k = named("k");
  CHECK(injective_cogenerator(k).dim() == 1);
  auto kk = named("kxk");
  CHECK(isomorphic(rng, injective_cogenerator(kk), regular_module(kk)));
  auto ut = named("upper_tri_2");
  auto m = injective_cogenerator(ut);
  CHECK(cogenerates_simples(ut, m));
  for (const auto& s : simple_modules(ut)) CHECK_FALSE(module_homs(s, m).empty());
  // a single simple does not cogenerate
  auto s = simple_modules(ut);
  CHECK_FALSE((cogenerates_simples(ut, s[0]) && cogenerates_simples(ut, s[1])));
}

TEST_CASE("Γ for A = k is k") {
  auto k = named("k");
  auto g = gamma(injective_cogenerator(k));
  CHECK(g.algebra->dim() == 1);
  CHECK(validate(*g.algebra).ok());
}

TEST_CASE("Γ = End_A(A*) is A^op for the upper triangular algebra") {
  auto a = named("upper_tri_2");
  auto m = injective_cogenerator(a);
  auto g = gamma(m);
  REQUIRE(g.algebra->dim() == 3);
  CHECK(validate(*g.algebra).ok());
  CHECK(validate(g.module).ok());
  // ρ_b: φ ↦ φ(b ·) commutes with the A-action, and ρ_b ρ_c = ρ_{cb}
  const std::size_t n = a->dim();
  SpanCoordinates<Q> coords(g.maps, n * n);
  std::vector<Element<Q>> cols;
  for (std::size_t i = 0; i < n; ++i) {
    Accumulator<Q> acc;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto c = a->product(i, k).coefficient(j);
        if (!c.is_zero()) acc.add(hom_index(j, k, n), c);
      }
    cols.push_back(coords(acc.finish()));
  }
  auto op = share(opposite(*a));
  CurvedMorphism<Q> iso{op, g.algebra, GradedMap<Q>(op->space(), g.algebra->space(), 0, std::move(cols)), {}};
  CHECK(validate(iso).ok());
  CHECK_NOTHROW(inverse_morphism(iso));
}

TEST_CASE("classical Morita duality: the unit is an isomorphism") {
  Rng rng(34);
  for (const auto* name : {"upper_tri_2", "kxk"}) {
    INFO(name);
    auto a = named(name);
    auto m = injective_cogenerator(a);
    auto g = gamma(m);
    std::vector<CurvedModule<Q>> ns = simple_modules(a);
    auto ra = regular_module(a);
    for (std::size_t i = 0; i < a->dim(); ++i)
      if (a->product(i, i) == e(i)) ns.push_back(projective(a, i));
    for (int t = 0; t < 10; ++t) ns.push_back(random_module(rng, a));
    ns.push_back(ra);
    ns.push_back(m);
    for (const auto& n : ns) {
      REQUIRE(validate(n).ok());
      auto u = classical_unit(g, m, n);
      CHECK(validate(u.f.module).ok());
      CHECK(validate(u.gf.module).ok());
      CHECK(is_module_isomorphism(n, u.gf.module, u.unit));
    }
  }
}

TEST_CASE("classical Morita duality: the other composite is an isomorphism") {
  Rng rng(35);
  for (const auto* name : {"upper_tri_2", "kxk", "dual_numbers"}) {
    INFO(name);
    auto a = named(name);
    auto m = injective_cogenerator(a);
    auto g = gamma(m);
    for (int t = 0; t < 6; ++t) {
      auto l = random_module(rng, g.algebra);
      auto gl = classical_G(g, m, l);
      auto fgl = classical_F(g, m, gl.module);
      auto ev = evaluation_map(l, gl, fgl, m.dim());
      CHECK(is_module_isomorphism(l, fgl.module, ev));
    }
  }
}

TEST_CASE("F sends simples to simples") {
  Rng rng(36);
  for (const auto* name : {"upper_tri_2", "kxkxk", "mat2"}) {
    INFO(name);
    auto a = named(name);
    auto m = injective_cogenerator(a);
    auto g = gamma(m);
    auto gs = simple_modules(g.algebra);
    for (const auto& s : simple_modules(a)) {
      auto fs = classical_F(g, m, s).module;
      std::size_t matches = 0;
      for (const auto& t : gs) matches += isomorphic(rng, fs, t) ? 1 : 0;
      CHECK(matches == 1);
    }
  }
}

TEST_CASE("Ext oracle examples") {
  auto dn = named("dual_numbers");
  auto k = character_module(dn, {Q(1), Q(0)});
  CHECK(ext_oracle(k, k, 5) == std::vector<std::size_t>{1, 1, 1, 1, 1, 1});
  auto kk = named("kxk");
  auto s = simple_modules(kk);
  for (const auto& x : s)
    for (const auto& y : s) {
      auto ext = ext_oracle(x, y, 3);
      CHECK(ext[0] == module_homs(x, y).size());
      for (std::size_t n = 1; n <= 3; ++n) CHECK(ext[n] == 0);
    }
  auto ut = named("upper_tri_2");
  auto us = simple_modules(ut);
  std::size_t total1 = 0;
  for (const auto& x : us)
    for (const auto& y : us) total1 += ext_oracle(x, y, 2)[1];
  CHECK(total1 == 1);  // a single arrow
  Rng rng(37);
  for (int t = 0; t < 8; ++t) {
    auto x = random_module(rng, ut), y = random_module(rng, ut);
    CHECK(ext_oracle(x, y, 1)[0] == module_homs(x, y).size());
  }
}

TEST_CASE("global dimension probe") {
  auto kk = global_dimension_probe(named("kxk"), 3);
  CHECK_FALSE(kk.exceeded);
  CHECK(kk.dimension == 0);
  auto ut = global_dimension_probe(named("upper_tri_2"), 3);
  CHECK_FALSE(ut.exceeded);
  CHECK(ut.dimension == 1);
  for (std::size_t n : {1u, 2u, 4u}) CHECK(global_dimension_probe(named("dual_numbers"), n).exceeded);
  CHECK_FALSE(global_dimension_probe(named("mat2"), 2).exceeded);
}

TEST_CASE("H(E) matches the Ext oracle") {
  const std::size_t w = 5;
  struct Case {
    const char* algebra;
    std::string module;
  };
  for (const auto& c : {Case{"dual_numbers", "k"}, Case{"upper_tri_2", "A*"}, Case{"kxk", "k"}, Case{"mat2", "A"}}) {
    INFO(c.algebra << " " << c.module);
    auto bi = builtin<Q>(c.algebra);
    auto a = share(bi.algebra);
    auto m = c.module == "k" ? character_module(a, *bi.character) : c.module == "A" ? regular_module(a) : dual_module(a);
    auto kd = koszul_dual(m, w);
    auto h = betti(kd.e, 0, static_cast<int>(w) - 2);
    auto ext = ext_oracle(m, m, w - 2);
    for (std::size_t n = 0; n + 2 <= w; ++n) CHECK(h.at(static_cast<int>(n)) == ext[n]);
  }
}
