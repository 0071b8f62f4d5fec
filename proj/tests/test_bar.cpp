#include "catch_amalgamated.hpp"
#include "kmd/builtins.hpp"
#include "kmd/koszul.hpp"
#include "kmd/random.hpp"

using namespace kmd;
using Q = Rational;

namespace {

std::map<int, std::size_t> betti(const TruncatedTensorAlgebra<Q>& t, int lo, int hi) {
  return betti_numbers(cohomology(underlying_complex(t), lo, hi));
}

CurvedModule<Q> zero_module(const AlgebraPtr<Q>& a) {
  GradedVectorSpace v;
  return CurvedModule<Q>(a, v, {}, GradedMap<Q>::zero(v, v, 1));
}

}  // namespace

TEST_CASE("fake augmentations") {
  SECTION("k") {
    auto fa = fake_augmentation(ground_field<Q>());
    CHECK(fa.eps == std::vector<Q>{Q(1)});
    CHECK(fa.plus.empty());
  }
  SECTION("dual numbers: a genuine augmentation") {
    auto fa = fake_augmentation(dual_numbers<Q>());
    CHECK(fa.eps == std::vector<Q>{Q(1), Q(0)});
    CHECK(fa.eps_original == std::vector<Q>{Q(1), Q(0)});
    auto h = homutator(fa);
    CHECK(h == Matrix<Q>(2, 2));
    for (const auto& x : differentiator(fa)) CHECK(x.is_zero());
  }
  SECTION("2x2 matrices: the homutator is nonzero at (e12, e21)") {
    auto fa = fake_augmentation(matrix_algebra_2<Q>());
    const auto& v = fa.algebra->space();
    REQUIRE(v.label(fa.unit_index) == "1");
    const auto e12 = *v.find("e12"), e21 = *v.find("e21");
    auto h = homutator(fa);
    // ε(e12 e21) = ε(e11) = ε(1 - e22) = 1 and ε(e12) = ε(e21) = 0
    CHECK(h(e12, e21) == Q(1));
    CHECK(h(e21, e12) == Q(0));  // e21 e12 = e22, ε(e22) = 0
    CHECK(fa.eps_original == std::vector<Q>{Q(1), Q(0), Q(0), Q(0)});
  }
  SECTION("the acyclic algebra has a nonzero differentiator") {
    auto fa = fake_augmentation(acyclic_two_dim<Q>());
    auto hd = differentiator(fa);
    CHECK(hd[*fa.algebra->space().find("x")] == Q(1));
  }
}

TEST_CASE("reduced bar constructions") {
  SECTION("augmented algebras give uncurved bar constructions") {
    for (const auto* name : {"k", "kxk", "dual_numbers", "upper_tri_2"}) {
      INFO(name);
      auto b = reduced_bar(builtin<Q>(name).algebra, 3);
      CHECK_FALSE(b.bar.algebra->is_curved());
      CHECK(validate_dg(*b.bar.algebra).ok());
    }
  }
  SECTION("matrices and the acyclic algebra are curved") {
    auto m = reduced_bar(matrix_algebra_2<Q>(), 2);
    CHECK(m.bar.algebra->is_curved());
    CHECK(validate(*m.bar.algebra).ok());
    auto c = reduced_bar(acyclic_two_dim<Q>(), 3);
    CHECK(c.bar.algebra->is_curved());
    CHECK(validate(*c.bar.algebra).ok());
    // h_d contributes the single letter dual to x
    CHECK(c.word_curvature == Element<Q>::single(c.words().letter(0), Q(-1)));
  }
  SECTION("letters sit in degree 1 - |e|") {
    auto b = reduced_bar(exterior_pair<Q>(), 2);
    const auto& l = b.words().letters();
    CHECK(l.degree(*l.find("x")) == 0);
    CHECK(l.degree(*l.find("y")) == 2);
    CHECK(l.degree(*l.find("xy")) == 1);
  }
}

TEST_CASE("unreduced bar construction of k") {
  const std::size_t w = 3;
  auto b = unreduced_bar(ground_field<Q>(), w);
  const auto& t = *b.bar.algebra;
  CHECK_FALSE(t.is_curved());
  CHECK(validate_dg(t).ok());
  const auto& words = b.words();
  REQUIRE(words.size() == w + 1);
  for (std::size_t n = 0; n <= w; ++n) CHECK(t.space().dim(static_cast<int>(n)) == 1);
  CHECK(words.length(0) == 0);
  // length 1 times length 2 is the length 3 word; length 3 times length 1 is cut off
  CHECK(t.product(words.index({0}), words.index({0, 0})) == Element<Q>::single(words.index({0, 0, 0})));
  CHECK(t.product(words.index({0, 0, 0}), words.index({0})).empty());
  // H = k in the stable window
  auto h = betti(b.bar, 0, static_cast<int>(w) - 1);
  CHECK(h.at(0) == 1);
  for (int n = 1; n <= static_cast<int>(w) - 1; ++n) CHECK(h.at(n) == 0);
}

TEST_CASE("unreduced bar constructions have H = k in the stable window") {
  for (const auto* name : {"kxk", "dual_numbers", "upper_tri_2", "mat2"}) {
    INFO(name);
    auto b = unreduced_bar(builtin<Q>(name).algebra, 3);
    CHECK(validate_dg(*b.bar.algebra).ok());
    auto win = stable_window(b.bar);
    REQUIRE(win.exists);
    auto h = betti(b.bar, win.lo, win.hi);
    CHECK(h.at(0) == 1);
    for (int n = 1; n <= win.hi; ++n) CHECK(h.at(n) == 0);
  }
}

TEST_CASE("truncation respects the arity filtration") {
  for (const auto& name : builtin_names<Q>()) {
    INFO(name);
    auto a = builtin<Q>(name).algebra;
    CHECK(respects_arity_filtration(reduced_bar(a, 3).bar));
    CHECK(respects_arity_filtration(unreduced_bar(a, 2).bar));
    CHECK(respects_arity_filtration(hochschild_self(reduced_bar(a, 2))));
  }
}

TEST_CASE("canonical MC elements") {
  SECTION("k has no letters") {
    auto b = reduced_bar(ground_field<Q>(), 3);
    auto bc = with_coefficients(b, b.augmentation.algebra);
    CHECK(canonical_mc(b, bc, identity_structure_map(b)).empty());
  }
  SECTION("dual numbers: a single term x* ⊗ x") {
    auto b = reduced_bar(dual_numbers<Q>(), 4);
    auto bc = with_coefficients(b, b.augmentation.algebra);
    auto xi = canonical_mc(b, bc, identity_structure_map(b));
    REQUIRE(xi.size() == 1);
    CHECK(xi.begin()->first == bc.index(b.words().letter(0), 1));
    CHECK(is_mc(*bc.algebra, xi));
  }
  SECTION("random algebras of dimension at most 3 at W = 4") {
    Rng rng(8);
    int tested = 0;
    while (tested < 12) {
      auto a = random_algebra<Q>(rng);
      if (a.dim() > 3) continue;
      ++tested;
      auto b = reduced_bar(a, 4);
      auto bc = with_coefficients(b, b.augmentation.algebra);
      CHECK(is_mc(*bc.algebra, canonical_mc(b, bc, identity_structure_map(b))));
    }
  }
}

TEST_CASE("Hochschild algebras through the twist") {
  SECTION("A = k, C = k") {
    auto kd = koszul_dual(character_module(share(ground_field<Q>()), {Q(1)}), 3);
    CHECK(kd.e.dim() == 1);
  }
  SECTION("dual numbers with coefficients in End k: one word per arity, d = 0") {
    const std::size_t w = 4;
    auto kd = koszul_dual(character_module(share(dual_numbers<Q>()), {Q(1), Q(0)}), w);
    const auto& e = *kd.e.algebra;
    CHECK(e.dim() == w + 1);
    for (std::size_t i = 0; i < e.dim(); ++i) {
      CHECK(kd.e.arity(i) == i);
      CHECK(e.d(i).empty());
    }
  }
  SECTION("d² = 0 for random algebras at W = 4") {
    Rng rng(9);
    int tested = 0;
    while (tested < 8) {
      auto a = random_algebra<Q>(rng);
      if (a.dim() > 3) continue;
      ++tested;
      auto hs = hochschild_self(reduced_bar(a, 4));
      CHECK(validate_dg(*hs.algebra).ok());
    }
  }
}

TEST_CASE("property: bar constructions and twists of random algebras validate") {
  Rng rng(10);
  for (int t = 0; t < 25; ++t) {
    auto a = random_algebra<Q>(rng);
    auto b = reduced_bar(a, 3);
    CHECK(validate(*b.bar.algebra).ok());
    auto hs = hochschild_self(b);
    CHECK(validate_dg(*hs.algebra).ok());
  }
}

TEST_CASE("B̄A with a unit letter is BA twisted by the unit letter") {
  for (const auto& name : builtin_names<Q>()) {
    INFO(name);
    auto ul = bar_with_unit_letter(builtin<Q>(name).algebra, 3);
    CHECK(validate(*ul.algebra.algebra).ok());
    CHECK(validate(ul.iso).ok());
    CHECK(validate(ul.inclusion).ok());
    auto inv = inverse_morphism(ul.iso);
    CHECK(validate(inv).ok());
    CHECK(same_morphism(compose_curved(inv, ul.iso), identity_morphism(ul.algebra.algebra)));
    CHECK(same_morphism(compose_curved(ul.iso, inv), identity_morphism(ul.twisted)));
    CHECK(ul.twisted->curvature() == ul.iso.f.apply(ul.algebra.algebra->curvature()));
  }
}

TEST_CASE("B̄A → BA^ξ is a quasi-isomorphism for augmented algebras") {
  for (const auto* name : {"k", "kxk", "dual_numbers", "upper_tri_2"}) {
    INFO(name);
    const std::size_t w = 4;
    auto ul = bar_with_unit_letter(builtin<Q>(name).algebra, w);
    REQUIRE_FALSE(ul.twisted->is_curved());
    Complex<Q> src(ul.reduced.bar.algebra->space(), ul.reduced.bar.algebra->diff());
    Complex<Q> tgt(ul.twisted->space(), ul.twisted->diff());
    CHECK(is_quasi_iso(ul.inclusion.f, src, tgt, 0, static_cast<int>(w) - 1));
  }
}

TEST_CASE("bar resolutions") {
  SECTION("A = k, N = k: one dimension per word length, acyclic") {
    const std::size_t w = 4;
    auto r = bar_resolution_module(character_module(share(ground_field<Q>()), {Q(1)}), w);
    CHECK(validate(r.module).ok());
    for (int n = 0; n <= static_cast<int>(w); ++n) CHECK(r.module.space().dim(n) == 1);
    auto h = betti_numbers(cohomology(r.module.complex(), 0, static_cast<int>(w) - 1));
    for (const auto& [n, b] : h) CHECK(b == 0);
  }
  SECTION("dual numbers, N = k, W = 4") {
    const std::size_t w = 4;
    auto r = bar_resolution_module(character_module(share(dual_numbers<Q>()), {Q(1), Q(0)}), w);
    CHECK(validate(r.module).ok());
    auto h = betti_numbers(cohomology(r.module.complex(), 0, static_cast<int>(w) - 1));
    for (const auto& [n, b] : h) CHECK(b == 0);
    auto reduced = bar_resolution_module(character_module(share(dual_numbers<Q>()), {Q(1), Q(0)}), w, true);
    CHECK(validate(reduced.module).ok());
  }
  SECTION("N = 0") {
    auto r = bar_resolution_module(zero_module(share(dual_numbers<Q>())), 3);
    CHECK(r.module.dim() == 0);
  }
}
