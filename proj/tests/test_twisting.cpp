#include "catch_amalgamated.hpp"
#include "kmd/bar.hpp"
#include "kmd/builtins.hpp"
#include "kmd/random.hpp"

using namespace kmd;
using Q = Rational;

namespace {

Element<Q> e(std::size_t i, long c = 1) { return Element<Q>::single(i, Q(c)); }

// Inclusion of the first summand N → N ⊕ N and the projection onto the second.
GradedMap<Q> first_inclusion(const CurvedModule<Q>& n, const CurvedModule<Q>& nn) {
  std::vector<Element<Q>> cols;
  for (std::size_t j = 0; j < n.dim(); ++j) cols.push_back(e(j));
  return GradedMap<Q>(n.space(), nn.space(), 0, std::move(cols));
}
GradedMap<Q> second_projection(const CurvedModule<Q>& n, const CurvedModule<Q>& nn) {
  std::vector<Element<Q>> cols;
  for (std::size_t j = 0; j < nn.dim(); ++j) cols.push_back(j < n.dim() ? Element<Q>{} : e(j - n.dim()));
  return GradedMap<Q>(nn.space(), n.space(), 0, std::move(cols));
}

}  // namespace

TEST_CASE("twisting by zero changes nothing") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    auto a = random_algebra<Q>(rng);
    CHECK(same_algebra(twist_algebra(a, {}), a));
  }
  auto s = random_curved_module<Q>(rng);
  CHECK(same_module(twist_module(s.module, {}, s.module.algebra_ptr()), s.module));
}

TEST_CASE("twisting requires a degree 1 element") {
  auto a = upper_triangular<Q>(1);
  CHECK_THROWS_AS(twist_algebra(a, e(0)), std::invalid_argument);
  CHECK_THROWS_AS(is_mc(a, e(2)), std::invalid_argument);
  CHECK_THROWS_AS(twist_module(regular_module(share(a)), e(0)), std::invalid_argument);
  CHECK_NOTHROW(twist_algebra(a, e(1)));
}

TEST_CASE("MC examples") {
  CHECK(is_mc(dual_numbers<Q>(), {}));
  auto ut = upper_triangular<Q>(1);
  CHECK(is_mc(ut, e(1, 5)));  // e12² = 0 and d = 0
  auto dn = dual_numbers<Q>(1);
  CHECK(is_mc(dn, e(1)));
  GradedVectorSpace v({{"v0", 0}, {"v1", 1}, {"v2", 2}});
  GradedMap<Q> d(v, v, 1, {e(1), e(2), Element<Q>{}});
  auto end = endomorphism_algebra(v, d);
  REQUIRE(end.is_curved());
  CHECK_FALSE(is_mc(end, {}));
  CHECK(mc_residual(end, {}) == end.curvature());
  // ξ = -D untwists End(V, D) to End(V, 0)
  auto minus_d = Element<Q>::from_dense(hom_element(d)).scaled(Q(-1));
  CHECK(is_mc(end, minus_d));
  auto flat = twist_algebra(end, minus_d);
  CHECK_FALSE(flat.is_curved());
  CHECK(same_algebra(flat, endomorphism_algebra(v, GradedMap<Q>::zero(v, v, 1))));
}

TEST_CASE("the canonical element of the bar construction is MC") {
  for (const auto& name : builtin_names<Q>()) {
    INFO(name);
    auto a = builtin<Q>(name).algebra;
    for (std::size_t w : {1u, 2u, 3u}) {
      auto b = reduced_bar(a, w);
      auto bc = with_coefficients(b, b.augmentation.algebra);
      auto xi = canonical_mc(b, bc, identity_structure_map(b));
      CHECK(is_mc(*bc.algebra, xi));
      auto tw = twist_algebra(*bc.algebra, xi);
      CHECK_FALSE(tw.is_curved());
      CHECK(validate_dg(tw).ok());
    }
  }
}

TEST_CASE("property: twisting by ξ then -ξ restores the algebra") {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    auto a = random_algebra<Q>(rng);
    auto xi = random_element<Q>(rng, a.space(), 1);
    auto tw = twist_algebra(a, xi);
    CHECK(validate(tw).ok());
    CHECK(same_algebra(twist_algebra(tw, xi.scaled(Q(-1))), a));
  }
  for (int t = 0; t < 15; ++t) {
    auto s = random_curved_module<Q>(rng);
    const auto& a = s.module.algebra();
    CHECK(same_algebra(twist_algebra(twist_algebra(a, s.xi), s.xi.scaled(Q(-1))), a));
  }
}

TEST_CASE("property: twisting is additive") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    auto s = random_curved_module<Q>(rng);
    const auto& a = s.module.algebra();
    auto zeta = random_element<Q>(rng, a.space(), 1);
    auto two_steps = twist_algebra(twist_algebra(a, s.xi), zeta);
    auto one_step = twist_algebra(a, s.xi + zeta);
    CHECK(two_steps.diff() == one_step.diff());
    CHECK(two_steps.curvature() == one_step.curvature());
  }
}

TEST_CASE("property: twisting by an MC element removes the curvature") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    auto v = random_space(rng, 2, 3, -1, 1);
    auto d = random_map<Q>(rng, v, 1);
    auto end = endomorphism_algebra(v, d);
    // ξ = D' - D is MC exactly when D'² = 0
    auto c = random_complex<Q>(rng, -1, 1);
    auto v2 = c.space();
    auto d2 = c.differential();
    auto end2 = endomorphism_algebra(v2, GradedMap<Q>::zero(v2, v2, 1));
    auto xi = Element<Q>::from_dense(hom_element(d2));
    REQUIRE(is_mc(end2, xi));
    auto tw = twist_algebra(end2, xi);
    CHECK_FALSE(tw.is_curved());
    CHECK(same_algebra(tw, endomorphism_algebra(c)));
    auto back = Element<Q>::from_dense(hom_element(d)).scaled(Q(-1));
    CHECK(is_mc(end, back));
    CHECK_FALSE(twist_algebra(end, back).is_curved());
  }
}

TEST_CASE("property: module twists are inverse to each other") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto s = random_curved_module<Q>(rng);
    REQUIRE(validate(s.module).ok());
    auto tw = twist_module(s.module, s.xi);
    CHECK(validate(tw).ok());
    CHECK(tw.algebra().curvature() == mc_residual(s.module.algebra(), s.xi));
    auto back = twist_module(tw, s.xi.scaled(Q(-1)), s.module.algebra_ptr());
    CHECK(same_module(back, s.module));
  }
}

TEST_CASE("property: module maps stay module maps after twisting") {
  Rng rng(6);
  for (int t = 0; t < 15; ++t) {
    auto s = random_curved_module<Q>(rng);
    const auto& n = s.module;
    auto nn = direct_sum(n, n);
    auto i1 = first_inclusion(n, nn);
    auto p2 = second_projection(n, nn);
    REQUIRE(validate_module_map(n, nn, i1).ok());
    REQUIRE(validate_module_map(nn, n, p2).ok());
    auto ta = share(twist_algebra(n.algebra(), s.xi));
    auto tn = twist_module(n, s.xi, ta);
    auto tnn = twist_module(nn, s.xi, ta);
    CHECK(validate_module_map(tn, tnn, i1).ok());
    CHECK(validate_module_map(tnn, tn, p2).ok());
    // the identity of N ⊕ N is an isomorphism both before and after
    CHECK(is_module_isomorphism(tnn, tnn, GradedMap<Q>::identity(nn.space())));
  }
}

TEST_CASE("A twisted as a module differs from A twisted as an algebra by right multiplication") {
  SECTION("dual numbers with x in degree 1") {
    auto a = share(dual_numbers<Q>(1));
    auto xi = e(1);
    auto ta = share(twist_algebra(*a, xi));
    auto tm = twist_module(regular_module(a), xi, ta);
    CHECK(validate(tm).ok());
    CHECK(ta->d(0).empty());   // [x, 1] = 0
    CHECK(tm.d(0) == e(1));    // x·1 = x
    CHECK_FALSE(tm.diff() == ta->diff());
  }
  SECTION("random uncurved algebras") {
    Rng rng(7);
    for (int t = 0; t < 25; ++t) {
      auto a = share(random_algebra<Q>(rng));
      REQUIRE_FALSE(a->is_curved());
      auto xi = random_element<Q>(rng, a->space(), 1);
      auto ta = share(twist_algebra(*a, xi));
      auto tm = twist_module(regular_module(a), xi, ta);
      CHECK(validate(tm).ok());
      for (std::size_t i = 0; i < a->dim(); ++i) {
        // d^[ξ](a) - d^ξ(a) = (-1)^{|a|} a ξ
        auto diff = tm.d(i) - ta->d(i);
        CHECK(diff == a->mul(e(i), xi).scaled(sign<Q>(a->degree(i))));
      }
    }
  }
}
