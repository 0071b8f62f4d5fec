// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "kmd/builtins.hpp"
#include "kmd/koszul.hpp"
#include "kmd/morita.hpp"
#include "kmd/random.hpp"

using namespace kmd;
using Q = Rational;

namespace {

struct Outcome {
  bool ok = true;
  std::string witness;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      witness = what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.witness = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s > limit_s) o.require(false, "over the time limit");
  if (!o.ok) ++failures;
  std::printf("[%s] %2d %s (%.2f s%s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, s,
              limit_s > 0 ? (", limit " + std::to_string(static_cast<int>(limit_s)) + " s").c_str() : "",
              o.witness.empty() ? "" : ": ", o.witness.c_str());
  std::fflush(stdout);
}

std::map<int, std::size_t> betti(const TruncatedTensorAlgebra<Q>& t, int lo, int hi) {
  return betti_numbers(cohomology(underlying_complex(t), lo, hi));
}

std::string ext_string(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

// Every constructed object over a: bar, Hochschild algebras, twists, module twists.
void axiom_suite(Outcome& o, const CurvedDgAlgebra<Q>& a, std::size_t w, Rng& rng, const std::string& tag) {
  o.require(validate(a).ok(), tag + ": algebra");
  auto b = reduced_bar(a, w);
  o.require(validate(*b.bar.algebra).ok(), tag + ": reduced bar");
  auto bc = with_coefficients(b, b.augmentation.algebra);
  auto xi = canonical_mc(b, bc, identity_structure_map(b));
  auto tw = twist_algebra(*bc.algebra, xi);
  o.require(validate(tw).ok(), tag + ": canonical twist");
  auto ap = share(a);
  auto kd = koszul_dual(dual_module(ap), w);
  o.require(validate(*kd.e.algebra).ok(), tag + ": E with M = A*");
  auto zeta = random_element<Q>(rng, a.space(), 1);
  auto ta = share(twist_algebra(a, zeta));
  o.require(validate(*ta).ok(), tag + ": random twist");
  o.require(validate(twist_module(regular_module(ap), zeta, ta)).ok(), tag + ": twisted regular module");
  auto zb = random_element<Q>(rng, b.bar.algebra->space(), 1);
  o.require(validate(twist_algebra(*b.bar.algebra, zb)).ok(), tag + ": random twist of the bar construction");
}

CurvedModule<Q> projective(const AlgebraPtr<Q>& a, const Element<Q>& idem) { return submodule(regular_module(a), {idem}, "p"); }

}  // namespace

int main() {
  criterion(1, "axiom suite: builtins and 50 random algebras", 30, [](Outcome& o) {
    Rng rng(1001);
    for (const auto& name : builtin_names<Q>()) axiom_suite(o, builtin<Q>(name).algebra, 3, rng, name);
    for (int t = 0; t < 50; ++t) {
      auto a = random_algebra<Q>(rng);
      if (a.dim() > 4) {
        --t;
        continue;
      }
      axiom_suite(o, a, 3, rng, "random " + std::to_string(t));
    }
  });

  criterion(2, "canonical element is MC at W = 4 and kills the curvature", 10, [](Outcome& o) {
    for (const auto& name : builtin_names<Q>()) {
      auto b = reduced_bar(builtin<Q>(name).algebra, 4);
      auto bc = with_coefficients(b, b.augmentation.algebra);
      auto xi = canonical_mc(b, bc, identity_structure_map(b));
      o.require(is_mc(*bc.algebra, xi), name + ": h + dξ + ξ² ≠ 0");
      o.require(twist_algebra(*bc.algebra, xi).curvature().empty(), name + ": nonzero curvature after twisting");
    }
  });

  criterion(3, "direct Hochschild cochains equal the twisted bar construction at W = 3", 0, [](Outcome& o) {
    for (const auto& name : builtin_names<Q>()) {
      auto bi = builtin<Q>(name);
      auto a = share(bi.algebra);
      std::vector<std::pair<std::string, CurvedModule<Q>>> ms{{"A", regular_module(a)}, {"A*", dual_module(a)}};
      if (bi.character) ms.emplace_back("k", character_module(a, *bi.character));
      for (const auto& [mname, m] : ms)
        o.require(same_structure(hochschild_direct(m, 3), koszul_dual(m, 3).e), name + ", M = " + mname);
    }
  });

  criterion(4, "H^n(E) = Ext^n(M, M) for n ≤ W - 2 at W = 5", 120, [](Outcome& o) {
    const std::size_t w = 5;
    auto dn = share(dual_numbers<Q>());
    auto ut = share(upper_triangular<Q>());
    auto kk = share(split_semisimple<Q>(2));
    std::vector<std::pair<std::string, CurvedModule<Q>>> cases{
        {"dual numbers, k", character_module(dn, {Q(1), Q(0)})},
        {"upper triangular, A*", dual_module(ut)},
        {"k x k, k", character_module(kk, {Q(1), Q(0)})}};
    for (const auto& [name, m] : cases) {
      auto kd = koszul_dual(m, w);
      auto h = betti(kd.e, 0, static_cast<int>(w) - 2);
      auto ext = ext_oracle(m, m, w - 2);
      std::vector<std::size_t> hv;
      for (std::size_t n = 0; n + 2 <= w; ++n) hv.push_back(h.at(static_cast<int>(n)));
      o.require(hv == ext, name + ": H = " + ext_string(hv) + ", Ext = " + ext_string(ext));
    }
    auto first = ext_oracle(character_module(dn, {Q(1), Q(0)}), character_module(dn, {Q(1), Q(0)}), w - 2);
    o.require(first == std::vector<std::size_t>(w - 1, 1), "Ext(k, k) over the dual numbers is not 1, 1, 1, ...");
    auto third = ext_oracle(character_module(kk, {Q(1), Q(0)}), character_module(kk, {Q(1), Q(0)}), w - 2);
    o.require(third == std::vector<std::size_t>{1, 0, 0, 0}, "Ext(k, k) over k x k is not 1, 0, 0, ...");
  });

  criterion(5, "Hochb(k, k) = k and Hoch(k, k) ≅ Hochb(k x k, k) at W = 4", 0, [](Outcome& o) {
    auto kd = koszul_dual(character_module(share(ground_field<Q>()), {Q(1)}), 4);
    o.require(kd.e.dim() == 1, "Hochb(k, k) has dimension " + std::to_string(kd.e.dim()));
    auto iso = hoch_k_to_reduced_kxk<Q>(4);
    o.require(validate(iso).ok(), "not a morphism");
    auto inv = inverse_morphism(iso);
    o.require(validate(inv).ok(), "inverse is not a morphism");
    o.require(same_morphism(compose_curved(inv, iso), identity_morphism(iso.source)), "not inverse");
  });

  criterion(6, "covariant Morita round trips", 0, [](Outcome& o) {
    Rng rng(1006);
    std::vector<AlgebraPtr<Q>> bases{share(ground_field<Q>()), reduced_bar(dual_numbers<Q>(), 3).bar.algebra};
    for (const auto& b : bases)
      for (std::size_t dm : {1u, 2u}) {
        auto mc = random_complex<Q>(rng, 0, 1);
        while (mc.space().dim() != dm) mc = random_complex<Q>(rng, 0, 1);
        auto mp = morita_prime(b, mc);
        const std::string tag = "dim B = " + std::to_string(b->dim()) + ", dim M = " + std::to_string(dm);
        for (int t = 0; t < 20; ++t) {
          auto n = random_module(rng, b);
          auto gf = morita_prime_G(mp, morita_prime_F(mp, n));
          o.require(is_module_isomorphism(n, gf.module, morita_prime_unit(mp, n, gf)), tag + ": N → G′F′(N)");
          auto l = random_module(rng, mp.algebra);
          auto g = morita_prime_G(mp, l);
          o.require(is_module_isomorphism(morita_prime_F(mp, g.module), l, g.counit), tag + ": F′G′(L) → L");
        }
      }
  });

  criterion(7, "module twists: (N^[ξ])^[-ξ] = N and A^[ξ] - A^ξ = right multiplication by ξ", 0, [](Outcome& o) {
    Rng rng(1007);
    for (int t = 0; t < 20; ++t) {
      auto s = random_curved_module<Q>(rng);
      auto tw = twist_module(s.module, s.xi);
      o.require(validate(tw).ok(), "twisted module invalid");
      o.require(same_module(twist_module(tw, s.xi.scaled(Q(-1)), s.module.algebra_ptr()), s.module), "round trip");
    }
    for (int t = 0; t < 20; ++t) {
      auto a = share(random_algebra<Q>(rng));
      if (a->is_curved()) continue;
      auto xi = random_element<Q>(rng, a->space(), 1);
      auto ta = share(twist_algebra(*a, xi));
      auto tm = twist_module(regular_module(a), xi, ta);
      for (std::size_t i = 0; i < a->dim(); ++i)
        o.require(tm.d(i) - ta->d(i) == a->mul(Element<Q>::single(i), xi).scaled(sign<Q>(a->degree(i))),
                  "difference is not (-1)^|a| aξ");
    }
  });

  criterion(8, "classical Morita unit is an isomorphism", 0, [](Outcome& o) {
    Rng rng(1008);
    auto ut = share(upper_triangular<Q>());
    auto kk = share(split_semisimple<Q>(2));
    const auto& us = ut->space();
    auto e22 = Element<Q>::single(*us.find("e22"));
    std::vector<std::pair<AlgebraPtr<Q>, std::vector<Element<Q>>>> cases{
        {ut, {ut->unit() - e22, e22}}, {kk, {Element<Q>::single(0), Element<Q>::single(1)}}};
    for (const auto& [a, idems] : cases) {
      auto m = injective_cogenerator(a);
      auto g = gamma(m);
      std::vector<CurvedModule<Q>> ns = simple_modules(a);
      for (const auto& e : idems) ns.push_back(projective(a, e));
      o.require(ns.size() == 4, "expected 4 indecomposables");
      for (int t = 0; t < 10; ++t) {
        auto n = random_module(rng, a);
        while (n.dim() > 4) n = random_module(rng, a);
        ns.push_back(n);
      }
      for (const auto& n : ns) {
        auto u = classical_unit(g, m, n);
        o.require(is_module_isomorphism(n, u.gf.module, u.unit), "unit not an isomorphism, dim N = " + std::to_string(n.dim()));
      }
    }
  });

  criterion(9, "simple counts 1, 2, 3, 1, 1", 0, [](Outcome& o) {
    const std::vector<std::pair<std::string, std::size_t>> expected{
        {"k", 1}, {"upper_tri_2", 2}, {"kxkxk", 3}, {"trunc_poly_5", 1}, {"mat2", 1}};
    for (const auto& [name, count] : expected) {
      const auto got = count_simples(share(builtin<Q>(name).algebra));
      o.require(got == count, name + ": " + std::to_string(got));
    }
  });

  criterion(10, "good truncations of acyclic cones are acyclic with d² = 0", 0, [](Outcome& o) {
    Rng rng(1010);
    for (int t = 0; t < 20; ++t) {
      auto c = random_acyclic_cone<Q>(rng, -1, 2);
      o.require(is_acyclic(c), "cone not acyclic");
      const int lo = c.space().min_degree() - 1, hi = c.space().max_degree() + 1;
      for (int n = lo; n <= hi; ++n)
        for (int m = n + 1; m <= hi; ++m) {
          auto tr = truncate_complex(c, n, m);
          o.require(is_acyclic(tr), "truncation not acyclic");
          const auto& d = tr.differential();
          for (std::size_t j = 0; j < tr.space().dim(); ++j) o.require(d.apply(d.column(j)).empty(), "d² ≠ 0");
        }
    }
  });

  criterion(11, "cohomology at W is reproduced at W + 1 in the stable window", 0, [](Outcome& o) {
    for (const auto& name : builtin_names<Q>()) {
      auto bi = builtin<Q>(name);
      auto a = share(bi.algebra);
      for (std::size_t w = 2; w <= 4; ++w) {
        const std::string tag = name + ", W = " + std::to_string(w);
        auto lo = hochschild_self(reduced_bar(bi.algebra, w));
        auto hi = hochschild_self(reduced_bar(bi.algebra, w + 1));
        auto win = stable_window(lo);
        o.require(win.exists, tag + ": no window");
        if (win.exists) o.require(betti(lo, win.lo, win.hi) == betti(hi, win.lo, win.hi), tag + ": Hochb(A, A)");
        auto e1 = koszul_dual(dual_module(a), w).e, e2 = koszul_dual(dual_module(a), w + 1).e;
        auto ew = stable_window(e1);
        if (ew.exists) o.require(betti(e1, ew.lo, ew.hi) == betti(e2, ew.lo, ew.hi), tag + ": E with M = A*");
      }
    }
  });

  criterion(12, "acyclic algebra, product projection, and E of (A x C, C)", 0, [](Outcome& o) {
    auto c = acyclic_two_dim<Q>();
    o.require(is_acyclic(Complex<Q>(c.space(), c.diff())), "acyclic2 not acyclic");
    auto a = dual_numbers<Q>();
    auto p = product(a, c);
    o.require(is_quasi_iso(p.first, Complex<Q>(p.algebra.space(), p.algebra.diff()), Complex<Q>(a.space(), a.diff()), -3, 3),
              "projection not a quasi-isomorphism");
    auto pa = share(p.algebra);
    auto cp = share(c);
    o.require(validate(CurvedMorphism<Q>{pa, share(a), p.first, {}}).ok(), "first projection not a morphism");
    auto m = restrict_module(regular_module(cp), pa, p.second);
    o.require(validate(m).ok(), "C is not a module over A x C");
    auto kd = koszul_dual(m, 3);
    o.require(validate(*kd.bar.bar.algebra).ok(), "reduced bar of A x C");
    o.require(validate(*kd.e.algebra).ok(), "E axioms");
    o.require(same_structure(hochschild_direct(m, 3), kd.e), "direct and twisted E differ");
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
