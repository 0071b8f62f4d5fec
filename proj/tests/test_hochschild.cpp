#include "catch_amalgamated.hpp"
#include "kmd/builtins.hpp"
#include "kmd/cochain.hpp"
#include "kmd/koszul.hpp"
#include "kmd/random.hpp"

using namespace kmd;
using Q = Rational;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Normalized Hochschild cochains Hom(Ā^{⊗n}, A) of an ungraded algebra with
// d = 0, written out with dense matrices:
//   δf(a1..a_{n+1}) = a1 f(a2..) + Σ (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{n+1} f(a1..a_n) a_{n+1}.
std::vector<std::size_t> hh_dims(const CurvedDgAlgebra<Q>& original, std::size_t n_max) {
  auto a = rebase_unit(original).algebra;
  const std::size_t dim = a.dim(), u = *a.unit_index();
  std::vector<std::size_t> bar;
  for (std::size_t i = 0; i < dim; ++i)
    if (i != u) bar.push_back(i);
  const std::size_t p = bar.size();
  std::vector<long> pos(dim, -1);
  for (std::size_t k = 0; k < p; ++k) pos[bar[k]] = static_cast<long>(k);
  // index of (word, value): word in base p, value in 0..dim-1
  auto delta = [&](std::size_t n) {
    const std::size_t cols = ipow(p, n) * dim, rows = ipow(p, n + 1) * dim;
    Matrix<Q> m(rows, cols);
    for (std::size_t word = 0; word < ipow(p, n + 1); ++word) {
      std::vector<std::size_t> args(n + 1);
      for (std::size_t k = n + 1, w = word; k-- > 0; w /= p) args[k] = bar[w % p];
      auto encode = [&](const std::vector<std::size_t>& as) {
        std::size_t w = 0;
        for (auto x : as) w = w * p + static_cast<std::size_t>(pos[x]);
        return w;
      };
      // a1 f(a2..)
      std::vector<std::size_t> tail(args.begin() + 1, args.end());
      for (std::size_t val = 0; val < dim; ++val)
        for (const auto& [t, c] : a.product(args[0], val)) m(word * dim + t, encode(tail) * dim + val) += c;
      // contractions
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& [k, c] : a.product(args[i], args[i + 1])) {
          if (k == u) continue;
          std::vector<std::size_t> as(args.begin(), args.begin() + static_cast<long>(i));
          as.push_back(k);
          as.insert(as.end(), args.begin() + static_cast<long>(i) + 2, args.end());
          const Q s = (i + 1) % 2 ? Q(-1) : Q(1);
          for (std::size_t val = 0; val < dim; ++val) m(word * dim + val, encode(as) * dim + val) += s * c;
        }
      // f(a1..a_n) a_{n+1}
      std::vector<std::size_t> head(args.begin(), args.end() - 1);
      const Q s = (n + 1) % 2 ? Q(-1) : Q(1);
      for (std::size_t val = 0; val < dim; ++val)
        for (const auto& [t, c] : a.product(val, args[n])) m(word * dim + t, encode(head) * dim + val) += s * c;
    }
    return m;
  };
  std::vector<std::size_t> ranks;
  for (std::size_t n = 0; n <= n_max; ++n) ranks.push_back(p == 0 && n > 0 ? 0 : rank(delta(n)));
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::size_t c = ipow(p, n) * dim;
    out.push_back(c - ranks[n] - (n ? ranks[n - 1] : 0));
  }
  return out;
}

std::map<int, std::size_t> betti(const TruncatedTensorAlgebra<Q>& t, int lo, int hi) {
  return betti_numbers(cohomology(underlying_complex(t), lo, hi));
}

}  // namespace

TEST_CASE("direct cochains agree with the twist for the builtins") {
  const std::size_t w = 3;
  for (const auto& name : builtin_names<Q>()) {
    INFO(name);
    auto bi = builtin<Q>(name);
    auto a = share(bi.algebra);
    std::vector<CurvedModule<Q>> ms{regular_module(a), dual_module(a)};
    if (bi.character) ms.push_back(character_module(a, *bi.character));
    for (const auto& m : ms) {
      auto via = koszul_dual(m, w);
      auto direct = hochschild_direct(m, w);
      CHECK(same_structure(direct, via.e));
      CHECK(validate_dg(*direct.algebra).ok());
    }
    auto b = reduced_bar(bi.algebra, w);
    CHECK(same_structure(hochschild_direct(b, b.augmentation.algebra, identity_structure_map(b)), hochschild_self(b)));
  }
}

TEST_CASE("property: direct cochains agree with the twist on random inputs") {
  Rng rng(20);
  for (int t = 0; t < 15; ++t) {
    auto a = share(random_algebra<Q>(rng));
    auto m = random_module(rng, a);
    REQUIRE(validate(m).ok());
    const std::size_t w = a->dim() > 3 ? 2 : 3;
    CHECK(same_structure(hochschild_direct(m, w), koszul_dual(m, w).e));
  }
}

TEST_CASE("E requires a nonzero module") {
  auto a = share(dual_numbers<Q>());
  GradedVectorSpace v;
  CurvedModule<Q> zero(a, v, {}, GradedMap<Q>::zero(v, v, 1));
  CHECK_THROWS_AS(koszul_dual(zero, 2), std::invalid_argument);
}

TEST_CASE("reduced and unreduced Hochschild algebras of k") {
  for (std::size_t w = 1; w <= 4; ++w) {
    INFO(w);
    auto kd = koszul_dual(character_module(share(ground_field<Q>()), {Q(1)}), w);
    CHECK(kd.e.dim() == 1);
    auto iso = hoch_k_to_reduced_kxk<Q>(w);
    CHECK(iso.source->dim() == w + 1);
    CHECK(validate(iso).ok());
    auto inv = inverse_morphism(iso);
    CHECK(validate(inv).ok());
    CHECK(same_morphism(compose_curved(inv, iso), identity_morphism(iso.source)));
  }
}

TEST_CASE("Hochschild cohomology of ordinary algebras matches the cochain oracle") {
  const std::size_t w = 4;
  for (const auto* name : {"k", "kxk", "dual_numbers", "upper_tri_2", "mat2", "trunc_poly_3"}) {
    INFO(name);
    auto a = builtin<Q>(name).algebra;
    auto hs = hochschild_self(reduced_bar(a, w));
    auto h = betti(hs, 0, static_cast<int>(w) - 1);
    auto oracle = hh_dims(a, w - 1);
    for (std::size_t n = 0; n < w; ++n) CHECK(h.at(static_cast<int>(n)) == oracle[n]);
  }
  // classical values: HH(k[x]/x²) = 2, 1, 1, ... in characteristic 0
  CHECK(hh_dims(dual_numbers<Q>(), 3) == std::vector<std::size_t>{2, 1, 1, 1});
  CHECK(hh_dims(upper_triangular<Q>(), 3) == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("cohomology is stable between W and W + 1") {
  for (const auto& name : builtin_names<Q>()) {
    INFO(name);
    auto bi = builtin<Q>(name);
    for (std::size_t w = 2; w <= 3; ++w) {
      auto lo = hochschild_self(reduced_bar(bi.algebra, w));
      auto hi = hochschild_self(reduced_bar(bi.algebra, w + 1));
      auto win = stable_window(lo);
      REQUIRE(win.exists);
      CHECK(betti(lo, win.lo, win.hi) == betti(hi, win.lo, win.hi));
      if (bi.character) {
        auto m = character_module(share(bi.algebra), *bi.character);
        auto e1 = koszul_dual(m, w).e, e2 = koszul_dual(m, w + 1).e;
        auto ew = stable_window(e1);
        CHECK(betti(e1, ew.lo, ew.hi) == betti(e2, ew.lo, ew.hi));
      }
    }
  }
}

TEST_CASE("stable windows") {
  auto hs = hochschild_self(reduced_bar(dual_numbers<Q>(), 4));
  auto win = stable_window(hs);
  CHECK(win.exists);
  CHECK(win.lo == 0);
  CHECK(win.hi == 3);
  auto ex = hochschild_self(reduced_bar(exterior_pair<Q>(), 2));
  CHECK_FALSE(stable_window(ex).exists);  // the letter dual to x has degree 0
  auto k = hochschild_self(reduced_bar(ground_field<Q>(), 3));
  CHECK(stable_window(k).exists);
}
