#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/builtins.hpp"
#include "kmd/cochain.hpp"
#include "kmd/linear.hpp"
#include "kmd/morphism.hpp"

namespace kmd {

/// Module words ⊗ N over a tensor algebra T = T(V)_{≤W} ⊗ C, for N a C-module:
/// (w⊗c)(w'⊗x) = (-1)^{|c||w'|} ww' ⊗ cx and d(w⊗x) = d(w)⊗x + (-1)^{|w|} w⊗d_N x,
/// with d(w) taken from the untwisted T.
template <Field K>
CurvedModule<K> tensor_module(const TruncatedTensorAlgebra<K>& t, const CurvedModule<K>& n) {
  const auto& c = *t.coefficient;
  if (!(n.algebra().space() == c.space())) throw std::invalid_argument("tensor_module: N is not a module over the coefficients");
  const auto& words = *t.words;
  const std::size_t nw = words.size(), nn = n.dim(), nc = c.dim();
  std::vector<BasisElement> b;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t x = 0; x < nn; ++x) b.push_back({words.label(w) + "⊗" + n.space().label(x), words.degree(w) + n.degree(x)});
  GradedVectorSpace v(std::move(b));
  auto idx = [nn](std::size_t w, std::size_t x) { return w * nn + x; };
  std::vector<Element<K>> action(t.dim() * v.dim());
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t j = 0; j < nc; ++j) {
      for (std::size_t w2 = 0; w2 < nw; ++w2) {
        const std::size_t ww = words.concat(w, w2);
        if (ww == WordBasis::npos) continue;
        const K s = sign<K>(static_cast<long>(c.degree(j)) * words.degree(w2));
        for (std::size_t x = 0; x < nn; ++x) {
          Accumulator<K> acc;
          for (const auto& [y, a] : n.act(j, x)) acc.add(idx(ww, y), s * a);
          action[t.index(w, j) * v.dim() + idx(w2, x)] = acc.finish();
        }
      }
    }
  std::vector<Element<K>> d(v.dim());
  for (std::size_t w = 0; w < nw; ++w) {
    auto dw = t.algebra->d(t.lift(Element<K>::single(w)));
    for (std::size_t x = 0; x < nn; ++x) {
      Accumulator<K> acc;
      for (const auto& [i, a] : dw)
        for (const auto& [y, e] : n.act(t.coeff_of(i), x)) acc.add(idx(t.word_of(i), y), a * e);
      const K s = sign<K>(words.degree(w));
      for (const auto& [y, e] : n.d(x)) acc.add(idx(w, y), s * e);
      d[idx(w, x)] = acc.finish();
    }
  }
  return CurvedModule<K>(t.algebra, v, std::move(action), GradedMap<K>(v, v, 1, std::move(d)));
}

/// (BA ⊗ N)^[ξ] (unreduced, the default) or (B̄A ⊗ N)^[ξ], a module over
/// Hoch(A, A) or Hochb(A, A) at truncation W.
template <Field K>
struct BarResolution {
  BarConstruction<K> bar;
  TruncatedTensorAlgebra<K> hochschild;
  CurvedModule<K> module;
};

template <Field K>
BarResolution<K> bar_resolution_module(const CurvedModule<K>& n, std::size_t w, bool reduced = false,
                                       Check check = Check::full) {
  auto b = reduced ? reduced_bar(n.algebra(), w) : unreduced_bar(n.algebra(), w);
  auto nn = rebased_module(b.augmentation, n);
  auto bc = with_coefficients(b, b.augmentation.algebra);
  auto xi = canonical_mc(b, bc, identity_structure_map(b));
  auto hoch = bc.with_algebra(share(twist_algebra(*bc.algebra, xi, check)));
  auto m = twist_module(tensor_module(bc, nn), xi, hoch.algebra, check);
  return {std::move(b), std::move(hoch), std::move(m)};
}

/// F(N) = Hochb(A, Hom(N, M)) over E, built from cochains with the End M
/// action on Hom(N, M) by post-composition, in the basis word ⊗ E(n_a → m_b).
template <Field K>
CurvedModule<K> functor_F_direct(const KoszulDual<K>& kd, const CurvedModule<K>& n) {
  const auto& b = kd.bar;
  const auto& words = *b.bar.words;
  const auto& fa = b.augmentation;
  auto nn = rebased_module(fa, n);
  const auto& m = kd.module;
  const std::size_t dn = nn.dim(), dm = m.dim();
  auto homc = hom(nn.complex(), m.complex());
  auto end_n = endomorphism_algebra(nn.complex());
  auto delta_n = action_structure_map(nn, end_n);
  const std::size_t np = homc.space().dim();

  cochain::Coefficients<K> p{homc.space(), homc.differential(), {}, {}};
  for (std::uint32_t x = 0; x < words.letters().dim(); ++x) {
    const auto& tl = kd.delta.column(fa.plus[x]);  // in End M
    const auto& tr = delta_n.column(fa.plus[x]);   // in End N
    std::vector<Element<K>> l, r;
    for (std::size_t q = 0; q < np; ++q) {
      l.push_back(compose_hom(tl, dm, dm, Element<K>::single(q)));
      r.push_back(compose_hom(Element<K>::single(q), dn, dm, tr));
    }
    p.left_tau.push_back(std::move(l));
    p.right_tau.push_back(std::move(r));
  }
  auto dcols = cochain::differential(words, cochain::coderivation(fa, words), p);

  const auto& end = *kd.end;
  const std::size_t ne = end.dim(), nw = words.size(), total = nw * np;
  std::vector<Element<K>> action(nw * ne * total);
  for (std::size_t v1 = 0; v1 < nw; ++v1)
    for (std::size_t v2 = 0; v2 < nw; ++v2) {
      const std::size_t v = words.concat(v1, v2);
      if (v == WordBasis::npos) continue;
      for (std::size_t c1 = 0; c1 < ne; ++c1)
        for (std::size_t q = 0; q < np; ++q) {
          auto comp = compose_hom(Element<K>::single(c1), dm, dm, Element<K>::single(q));
          if (comp.empty()) continue;
          const int g = p.space.degree(q) - cochain::tensor_degree(words, v2);
          const K s = sign<K>(static_cast<long>(g) * cochain::tensor_degree(words, v1));
          Accumulator<K> acc;
          for (const auto& [k, a] : comp) acc.add(v * np + k, s * a);
          action[(v1 * ne + c1) * total + v2 * np + q] = acc.finish();
        }
    }

  auto se = cochain::identification_signs<K>(words, end.space());
  auto sp = cochain::identification_signs<K>(words, p.space);
  for (std::size_t i = 0; i < total; ++i) dcols[i] = cochain::resign(dcols[i], sp, sp[i]);
  for (std::size_t e = 0; e < nw * ne; ++e)
    for (std::size_t i = 0; i < total; ++i) {
      auto& x = action[e * total + i];
      if (!x.empty()) x = cochain::resign(x, sp, se[e] * sp[i]);
    }
  std::vector<BasisElement> basis;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t q = 0; q < np; ++q) basis.push_back({words.label(w) + "⊗" + p.space.label(q), words.degree(w) + p.space.degree(q)});
  GradedVectorSpace v(std::move(basis));
  return CurvedModule<K>(kd.e.algebra, v, std::move(action), GradedMap<K>(v, v, 1, std::move(dcols)));
}

/// The pieces of the composite construction of F(N): K = (B̄A ⊗ N*)^[ξ] as a
/// right twist, then (K ⊗ M) twisted on the left by the canonical element of
/// B̄A ⊗ End M. `module` is F(N) rewritten in the Hom(N, M) basis through
/// ν ⊗ m ↦ (n ↦ (-1)^{|m||n|} ν(n) m); `right_action` is the commuting right
/// action of Hochb(A, A) in the same basis (table [f][r], f in F(N), r in Hochb(A, A)).
template <Field K>
struct FunctorF {
  CurvedModule<K> module;
  TruncatedTensorAlgebra<K> hochschild_self;
  std::vector<Element<K>> right_action;
};

template <Field K>
FunctorF<K> functor_F_composite(const KoszulDual<K>& kd, const CurvedModule<K>& n, Check check = Check::full) {
  const auto& b = kd.bar;
  const auto& words = *b.bar.words;
  const auto& fa = b.augmentation;
  const auto& a = *fa.algebra;
  auto nn = rebased_module(fa, n);
  const auto& m = kd.module;
  const std::size_t dn = nn.dim(), dm = m.dim(), nw = words.size(), na = a.dim();
  const auto nstar = dual(nn.space());

  // right A-action on N*: (ν a)(n) = ν(a n); d ν = -(-1)^{|ν|} ν∘d
  auto nu_act = [&](std::size_t j, std::size_t i) {
    Accumulator<K> acc;
    for (std::size_t k = 0; k < dn; ++k) {
      auto c = nn.act(i, k).coefficient(j);
      if (!c.is_zero()) acc.add(k, c);
    }
    return acc.finish();
  };
  auto nu_d = [&](std::size_t j) {
    Accumulator<K> acc;
    for (std::size_t k = 0; k < dn; ++k) {
      auto c = nn.d(k).coefficient(j);
      if (!c.is_zero()) acc.add(k, -c * sign<K>(nstar.degree(j)));
    }
    return acc.finish();
  };

  // K = B̄A ⊗ N*, index w·dn + ν; right multiplication by (x ⊗ a): (w⊗ν)(x⊗a) = (-1)^{|ν||x|} wx ⊗ νa
  auto kidx = [dn](std::size_t w, std::size_t nu) { return w * dn + nu; };
  auto kdeg = [&](std::size_t w, std::size_t nu) { return words.degree(w) + nstar.degree(nu); };
  auto right_mul = [&](std::size_t w, std::size_t nu, std::size_t x, std::size_t ai) {
    Accumulator<K> acc;
    const std::size_t wx = words.concat(w, x);
    if (wx == WordBasis::npos) return acc.finish();
    const K s = sign<K>(static_cast<long>(nstar.degree(nu)) * words.degree(x));
    for (const auto& [mu, c] : nu_act(nu, ai)) acc.add(kidx(wx, mu), s * c);
    return acc.finish();
  };
  const auto& bar = *b.bar.algebra;
  std::vector<Element<K>> kd_cols(nw * dn);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t nu = 0; nu < dn; ++nu) {
      Accumulator<K> acc;
      for (const auto& [u, c] : bar.d(w)) acc.add(kidx(u, nu), c);
      const K s = sign<K>(words.degree(w));
      for (const auto& [mu, c] : nu_d(nu)) acc.add(kidx(w, mu), s * c);
      // - (-1)^{|k|} k ξ, ξ = Σ x_i ⊗ e_i
      const K s2 = -sign<K>(kdeg(w, nu));
      for (std::uint32_t x = 0; x < b.letter_basis.size(); ++x) acc.add(right_mul(w, nu, words.letter(x), b.letter_basis[x]), s2);
      kd_cols[kidx(w, nu)] = acc.finish();
    }

  // K ⊗ M over B̄A ⊗ End M, index (w·dn + ν)·dm + m
  const auto& end = *kd.end;
  auto bc = with_coefficients(b, kd.end);
  const std::size_t total = nw * dn * dm, ne = end.dim();
  auto fidx = [&](std::size_t w, std::size_t nu, std::size_t mi) { return (w * dn + nu) * dm + mi; };
  std::vector<BasisElement> basis;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t nu = 0; nu < dn; ++nu)
      for (std::size_t mi = 0; mi < dm; ++mi)
        basis.push_back({words.label(w) + "⊗" + nn.space().label(nu) + "→" + m.space().label(mi),
                         words.degree(w) + nstar.degree(nu) + m.degree(mi)});
  GradedVectorSpace v(std::move(basis));
  std::vector<Element<K>> action(nw * ne * total);
  for (std::size_t w1 = 0; w1 < nw; ++w1)
    for (std::size_t c = 0; c < ne; ++c)
      for (std::size_t w2 = 0; w2 < nw; ++w2) {
        const std::size_t ww = words.concat(w1, w2);
        if (ww == WordBasis::npos) continue;
        for (std::size_t nu = 0; nu < dn; ++nu) {
          // (w1⊗φ)(w2⊗ν⊗m) = (-1)^{|φ|(|w2|+|ν|)} w1w2⊗ν⊗φm
          const K s = sign<K>(static_cast<long>(end.degree(c)) * (words.degree(w2) + nstar.degree(nu)));
          for (std::size_t mi = 0; mi < dm; ++mi) {
            if (c / dm != mi) continue;  // E(k→t) m_i = δ_{ki} m_t
            Accumulator<K> acc;
            acc.add(fidx(ww, nu, c % dm), s);
            action[(w1 * ne + c) * total + fidx(w2, nu, mi)] = acc.finish();
          }
        }
      }
  std::vector<Element<K>> dcols(total);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t nu = 0; nu < dn; ++nu)
      for (std::size_t mi = 0; mi < dm; ++mi) {
        Accumulator<K> acc;
        for (const auto& [k, c] : kd_cols[kidx(w, nu)]) acc.add(k * dm + mi, c);
        const K s = sign<K>(kdeg(w, nu));
        for (const auto& [t, c] : m.d(mi)) acc.add(fidx(w, nu, t), s * c);
        dcols[fidx(w, nu, mi)] = acc.finish();
      }
  CurvedModule<K> untwisted(bc.algebra, v, std::move(action), GradedMap<K>(v, v, 1, std::move(dcols)));
  auto xi = canonical_mc(b, bc, kd.delta);
  auto twisted = twist_module(untwisted, xi, kd.e.algebra, check);

  // identification ν_a ⊗ m_b ↦ (-1)^{|m_b||n_a|} E(n_a → m_b): same flat index, diagonal signs
  std::vector<K> sg(total);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t nu = 0; nu < dn; ++nu)
      for (std::size_t mi = 0; mi < dm; ++mi)
        sg[fidx(w, nu, mi)] = sign<K>(static_cast<long>(m.degree(mi)) * nn.degree(nu));
  auto homs = hom(nn.space(), m.space());
  std::vector<BasisElement> hb;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t q = 0; q < homs.dim(); ++q) hb.push_back({words.label(w) + "⊗" + homs.label(q), words.degree(w) + homs.degree(q)});
  GradedVectorSpace hv(std::move(hb));
  std::vector<Element<K>> act2 = twisted.action_table();
  for (std::size_t e = 0; e < nw * ne; ++e)
    for (std::size_t i = 0; i < total; ++i) {
      auto& x = act2[e * total + i];
      if (!x.empty()) x = cochain::resign(x, sg, sg[i]);
    }
  std::vector<Element<K>> d2;
  for (std::size_t i = 0; i < total; ++i) d2.push_back(cochain::resign(twisted.d(i), sg, sg[i]));
  CurvedModule<K> fmod(kd.e.algebra, hv, std::move(act2), GradedMap<K>(hv, hv, 1, std::move(d2)));

  // right action of Hochb(A, A) = (B̄A ⊗ A)^ξ through K: (k⊗m)·r = (-1)^{|m||r|} (k r)⊗m
  auto hs = hochschild_self(b, check);
  std::vector<Element<K>> right(total * hs.dim());
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t nu = 0; nu < dn; ++nu)
      for (std::size_t mi = 0; mi < dm; ++mi)
        for (std::size_t r = 0; r < hs.dim(); ++r) {
          const std::size_t x = hs.word_of(r), ai = hs.coeff_of(r);
          const K s = sign<K>(static_cast<long>(m.degree(mi)) * hs.algebra->degree(r));
          Accumulator<K> acc;
          for (const auto& [k, c] : right_mul(w, nu, x, ai)) acc.add(k * dm + mi, s * c);
          const std::size_t f = fidx(w, nu, mi);
          right[f * hs.dim() + r] = cochain::resign(acc.finish(), sg, sg[f]);
        }
  (void)na;
  return {std::move(fmod), std::move(hs), std::move(right)};
}

/// Hom_{End M}(L^[-ξ], M) for L over E, as a right module over the reduced bar
/// construction: basis `maps` (flattened in hom(L, M)), right action
/// (g·w)(l) = g(w·l) on words and d g = d_M g - (-1)^{|g|} g d.
template <Field K>
struct EndLinearDual {
  GradedVectorSpace space;
  std::vector<Element<K>> maps;
  std::vector<Element<K>> right_action;  // [p · word] at p * words + w
  GradedMap<K> diff;
};

template <Field K>
EndLinearDual<K> end_linear_dual(const KoszulDual<K>& kd, const CurvedModule<K>& l) {
  const auto& b = kd.bar;
  const auto& m = kd.module;
  const std::size_t dm = m.dim(), dl = l.dim(), nw = b.bar.words->size();
  auto bc = with_coefficients(b, kd.end);
  if (!(l.algebra().space() == bc.algebra->space())) throw std::invalid_argument("end_linear_dual: L is not a module over E");
  auto xi = canonical_mc(b, bc, kd.delta);
  auto lp = twist_module(l, Element<K>{} - xi, bc.algebra, Check::skip);

  // g is fixed by the functional l ↦ g(u l)_{m_0}, u = E(0→0), which factors
  // through u; g(l) = Σ_j (-1)^{|E(0→j)||g|} E(0→j) g(E(j→0) l).
  auto u = lp.action_map(Element<K>::single(bc.index(0, 0)));
  std::vector<long> map_of_row(dl, -1);
  std::vector<std::size_t> rows;
  struct Chart { std::vector<std::size_t> cols; Matrix<K> inv; std::vector<std::size_t> maps; };
  std::vector<Chart> charts;
  for (int n : l.space().support()) {
    const auto& comp = l.space().component(n);
    auto x = u.block(n);
    std::vector<Vec<K>> rv;
    for (std::size_t r = 0; r < x.rows(); ++r) rv.emplace_back(x.row(r).begin(), x.row(r).end());
    auto sel = independent_subset(rv, comp.size());
    if (sel.empty()) continue;
    std::vector<Vec<K>> cv(comp.size(), Vec<K>(sel.size()));
    for (std::size_t i = 0; i < sel.size(); ++i)
      for (std::size_t c = 0; c < comp.size(); ++c) cv[c][i] = x(sel[i], c);
    auto cols = independent_subset(cv, sel.size());
    Matrix<K> sq(sel.size(), sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i)
      for (std::size_t c = 0; c < cols.size(); ++c) sq(i, c) = x(sel[i], cols[c]);
    Chart ch{{}, inverse(sq).value(), {}};
    for (auto c : cols) ch.cols.push_back(comp[c]);
    for (auto r : sel) {
      map_of_row[comp[r]] = static_cast<long>(rows.size());
      ch.maps.push_back(rows.size());
      rows.push_back(comp[r]);
    }
    charts.push_back(std::move(ch));
  }
  std::vector<Accumulator<K>> acc(rows.size());
  for (std::size_t j = 0; j < dm; ++j) {
    auto y = lp.action_map(Element<K>::single(bc.index(0, hom_index(j, 0, dm))));
    const int ej = m.degree(j) - m.degree(0);
    for (std::size_t x = 0; x < dl; ++x)
      for (const auto& [t, c] : y.column(x)) {
        if (map_of_row[t] < 0) continue;
        const int gdeg = m.degree(0) - l.degree(t);
        acc[static_cast<std::size_t>(map_of_row[t])].add(hom_index(x, j, dm), sign<K>(static_cast<long>(ej) * gdeg) * c);
      }
  }
  std::vector<Element<K>> maps;
  for (auto& a : acc) maps.push_back(a.finish());
  auto coords = [&](const Element<K>& h) {
    Accumulator<K> out;
    for (const auto& ch : charts)
      for (std::size_t i = 0; i < ch.cols.size(); ++i) {
        const K psi = h.coefficient(hom_index(ch.cols[i], 0, dm));
        if (psi.is_zero()) continue;
        for (std::size_t k = 0; k < ch.maps.size(); ++k) out.add(ch.maps[k], psi * ch.inv(i, k));
      }
    return out.finish();
  };
  const auto hs = hom(l.space(), m.space());
  std::vector<BasisElement> basis;
  for (std::size_t k = 0; k < maps.size(); ++k) basis.push_back({"g" + std::to_string(k + 1), degree_of(hs, maps[k]).value()});
  GradedVectorSpace p(std::move(basis));

  std::vector<Element<K>> right(maps.size() * nw);
  for (std::size_t w = 0; w < nw; ++w) {
    auto x = lp.action_map(bc.lift(Element<K>::single(w)));
    for (std::size_t k = 0; k < maps.size(); ++k) right[k * nw + w] = coords(precompose(maps[k], x, dm));
  }
  std::vector<Element<K>> dcols;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    auto dg = postcompose(m.diff(), maps[k], dm) -
              precompose(maps[k], lp.diff(), dm).scaled(sign<K>(p.degree(k)));
    dcols.push_back(coords(dg));
  }
  return {p, std::move(maps), std::move(right), GradedMap<K>(p, p, 1, std::move(dcols))};
}

/// G(L) = (A ⊗ Hom_{End M}(L^[-ξ], M)) twisted by η = Σ e_i ⊗ x_i:
///   d(a⊗p) = da⊗p + (-1)^{|a|} a⊗dp - (-1)^{|a|+|p|} (a⊗p)η,
/// with (a⊗p)(e⊗x) = (-1)^{|p||e|} ae ⊗ p·x. The result lives over the re-based
/// algebra; pass `original` to move it back to the algebra M was given over.
template <Field K>
CurvedModule<K> functor_G(const KoszulDual<K>& kd, const CurvedModule<K>& l, AlgebraPtr<K> original = nullptr) {
  const auto& b = kd.bar;
  const auto& fa = b.augmentation;
  const auto& a = *fa.algebra;
  const auto& words = *b.bar.words;
  auto p = end_linear_dual(kd, l);
  const std::size_t na = a.dim(), np = p.space.dim(), nw = words.size();
  std::vector<BasisElement> basis;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < np; ++k) basis.push_back({a.space().label(i) + "⊗" + p.space.label(k), a.degree(i) + p.space.degree(k)});
  GradedVectorSpace v(std::move(basis));
  auto idx = [np](std::size_t i, std::size_t k) { return i * np + k; };
  std::vector<Element<K>> action(na * v.dim());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < np; ++k) {
        Accumulator<K> acc;
        for (const auto& [t, c] : a.product(i, j)) acc.add(idx(t, k), c);
        action[i * v.dim() + idx(j, k)] = acc.finish();
      }
  std::vector<Element<K>> dcols(v.dim());
  for (std::size_t j = 0; j < na; ++j)
    for (std::size_t k = 0; k < np; ++k) {
      Accumulator<K> acc;
      for (const auto& [t, c] : a.d(j)) acc.add(idx(t, k), c);
      const K s = sign<K>(a.degree(j));
      for (const auto& [q, c] : p.diff.column(k)) acc.add(idx(j, q), s * c);
      const K s2 = -sign<K>(a.degree(j) + p.space.degree(k));
      for (std::uint32_t x = 0; x < b.letter_basis.size(); ++x) {
        const std::size_t e = b.letter_basis[x];
        const K s3 = s2 * sign<K>(static_cast<long>(p.space.degree(k)) * a.degree(e));
        const auto& px = p.right_action[k * nw + words.letter(x)];
        for (const auto& [t, c] : a.product(j, e))
          for (const auto& [q, c2] : px) acc.add(idx(t, q), s3 * c * c2);
      }
      dcols[idx(j, k)] = acc.finish();
    }
  CurvedModule<K> g(fa.algebra, v, std::move(action), GradedMap<K>(v, v, 1, std::move(dcols)));
  if (!original) return g;
  return rebase_module(g, original, inverse(fa.basis).value());
}

/// Checks that `right` is a right action of r on F(N) commuting with the left
/// E-action, unital, associative and compatible with the differentials.
template <Field K>
ValidationReport validate_right_action(const FunctorF<K>& f) {
  ValidationReport report;
  const auto& m = f.module;
  const auto& r = *f.hochschild_self.algebra;
  const std::size_t nr = r.dim();
  auto act = [&](const Element<K>& x, std::size_t j) {
    Accumulator<K> acc;
    for (const auto& [i, c] : x) acc.add(f.right_action[i * nr + j], c);
    return acc.finish();
  };
  auto act_elem = [&](const Element<K>& x, const Element<K>& y) {
    Accumulator<K> acc;
    for (const auto& [j, c] : y) acc.add(act(x, j), c);
    return acc.finish();
  };
  for (std::size_t x = 0; x < m.dim(); ++x) {
    auto e = Element<K>::single(x);
    if (!(act_elem(e, r.unit()) == e)) report.add("right unit", m.space().label(x));
    for (std::size_t j = 0; j < nr; ++j) {
      auto xj = act(e, j);
      for (std::size_t i = 0; i < m.algebra().dim(); ++i)
        if (!(m.act(i, xj) == act(m.act(i, x), j)))
          report.add("left and right actions commute",
                     detail::tuple_label({m.algebra().space().label(i), m.space().label(x), r.space().label(j)}));
      for (std::size_t k = 0; k < nr; ++k)
        if (!(act(xj, k) == act_elem(e, r.product(j, k))))
          report.add("right action associativity", detail::tuple_label({m.space().label(x), r.space().label(j), r.space().label(k)}));
      auto lhs = m.d(xj);
      auto rhs = act(m.d(x), j) + act_elem(e, r.d(j)).scaled(sign<K>(m.degree(x)));
      if (!(lhs == rhs)) report.add("right leibniz", detail::tuple_label({m.space().label(x), r.space().label(j)}));
    }
  }
  return report;
}

/// B ⊗ End(M, D) and the pair of functors between B-modules and
/// B ⊗ End M-modules, with the natural isomorphisms
///   unit:   N → G′F′(N),  n ↦ (m ↦ n⊗m)
///   counit: F′G′(L) → L,  g⊗m ↦ g(m).
template <Field K>
struct MoritaPrime {
  AlgebraPtr<K> base;
  Complex<K> m;
  AlgebraPtr<K> end;
  AlgebraPtr<K> algebra;  // base ⊗ End M
};

template <Field K>
MoritaPrime<K> morita_prime(AlgebraPtr<K> b, Complex<K> m) {
  if (m.space().dim() == 0) throw std::invalid_argument("morita_prime: M must be nonzero");
  auto end = share(endomorphism_algebra(m));
  auto be = share(tensor_product(*b, *end));
  return {std::move(b), std::move(m), std::move(end), std::move(be)};
}

/// F′(N) = N ⊗ M: (b⊗φ)(n⊗m) = (-1)^{|φ||n|} bn ⊗ φm, d = dn⊗m + (-1)^{|n|} n⊗Dm.
template <Field K>
CurvedModule<K> morita_prime_F(const MoritaPrime<K>& mp, const CurvedModule<K>& n) {
  if (!same_algebra(n.algebra(), *mp.base)) throw std::invalid_argument("morita_prime_F: N is not over the base algebra");
  const auto& ms = mp.m.space();
  const std::size_t dm = ms.dim(), dn = n.dim(), ne = mp.end->dim(), nb = mp.base->dim();
  auto v = tensor(n.space(), ms);
  std::vector<Element<K>> action(nb * ne * v.dim());
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t c = 0; c < ne; ++c)
      for (std::size_t x = 0; x < dn; ++x) {
        const auto& bx = n.act(i, x);
        if (bx.empty()) continue;
        const K s = sign<K>(static_cast<long>(mp.end->degree(c)) * n.degree(x));
        const std::size_t src = c / dm, tgt = c % dm;
        Accumulator<K> acc;
        for (const auto& [y, e] : bx) acc.add(y * dm + tgt, s * e);
        action[(i * ne + c) * v.dim() + x * dm + src] = acc.finish();
      }
  std::vector<Element<K>> d(v.dim());
  for (std::size_t x = 0; x < dn; ++x)
    for (std::size_t j = 0; j < dm; ++j) {
      Accumulator<K> acc;
      for (const auto& [y, e] : n.d(x)) acc.add(y * dm + j, e);
      const K s = sign<K>(n.degree(x));
      for (const auto& [t, e] : mp.m.differential().column(j)) acc.add(x * dm + t, s * e);
      d[x * dm + j] = acc.finish();
    }
  return CurvedModule<K>(mp.algebra, v, std::move(action), GradedMap<K>(v, v, 1, std::move(d)));
}

/// G′(L) = Hom_{End M}(M, L), with basis g_k determined by g_k(m_0) = y_k for a
/// basis y_k of (1⊗E(0→0))L, and g(m_j) = (-1)^{|E(0→j)||g|} (1⊗E(0→j)) g(m_0).
template <Field K>
struct MoritaPrimeG {
  CurvedModule<K> module;
  std::vector<Element<K>> maps;  // g_k flattened in hom(M, L)
  GradedMap<K> counit;           // F′G′(L) → L
};

template <Field K>
MoritaPrimeG<K> morita_prime_G(const MoritaPrime<K>& mp, const CurvedModule<K>& l) {
  if (!same_algebra(l.algebra(), *mp.algebra)) throw std::invalid_argument("morita_prime_G: L is not over B ⊗ End M");
  const auto& ms = mp.m.space();
  const std::size_t dm = ms.dim(), dl = l.dim(), ne = mp.end->dim(), nb = mp.base->dim();
  auto one_tensor = [&](std::size_t c) {
    Accumulator<K> acc;
    for (const auto& [i, u] : mp.base->unit()) acc.add(i * ne + c, u);
    return acc.finish();
  };
  auto u = l.action_map(one_tensor(hom_index(0, 0, dm)));
  std::vector<Element<K>> ys;
  for (int n : l.space().support()) {
    const auto& comp = l.space().component(n);
    auto x = u.block(n);
    std::vector<Vec<K>> cols;
    for (std::size_t c = 0; c < comp.size(); ++c) cols.push_back(x.column(c));
    for (auto c : independent_subset(cols, comp.size())) ys.push_back(u.column(comp[c]));
  }
  SpanCoordinates<K> coords(ys, dl);
  std::vector<BasisElement> basis;
  std::vector<Element<K>> maps;
  std::vector<std::vector<Element<K>>> values;  // [k][j] = g_k(m_j)
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const int gdeg = degree_of(l.space(), ys[k]).value() - ms.degree(0);
    basis.push_back({"g" + std::to_string(k + 1), gdeg});
    std::vector<Element<K>> vals;
    Accumulator<K> flat;
    for (std::size_t j = 0; j < dm; ++j) {
      const int ej = ms.degree(j) - ms.degree(0);
      auto val = l.act(one_tensor(hom_index(0, j, dm)), ys[k]).scaled(sign<K>(static_cast<long>(ej) * gdeg));
      for (const auto& [t, c] : val) flat.add(hom_index(j, t, dl), c);
      vals.push_back(std::move(val));
    }
    maps.push_back(flat.finish());
    values.push_back(std::move(vals));
  }
  GradedVectorSpace p(std::move(basis));
  const std::size_t np = p.dim();
  std::vector<Element<K>> action(nb * np);
  for (std::size_t i = 0; i < nb; ++i) {
    Accumulator<K> bi;
    for (const auto& [c, e] : mp.end->unit()) bi.add(i * ne + c, e);
    auto b1 = bi.finish();
    for (std::size_t k = 0; k < np; ++k) action[i * np + k] = coords(l.act(b1, ys[k]));
  }
  std::vector<Element<K>> d(np);
  for (std::size_t k = 0; k < np; ++k) {
    Accumulator<K> acc;
    acc.add(l.d(ys[k]));
    const K s = -sign<K>(p.degree(k));
    for (const auto& [j, c] : mp.m.differential().column(0)) acc.add(values[k][j], s * c);
    d[k] = coords(acc.finish());
  }
  CurvedModule<K> g(mp.base, p, std::move(action), GradedMap<K>(p, p, 1, std::move(d)));
  auto fg = tensor(p, ms);
  std::vector<Element<K>> counit(fg.dim());
  for (std::size_t k = 0; k < np; ++k)
    for (std::size_t j = 0; j < dm; ++j) counit[k * dm + j] = values[k][j];
  return {std::move(g), std::move(maps), GradedMap<K>(fg, l.space(), 0, std::move(counit))};
}

/// n ↦ (m ↦ n⊗m), as a map N → G′F′(N) in the basis chosen by morita_prime_G.
template <Field K>
GradedMap<K> morita_prime_unit(const MoritaPrime<K>& mp, const CurvedModule<K>& n, const MoritaPrimeG<K>& gf) {
  const std::size_t dm = mp.m.space().dim();
  const auto& l = gf.module;
  const std::size_t fl = n.dim() * dm;
  std::vector<Element<K>> flat;
  for (std::size_t k = 0; k < gf.maps.size(); ++k) flat.push_back(gf.maps[k]);
  SpanCoordinates<K> coords(flat, dm * fl);
  std::vector<Element<K>> cols;
  for (std::size_t x = 0; x < n.dim(); ++x) {
    Accumulator<K> acc;
    for (std::size_t j = 0; j < dm; ++j) acc.add(hom_index(j, x * dm + j, fl), K(1));
    cols.push_back(coords(acc.finish()));
  }
  return GradedMap<K>(n.space(), l.space(), 0, std::move(cols));
}

/// B̄A with an extra letter x of degree 1, dx = x² + w (w the curvature of
/// B̄A), together with the letter-relabelling isomorphism onto BA^ξ, ξ the
/// letter dual to the unit.
template <Field K>
struct UnitLetterBar {
  BarConstruction<K> reduced;
  BarConstruction<K> unreduced;
  TruncatedTensorAlgebra<K> algebra;  // B̄A⟨⟨x⟩⟩
  AlgebraPtr<K> twisted;              // BA^ξ
  CurvedMorphism<K> iso;              // B̄A⟨⟨x⟩⟩ → BA^ξ
  CurvedMorphism<K> inclusion;        // B̄A → BA^ξ
};

template <Field K>
UnitLetterBar<K> bar_with_unit_letter(const CurvedDgAlgebra<K>& a, std::size_t w, Check check = Check::full) {
  auto rb = reduced_bar(a, w);
  auto ub = unreduced_bar(a, w);
  const auto& rw = *rb.bar.words;
  const auto& uw = *ub.bar.words;
  const std::size_t g = rb.letter_basis.size();
  std::vector<BasisElement> letters(rw.letters().basis());
  std::string name = "x";
  while (rw.letters().find(name)) name += "'";
  letters.push_back({name, 1});
  auto words = std::make_shared<const WordBasis>(GradedVectorSpace(std::move(letters)), w);
  auto from_reduced = [&](const Element<K>& e) {
    Accumulator<K> acc;
    for (const auto& [i, c] : e) acc.add(words->index(rw.word(i)), c);
    return acc.finish();
  };
  const auto x = static_cast<std::uint32_t>(g);
  std::vector<Element<K>> diffs;
  for (std::size_t i = 0; i < g; ++i) diffs.push_back(from_reduced(rb.letter_diff[i]));
  auto h = from_reduced(rb.word_curvature);
  diffs.push_back(Element<K>::single(words->index({x, x})) + h);
  auto t = build_tensor_algebra<K>(words, share(ground_field<K>()), diffs, h);

  std::vector<std::uint32_t> to_unreduced(g + 1);
  for (std::uint32_t y = 0; y < ub.letter_basis.size(); ++y) {
    const std::size_t e = ub.letter_basis[y];
    if (e == ub.augmentation.unit_index) to_unreduced[g] = y;
    for (std::size_t i = 0; i < g; ++i)
      if (rb.letter_basis[i] == e) to_unreduced[i] = y;
  }
  auto relabel = [&](const std::vector<std::uint32_t>& word) {
    std::vector<std::uint32_t> out;
    for (auto y : word) out.push_back(to_unreduced[y]);
    return uw.index(out);
  };
  auto xi = Element<K>::single(uw.letter(to_unreduced[g]));
  auto twisted = share(twist_algebra(*ub.bar.algebra, xi, check));
  std::vector<Element<K>> cols;
  for (std::size_t v = 0; v < words->size(); ++v) cols.push_back(Element<K>::single(relabel(words->word(v))));
  CurvedMorphism<K> iso{t.algebra, twisted, GradedMap<K>(t.algebra->space(), twisted->space(), 0, std::move(cols)), {}};
  std::vector<Element<K>> inc;
  for (std::size_t v = 0; v < rw.size(); ++v) inc.push_back(Element<K>::single(relabel(rw.word(v))));
  CurvedMorphism<K> inclusion{rb.bar.algebra, twisted, GradedMap<K>(rb.bar.algebra->space(), twisted->space(), 0, std::move(inc)), {}};
  return {std::move(rb), std::move(ub), std::move(t), std::move(twisted), std::move(iso), std::move(inclusion)};
}

/// Hoch(A, k) for a character χ of A: the unreduced bar construction twisted
/// by Σ χ(e_i) x_i.
template <Field K>
TruncatedTensorAlgebra<K> unreduced_hochschild_character(const CurvedDgAlgebra<K>& a, const std::vector<K>& chi,
                                                         std::size_t w, Check check = Check::full) {
  auto ub = unreduced_bar(a, w);
  auto k = share(ground_field<K>());
  auto chi_rebased = ub.augmentation.basis.transpose().apply(std::span<const K>(chi));
  std::vector<Element<K>> cols;
  for (const auto& c : chi_rebased) cols.push_back(c.is_zero() ? Element<K>{} : Element<K>::single(0, c));
  GradedMap<K> phi(ub.augmentation.algebra->space(), k->space(), 0, std::move(cols));
  return hochschild_via_twist(ub, k, phi, check);
}

/// Hoch(k, k) → Hochb(k × k, k) (module k through the first factor), sending
/// the n-letter word to (-1)^n times the n-letter word.
template <Field K>
CurvedMorphism<K> hoch_k_to_reduced_kxk(std::size_t w) {
  auto hoch = unreduced_hochschild_character(ground_field<K>(), std::vector<K>{K(1)}, w);
  auto kxk = share(split_semisimple<K>(2));
  auto kd = koszul_dual(character_module(kxk, std::vector<K>{K(1), K(0)}), w);
  const auto& src = hoch.algebra;
  const auto& tgt = kd.e.algebra;
  if (src->dim() != tgt->dim()) throw std::logic_error("hoch_k_to_reduced_kxk: dimensions differ");
  std::vector<Element<K>> cols;
  for (std::size_t v = 0; v < src->dim(); ++v) cols.push_back(Element<K>::single(v, sign<K>(static_cast<long>(hoch.words->length(v)))));
  return {src, tgt, GradedMap<K>(src->space(), tgt->space(), 0, std::move(cols)), {}};
}

}  // namespace kmd
