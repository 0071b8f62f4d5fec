#pragma once

#include <stdexcept>
#include <utility>

#include "kmd/validate.hpp"

namespace kmd {

/// Curved morphism (f, a): B → A with f a unital multiplicative degree 0 map
/// and a ∈ A of degree 1 satisfying
///   f(d_B x) = d_A f(x) + [a, f(x)],   f(h_B) = h_A + d_A a + a².
template <Field K>
struct CurvedMorphism {
  AlgebraPtr<K> source;
  AlgebraPtr<K> target;
  GradedMap<K> f;
  Element<K> a;
};

template <Field K>
CurvedMorphism<K> identity_morphism(const AlgebraPtr<K>& a) {
  return {a, a, GradedMap<K>::identity(a->space()), {}};
}

template <Field K>
ValidationReport validate(const CurvedMorphism<K>& m) {
  ValidationReport report;
  const auto& b = *m.source;
  const auto& a = *m.target;
  if (!(m.f.source() == b.space()) || !(m.f.target() == a.space()) || m.f.degree() != 0) {
    report.add("morphism shape", "f must be a degree 0 map from source to target");
    return report;
  }
  for (const auto& [i, c] : m.a)
    if (a.degree(i) != 1) {
      report.add("morphism shape", "a must have degree 1");
      return report;
    }
  if (!(m.f.apply(b.unit()) == a.unit())) report.add("unital", "1");
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      if (!(m.f.apply(b.product(i, j)) == a.mul(m.f.column(i), m.f.column(j))))
        report.add("multiplicative", detail::tuple_label({b.space().label(i), b.space().label(j)}));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto& fx = m.f.column(i);
    if (!(m.f.apply(b.d(i)) == a.d(fx) + a.commutator(m.a, fx))) report.add("f d = d f + [a, f]", b.space().label(i));
  }
  auto rhs = a.curvature() + a.d(m.a) + a.mul(m.a, m.a);
  if (!(m.f.apply(b.curvature()) == rhs)) report.add("f(h_B) = h_A + da + a^2", "h");
  return report;
}

/// (f, a) ∘ (g, b) = (f ∘ g, a + f(b)).
template <Field K>
CurvedMorphism<K> compose_curved(const CurvedMorphism<K>& p, const CurvedMorphism<K>& q) {
  if (q.target != p.source && !same_algebra(*q.target, *p.source))
    throw std::invalid_argument("compose_curved: target of the first map is not the source of the second");
  return {q.source, p.target, compose(p.f, q.f), p.a + p.f.apply(q.a)};
}

/// (f⁻¹, -f⁻¹(a)); throws if f is not bijective.
template <Field K>
CurvedMorphism<K> inverse_morphism(const CurvedMorphism<K>& m) {
  const std::size_t n = m.source->dim();
  if (m.target->dim() != n) throw std::invalid_argument("inverse_morphism: dimensions differ");
  Matrix<K> full(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [i, c] : m.f.column(j)) full(i, j) = c;
  auto inv = inverse(full);
  if (!inv) throw std::invalid_argument("inverse_morphism: f is not invertible");
  std::vector<Element<K>> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(Element<K>::from_dense(inv->column(j)));
  GradedMap<K> finv(m.target->space(), m.source->space(), 0, std::move(cols));
  auto a = finv.apply(m.a).scaled(K(-1));
  return {m.target, m.source, std::move(finv), std::move(a)};
}

template <Field K>
bool same_morphism(const CurvedMorphism<K>& p, const CurvedMorphism<K>& q) {
  return p.f == q.f && p.a == q.a;
}

}  // namespace kmd
