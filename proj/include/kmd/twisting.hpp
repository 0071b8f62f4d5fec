#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/morphism.hpp"

namespace kmd {

enum class Check { full, skip };

namespace detail {

template <Field K>
void require_degree_one(const CurvedDgAlgebra<K>& a, const Element<K>& xi) {
  for (const auto& [i, c] : xi)
    if (a.degree(i) != 1)
      throw std::invalid_argument("twist: element has a term " + a.space().label(i) + " of degree " +
                                  std::to_string(a.degree(i)) + ", expected 1");
}

}  // namespace detail

/// h + dξ + ξ²
template <Field K>
Element<K> mc_residual(const CurvedDgAlgebra<K>& a, const Element<K>& xi) {
  detail::require_degree_one(a, xi);
  return a.curvature() + a.d(xi) + a.mul(xi, xi);
}

template <Field K>
bool is_mc(const CurvedDgAlgebra<K>& a, const Element<K>& xi) {
  return mc_residual(a, xi).empty();
}

/// A^ξ: d^ξ = d + [ξ, -], h^ξ = h + dξ + ξ². Validated unless told otherwise.
template <Field K>
CurvedDgAlgebra<K> twist_algebra(const CurvedDgAlgebra<K>& a, const Element<K>& xi, Check check = Check::full) {
  detail::require_degree_one(a, xi);
  std::vector<Element<K>> cols;
  cols.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) cols.push_back(a.d(i) + a.commutator(xi, Element<K>::single(i)));
  auto t = a.with_differential(GradedMap<K>(a.space(), a.space(), 1, std::move(cols)), mc_residual(a, xi));
  if (check == Check::full) require_valid(validate(t), "twisted algebra");
  return t;
}

/// N^[ξ] over A^ξ: d^[ξ] = d_N + ξ·. Pass the twisted algebra to share it
/// between several modules.
template <Field K>
CurvedModule<K> twist_module(const CurvedModule<K>& n, const Element<K>& xi, AlgebraPtr<K> twisted = nullptr,
                             Check check = Check::full) {
  const auto& a = n.algebra();
  detail::require_degree_one(a, xi);
  if (!twisted) twisted = share(twist_algebra(a, xi, check));
  std::vector<Element<K>> cols;
  cols.reserve(n.dim());
  for (std::size_t j = 0; j < n.dim(); ++j) cols.push_back(n.d(j) + n.act(xi, j));
  CurvedModule<K> t(std::move(twisted), n.space(), n.action_table(),
                    GradedMap<K>(n.space(), n.space(), 1, std::move(cols)));
  if (check == Check::full) require_valid(validate(t), "twisted module");
  return t;
}

}  // namespace kmd
