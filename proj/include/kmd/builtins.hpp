#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmd/module.hpp"

namespace kmd {

/// Semisimple k^n with orthogonal idempotents e1..en.
template <Field K>
CurvedDgAlgebra<K> split_semisimple(std::size_t n) {
  std::vector<BasisElement> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back({"e" + std::to_string(i + 1), 0});
  GradedVectorSpace v(std::move(b));
  std::vector<Element<K>> mult(n * n);
  std::vector<typename SparseVec<K>::Term> unit;
  for (std::size_t i = 0; i < n; ++i) {
    mult[i * n + i] = Element<K>::single(i);
    unit.emplace_back(i, K(1));
  }
  return CurvedDgAlgebra<K>(v, Element<K>::from_terms(std::move(unit)), std::move(mult), GradedMap<K>::zero(v, v, 1));
}

/// k[x]/x^n with x in the given degree (odd degrees need n ≤ 2).
template <Field K>
CurvedDgAlgebra<K> truncated_polynomial(std::size_t n, int degree = 0) {
  if (n == 0) throw std::invalid_argument("truncated_polynomial: n ≥ 1");
  if (odd(degree) && n > 2) throw std::invalid_argument("truncated_polynomial: odd x squares to zero");
  std::vector<BasisElement> b;
  for (std::size_t i = 0; i < n; ++i)
    b.push_back({i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)), static_cast<int>(i) * degree});
  GradedVectorSpace v(std::move(b));
  std::vector<Element<K>> mult(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) mult[i * n + j] = Element<K>::single(i + j);
  return CurvedDgAlgebra<K>(v, Element<K>::single(0), std::move(mult), GradedMap<K>::zero(v, v, 1));
}

template <Field K>
CurvedDgAlgebra<K> dual_numbers(int degree = 0) {
  return truncated_polynomial<K>(2, degree);
}

/// Upper triangular 2×2 matrices, basis e11, e12, e22, with e12 in the given degree.
template <Field K>
CurvedDgAlgebra<K> upper_triangular(int degree = 0) {
  GradedVectorSpace v({{"e11", 0}, {"e12", degree}, {"e22", 0}});
  auto s = [](std::size_t i) { return Element<K>::single(i); };
  auto mult = mult_table<K>(3, {{0, 0, s(0)}, {0, 1, s(1)}, {1, 2, s(1)}, {2, 2, s(2)}});
  return CurvedDgAlgebra<K>(v, s(0) + s(2), std::move(mult), GradedMap<K>::zero(v, v, 1));
}

/// 2×2 matrices in the matrix-unit basis e11, e12, e21, e22; e12 in degree
/// `degree` and e21 in degree -degree.
template <Field K>
CurvedDgAlgebra<K> matrix_algebra_2(int degree = 0) {
  GradedVectorSpace v({{"e11", 0}, {"e12", degree}, {"e21", -degree}, {"e22", 0}});
  auto s = [](std::size_t i) { return Element<K>::single(i); };
  // e_ij e_jk = e_ik; index of e_ij is 2(i-1) + (j-1)
  std::vector<std::tuple<std::size_t, std::size_t, Element<K>>> entries;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) entries.emplace_back(2 * i + j, 2 * j + k, s(2 * i + k));
  return CurvedDgAlgebra<K>(v, s(0) + s(3), mult_table<K>(4, entries), GradedMap<K>::zero(v, v, 1));
}

/// A with differential [u, -] for u of degree 1 with u² = 0.
template <Field K>
CurvedDgAlgebra<K> inner_differential(const CurvedDgAlgebra<K>& a, const Element<K>& u) {
  for (const auto& [i, c] : u)
    if (a.degree(i) != 1) throw std::invalid_argument("inner_differential: u must have degree 1");
  if (!a.mul(u, u).empty()) throw std::invalid_argument("inner_differential: u² ≠ 0");
  std::vector<Element<K>> cols;
  for (std::size_t i = 0; i < a.dim(); ++i) cols.push_back(a.d(i) + a.commutator(u, Element<K>::single(i)));
  return a.with_differential(GradedMap<K>(a.space(), a.space(), 1, std::move(cols)), a.curvature());
}

/// Exterior algebra on x (degree 1) and y (degree -1): basis 1, x, y, xy.
template <Field K>
CurvedDgAlgebra<K> exterior_pair() {
  GradedVectorSpace v({{"1", 0}, {"x", 1}, {"y", -1}, {"xy", 0}});
  auto s = [](std::size_t i, long c = 1) { return Element<K>::single(i, K(c)); };
  auto mult = mult_table<K>(4, {{0, 0, s(0)}, {0, 1, s(1)}, {0, 2, s(2)}, {0, 3, s(3)}, {1, 0, s(1)}, {2, 0, s(2)},
                                {3, 0, s(3)}, {1, 2, s(3)}, {2, 1, s(3, -1)}});
  return CurvedDgAlgebra<K>(v, s(0), std::move(mult), GradedMap<K>::zero(v, v, 1));
}

/// Λ(x) ⊗ k[y]/y² with |x| = -1, |y| = 0 and dx = y: basis 1, x, y, xy.
template <Field K>
CurvedDgAlgebra<K> koszul_pair() {
  GradedVectorSpace v({{"1", 0}, {"x", -1}, {"y", 0}, {"xy", -1}});
  auto s = [](std::size_t i) { return Element<K>::single(i); };
  auto mult = mult_table<K>(4, {{0, 0, s(0)}, {0, 1, s(1)}, {0, 2, s(2)}, {0, 3, s(3)}, {1, 0, s(1)}, {2, 0, s(2)},
                                {3, 0, s(3)}, {1, 2, s(3)}, {2, 1, s(3)}});
  GradedMap<K> d(v, v, 1, {Element<K>{}, s(2), Element<K>{}, Element<K>{}});
  return CurvedDgAlgebra<K>(v, s(0), std::move(mult), std::move(d));
}

/// Named algebras available to the command line and the tests. `character`
/// is an algebra map to k, when there is an obvious one, defining the module k.
template <Field K>
struct Builtin {
  std::string name;
  CurvedDgAlgebra<K> algebra;
  std::optional<std::vector<K>> character;
};

template <Field K>
std::vector<std::string> builtin_names() {
  return {"k", "kxk", "dual_numbers", "upper_tri_2", "acyclic2", "mat2"};
}

template <Field K>
Builtin<K> builtin(const std::string& name) {
  auto chi = [](std::initializer_list<long> v) {
    std::vector<K> out;
    for (long x : v) out.push_back(K(x));
    return std::optional<std::vector<K>>(std::move(out));
  };
  if (name == "k") return {name, ground_field<K>(), chi({1})};
  if (name == "kxk") return {name, split_semisimple<K>(2), chi({1, 0})};
  if (name == "kxkxk") return {name, split_semisimple<K>(3), chi({1, 0, 0})};
  if (name == "dual_numbers") return {name, dual_numbers<K>(), chi({1, 0})};
  if (name == "upper_tri_2") return {name, upper_triangular<K>(), chi({1, 0, 0})};
  if (name == "acyclic2") return {name, acyclic_two_dim<K>(), std::nullopt};
  if (name == "mat2") return {name, matrix_algebra_2<K>(), std::nullopt};
  if (name.rfind("trunc_poly_", 0) == 0) {
    const auto n = static_cast<std::size_t>(std::stoul(name.substr(11)));
    std::vector<K> c(n, K(0));
    c[0] = K(1);
    return {name, truncated_polynomial<K>(n), c};
  }
  throw std::invalid_argument("unknown builtin algebra '" + name + "'");
}

}  // namespace kmd
