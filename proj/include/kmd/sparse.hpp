#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "kmd/matrix.hpp"

namespace kmd {

/// Sorted list of (index, nonzero coefficient) pairs.
template <Field K>
class SparseVec {
 public:
  using Term = std::pair<std::size_t, K>;

  SparseVec() = default;

  static SparseVec single(std::size_t i, K c = K(1)) {
    SparseVec v;
    if (!c.is_zero()) v.terms_.emplace_back(i, std::move(c));
    return v;
  }

  static SparseVec from_dense(std::span<const K> dense) {
    SparseVec v;
    for (std::size_t i = 0; i < dense.size(); ++i)
      if (!dense[i].is_zero()) v.terms_.emplace_back(i, dense[i]);
    return v;
  }

  /// Terms need not be sorted or distinct; zero sums are dropped.
  static SparseVec from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    SparseVec v;
    for (auto& [i, c] : terms) {
      if (!v.terms_.empty() && v.terms_.back().first == i)
        v.terms_.back().second += c;
      else
        v.terms_.emplace_back(i, std::move(c));
      if (v.terms_.back().second.is_zero()) v.terms_.pop_back();
    }
    return v;
  }

  [[nodiscard]] Vec<K> to_dense(std::size_t n) const {
    Vec<K> d(n);
    for (const auto& [i, c] : terms_) d.at(i) = c;
    return d;
  }

  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] auto begin() const { return terms_.begin(); }
  [[nodiscard]] auto end() const { return terms_.end(); }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }

  [[nodiscard]] K coefficient(std::size_t i) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term& t, std::size_t k) { return t.first < k; });
    return (it != terms_.end() && it->first == i) ? it->second : K(0);
  }

  [[nodiscard]] SparseVec scaled(const K& a) const {
    if (a.is_zero()) return {};
    SparseVec v = *this;
    for (auto& t : v.terms_) t.second *= a;
    return v;
  }

  friend bool operator==(const SparseVec&, const SparseVec&) = default;

 private:
  std::vector<Term> terms_;
};

/// Collects scaled sparse contributions and emits a canonical SparseVec.
template <Field K>
class Accumulator {
 public:
  void add(std::size_t i, const K& c) {
    if (!c.is_zero()) terms_.emplace_back(i, c);
  }
  void add(const SparseVec<K>& v, const K& c = K(1)) {
    if (c.is_zero()) return;
    for (const auto& [i, x] : v) terms_.emplace_back(i, x * c);
  }
  void add_dense(std::span<const K> v, const K& c = K(1)) {
    if (c.is_zero()) return;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) terms_.emplace_back(i, v[i] * c);
  }
  [[nodiscard]] SparseVec<K> finish() const { return SparseVec<K>::from_terms(terms_); }
  [[nodiscard]] bool empty() const { return finish().empty(); }

 private:
  std::vector<typename SparseVec<K>::Term> terms_;
};

template <Field K>
SparseVec<K> operator+(const SparseVec<K>& a, const SparseVec<K>& b) {
  Accumulator<K> acc;
  acc.add(a);
  acc.add(b);
  return acc.finish();
}

template <Field K>
SparseVec<K> operator-(const SparseVec<K>& a, const SparseVec<K>& b) {
  Accumulator<K> acc;
  acc.add(a);
  acc.add(b, K(-1));
  return acc.finish();
}

}  // namespace kmd
