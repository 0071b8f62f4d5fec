#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmd/sparse.hpp"

namespace kmd {

struct BasisElement {
  std::string label;
  int degree = 0;
  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Integer-graded space with finite support, given by an ordered basis.
/// Flat indices address the whole basis; component(n) lists the flat
/// indices of degree n in basis order.
class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;
  explicit GradedVectorSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) { index(); }

  /// Space with dims[n] anonymous basis vectors in degree n, labelled prefix<n>_<i>.
  static GradedVectorSpace from_dims(const std::map<int, std::size_t>& dims, const std::string& prefix = "v") {
    std::vector<BasisElement> b;
    for (const auto& [deg, n] : dims)
      for (std::size_t i = 0; i < n; ++i) b.push_back({prefix + std::to_string(deg) + "_" + std::to_string(i), deg});
    return GradedVectorSpace(std::move(b));
  }

  [[nodiscard]] std::size_t dim() const { return basis_.size(); }
  [[nodiscard]] std::size_t dim(int degree) const { return component(degree).size(); }
  [[nodiscard]] int degree(std::size_t i) const { return basis_.at(i).degree; }
  [[nodiscard]] const std::string& label(std::size_t i) const { return basis_.at(i).label; }
  [[nodiscard]] const std::vector<BasisElement>& basis() const { return basis_; }
  [[nodiscard]] std::size_t position(std::size_t i) const { return position_.at(i); }

  [[nodiscard]] const std::vector<std::size_t>& component(int degree) const {
    static const std::vector<std::size_t> empty;
    auto it = components_.find(degree);
    return it == components_.end() ? empty : it->second;
  }

  /// Degrees with a nonzero component, increasing.
  [[nodiscard]] std::vector<int> support() const {
    std::vector<int> d;
    for (const auto& [deg, idx] : components_) d.push_back(deg);
    return d;
  }
  [[nodiscard]] bool empty() const { return basis_.empty(); }
  [[nodiscard]] int min_degree() const { return components_.empty() ? 0 : components_.begin()->first; }
  [[nodiscard]] int max_degree() const { return components_.empty() ? 0 : components_.rbegin()->first; }

  [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].label == label) return i;
    return std::nullopt;
  }

  friend bool operator==(const GradedVectorSpace& a, const GradedVectorSpace& b) { return a.basis_ == b.basis_; }

 private:
  void index() {
    std::set<std::pair<int, std::string>> seen;
    position_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (!seen.emplace(basis_[i].degree, basis_[i].label).second)
        throw std::invalid_argument("duplicate basis label '" + basis_[i].label + "' in degree " +
                                    std::to_string(basis_[i].degree));
      auto& comp = components_[basis_[i].degree];
      position_[i] = comp.size();
      comp.push_back(i);
    }
  }

  std::vector<BasisElement> basis_;
  std::map<int, std::vector<std::size_t>> components_;
  std::vector<std::size_t> position_;
};

/// Degree-homogeneous linear map. Stored column-wise: the image of each source
/// basis vector as a sparse vector over the target basis.
template <Field K>
class GradedMap {
 public:
  GradedMap() = default;

  GradedMap(GradedVectorSpace source, GradedVectorSpace target, int degree, std::vector<SparseVec<K>> columns)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree), columns_(std::move(columns)) {
    if (columns_.size() != source_.dim()) throw std::invalid_argument("GradedMap: one column per source basis vector");
    for (std::size_t j = 0; j < columns_.size(); ++j)
      for (const auto& [i, c] : columns_[j]) {
        if (i >= target_.dim()) throw std::invalid_argument("GradedMap: target index out of range");
        if (target_.degree(i) != source_.degree(j) + degree_)
          throw std::invalid_argument("GradedMap: entry (" + target_.label(i) + ", " + source_.label(j) +
                                      ") violates degree " + std::to_string(degree_));
      }
  }

  static GradedMap zero(GradedVectorSpace source, GradedVectorSpace target, int degree) {
    std::vector<SparseVec<K>> cols(source.dim());
    return GradedMap(std::move(source), std::move(target), degree, std::move(cols));
  }

  static GradedMap identity(const GradedVectorSpace& v) {
    std::vector<SparseVec<K>> cols;
    for (std::size_t i = 0; i < v.dim(); ++i) cols.push_back(SparseVec<K>::single(i));
    return GradedMap(v, v, 0, std::move(cols));
  }

  /// Assemble from per-degree blocks: blocks[n] maps component n to component n + degree.
  static GradedMap from_blocks(GradedVectorSpace source, GradedVectorSpace target, int degree,
                               const std::map<int, Matrix<K>>& blocks) {
    std::vector<SparseVec<K>> cols(source.dim());
    for (const auto& [n, m] : blocks) {
      const auto& src = source.component(n);
      const auto& tgt = target.component(n + degree);
      if (m.cols() != src.size() || m.rows() != tgt.size())
        throw std::invalid_argument("GradedMap::from_blocks: block " + std::to_string(n) + " has wrong shape");
      for (std::size_t c = 0; c < src.size(); ++c) {
        std::vector<typename SparseVec<K>::Term> terms;
        for (std::size_t r = 0; r < tgt.size(); ++r)
          if (!m(r, c).is_zero()) terms.emplace_back(tgt[r], m(r, c));
        cols[src[c]] = SparseVec<K>::from_terms(std::move(terms));
      }
    }
    return GradedMap(std::move(source), std::move(target), degree, std::move(cols));
  }

  [[nodiscard]] const GradedVectorSpace& source() const { return source_; }
  [[nodiscard]] const GradedVectorSpace& target() const { return target_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const SparseVec<K>& column(std::size_t j) const { return columns_.at(j); }
  [[nodiscard]] const std::vector<SparseVec<K>>& columns() const { return columns_; }

  /// Component V_n -> W_{n+degree} as a dense matrix in basis order.
  [[nodiscard]] Matrix<K> block(int n) const {
    const auto& src = source_.component(n);
    const auto& tgt = target_.component(n + degree_);
    Matrix<K> m(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
      for (const auto& [i, x] : columns_[src[c]]) m(target_.position(i), c) = x;
    return m;
  }

  [[nodiscard]] Vec<K> apply(std::span<const K> x) const {
    if (x.size() != source_.dim()) throw std::invalid_argument("GradedMap::apply: dimension mismatch");
    Vec<K> y(target_.dim());
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j].is_zero()) continue;
      for (const auto& [i, c] : columns_[j]) y[i] += c * x[j];
    }
    return y;
  }
  [[nodiscard]] SparseVec<K> apply(const SparseVec<K>& x) const {
    Accumulator<K> acc;
    for (const auto& [j, c] : x) acc.add(columns_.at(j), c);
    return acc.finish();
  }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) { return c.empty(); });
  }

  friend bool operator==(const GradedMap& a, const GradedMap& b) {
    return a.degree_ == b.degree_ && a.source_ == b.source_ && a.target_ == b.target_ && a.columns_ == b.columns_;
  }

 private:
  GradedVectorSpace source_;
  GradedVectorSpace target_;
  int degree_ = 0;
  std::vector<SparseVec<K>> columns_;
};

/// g after f.
template <Field K>
GradedMap<K> compose(const GradedMap<K>& g, const GradedMap<K>& f) {
  if (!(f.target() == g.source())) throw std::invalid_argument("compose: spaces do not match");
  std::vector<SparseVec<K>> cols;
  cols.reserve(f.source().dim());
  for (std::size_t j = 0; j < f.source().dim(); ++j) cols.push_back(g.apply(f.column(j)));
  return GradedMap<K>(f.source(), g.target(), f.degree() + g.degree(), std::move(cols));
}

template <Field K>
GradedMap<K> linear_combination(const K& a, const GradedMap<K>& f, const K& b, const GradedMap<K>& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()) || f.degree() != g.degree())
    throw std::invalid_argument("linear_combination: maps are not parallel");
  std::vector<SparseVec<K>> cols;
  for (std::size_t j = 0; j < f.source().dim(); ++j) {
    Accumulator<K> acc;
    acc.add(f.column(j), a);
    acc.add(g.column(j), b);
    cols.push_back(acc.finish());
  }
  return GradedMap<K>(f.source(), f.target(), f.degree(), std::move(cols));
}

}  // namespace kmd
