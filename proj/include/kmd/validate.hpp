#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmd/module.hpp"

namespace kmd {

struct Violation {
  std::string identity;
  std::string witness;
};

/// Violated identities with witnesses. Only the first few witnesses per
/// identity are kept; counts are exact.
class ValidationReport {
 public:
  static constexpr std::size_t kWitnessesPerIdentity = 5;

  void add(const std::string& identity, std::string witness) {
    auto& n = counts_[identity];
    if (n++ < kWitnessesPerIdentity) violations_.push_back({identity, std::move(witness)});
  }
  void merge(const ValidationReport& other, const std::string& prefix = "") {
    for (const auto& v : other.violations_) violations_.push_back({prefix + v.identity, v.witness});
    for (const auto& [id, n] : other.counts_) counts_[prefix + id] += n;
  }

  [[nodiscard]] bool ok() const { return counts_.empty(); }
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }
  [[nodiscard]] const std::map<std::string, std::size_t>& counts() const { return counts_; }
  [[nodiscard]] std::size_t count(const std::string& identity) const {
    auto it = counts_.find(identity);
    return it == counts_.end() ? 0 : it->second;
  }

  [[nodiscard]] std::string str() const {
    if (ok()) return "valid";
    std::ostringstream os;
    for (const auto& [id, n] : counts_) os << id << ": " << n << " violation(s)\n";
    for (const auto& v : violations_) os << "  " << v.identity << " at " << v.witness << "\n";
    return os.str();
  }

 private:
  std::vector<Violation> violations_;
  std::map<std::string, std::size_t> counts_;
};

/// Throws with the report text unless it is empty.
inline void require_valid(const ValidationReport& r, const std::string& what) {
  if (!r.ok()) throw std::runtime_error(what + " failed validation:\n" + r.str());
}

namespace detail {

inline std::string tuple_label(std::initializer_list<std::string> parts) {
  std::string s = "(";
  bool first = true;
  for (const auto& p : parts) {
    s += (first ? "" : ", ") + p;
    first = false;
  }
  return s + ")";
}

/// Generators for the trilinear checks: the factorization's generators when
/// it is present and consistent, otherwise every basis vector.
template <Field K>
std::vector<std::size_t> check_generators(const CurvedDgAlgebra<K>& a, ValidationReport& report) {
  std::vector<std::size_t> all(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) all[i] = i;
  const auto& f = a.factorization();
  if (!f) return all;
  std::vector<std::size_t> gens;
  bool consistent = true;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const auto& s = f->split[i];
    if (!s) {
      gens.push_back(i);
      continue;
    }
    const auto [g, r] = *s;
    if (g >= a.dim() || r >= a.dim() || f->split[g] || !(a.product(g, r) == Element<K>::single(i))) {
      report.add("factorization", a.space().label(i));
      consistent = false;
    }
  }
  // The chain i → r → r' → ... must reach a generator.
  std::vector<int> state(a.dim(), 0);  // 0 unknown, 1 in progress, 2 grounded
  for (std::size_t i = 0; i < a.dim() && consistent; ++i) {
    std::vector<std::size_t> path;
    std::size_t cur = i;
    while (state[cur] == 0 && f->split[cur]) {
      state[cur] = 1;
      path.push_back(cur);
      cur = f->split[cur]->second;
    }
    if (state[cur] == 1) {
      report.add("factorization", "cycle through " + a.space().label(cur));
      consistent = false;
    }
    for (auto p : path) state[p] = 2;
    state[cur] = 2;
  }
  return consistent ? gens : all;
}

}  // namespace detail

/// Unit, associativity, Leibniz, d² = [h, -] and d(h) = 0, exactly on basis tuples.
template <Field K>
ValidationReport validate(const CurvedDgAlgebra<K>& a) {
  ValidationReport report;
  const std::size_t n = a.dim();
  const auto& v = a.space();
  const auto& one = a.unit();

  for (std::size_t i = 0; i < n; ++i) {
    auto e = Element<K>::single(i);
    if (!(a.mul(one, i) == e)) report.add("left unit", v.label(i));
    if (!(a.mul(e, one) == e)) report.add("right unit", v.label(i));
  }

  const auto gens = detail::check_generators(a, report);

  for (auto g : gens)
    for (std::size_t x = 0; x < n; ++x) {
      const auto& gx = a.product(g, x);
      for (std::size_t y = 0; y < n; ++y) {
        const auto& xy = a.product(x, y);
        if (gx.empty() && xy.empty()) continue;
        if (!(a.mul(gx, y) == a.mul(g, xy)))
          report.add("associativity", detail::tuple_label({v.label(g), v.label(x), v.label(y)}));
      }
    }

  for (auto g : gens) {
    const auto& dg = a.d(g);
    const K s = sign<K>(a.degree(g));
    for (std::size_t y = 0; y < n; ++y) {
      auto lhs = a.d(a.product(g, y));
      Accumulator<K> rhs;
      rhs.add(a.mul(dg, y));
      rhs.add(a.mul(g, a.d(y)), s);
      if (!(lhs == rhs.finish())) report.add("leibniz", detail::tuple_label({v.label(g), v.label(y)}));
    }
  }

  const auto& h = a.curvature();
  for (std::size_t i = 0; i < n; ++i) {
    auto dd = a.d(a.d(i));
    if (!(dd == a.commutator(h, Element<K>::single(i)))) report.add("d^2=[h,-]", v.label(i));
  }
  if (!a.d(h).empty()) report.add("dh=0", "h");
  return report;
}

/// validate() plus h = 0.
template <Field K>
ValidationReport validate_dg(const CurvedDgAlgebra<K>& a) {
  auto r = validate(a);
  if (a.is_curved()) r.add("curvature=0", "h");
  return r;
}

/// Unital associative action, d_M(a·x) = d(a)·x + (-1)^{|a|} a·d_M(x), d_M² = h·.
template <Field K>
ValidationReport validate(const CurvedModule<K>& m) {
  ValidationReport report;
  const auto& a = m.algebra();
  const auto& av = a.space();
  const auto& mv = m.space();
  const std::size_t na = a.dim(), n = m.dim();

  for (std::size_t j = 0; j < n; ++j)
    if (!(m.act(a.unit(), j) == Element<K>::single(j))) report.add("module unit", mv.label(j));

  ValidationReport scratch;
  const auto gens = detail::check_generators(a, scratch);

  for (auto g : gens)
    for (std::size_t b = 0; b < na; ++b) {
      const auto& gb = a.product(g, b);
      for (std::size_t x = 0; x < n; ++x) {
        const auto& bx = m.act(b, x);
        if (gb.empty() && bx.empty()) continue;
        if (!(m.act(gb, x) == m.act(g, bx)))
          report.add("action associativity", detail::tuple_label({av.label(g), av.label(b), mv.label(x)}));
      }
    }

  for (auto g : gens) {
    const auto& dg = a.d(g);
    const K s = sign<K>(a.degree(g));
    for (std::size_t x = 0; x < n; ++x) {
      auto lhs = m.d(m.act(g, x));
      Accumulator<K> rhs;
      rhs.add(m.act(dg, x));
      rhs.add(m.act(g, m.d(x)), s);
      if (!(lhs == rhs.finish())) report.add("module leibniz", detail::tuple_label({av.label(g), mv.label(x)}));
    }
  }

  for (std::size_t x = 0; x < n; ++x)
    if (!(m.d(m.d(x)) == m.act(a.curvature(), x))) report.add("d_M^2=h", mv.label(x));
  return report;
}

/// Degree 0 map of modules over the same algebra commuting with action and d.
template <Field K>
ValidationReport validate_module_map(const CurvedModule<K>& src, const CurvedModule<K>& tgt, const GradedMap<K>& f) {
  ValidationReport report;
  if (!(f.source() == src.space()) || !(f.target() == tgt.space()) || f.degree() != 0) {
    report.add("module map shape", "spaces or degree");
    return report;
  }
  for (std::size_t i = 0; i < src.algebra().dim(); ++i)
    for (std::size_t x = 0; x < src.dim(); ++x)
      if (!(f.apply(src.act(i, x)) == tgt.act(i, f.column(x))))
        report.add("linearity", detail::tuple_label({src.algebra().space().label(i), src.space().label(x)}));
  for (std::size_t x = 0; x < src.dim(); ++x)
    if (!(f.apply(src.d(x)) == tgt.d(f.column(x)))) report.add("chain map", src.space().label(x));
  return report;
}

/// True when f is a bijective module map.
template <Field K>
bool is_module_isomorphism(const CurvedModule<K>& src, const CurvedModule<K>& tgt, const GradedMap<K>& f) {
  if (!validate_module_map(src, tgt, f).ok()) return false;
  if (src.dim() != tgt.dim()) return false;
  for (int n : src.space().support())
    if (src.space().dim(n) != tgt.space().dim(n) || rank(f.block(n)) != src.space().dim(n)) return false;
  for (int n : tgt.space().support())
    if (src.space().dim(n) != tgt.space().dim(n)) return false;
  return true;
}

}  // namespace kmd
