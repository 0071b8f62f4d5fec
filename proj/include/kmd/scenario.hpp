#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmd/io.hpp"
#include "kmd/morita.hpp"
#include "kmd/random.hpp"
#include "kmd/report.hpp"

namespace kmd {

struct ScenarioOptions {
  std::string scenario;
  std::string algebra = "k";
  std::string module;  // empty: the scenario's default
  std::size_t truncation = 4;
  std::optional<std::pair<int, int>> window;
  std::uint64_t seed = 1;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"verify", "hochschild", "koszul-check", "morita", "simples", "ext"};
  return names;
}

/// Builtin names known to the command line, including the extra test algebras.
inline bool is_builtin_name(const std::string& s) {
  if (s == "kxkxk" || s.rfind("trunc_poly_", 0) == 0) return true;
  for (const auto& n : builtin_names<Rational>())
    if (n == s) return true;
  return false;
}

/// Field of a description file (0 for Q), or nullopt for builtins.
inline std::optional<unsigned long> file_characteristic(const std::string& algebra) {
  if (is_builtin_name(algebra)) return std::nullopt;
  return read_description(algebra).characteristic.value_or(0);
}

template <Field K>
struct LoadedAlgebra {
  std::string name;
  AlgebraPtr<K> algebra;
  std::vector<std::pair<std::string, CurvedModule<K>>> modules;
  std::optional<std::vector<K>> character;
  std::string digest;
};

template <Field K>
LoadedAlgebra<K> load_algebra(const std::string& spec, Check check = Check::full) {
  if (is_builtin_name(spec)) {
    auto b = builtin<K>(spec);
    return {spec, share(std::move(b.algebra)), {}, b.character, "builtin"};
  }
  auto text = read_text_file(spec);
  auto p = parse_algebra_file<K>(spec, check);
  return {std::filesystem::path(spec).filename().string(), p.algebra, std::move(p.modules), std::nullopt,
          sha256_hex(text)};
}

/// An algebra map A → k: the builtin one, or the action on a one-dimensional
/// simple module of an ordinary algebra.
template <Field K>
std::optional<std::vector<K>> find_character(const LoadedAlgebra<K>& l) {
  if (l.character) return l.character;
  if (!is_ordinary(*l.algebra)) return std::nullopt;
  for (const auto& s : simple_modules(l.algebra))
    if (s.dim() == 1) {
      std::vector<K> chi;
      for (std::size_t i = 0; i < l.algebra->dim(); ++i) {
        const auto& x = s.act(i, 0);
        chi.push_back(x.empty() ? K(0) : x.begin()->second);
      }
      return chi;
    }
  return std::nullopt;
}

/// `k`, `A`, `A*`, `S<i>` (i-th simple), a module named in the algebra file,
/// or a file of module blocks over the algebra.
template <Field K>
CurvedModule<K> resolve_module(const LoadedAlgebra<K>& l, const std::string& spec) {
  const auto& a = l.algebra;
  if (spec == "k") {
    auto chi = find_character(l);
    if (!chi) throw std::invalid_argument("module k: no algebra map to k is known for '" + l.name + "'");
    return character_module(a, *chi);
  }
  if (spec == "A") return regular_module(a);
  if (spec == "A*") return dual_module(a);
  if (spec.size() > 1 && spec[0] == 'S' && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
    auto s = simple_modules(a);
    const auto i = std::stoul(spec.substr(1));
    if (i >= s.size()) throw std::invalid_argument("module " + spec + ": the algebra has " + std::to_string(s.size()) + " simples");
    return s[i];
  }
  for (const auto& [name, m] : l.modules)
    if (name == spec) return m;
  if (!std::filesystem::exists(spec)) throw std::invalid_argument("unknown module '" + spec + "'");
  auto d = read_description(spec);
  try {
    auto ms = build_modules<K>(d, a);
    if (ms.empty()) throw std::invalid_argument("module file '" + spec + "' has no module block");
    return ms.front().second;
  } catch (const ParseError& e) {
    throw ParseError(e.pos(), e.message(), spec);
  }
}

namespace detail {

inline std::string first_violation(const ValidationReport& r) {
  if (r.ok()) return "";
  const auto& v = r.violations().front();
  return v.identity + " at " + v.witness;
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

template <Field K>
std::string degrees_of(const GradedVectorSpace& v) {
  std::string s;
  for (int n : v.support()) s += (s.empty() ? "" : " ") + std::to_string(n) + ":" + std::to_string(v.dim(n));
  return s;
}

template <Field K>
void check_valid(ScenarioReport& rep, const std::string& name, const ValidationReport& r) {
  rep.check(name, r.ok(), first_violation(r));
}

template <Field K>
std::string default_module(const LoadedAlgebra<K>& l) {
  return find_character(l) ? "k" : "A*";
}

template <Field K>
void run_verify(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions& o) {
  const auto& a = *l.algebra;
  auto r = validate(a);
  check_valid<K>(rep, "algebra axioms", r);
  rep.value("dim", a.dim());
  rep.value("degrees", degrees_of<K>(a.space()));
  rep.value("curved", a.is_curved() ? "yes" : "no");
  rep.line("algebra " + l.name + ": dim " + std::to_string(a.dim()) + ", degrees " + degrees_of<K>(a.space()) +
           (a.is_curved() ? ", curved" : ""));
  if (!r.ok()) {
    rep.line(r.str());
    return;
  }
  for (const auto& [name, m] : l.modules) check_valid<K>(rep, "module " + name + " axioms", validate(m));
  if (!a.is_curved()) {
    const bool acyclic = is_acyclic(Complex<K>(a.space(), a.diff()));
    rep.value("acyclic", acyclic ? "yes" : "no");
    auto b = reduced_bar(a, o.truncation);
    check_valid<K>(rep, "reduced bar axioms", validate(*b.bar.algebra));
    rep.check("truncation respects word length", respects_arity_filtration(b.bar));
    rep.value("reduced_bar.dim", b.bar.dim());
    rep.value("reduced_bar.curved", b.bar.algebra->is_curved() ? "yes" : "no");
    auto h = hochschild_self(b, Check::skip);
    check_valid<K>(rep, "canonical twist axioms", validate(*h.algebra));
    rep.check("canonical element is Maurer-Cartan", !h.algebra->is_curved());
    const auto mspec = o.module.empty() ? std::string("A*") : o.module;
    auto m = resolve_module(l, mspec);
    check_valid<K>(rep, "module " + mspec + " axioms", validate(m));
    auto kd = koszul_dual(m, o.truncation, Check::skip);
    check_valid<K>(rep, "E axioms (M = " + mspec + ")", validate(*kd.e.algebra));
    rep.value("E.dim", kd.e.dim());
  }
  // seeded twists: A^ξ and A^[ξ] untwist by -ξ
  Rng rng(o.seed);
  if (a.space().dim(1) > 0) {
    bool algebra_rt = true, module_rt = true;
    auto reg = regular_module(l.algebra);
    for (int t = 0; t < 5; ++t) {
      auto xi = random_element<K>(rng, a.space(), 1);
      auto ax = share(twist_algebra(a, xi));
      algebra_rt = algebra_rt && same_algebra(twist_algebra(*ax, xi.scaled(K(-1))), a);
      if (!a.is_curved()) {
        auto n = twist_module(twist_module(reg, xi, ax), xi.scaled(K(-1)));
        module_rt = module_rt && n.diff() == reg.diff();
      }
    }
    rep.check("seeded twists undo (algebra)", algebra_rt);
    if (!a.is_curved()) rep.check("seeded twists undo (module A)", module_rt);
  }
}

/// Betti numbers of E at W and the stability comparison with W + 1.
template <Field K>
void run_hochschild(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions& o) {
  const auto mspec = o.module.empty() ? default_module(l) : o.module;
  rep.input("module", mspec);
  auto m = resolve_module(l, mspec);
  if (l.algebra->is_curved()) throw std::invalid_argument("hochschild: the algebra must be uncurved");
  auto kd = koszul_dual(m, o.truncation);
  check_valid<K>(rep, "E axioms", validate(*kd.e.algebra));
  rep.check("direct cochains equal the twisted bar construction", same_structure(hochschild_direct(m, o.truncation), kd.e));
  auto sw = stable_window(kd.e);
  rep.value("E.dim", kd.e.dim());
  if (!sw.exists) {
    rep.value("stable_window", "none");
    rep.line("no stable window: a letter of the bar construction has degree ≤ 0");
  } else {
    rep.value("stable_window", std::to_string(sw.lo) + ":" + std::to_string(sw.hi));
  }
  const auto& sp = kd.e.algebra->space();
  int lo = sw.exists ? sw.lo : sp.min_degree(), hi = sw.exists ? sw.hi : sp.max_degree();
  if (o.window) std::tie(lo, hi) = *o.window;
  auto h = betti_numbers(cohomology(underlying_complex(kd.e), lo, hi));
  std::map<int, std::size_t> next;
  if (sw.exists) {
    auto kd1 = koszul_dual(m, o.truncation + 1, Check::skip);
    const int a = std::max(lo, sw.lo), b = std::min(hi, sw.hi);
    if (a <= b) next = betti_numbers(cohomology(underlying_complex(kd1.e), a, b));
  }
  std::string table = "n    dim H^n(E)";
  bool stable = true;
  std::string witness;
  for (const auto& [n, b] : h) {
    const bool in = sw.exists && n >= sw.lo && n <= sw.hi;
    rep.value("H^" + std::to_string(n), b);
    if (!in) rep.value("H^" + std::to_string(n) + ".stable", "no");
    table += "\n" + std::to_string(n) + "    " + std::to_string(b) + (in ? "" : "   (outside stable window)");
    if (in && next.at(n) != b) {
      stable = false;
      if (witness.empty()) witness = "n=" + std::to_string(n) + ": " + std::to_string(b) + " vs " + std::to_string(next.at(n));
    }
  }
  rep.line(table);
  if (sw.exists) rep.check("cohomology at W reproduced at W+1 in the stable window", stable, witness);
}

template <Field K>
void run_koszul_check(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions& o) {
  const auto mspec = o.module.empty() ? default_module(l) : o.module;
  rep.input("module", mspec);
  auto m = resolve_module(l, mspec);
  require_ordinary(*l.algebra, "koszul-check");
  if (!is_ordinary(m)) throw std::invalid_argument("koszul-check: the module must be concentrated in degree 0 with d = 0");
  if (o.truncation < 2) throw std::invalid_argument("koszul-check: need truncation ≥ 2");
  auto kd = koszul_dual(m, o.truncation);
  const int nmax = static_cast<int>(o.truncation) - 2;
  int lo = 0, hi = nmax;
  if (o.window) std::tie(lo, hi) = std::pair(std::max(0, o.window->first), std::min(nmax, o.window->second));
  auto h = betti_numbers(cohomology(underlying_complex(kd.e), lo, hi));
  auto ext = ext_oracle(m, m, static_cast<std::size_t>(std::max(hi, 0)));
  std::string table = "n    dim H^n(E)    dim Ext^n(M,M)";
  for (int n = lo; n <= hi; ++n) {
    const auto e = h.at(n), x = ext[static_cast<std::size_t>(n)];
    table += "\n" + std::to_string(n) + "    " + std::to_string(e) + "    " + std::to_string(x);
    rep.value("H^" + std::to_string(n), e);
    rep.value("Ext^" + std::to_string(n), x);
    rep.check("dim H^" + std::to_string(n) + "(E) = dim Ext^" + std::to_string(n) + "(M,M)", e == x,
              e == x ? "" : std::to_string(e) + " vs " + std::to_string(x));
  }
  rep.line(table);
}

template <Field K>
void run_simples(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions&) {
  auto w = wedderburn(l.algebra);
  rep.value("simples", w.simples.size());
  rep.value("block_dims", join(w.block_dims));
  rep.value("radical.dim", w.radical.size());
  auto nil = nilpotency_index(*l.algebra, w.radical);
  rep.value("radical.nilpotency", nil ? std::to_string(*nil) : "none");
  rep.line("simples: " + std::to_string(w.simples.size()));
  for (std::size_t i = 0; i < w.simples.size(); ++i) {
    rep.line("  S" + std::to_string(i) + ": dim " + std::to_string(w.simples[i].dim()));
    check_valid<K>(rep, "S" + std::to_string(i) + " is a module", validate(w.simples[i]));
  }
  rep.check("radical is nilpotent", nil.has_value());
  std::size_t total = 0;
  for (auto b : w.block_dims) total += b;
  rep.check("blocks fill A/rad", total + w.radical.size() == l.algebra->dim());
  bool distinct = true;
  for (std::size_t i = 0; i < w.simples.size(); ++i)
    for (std::size_t j = 0; j < w.simples.size(); ++j)
      if (i != j && !module_homs(w.simples[i], w.simples[j]).empty()) distinct = false;
  rep.check("simples pairwise non-isomorphic", distinct);
  bool schur = true;
  for (const auto& s : w.simples) schur = schur && module_homs(s, s).size() == 1;
  rep.check("End(S) = k for every simple", schur);
}

template <Field K>
void run_ext(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions& o) {
  require_ordinary(*l.algebra, "ext");
  CurvedModule<K> m;
  if (o.module.empty()) {
    auto s = simple_modules(l.algebra);
    m = s.front();
    for (std::size_t i = 1; i < s.size(); ++i) m = direct_sum(m, s[i]);
    rep.input("module", "sum of simples");
  } else {
    m = resolve_module(l, o.module);
    rep.input("module", o.module);
  }
  auto ext = ext_oracle(m, m, o.truncation);
  std::string table = "n    dim Ext^n(M,M)";
  for (std::size_t n = 0; n < ext.size() && n <= o.truncation; ++n) {
    table += "\n" + std::to_string(n) + "    " + std::to_string(ext[n]);
    rep.value("Ext^" + std::to_string(n), ext[n]);
  }
  rep.line(table);
  rep.check("Ext^0 = Hom_A(M,M)", ext.at(0) == module_homs(m, m).size());
  auto g = global_dimension_probe(l.algebra, o.truncation);
  const auto gd = g.exceeded ? "> " + std::to_string(o.truncation) : std::to_string(g.dimension);
  rep.value("global_dimension", g.exceeded ? "exceeded" : std::to_string(g.dimension));
  rep.line("global dimension: " + gd);
}

template <Field K>
void run_morita(ScenarioReport& rep, const LoadedAlgebra<K>& l, const ScenarioOptions& o) {
  const auto& a = l.algebra;
  const auto mspec = o.module.empty() ? std::string("A*") : o.module;
  rep.input("module", mspec);
  auto m = resolve_module(l, mspec);
  Rng rng(o.seed);
  if (is_ordinary(*a) && is_ordinary(m)) {
    rep.check("M cogenerates the simples", cogenerates_simples(a, m));
    auto g = gamma(m);
    check_valid<K>(rep, "Gamma = End_A(M) axioms", validate(*g.algebra));
    rep.value("Gamma.dim", g.algebra->dim());
    std::vector<std::pair<std::string, CurvedModule<K>>> ns{{"A", regular_module(a)}, {"A*", dual_module(a)}};
    auto simples = simple_modules(a);
    for (std::size_t i = 0; i < simples.size(); ++i) ns.emplace_back("S" + std::to_string(i), simples[i]);
    for (int t = 0; t < 5; ++t) ns.emplace_back("random" + std::to_string(t), random_module(rng, a));
    for (const auto& [name, n] : ns) {
      auto u = classical_unit(g, m, n);
      rep.check("unit N -> GF(N) is an isomorphism, N = " + name, is_module_isomorphism(n, u.gf.module, u.unit));
    }
    rep.check("simple counts of A and Gamma agree", count_simples(a) == count_simples(g.algebra));
  }
  if (!a->is_curved()) {
    // the Koszul dual route: H(G F N) = H(N) above the truncation artefacts
    auto kd = koszul_dual(m, o.truncation);
    for (const auto& [name, n] : std::vector<std::pair<std::string, CurvedModule<K>>>{{"A", regular_module(a)}, {"M", m}}) {
      auto f = functor_F_direct(kd, n);
      auto gf = functor_G(kd, f, a);
      check_valid<K>(rep, "G F(" + name + ") axioms", validate(gf));
      const int lo = n.space().min_degree() - static_cast<int>(o.truncation) + 1;
      const int hi = std::max(n.space().max_degree(), gf.space().max_degree());
      auto hn = betti_numbers(cohomology(n.complex(), lo, hi));
      auto hg = betti_numbers(cohomology(gf.complex(), lo, hi));
      std::string witness;
      for (int d = lo; d <= hi && witness.empty(); ++d)
        if (hn.at(d) != hg.at(d))
          witness = "degree " + std::to_string(d) + ": " + std::to_string(hn.at(d)) + " vs " + std::to_string(hg.at(d));
      rep.check("H(G F(" + name + ")) = H(" + name + ") in degrees " + std::to_string(lo) + ".." + std::to_string(hi),
                witness.empty(), witness);
    }
  }
}

}  // namespace detail

/// Runs one scenario over K. Errors in the inputs propagate as exceptions.
template <Field K>
ScenarioReport run_scenario(const ScenarioOptions& o) {
  ScenarioReport rep(o.scenario);
  const bool verify = o.scenario == "verify";
  auto l = load_algebra<K>(o.algebra, verify ? Check::skip : Check::full);
  rep.input("algebra", o.algebra);
  rep.input("algebra.digest", l.digest);
  rep.input("field", K::name());
  rep.input("truncation", std::to_string(o.truncation));
  if (o.window) rep.input("window", std::to_string(o.window->first) + ":" + std::to_string(o.window->second));
  rep.input("seed", std::to_string(o.seed));
  if (verify) {
    if (!o.module.empty()) rep.input("module", o.module);
    detail::run_verify(rep, l, o);
  } else if (o.scenario == "hochschild") {
    detail::run_hochschild(rep, l, o);
  } else if (o.scenario == "koszul-check") {
    detail::run_koszul_check(rep, l, o);
  } else if (o.scenario == "morita") {
    detail::run_morita(rep, l, o);
  } else if (o.scenario == "simples") {
    detail::run_simples(rep, l, o);
  } else if (o.scenario == "ext") {
    detail::run_ext(rep, l, o);
  } else {
    throw std::invalid_argument("unknown scenario '" + o.scenario + "'");
  }
  return rep;
}

}  // namespace kmd
