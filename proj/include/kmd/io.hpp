#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kmd/module.hpp"
#include "kmd/twisting.hpp"

namespace kmd {

/// Algebra description files, line oriented:
///
///   field Q | field F <p>
///   basis <label> <degree>
///   unit <label>      (or unit = <combination>)
///   mul <a> <b> = c1*<k1> + c2*<k2> - <k3>
///   diff <a> = ...
///   curvature = ...
///   module <name>
///   mbasis <label> <degree>
///   act <a> <m> = ...
///   mdiff <m> = ...
///
/// Labels are any run of characters other than whitespace, `=`, `+`, `-`
/// and `#`. A coefficient is attached as `c*label` without spaces, c an
/// integer or fraction.
///
/// `#` starts a comment, unlisted products and differentials are zero, and a
/// right-hand side may be `0`. When the unit is a basis vector its products
/// and its action default to the unit law. Module lines apply to the last
/// `module`.

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& msg, const std::string& file = "")
      : std::runtime_error((file.empty() ? "" : file + ": ") + "line " + std::to_string(pos.line) + ", column " +
                           std::to_string(pos.column) + ": " + msg),
        pos_(pos),
        msg_(msg) {}
  [[nodiscard]] SourcePos pos() const { return pos_; }
  [[nodiscard]] const std::string& message() const { return msg_; }

 private:
  SourcePos pos_;
  std::string msg_;
};

/// Thrown by the builders when the parsed object fails its axioms.
class ValidationFailure : public std::runtime_error {
 public:
  ValidationFailure(const std::string& what, ValidationReport report)
      : std::runtime_error(what + " fails validation:\n" + report.str()), report_(std::move(report)) {}
  [[nodiscard]] const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct Term {
  std::string coefficient;  // empty means 1
  bool negative = false;
  std::string label;
  SourcePos pos;
};

struct Expr {
  std::vector<Term> terms;
  SourcePos pos;
};

struct LabelDecl {
  std::string label;
  int degree = 0;
  SourcePos pos;
};

struct ProductDecl {
  std::string left, right;
  Expr value;
  SourcePos pos;  // of the left label
  SourcePos right_pos;
};

struct DiffDecl {
  std::string source;
  Expr value;
  SourcePos pos;
};

struct ModuleDecl {
  std::string name;
  SourcePos pos;
  std::vector<LabelDecl> basis;
  std::vector<ProductDecl> actions;
  std::vector<DiffDecl> diffs;
};

struct Description {
  std::optional<unsigned long> characteristic;  // 0 for Q
  SourcePos field_pos;
  std::vector<LabelDecl> basis;
  std::optional<Expr> unit;
  std::vector<ProductDecl> products;
  std::vector<DiffDecl> diffs;
  std::optional<Expr> curvature;
  std::vector<ModuleDecl> modules;

  [[nodiscard]] bool has_algebra() const { return !basis.empty() || unit.has_value(); }
};

namespace detail {

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t number) : line_(line), number_(number) {
    if (auto hash = line_.find('#'); hash != std::string_view::npos) line_ = line_.substr(0, hash);
  }

  void skip_space() {
    while (p_ < line_.size() && (line_[p_] == ' ' || line_[p_] == '\t' || line_[p_] == '\r')) ++p_;
  }
  [[nodiscard]] bool at_end() {
    skip_space();
    return p_ >= line_.size();
  }
  [[nodiscard]] SourcePos pos() const { return {number_, p_ + 1}; }
  /// Position of the next token.
  SourcePos next_pos() {
    skip_space();
    return pos();
  }
  char peek() {
    skip_space();
    return p_ < line_.size() ? line_[p_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++p_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static bool word_char(char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '=' && c != '+' && c != '-';
  }

  std::string word(const char* what) {
    skip_space();
    const std::size_t start = p_;
    while (p_ < line_.size() && word_char(line_[p_])) ++p_;
    if (p_ == start) fail(std::string("expected ") + what);
    return std::string(line_.substr(start, p_ - start));
  }

  int integer(const char* what) {
    skip_space();
    const auto at = pos();
    std::size_t start = p_;
    if (p_ < line_.size() && (line_[p_] == '-' || line_[p_] == '+')) ++p_;
    while (p_ < line_.size() && word_char(line_[p_])) ++p_;
    const std::string text(line_.substr(start, p_ - start));
    try {
      std::size_t used = 0;
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ParseError(at, std::string("expected ") + what + ", found '" + text + "'");
    }
  }

  Expr expression() {
    Expr e;
    skip_space();
    e.pos = pos();
    bool first = true;
    for (;;) {
      skip_space();
      Term t;
      t.pos = pos();
      if (accept('-')) {
        t.negative = true;
      } else if (!accept('+') && !first) {
        fail("expected '+' or '-'");
      }
      auto w = word("a term");
      // c*label when the part before the first '*' is a number
      const auto star = w.find('*');
      if (star != std::string::npos && star > 0 && star + 1 < w.size() &&
          w.find_first_not_of("0123456789/", 0) >= star) {
        t.coefficient = w.substr(0, star);
        t.label = w.substr(star + 1);
      } else {
        t.label = std::move(w);
      }
      e.terms.push_back(std::move(t));
      first = false;
      if (at_end()) break;
    }
    if (e.terms.size() == 1 && e.terms[0].label == "0" && e.terms[0].coefficient.empty() && !e.terms[0].negative)
      e.terms.clear();
    return e;
  }

  void finish() {
    if (!at_end()) fail("unexpected text");
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos(), msg); }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t p_ = 0;
};

}  // namespace detail

inline Description parse_description(std::string_view text) {
  Description d;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    detail::LineCursor c(text.substr(start, end - start), ++number);
    start = end + 1;
    if (c.at_end()) continue;
    const auto at = c.pos();
    const auto key = c.word("a keyword");
    auto current_module = [&]() -> ModuleDecl& {
      if (d.modules.empty()) throw ParseError(at, "'" + key + "' outside a module block");
      return d.modules.back();
    };
    if (key == "field") {
      if (d.characteristic) throw ParseError(at, "field given twice");
      d.field_pos = at;
      auto f = c.word("Q or F");
      if (f == "Q") {
        d.characteristic = 0;
      } else if (f == "F") {
        const auto p_at = c.next_pos();
        const int p = c.integer("a prime");
        if (p < 3 || !detail::is_prime(static_cast<std::uint64_t>(p)))
          throw ParseError(p_at, "F needs an odd prime, got " + std::to_string(p));
        d.characteristic = static_cast<unsigned long>(p);
      } else {
        throw ParseError(at, "unknown field '" + f + "', expected Q or F <p>");
      }
    } else if (key == "basis" || key == "mbasis") {
      LabelDecl l;
      l.pos = c.next_pos();
      l.label = c.word("a basis label");
      l.degree = c.integer("an integer degree");
      (key == "basis" ? d.basis : current_module().basis).push_back(std::move(l));
    } else if (key == "unit") {
      if (d.unit) throw ParseError(at, "unit given twice");
      c.accept('=');
      d.unit = c.expression();
    } else if (key == "mul" || key == "act") {
      ProductDecl m;
      m.pos = c.next_pos();
      m.left = c.word("a basis label");
      m.right_pos = c.next_pos();
      m.right = c.word("a basis label");
      c.expect('=');
      m.value = c.expression();
      (key == "mul" ? d.products : current_module().actions).push_back(std::move(m));
    } else if (key == "diff" || key == "mdiff") {
      DiffDecl m;
      m.pos = c.next_pos();
      m.source = c.word("a basis label");
      c.expect('=');
      m.value = c.expression();
      (key == "diff" ? d.diffs : current_module().diffs).push_back(std::move(m));
    } else if (key == "curvature") {
      if (d.curvature) throw ParseError(at, "curvature given twice");
      c.accept('=');
      d.curvature = c.expression();
    } else if (key == "module") {
      ModuleDecl m;
      m.pos = c.next_pos();
      m.name = c.word("a module name");
      d.modules.push_back(std::move(m));
    } else {
      throw ParseError(at, "unknown keyword '" + key + "'");
    }
    c.finish();
  }
  return d;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Description read_description(const std::string& path) {
  try {
    return parse_description(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.pos(), e.message(), path);
  }
}

template <Field K>
struct ParsedAlgebra {
  AlgebraPtr<K> algebra;
  std::vector<std::pair<std::string, CurvedModule<K>>> modules;
};

namespace detail {

inline std::map<std::string, std::size_t> label_index(const std::vector<LabelDecl>& basis) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!idx.emplace(basis[i].label, i).second) throw ParseError(basis[i].pos, "duplicate basis label '" + basis[i].label + "'");
  return idx;
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& idx, const std::string& label, SourcePos pos,
                          const char* what) {
  auto it = idx.find(label);
  if (it == idx.end()) throw ParseError(pos, std::string("unknown ") + what + " label '" + label + "'");
  return it->second;
}

template <Field K>
Element<K> evaluate(const Expr& e, const std::map<std::string, std::size_t>& idx, const char* what) {
  Accumulator<K> acc;
  for (const auto& t : e.terms) {
    K c(1);
    if (!t.coefficient.empty()) {
      try {
        c = K::parse(t.coefficient);
      } catch (const std::exception& ex) {
        throw ParseError(t.pos, ex.what());
      }
    }
    if (t.negative) c = -c;
    acc.add(lookup(idx, t.label, t.pos, what), c);
  }
  return acc.finish();
}

inline GradedVectorSpace space_of(const std::vector<LabelDecl>& basis) {
  std::vector<BasisElement> b;
  for (const auto& l : basis) b.push_back({l.label, l.degree});
  return GradedVectorSpace(std::move(b));
}

/// Degree check for an expression: every term must sit in `degree`.
inline void require_degree(const Expr& e, const std::map<std::string, std::size_t>& idx, const GradedVectorSpace& v,
                           int degree, const std::string& what) {
  for (const auto& t : e.terms) {
    const auto i = lookup(idx, t.label, t.pos, "basis");
    if (v.degree(i) != degree)
      throw ParseError(t.pos, what + ": term '" + t.label + "' has degree " + std::to_string(v.degree(i)) + ", expected " +
                                  std::to_string(degree));
  }
}

}  // namespace detail

/// Modules of the description over an existing algebra.
template <Field K>
std::vector<std::pair<std::string, CurvedModule<K>>> build_modules(const Description& d, const AlgebraPtr<K>& a,
                                                                  Check check = Check::full) {
  std::map<std::string, std::size_t> aidx;
  for (std::size_t i = 0; i < a->dim(); ++i) aidx.emplace(a->space().label(i), i);
  std::vector<std::pair<std::string, CurvedModule<K>>> out;
  for (const auto& md : d.modules) {
    if (md.basis.empty()) throw ParseError(md.pos, "module '" + md.name + "' has no mbasis lines");
    const auto midx = detail::label_index(md.basis);
    const auto v = detail::space_of(md.basis);
    const std::size_t n = v.dim();
    std::vector<Element<K>> action(a->dim() * n);
    // the unit acts as the identity unless stated otherwise
    if (auto u = a->unit_index())
      for (std::size_t j = 0; j < n; ++j) action[*u * n + j] = Element<K>::single(j);
    for (const auto& p : md.actions) {
      const auto i = detail::lookup(aidx, p.left, p.pos, "algebra");
      const auto j = detail::lookup(midx, p.right, p.right_pos, "module");
      detail::require_degree(p.value, midx, v, a->degree(i) + v.degree(j), "act " + p.left + " " + p.right);
      action[i * n + j] = detail::evaluate<K>(p.value, midx, "module");
    }
    std::vector<Element<K>> dcols(n);
    for (const auto& p : md.diffs) {
      const auto j = detail::lookup(midx, p.source, p.pos, "module");
      detail::require_degree(p.value, midx, v, v.degree(j) + 1, "mdiff " + p.source);
      dcols[j] = detail::evaluate<K>(p.value, midx, "module");
    }
    CurvedModule<K> m(a, v, std::move(action), GradedMap<K>(v, v, 1, std::move(dcols)));
    if (check == Check::full) {
      auto r = validate(m);
      if (!r.ok()) throw ValidationFailure("module '" + md.name + "'", std::move(r));
    }
    out.emplace_back(md.name, std::move(m));
  }
  return out;
}

/// The algebra (and its modules) of a description, validated unless told otherwise.
template <Field K>
ParsedAlgebra<K> build_algebra(const Description& d, Check check = Check::full) {
  const unsigned long want = d.characteristic.value_or(0);
  if (want != K::characteristic())
    throw ParseError(d.field_pos, "file is over " + (want == 0 ? std::string("Q") : "F" + std::to_string(want)) +
                                      " but the computation runs over " + K::name());
  if (d.basis.empty()) throw ParseError({1, 1}, "no basis lines");
  if (!d.unit) throw ParseError({1, 1}, "no unit line");
  const auto idx = detail::label_index(d.basis);
  const auto v = detail::space_of(d.basis);
  const std::size_t n = v.dim();
  detail::require_degree(*d.unit, idx, v, 0, "unit");
  const auto unit = detail::evaluate<K>(*d.unit, idx, "algebra");
  if (unit.empty()) throw ParseError(d.unit->pos, "the unit is zero");
  // with a basis unit, products with it default to the unit law
  const auto u = unit.size() == 1 && unit.begin()->second == K(1) ? std::optional(unit.begin()->first) : std::nullopt;
  std::vector<Element<K>> mult(n * n);
  std::vector<bool> given(n * n, false);
  for (const auto& p : d.products) {
    const auto i = detail::lookup(idx, p.left, p.pos, "algebra");
    const auto j = detail::lookup(idx, p.right, p.right_pos, "algebra");
    if (given[i * n + j]) throw ParseError(p.pos, "product " + p.left + " " + p.right + " given twice");
    given[i * n + j] = true;
    detail::require_degree(p.value, idx, v, v.degree(i) + v.degree(j), "mul " + p.left + " " + p.right);
    mult[i * n + j] = detail::evaluate<K>(p.value, idx, "algebra");
  }
  for (std::size_t i = 0; u && i < n; ++i) {
    if (!given[*u * n + i]) mult[*u * n + i] = Element<K>::single(i);
    if (!given[i * n + *u]) mult[i * n + *u] = Element<K>::single(i);
  }
  std::vector<Element<K>> dcols(n);
  for (const auto& p : d.diffs) {
    const auto i = detail::lookup(idx, p.source, p.pos, "algebra");
    detail::require_degree(p.value, idx, v, v.degree(i) + 1, "diff " + p.source);
    dcols[i] = detail::evaluate<K>(p.value, idx, "algebra");
  }
  Element<K> h;
  if (d.curvature) {
    detail::require_degree(*d.curvature, idx, v, 2, "curvature");
    h = detail::evaluate<K>(*d.curvature, idx, "algebra");
  }
  auto a = share(CurvedDgAlgebra<K>(v, unit, std::move(mult), GradedMap<K>(v, v, 1, std::move(dcols)),
                                    std::move(h)));
  if (check == Check::full) {
    auto r = validate(*a);
    if (!r.ok()) throw ValidationFailure("algebra", std::move(r));
  }
  return {a, build_modules<K>(d, a, check)};
}

template <Field K>
ParsedAlgebra<K> parse_algebra_file(const std::string& path, Check check = Check::full) {
  auto d = read_description(path);
  try {
    return build_algebra<K>(d, check);
  } catch (const ParseError& e) {
    throw ParseError(e.pos(), e.message(), path);
  }
}

namespace detail {

template <Field K>
std::string format_expr(const Element<K>& x, const GradedVectorSpace& v) {
  if (x.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [i, c] : x) {
    const bool neg = c.str().front() == '-';
    const K mag = neg ? -c : c;
    if (!first) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (!(mag == K(1))) out += mag.str() + "*";
    out += v.label(i);
    first = false;
  }
  return out;
}

}  // namespace detail

/// Inverse of parse_description.
template <Field K>
std::string write_description(const CurvedDgAlgebra<K>& a,
                              const std::vector<std::pair<std::string, CurvedModule<K>>>& modules = {}) {
  const auto u = a.unit_index();
  std::ostringstream o;
  o << "field " << (K::characteristic() == 0 ? std::string("Q") : "F " + std::to_string(K::characteristic())) << "\n";
  const auto& v = a.space();
  for (std::size_t i = 0; i < a.dim(); ++i) o << "basis " << v.label(i) << " " << v.degree(i) << "\n";
  if (u)
    o << "unit " << v.label(*u) << "\n";
  else
    o << "unit = " << detail::format_expr(a.unit(), v) << "\n";
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (u && (i == *u || j == *u)) continue;
      if (!a.product(i, j).empty())
        o << "mul " << v.label(i) << " " << v.label(j) << " = " << detail::format_expr(a.product(i, j), v) << "\n";
    }
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!a.d(i).empty()) o << "diff " << v.label(i) << " = " << detail::format_expr(a.d(i), v) << "\n";
  if (a.is_curved()) o << "curvature = " << detail::format_expr(a.curvature(), v) << "\n";
  for (const auto& [name, m] : modules) {
    o << "module " << name << "\n";
    const auto& mv = m.space();
    for (std::size_t j = 0; j < m.dim(); ++j) o << "mbasis " << mv.label(j) << " " << mv.degree(j) << "\n";
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) {
        const auto& x = m.act(i, j);
        const bool unit_row = u && i == *u;
        if (unit_row && x == Element<K>::single(j)) continue;
        if (!x.empty() || unit_row) o << "act " << v.label(i) << " " << mv.label(j) << " = " << detail::format_expr(x, mv) << "\n";
      }
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!m.d(j).empty()) o << "mdiff " << mv.label(j) << " = " << detail::format_expr(m.d(j), mv) << "\n";
  }
  return o.str();
}

}  // namespace kmd
