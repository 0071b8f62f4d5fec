#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kmd/scenario.hpp"

namespace {

// Prime fields available at run time; each is a separate instantiation.
template <std::uint32_t... P>
struct Primes {};
using SupportedPrimes = Primes<3, 5, 7, 11, 32003>;
constexpr std::uint32_t kDefaultPrime = 32003;

template <std::uint32_t P, std::uint32_t... Rest>
kmd::ScenarioReport run_fp(unsigned long p, const kmd::ScenarioOptions& o, Primes<P, Rest...>) {
  if (p == P) return kmd::run_scenario<kmd::Fp<P>>(o);
  if constexpr (sizeof...(Rest) > 0) {
    return run_fp(p, o, Primes<Rest...>{});
  } else {
    throw std::invalid_argument("F" + std::to_string(p) + " is not built in; supported primes: 3 5 7 11 32003");
  }
}

std::pair<int, int> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected a:b");
  try {
    std::size_t u1 = 0, u2 = 0;
    const int a = std::stoi(s.substr(0, colon), &u1);
    const int b = std::stoi(s.substr(colon + 1), &u2);
    if (u1 != colon || u2 != s.size() - colon - 1 || a > b) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("--window", "expected integers a:b with a <= b, got '" + s + "'");
  } catch (const std::out_of_range&) {
    throw CLI::ValidationError("--window", "out of range: '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dg, curved dg and Koszul-Morita duality computations"};
  kmd::ScenarioOptions o;
  std::string window, field, report;
  app.add_option("scenario", o.scenario, "verify | hochschild | koszul-check | morita | simples | ext")
      ->required()
      ->check(CLI::IsMember(kmd::scenario_names()));
  app.add_option("--algebra", o.algebra, "builtin (k, kxk, kxkxk, dual_numbers, upper_tri_2, acyclic2, mat2, trunc_poly_<n>) or file");
  app.add_option("--module", o.module, "k, A, A*, S<i>, a module named in the algebra file, or a module file");
  app.add_option("--truncation", o.truncation, "word length W")->check(CLI::Range(1, 12));
  app.add_option("--window", window, "degree window a:b for reported cohomology");
  app.add_option("--field", field, "Q or Fp (F32003), or F<p>")->check([](const std::string& f) {
    if (f == "Q" || f == "Fp" || (f.size() > 1 && f[0] == 'F' && f.find_first_not_of("0123456789", 1) == std::string::npos))
      return std::string();
    return std::string("expected Q, Fp or F<p>");
  });
  app.add_option("--report", report, "write the key=value report to this path");
  app.add_option("--seed", o.seed, "seed for randomized checks");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!window.empty()) o.window = parse_window(window);
    // field: the file decides; --field must agree with it
    unsigned long p = 0;
    const auto from_file = kmd::file_characteristic(o.algebra);
    if (!field.empty()) {
      p = field == "Q" ? 0 : field == "Fp" ? kDefaultPrime : std::stoul(field.substr(1));
      if (field == "Fp" && from_file && *from_file != 0) p = *from_file;
      if (from_file && *from_file != p)
        throw std::invalid_argument("--field " + field + " disagrees with the field of " + o.algebra);
    } else if (from_file) {
      p = *from_file;
    }
    auto rep = p == 0 ? kmd::run_scenario<kmd::Rational>(o) : run_fp(p, o, SupportedPrimes{});
    std::cout << rep.human();
    if (!report.empty()) {
      std::ofstream out(report, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + report + "'");
      out << rep.flat();
    }
    return rep.ok() ? 0 : 1;
  } catch (const kmd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const kmd::ValidationFailure& e) {
    std::cerr << "invalid input: " << e.what();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
