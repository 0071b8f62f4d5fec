#pragma once

#include <gmpxx.h>

#include <charconv>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kmd {

/// Exact ground field element. Every scalar in the library satisfies this;
/// there is no floating point anywhere.
template <class K>
concept Field = std::regular<K> && requires(K a, const K& b, long n, std::string_view s) {
  { K(n) } -> std::same_as<K>;
  { a + b } -> std::same_as<K>;
  { a - b } -> std::same_as<K>;
  { a * b } -> std::same_as<K>;
  { a / b } -> std::same_as<K>;
  { -a } -> std::same_as<K>;
  { a += b } -> std::same_as<K&>;
  { a -= b } -> std::same_as<K&>;
  { a *= b } -> std::same_as<K&>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.inverse() } -> std::same_as<K>;
  { a.str() } -> std::same_as<std::string>;
  { K::characteristic() } -> std::same_as<unsigned long>;
  { K::name() } -> std::same_as<std::string>;
  { K::parse(s) } -> std::same_as<K>;
};

/// Rational numbers backed by GMP.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  static constexpr unsigned long characteristic() { return 0; }
  static std::string name() { return "Q"; }

  /// Accepts "n" or "n/d" with optional sign.
  static Rational parse(std::string_view s) {
    std::string text(s);
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0)
      throw std::invalid_argument("not a rational number: '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return Rational(q);
  }

  [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
  [[nodiscard]] Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return Rational(mpq_class(1) / v_);
  }
  [[nodiscard]] std::string str() const { return v_.get_str(); }
  [[nodiscard]] const mpq_class& value() const { return v_; }

  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.str(); }

 private:
  mpq_class v_;
};

namespace detail {
constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}
}  // namespace detail

/// Prime field F_p. Characteristic 2 is rejected at compile time.
template <std::uint32_t P>
class Fp {
  static_assert(detail::is_prime(P), "Fp modulus must be prime");
  static_assert(P != 2, "characteristic 2 is not supported");

 public:
  Fp() = default;
  Fp(long n) : v_(reduce(n)) {}  // NOLINT(google-explicit-constructor)

  static constexpr unsigned long characteristic() { return P; }
  static std::string name() { return "F" + std::to_string(P); }
  static Fp parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash != std::string_view::npos) return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));
    long n = 0;
    auto start = s.data();
    if (!s.empty() && s.front() == '+') ++start;
    auto [ptr, ec] = std::from_chars(start, s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return Fp(n);
  }

  [[nodiscard]] bool is_zero() const { return v_ == 0; }
  [[nodiscard]] Fp inverse() const {
    if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
    return pow(P - 2);
  }
  [[nodiscard]] std::string str() const { return std::to_string(v_); }
  [[nodiscard]] std::uint32_t value() const { return v_; }

  Fp& operator+=(const Fp& o) {
    v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + o.v_) % P);
    return *this;
  }
  Fp& operator-=(const Fp& o) {
    v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + P - o.v_) % P);
    return *this;
  }
  Fp& operator*=(const Fp& o) {
    v_ = static_cast<std::uint32_t>(std::uint64_t{v_} * o.v_ % P);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend Fp operator-(const Fp& a) { return Fp() - a; }
  friend bool operator==(const Fp& a, const Fp& b) = default;
  friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.v_; }

 private:
  static std::uint32_t reduce(long n) {
    long r = n % static_cast<long>(P);
    if (r < 0) r += P;
    return static_cast<std::uint32_t>(r);
  }
  [[nodiscard]] Fp pow(std::uint64_t e) const {
    Fp base = *this, acc(1);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  std::uint32_t v_ = 0;
};

/// (-1)^n as a field element.
template <Field K>
K sign(long n) {
  return (n % 2 == 0) ? K(1) : K(-1);
}

inline bool odd(long n) { return (n & 1) != 0; }

}  // namespace kmd
