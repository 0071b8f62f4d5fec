#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

namespace kmd {

/// SHA-256 of a byte string, lower-case hex.
inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream o;
  for (unsigned int i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return o.str();
}

/// Outcome of one scenario: inputs, named checks, computed values and free
/// text for the human-readable rendering. Rendering is a pure function of the
/// contents, so identical runs give identical bytes.
class ScenarioReport {
 public:
  struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;
  };

  explicit ScenarioReport(std::string scenario = "") : scenario_(std::move(scenario)) {}

  void input(const std::string& key, const std::string& value) { inputs_.emplace_back(key, value); }
  void value(const std::string& key, const std::string& value) { values_.emplace_back(key, value); }
  void value(const std::string& key, std::size_t v) { value(key, std::to_string(v)); }
  void check(const std::string& name, bool pass, const std::string& witness = "") {
    checks_.push_back({name, pass, witness});
  }
  void line(const std::string& text) { text_.push_back(text); }

  [[nodiscard]] const std::string& scenario() const { return scenario_; }
  [[nodiscard]] const std::vector<CheckResult>& checks() const { return checks_; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& values() const { return values_; }
  [[nodiscard]] std::size_t failed() const {
    std::size_t n = 0;
    for (const auto& c : checks_) n += c.pass ? 0 : 1;
    return n;
  }
  [[nodiscard]] bool ok() const { return failed() == 0; }

  [[nodiscard]] std::string find(const std::string& key) const {
    for (const auto& [k, v] : values_)
      if (k == key) return v;
    return {};
  }

  [[nodiscard]] std::string human() const {
    std::ostringstream o;
    o << "scenario: " << scenario_ << "\n";
    for (const auto& [k, v] : inputs_) o << "  " << k << ": " << v << "\n";
    for (const auto& t : text_) o << t << "\n";
    for (const auto& c : checks_) {
      o << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
      if (!c.witness.empty()) o << " -- " << c.witness;
      o << "\n";
    }
    o << checks_.size() - failed() << "/" << checks_.size() << " checks passed\n";
    return o.str();
  }

  /// One `key=value` per line; keys use [A-Za-z0-9_.^-] only.
  [[nodiscard]] std::string flat() const {
    std::ostringstream o;
    o << "scenario=" << scenario_ << "\n";
    for (const auto& [k, v] : inputs_) o << "input." << key(k) << "=" << one_line(v) << "\n";
    for (const auto& [k, v] : values_) o << "value." << key(k) << "=" << one_line(v) << "\n";
    for (std::size_t i = 0; i < checks_.size(); ++i) {
      const auto& c = checks_[i];
      const auto base = "check." + std::to_string(i) + ".";
      o << base << "name=" << one_line(c.name) << "\n" << base << "result=" << (c.pass ? "pass" : "fail") << "\n";
      if (!c.witness.empty()) o << base << "witness=" << one_line(c.witness) << "\n";
    }
    o << "summary.checks=" << checks_.size() << "\nsummary.failed=" << failed() << "\n";
    return o.str();
  }

 private:
  static std::string key(const std::string& k) {
    std::string out;
    for (char c : k) {
      const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '.' || c == '^' || c == '-';
      out += keep ? c : '_';
    }
    return out;
  }
  static std::string one_line(const std::string& v) {
    std::string out;
    for (char c : v) out += (c == '\n' || c == '\r') ? ' ' : c;
    return out;
  }

  std::string scenario_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> values_;
  std::vector<CheckResult> checks_;
  std::vector<std::string> text_;
};

}  // namespace kmd
