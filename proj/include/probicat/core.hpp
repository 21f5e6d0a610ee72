#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace probicat {

using json = nlohmann::json;

/// Base of every exception thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (bad tables, index mismatch,
/// unresolved reference). The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A bounded exhaustive search ran past its candidate cap. Never reported as
/// a negative answer.
class SearchCapExceeded : public Error {
 public:
  explicit SearchCapExceeded(std::size_t cap)
      : Error("search cap of " + std::to_string(cap) +
              " candidate assignments exceeded"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Set-backend localisation did not reach a fixed point within max_iter sweeps.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t sweeps, std::string detail)
      : Error("localisation did not converge within " +
              std::to_string(sweeps) + " sweeps: " + detail),
        sweeps_(sweeps) {}
  std::size_t sweeps() const { return sweeps_; }

 private:
  std::size_t sweeps_;
};

enum class Backend { quantale, finset };

inline std::string to_string(Backend b) {
  return b == Backend::quantale ? "quantale" : "finset";
}

/// Outcome of a single law check: pass, or the first violation together with
/// the concrete data that violates it.
struct Validation {
  bool ok = true;
  std::string law;
  std::string detail;
  json witness;

  explicit operator bool() const { return ok; }

  static Validation pass() { return {}; }
  static Validation pass(json witness) {
    return {true, {}, {}, std::move(witness)};
  }
  static Validation fail(std::string law, std::string detail,
                         json witness = json::object()) {
    return {false, std::move(law), std::move(detail), std::move(witness)};
  }

  json to_json() const {
    json j;
    j["status"] = ok ? "pass" : "fail";
    if (!ok) {
      j["law"] = law;
      j["detail"] = detail;
    }
    if (!ok || !witness.is_null()) j["witness"] = witness;
    return j;
  }
};

/// An ordered list of named checks. Failures keep their insertion order, which
/// every producer makes canonical (ascending ids).
class Report {
 public:
  struct Entry {
    std::string name;
    Validation result;
  };

  void add(std::string name, Validation v) {
    entries_.push_back({std::move(name), std::move(v)});
  }
  void pass(std::string name) { add(std::move(name), Validation::pass()); }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& e : other.entries_) add(prefix + e.name, e.result);
  }

  bool passed() const {
    for (const auto& e : entries_)
      if (!e.result.ok) return false;
    return true;
  }

  const Entry* first_failure() const {
    for (const auto& e : entries_)
      if (!e.result.ok) return &e;
    return nullptr;
  }

  const std::vector<Entry>& entries() const { return entries_; }

  const Validation& at(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e.result;
    throw Error("report has no check named " + name);
  }

  json to_json() const {
    json checks = json::array();
    for (const auto& e : entries_) {
      json c = e.result.to_json();
      c["name"] = e.name;
      checks.push_back(std::move(c));
    }
    json j;
    j["status"] = passed() ? "pass" : "fail";
    j["checks"] = std::move(checks);
    return j;
  }

 private:
  std::vector<Entry> entries_;
};

}  // namespace probicat
