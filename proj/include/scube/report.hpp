#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace scube {

// One named check with an optional witness for failures.
struct Check {
  std::string name;
  bool pass = true;
  std::string witness;
};

// Shared report shape for every validate_* / verify_* operation.
struct Report {
  std::vector<Check> checks;
  std::map<std::string, std::int64_t> measurements;

  void check(const std::string& name, bool ok, const std::string& witness = "") {
    checks.push_back({name, ok, ok ? std::string() : witness});
  }
  void measure(const std::string& name, std::int64_t v) { measurements[name] = v; }
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return c.name + (c.witness.empty() ? "" : ": " + c.witness);
    return "";
  }
};

// Errors declared by the spec surface as exceptions in the C++ core; the C API
// translates them to error codes.
struct SpecError : std::runtime_error {
  std::string kind;
  SpecError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

}  // namespace scube
