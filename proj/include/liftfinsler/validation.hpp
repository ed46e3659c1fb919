#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace liftfinsler {

/// One named check: a measured residual (or margin) against a threshold.
struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;

  bool operator==(const ValidationCheck&) const = default;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool operator==(const ValidationReport&) const = default;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
  }

  const ValidationCheck* find(const std::string& name) const {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const ValidationCheck& c) { return c.name == name; });
    return it == checks.end() ? nullptr : &*it;
  }

  const ValidationCheck* first_failure() const {
    auto it = std::find_if(checks.begin(), checks.end(), [](const ValidationCheck& c) { return !c.passed; });
    return it == checks.end() ? nullptr : &*it;
  }

  void append(const ValidationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

}  // namespace liftfinsler
