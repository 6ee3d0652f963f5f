#pragma once

#include <string>
#include <vector>

#include "crtspace/report.hpp"

namespace crtspace {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  bool passed = true;
  std::vector<CheckResult> checks;

  Json to_json() const;
};

// Known suites, in canonical order: units-exact, zero-mean,
// crt-multiplicative, davenport, squares-poisson, anomaly, generic-poly,
// gamma-bounds, exponents, random-subset-mc, ce2, ce3, parity-cover, format.
std::vector<std::string> suite_names();

// Runs one suite; throws std::invalid_argument for unknown names.
SuiteResult run_suite(const std::string& name, int threads = 1);

}  // namespace crtspace
