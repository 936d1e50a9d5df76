#pragma once

// Named verification suites. Each acceptance check yields one report;
// results come back sorted by check_id.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ckem/report.hpp"

namespace ckem {

struct SuiteConfig {
  std::uint64_t seed = 20240611;
  /// Worker threads for independent checks; 1 runs them in order.
  int workers = 1;
  /// Overrides of the named tolerances returned by default_tolerances().
  std::map<std::string, double> tolerances;
};

/// Tolerance names and their defaults, e.g. "zero_b.relative" -> 1e-9.
const std::map<std::string, double>& default_tolerances();

/// Known suite names: ansatz, invariance, blowup, calibration, all.
const std::vector<std::string>& suite_names();

/// Check ids run by a suite, in sorted order. UsageError for unknown names.
std::vector<std::string> suite_checks(const std::string& suite);

/// Wall-clock budget in milliseconds attached to a check id.
std::int64_t runtime_budget_ms(const std::string& check_id);

/// UsageError for unknown or empty suite names and unknown tolerance keys.
std::vector<VerificationReport> run_suite(const std::string& suite,
                                          const SuiteConfig& config = {});

/// Runs one check by id.
VerificationReport run_check(const std::string& check_id, const SuiteConfig& config = {});

}  // namespace ckem
