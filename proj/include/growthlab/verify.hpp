#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/window.hpp"

namespace growthlab {

struct ScenarioConfig {
  double A = 3.0;        // counterexample multiplier
  double A_prime = 4.0;  // second multiplier for the non-equivalence scenario
  int j_max = 8;         // counterexample macro-blocks
  int qa_j_max = 8;      // macro-blocks of the quasianalytic constructions
  double s = 2.0;        // Gevrey exponent for main-thm-family and kappa-remark
  std::vector<double> a_values{0.25, 0.4};
  double q = 1.05;       // falsifier bound
  Window falsifier_window = Window::decades(1e2, 1e14, 64);
  Window scan_window = Window::decades(1e3, 1e9, 64);
  unsigned threads = 0;
};

struct Assertion {
  std::string description;
  std::string expected;
  double observed = 0.0;
  double residual = 0.0;  // distance to the target, or slack of a bound
  bool pass = false;
};

struct ScenarioReport {
  std::string id;
  std::map<std::string, std::string> inputs;
  std::vector<Assertion> assertions;
  double runtime_seconds = 0.0;
  bool skipped = false;
  std::string skip_reason;

  bool passed() const;
};

/// Registry order.
const std::vector<std::string_view>& scenario_ids();

/// Throws ParameterError for an unknown id. A construction that rejects the
/// configured parameters yields a skipped report carrying the error text.
ScenarioReport run_scenario(std::string_view id, const ScenarioConfig& config = {});

struct FullReport {
  std::vector<ScenarioReport> reports;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

/// Runs every registered scenario, concurrently when threads allow; reports
/// keep registry order.
FullReport full_report(const ScenarioConfig& config = {});

/// 0 all pass, 1 any failure, 2 otherwise (something skipped).
int exit_code(const FullReport& r);

/// Aligned plain-text tables.
std::string format_text(const ScenarioReport& r, bool timing = false);
std::string format_text(const FullReport& r, bool timing = false);

}  // namespace growthlab
