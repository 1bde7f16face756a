#pragma once

#include <string>
#include <vector>

#include "spintorsion/constants.hpp"
#include "spintorsion/scenario.hpp"

namespace spintorsion::validation {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured figure of merit
  double threshold = 0.0;  // pass when value <= threshold unless noted in detail
  std::string detail;
};

struct SuiteOptions {
  /// Overridable so the golden comparison can be shown to detect a wrong D.
  double zero_field_splitting = constants::angular(scenario::zero_field_splitting_hz);
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Fixed list of oracle checks, in execution order.
const std::vector<std::string>& suite_names();

SuiteReport run_suite(const SuiteOptions& options = {});

}  // namespace spintorsion::validation
