#ifndef ROUGH_VALIDATE_HPP
#define ROUGH_VALIDATE_HPP

#include <string>
#include <vector>

namespace rough {

enum class ValidateLevel { quick, full };

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // failure reason, or informational note on pass
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

// Re-derives the library's closed forms against quadrature, exact-arithmetic
// identities, and bound checks.  quick stays under a minute; full adds the
// random-state oracle suites and the (report-only) minimum-roughness search.
ValidationReport run_validate(ValidateLevel level);

// Fixed-width pass/fail table, one row per check plus a summary line.
std::string format_validation_report(const ValidationReport& report);

}  // namespace rough

#endif
