#pragma once

#include <string>
#include <vector>

namespace damctl {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Cross-engine consistency suite (exact vs asymptotic vs simulated).
/// Scenario "paper" runs the full desk-scale battery; "quick" is a reduced
/// smoke variant with the same structure.
std::vector<CheckResult> acceptance_checks(const std::string& scenario);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace damctl
