// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <cstdio>

#include "damctl/checks.hpp"

int main() {
    std::vector<damctl::CheckResult> results;
    try {
        results = damctl::acceptance_checks("paper");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
        return 2;
    }
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-28s %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", int(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
