#pragma once

#include <string>
#include <vector>

#include "spindle/microlocal.hpp"

namespace spindle {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;  // worst observed error (relative unless noted)
    double tol = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Seeded identity suites; deterministic for a fixed (samples, seed).
SuiteReport verify_geometry(int samples, uint64_t seed);
SuiteReport verify_microlocal(int samples, uint64_t seed);
std::vector<SuiteReport> verify_all(int samples, uint64_t seed);

std::string format_report(const std::vector<SuiteReport>& reports);

}  // namespace spindle
