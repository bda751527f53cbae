#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace fatdist {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
};

/// Flat list of named pass/fail checks with residuals. Every failure
/// carries the offending predicate name and residual.
struct Report {
    std::vector<CheckResult> checks;

    void add(std::string name, bool pass, double residual = 0.0) {
        checks.push_back({std::move(name), pass, residual});
    }
    void add_residual(std::string name, double residual, double bound) {
        checks.push_back({std::move(name), residual <= bound, residual});
    }

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    double max_residual() const {
        double r = 0.0;
        for (const auto& c : checks) r = std::max(r, c.residual);
        return r;
    }
};

}  // namespace fatdist
