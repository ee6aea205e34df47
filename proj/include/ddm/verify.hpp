#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ddm/kernel.hpp"
#include "ddm/model.hpp"

namespace ddm {

enum class VerifyLevel { fast, full };

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    bool counted = true;  // diagnostics are reported but do not affect the verdict
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::fast;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const;
    std::vector<std::string> failing_suites() const;
    std::string to_json(int indent = 2) const;
    std::string summary() const;
};

// Replaceable pieces, so a deliberately broken ingredient can be injected.
struct VerifyHooks {
    std::function<DistributionalKernel(const Couplings&)> eta1;
};

VerifyReport run_verification(VerifyLevel level, const VerifyHooks& hooks = {});

} // namespace ddm
