#pragma once
#include <string>
#include <vector>

#include "strwave/config.hpp"

namespace strwave {

struct CheckResult {
    std::string id;
    std::string description;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::string scenario;
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Run the check family attached to a scenario. Overrides (if any) are
/// applied on top of the scenario seed, so a deliberately coarse grid can be
/// exercised.
ValidationReport validate_scenario(const std::string& name,
                                   const ConfigFile* overrides = nullptr);

std::string render_report(const ValidationReport& report);
std::string render_report_csv(const ValidationReport& report);

}  // namespace strwave
