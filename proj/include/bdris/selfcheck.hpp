#pragma once

#include <string>
#include <vector>

namespace bdris {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

// Internal-consistency checks behind `check`: identity reconstructions,
// trace-vs-quadratic SNR agreement, solver monotonicity, projection
// optimality. `inject_fault` deliberately corrupts the named check so the
// harness itself can be tested; empty string runs everything honestly.
std::vector<CheckResult> run_selfchecks(const std::string& inject_fault);

const std::vector<std::string>& selfcheck_names();

} // namespace bdris
