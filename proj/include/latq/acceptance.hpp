#pragma once
#include <string>
#include <vector>

namespace latq::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string details;
    double seconds = 0.0;
};

std::vector<int> criterion_ids();  // 1..13
std::string criterion_name(int id);

// Runs one acceptance criterion at full fidelity. `quick` skips the
// long-running Monte Carlo and facet scans instead of weakening them.
CriterionResult run_criterion(int id, int workers = 0, bool quick = false);

// Runs all criteria in order; prints one pass/fail line each to stdout.
// Returns true iff no criterion failed (skipped ones do not fail).
bool run_all(int workers = 0, bool quick = false);

}  // namespace latq::acceptance
