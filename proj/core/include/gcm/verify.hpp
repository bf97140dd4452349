#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gcm {

/// Outcome of one acceptance criterion.  measured vs threshold is the
/// binding comparison for the criterion (direction depends on the check);
/// pass folds in every sub-check the criterion makes.
struct CriterionResult {
    int id = 0;
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Runs the requested acceptance criteria (empty = all 14) at their pinned
/// tolerances.  Deterministic: all randomness is seeded internally.
std::vector<CriterionResult> run_acceptance(std::span<const int> criteria = {});

/// One line per criterion: "name, measured, threshold, pass|fail".
void write_report(std::ostream& os, std::span<const CriterionResult> results);

} // namespace gcm
