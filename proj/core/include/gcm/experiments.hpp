#pragma once

#include <iosfwd>
#include <vector>

#include "gcm/config.hpp"
#include "gcm/coupling.hpp"
#include "gcm/ifs.hpp"

namespace gcm {

/// One row of the coupling-strength sweep.
struct BifurcationRow {
    double strength = 0.0;
    RegimeKind regime = RegimeKind::Stable;
    double r_star = 0.0;
    double field_star = 0.0;   // psi(r*)
    double h_prime0 = 0.0;
};

/// Sweeps B over [b_min, b_max] in steps of b_step; points are fanned out
/// over config.threads workers and emitted in sweep order.
std::vector<BifurcationRow> run_bifurcation(const ExperimentConfig& config);

// Subcommand drivers: validate the config, run, write CSV to the stream.
void cmd_bifurcation(const ExperimentConfig& config, std::ostream& os);
void cmd_ifs_orbit(const ExperimentConfig& config, std::ostream& os);
void cmd_ensemble(const ExperimentConfig& config, std::ostream& os);
/// Runs the acceptance criteria (all, or config.verify.criteria) and writes
/// the "name, measured, threshold, pass|fail" report.  Returns the number of
/// failed criteria.
int cmd_verify(const ExperimentConfig& config, std::ostream& os);

} // namespace gcm
