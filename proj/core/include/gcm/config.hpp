#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gcm {

/// Experiment configuration: a key-value file with nested sections plus
/// command-line overrides.  Unknown sections or keys are errors; silent
/// misconfiguration would corrupt experiments.
struct FeedbackConfig {
    double amplitude = 0.4;
    double strength = 8.0;
    friend bool operator==(const FeedbackConfig&, const FeedbackConfig&) = default;
};

struct BifurcationConfig {
    double b_min = 2.0;
    double b_max = 10.0;
    double b_step = 0.5;
    friend bool operator==(const BifurcationConfig&, const BifurcationConfig&) = default;
};

struct IfsOrbitConfig {
    std::string initial = "delta";  // delta | mu_r | uniform-atoms | symmetric-pair
    double y0 = 2.0 / 3.0;          // for delta / symmetric-pair
    double r0 = 0.3;                // for mu_r
    std::uint64_t atoms = 10;       // for uniform-atoms; also mu_r resolution
    std::uint64_t max_iter = 500;
    double tol = 1e-8;
    double merge_tol = 1e-10;
    friend bool operator==(const IfsOrbitConfig&, const IfsOrbitConfig&) = default;
};

struct EnsembleRunConfig {
    std::uint64_t n = 10'000;
    std::uint64_t steps = 100;
    double noise_epsilon = 0.0;
    std::string init = "uniform";     // uniform | invariant
    double init_r = 0.0;              // parameter for init = invariant
    std::string reference = "none";   // none | uniform | invariant
    double reference_r = 0.0;
    std::uint64_t stride = 1;         // record every stride-th step
    friend bool operator==(const EnsembleRunConfig&, const EnsembleRunConfig&) = default;
};

struct VerifyRunConfig {
    std::vector<int> criteria;  // empty = all
    friend bool operator==(const VerifyRunConfig&, const VerifyRunConfig&) = default;
};

struct ExperimentConfig {
    std::string kind;  // bifurcation | ifs-orbit | ensemble | verify
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;  // empty = stdout

    FeedbackConfig feedback;
    BifurcationConfig bifurcation;
    IfsOrbitConfig ifs_orbit;
    EnsembleRunConfig ensemble;
    VerifyRunConfig verify;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the section/key format.  Throws ConfigError on unknown sections,
/// unknown keys, malformed lines, or unparsable values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Emits every section and key in a fixed order with full-precision numbers,
/// so parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Range/consistency validation of the numeric fields against the module
/// preconditions they feed.  Throws ConfigError.
void validate_config(const ExperimentConfig& config);

} // namespace gcm
