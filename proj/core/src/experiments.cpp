#include "gcm/experiments.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "gcm/csv.hpp"
#include "gcm/ensemble.hpp"
#include "gcm/errors.hpp"
#include "gcm/site_maps.hpp"
#include "gcm/verify.hpp"

namespace gcm {

namespace {

const char* regime_name(RegimeKind k) {
    return k == RegimeKind::Stable ? "stable" : "bistable";
}

const char* label_name(LimitLabel label) {
    switch (label) {
        case LimitLabel::MuMinus: return "MuMinus";
        case LimitLabel::Delta0: return "Delta0";
        case LimitLabel::MuPlus: return "MuPlus";
        default: return "Unresolved";
    }
}

/// Index-parallel map with deterministic output order.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::jthread> pool;
    const int n = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
}

} // namespace

std::vector<BifurcationRow> run_bifurcation(const ExperimentConfig& config) {
    const auto& sweep = config.bifurcation;
    const auto count = static_cast<std::size_t>(
        std::floor((sweep.b_max - sweep.b_min) / sweep.b_step + 1e-9)) + 1;
    std::vector<BifurcationRow> rows(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
        const double b = sweep.b_min + static_cast<double>(i) * sweep.b_step;
        const Feedback f{config.feedback.amplitude, b};
        BifurcationRow row;
        row.strength = b;
        if (b == 0.0) {
            row.regime = RegimeKind::Stable;  // H == 0: everything degenerates to zero
        } else {
            const Regime regime = classify_regime(f);
            row.regime = regime.kind;
            row.r_star = regime.r_star;
            row.field_star = regime.kind == RegimeKind::Bistable ? invariant_field(regime.r_star) : 0.0;
            row.h_prime0 = h_prime(f, 0.0);
        }
        rows[i] = row;
    });
    return rows;
}

void cmd_bifurcation(const ExperimentConfig& config, std::ostream& os) {
    validate_config(config);
    const auto rows = run_bifurcation(config);
    write_csv_row(os, {"B", "regime", "r_star", "field_star", "h_prime_0"});
    for (const auto& row : rows) {
        write_csv_row(os, {format_real(row.strength), regime_name(row.regime),
                           format_real(row.r_star), format_real(row.field_star),
                           format_real(row.h_prime0)});
    }
}

void cmd_ifs_orbit(const ExperimentConfig& config, std::ostream& os) {
    validate_config(config);
    const auto& o = config.ifs_orbit;
    const Feedback f{config.feedback.amplitude, config.feedback.strength};

    AtomicMeasure mu0;
    if (o.initial == "delta") {
        mu0 = AtomicMeasure::dirac(o.y0);
    } else if (o.initial == "mu_r") {
        mu0 = invariant_measure(o.r0, o.atoms);
    } else if (o.initial == "uniform-atoms") {
        mu0 = AtomicMeasure::equally_spaced(o.atoms);
    } else {
        mu0 = AtomicMeasure::symmetric_pair(o.y0);
    }

    OrbitOptions opts;
    opts.max_iter = o.max_iter;
    opts.tol = o.tol;
    opts.ifs.merge_tol = o.merge_tol;
    const OrbitResult result = iterate_to_limit(f, mu0, opts);

    write_csv_row(os, {"n", "r", "field", "a", "b", "wasserstein_step", "label"});
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const auto& p = result.trace[i];
        const bool last = i + 1 == result.trace.size();
        write_csv_row(os, {std::to_string(p.n), format_real(p.r), format_real(p.field),
                           format_real(p.track_lo), format_real(p.track_hi),
                           format_real(p.step_distance), last ? label_name(result.label) : ""});
    }
}

void cmd_ensemble(const ExperimentConfig& config, std::ostream& os) {
    validate_config(config);
    const auto& run = config.ensemble;
    const Feedback f{config.feedback.amplitude, config.feedback.strength};

    Ensemble e = run.init == "uniform"
                     ? Ensemble::uniform_random(run.n, f, config.seed)
                     : Ensemble::invariant_random(run.n, run.init_r, f, config.seed);

    GridDensity reference;
    const bool with_reference = run.reference != "none";
    if (run.reference == "uniform") {
        reference = constant_density(1024);
    } else if (run.reference == "invariant") {
        reference = sample_on_grid(1024, [&](double x) { return invariant_density(run.reference_r, x); });
    }

    const NoiseSpec noise{run.noise_epsilon};
    write_csv_row(os, {"kind", "n", "phi", "empirical_w", "sign_switches"});
    std::size_t switches = 0;
    double prev_sign = 0.0;
    for (std::size_t n = 1; n <= run.steps; ++n) {
        if (noise.epsilon > 0.0) {
            e.noisy_step(noise);
        } else {
            e.step();
        }
        const double phi = e.mean_field();
        const double sign = phi > 0.0 ? 1.0 : (phi < 0.0 ? -1.0 : 0.0);
        if (sign != 0.0 && prev_sign != 0.0 && sign != prev_sign) ++switches;
        if (sign != 0.0) prev_sign = sign;
        if (n % run.stride == 0) {
            std::vector<std::string> row{"step", std::to_string(n), format_real(phi)};
            row.push_back(with_reference ? format_real(empirical_wasserstein(e, reference)) : "");
            row.push_back("");
            write_csv_row(os, row);
        }
    }
    write_csv_row(os, {"summary", std::to_string(run.steps), format_real(e.mean_field()), "",
                       std::to_string(switches)});
}

int cmd_verify(const ExperimentConfig& config, std::ostream& os) {
    validate_config(config);
    const auto results = run_acceptance(config.verify.criteria);
    write_report(os, results);
    int failures = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failures;
    }
    return failures;
}

} // namespace gcm
