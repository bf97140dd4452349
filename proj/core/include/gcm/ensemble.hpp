#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gcm/atomic_measure.hpp"
#include "gcm/coupling.hpp"
#include "gcm/rng.hpp"
#include "gcm/ulam.hpp"

namespace gcm {

/// Bounded symmetric parameter noise, uniform on [-epsilon, epsilon].
struct NoiseSpec {
    double epsilon = 0.0;
};

/// Finite-size coupled system: N coordinates in X advanced coordinatewise by
/// the site map with the shared parameter r = G(mean field).  The RNG stream
/// is owned by the run; identical seeds give bit-identical trajectories.
class Ensemble {
public:
    Ensemble(std::vector<double> states, Feedback f, std::uint64_t seed);

    /// i.i.d. coordinates from the flat density on X.
    static Ensemble uniform_random(std::size_t n, Feedback f, std::uint64_t seed);
    /// i.i.d. coordinates from the invariant density u_r (inverse-CDF draw).
    static Ensemble invariant_random(std::size_t n, double r, Feedback f, std::uint64_t seed);

    const std::vector<double>& states() const { return states_; }
    const Feedback& feedback() const { return f_; }
    std::size_t size() const { return states_.size(); }

    double mean_field() const;

    /// One synchronous step: reduce the field, then map every coordinate.
    void step();

    /// Noisy step: one eta per step perturbs the feedback argument; the
    /// argument is clamped into X (counted) if the noise pushes it out.
    void noisy_step(const NoiseSpec& noise);

    std::size_t clamp_events() const { return clamp_events_; }

private:
    std::vector<double> states_;
    Feedback f_;
    SplitMix64 rng_;
    std::size_t clamp_events_ = 0;
};

/// Mean field recorded after each of n_steps steps (noisy when a spec with
/// epsilon > 0 is given).
std::vector<double> run_mean_field_series(Ensemble& e, std::size_t n_steps,
                                          const NoiseSpec& noise = {});

/// Closed-form bound on the inverse-Jacobian norm of the coupled map:
/// rho = (1/2 (2+|r|)/(2-|r|)) sqrt(1 + 9/(16 sqrt(3) sqrt(G)) + 1/(4 G))
/// with G = (4 - r^2)/g; the g = 0 limit is the first factor alone.
/// Uniformly below 0.99396 over |r| <= 1/2, 0 <= g <= 25 - 50|r|.
double expansion_bound(double r, double g);

/// 1-D Wasserstein distance between the empirical measure of the coordinates
/// and a reference distribution function on X, by midpoint quadrature of
/// |F_emp - F_ref| on n_quad cells.
double empirical_wasserstein(std::span<const double> coords,
                             const std::function<double(double)>& reference_cdf,
                             int n_quad = 20'000);
/// Reference given as the kernel mixture of a representing measure (the
/// measure is coalesced at 1e-4 first to bound the CDF cost).
double empirical_wasserstein(const Ensemble& e, const AtomicMeasure& reference);
/// Reference given as a grid density (piecewise-linear CDF).
double empirical_wasserstein(const Ensemble& e, const GridDensity& reference);

/// Normalized autocovariance at a lag; a constant series has no defined
/// autocorrelation and is flagged instead of silently returning a number.
struct Autocorrelation {
    double value = 0.0;
    bool defined = false;
};
Autocorrelation autocorrelation(std::span<const double> series, std::size_t lag);

} // namespace gcm
