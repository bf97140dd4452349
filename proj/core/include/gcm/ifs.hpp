#pragma once

#include <cstddef>
#include <vector>

#include "gcm/atomic_measure.hpp"
#include "gcm/coupling.hpp"

namespace gcm {

/// Field of the mixture density represented by mu: sum of w_i * wbar(y_i).
double field_of_measure(const AtomicMeasure& mu);

/// Dual transfer action on representing measures: each atom (y, w) splits
/// into (dual_lower(y), w p_r(y)) and (dual_upper(y), w (1-p_r(y))).
/// Result is sorted with coinciding positions merged; mass is preserved.
AtomicMeasure apply_transfer(double r, const AtomicMeasure& mu);

/// Greedy left-to-right merge of maximal atom runs of span <= eps into their
/// barycenter.  Mass and first moment are preserved; the Wasserstein
/// displacement is at most eps.
AtomicMeasure coalesce(const AtomicMeasure& mu, double eps);

/// Exact 1-D Wasserstein distance, the area between the two distribution
/// functions.
double wasserstein(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Stochastic order: Less means mu is dominated by nu (mu(y,inf) <= nu(y,inf)
/// for all y).  CDFs are compared with slack 1e-14 against rounding ties;
/// Equal requires identical atom lists after coalescing at 1e-14.
enum class Order { Less, Greater, Equal, Incomparable };
Order order_compare(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Representing measure of the invariant density u_r: n equal-mass atoms on
/// [gamma_r, delta_r] placed by inverting the closed-form CDF of the density
/// 1/(1 - y^2/4).  Returns a Dirac at 0 for r = 0.
AtomicMeasure invariant_measure(double r, std::size_t n_atoms);

/// Mixture density sum of w_i * w_{y_i}(x) at a point of X.
double density_from_measure(const AtomicMeasure& mu, double x);

/// Mixture CDF sum of w_i * F_{w_{y_i}}(x).
double cdf_from_measure(const AtomicMeasure& mu, double x);

/// Enclosing-interval recursion: the lower endpoint moves through the lower
/// dual branch, the upper endpoint through the upper one.  Starting from Y,
/// the support of the n-step image measure stays inside the track.
struct SupportTrack {
    double lo = -2.0 / 3.0;
    double hi = 2.0 / 3.0;
};
SupportTrack support_step(const SupportTrack& track, double r);

/// Lattice maxima over R x Y of the parameter-continuity expressions from
/// the Wasserstein Lipschitz estimate.  kappa1/kappa2 are the suprema of the
/// signed expressions
///   (tau-sigma) dp/dy + sigma' p + tau'(1-p)      and
///   (dsigma/dr) p + (dtau/dr)(1-p) + (tau-sigma) dp/dr,
/// which reproduce the published bounds 0.5761 / 0.5334.  kappa1_abs and
/// kappa2_abs bound each term by its absolute value (the triangle-inequality
/// Lipschitz constants, ~0.687 / ~0.636); the inequality tests that must
/// genuinely hold use these.
struct KappaEstimate {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa1_abs = 0.0;
    double kappa2_abs = 0.0;
};
KappaEstimate estimate_kappas(int n_grid);

/// Atom-management knobs for the self-consistent iteration.
struct IfsOptions {
    double merge_tol = 1e-10;          // coalescing tolerance per step
    std::size_t atom_cap = 1'000'000;  // hard cap; doubles merge_tol until under
};

/// One application of the self-consistent operator: r is the feedback of the
/// measure's field, then the dual transfer with that r, then coalescing.
/// effective_merge_tol reports the tolerance actually used (> merge_tol only
/// when the atom cap forced coarser emergency merges).
struct SelfConsistentStep {
    AtomicMeasure measure;
    double r = 0.0;
    double field = 0.0;
    double effective_merge_tol = 0.0;
    int emergency_merges = 0;
};
SelfConsistentStep self_consistent_step(const Feedback& f, const AtomicMeasure& mu,
                                        const IfsOptions& opts = {});

/// Noisy variant: the feedback argument is field + t.  Throws
/// FieldOutOfDomain when |field + t| > 1/2.
SelfConsistentStep self_consistent_step_noisy(const Feedback& f, const AtomicMeasure& mu,
                                              double t, const IfsOptions& opts = {});

enum class LimitLabel { MuMinus, Delta0, MuPlus, Unresolved };

struct OrbitPoint {
    std::size_t n = 0;
    double r = 0.0;
    double field = 0.0;
    double track_lo = 0.0;       // enclosing interval from support_step
    double track_hi = 0.0;
    double step_distance = 0.0;  // Wasserstein distance to the previous iterate
    std::size_t atom_count = 0;
};

struct OrbitOptions {
    std::size_t max_iter = 500;
    double tol = 1e-8;
    IfsOptions ifs = {};
    std::size_t reference_atoms = 10'000;  // resolution of the mu_{+-r*} references
};

struct OrbitResult {
    AtomicMeasure limit;
    LimitLabel label = LimitLabel::Unresolved;
    std::vector<OrbitPoint> trace;
    std::size_t emergency_merges = 0;
};

/// Iterates the self-consistent step from mu0 until the limit is resolved:
/// Delta0 once the support radius drops below tol; MuPlus/MuMinus once the
/// support is sign-definite and the Wasserstein distance to the discretized
/// invariant reference is below 10 tol plus the reference and coalescing
/// resolution allowance.  Unresolved after max_iter.
OrbitResult iterate_to_limit(const Feedback& f, const AtomicMeasure& mu0,
                             const OrbitOptions& opts = {});

} // namespace gcm
