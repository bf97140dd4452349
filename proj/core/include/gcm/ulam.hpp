#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "gcm/coupling.hpp"

namespace gcm {

/// Piecewise-constant density levels on a uniform partition of X.
/// For a probability density the values are nonnegative with mean 1.
struct GridDensity {
    std::vector<double> values;

    int n_bins() const { return static_cast<int>(values.size()); }

    friend bool operator==(const GridDensity&, const GridDensity&) = default;
};

/// Midpoint of bin i on the n-bin partition of X.
double bin_midpoint(int i, int n_bins);

GridDensity constant_density(int n_bins);

/// Density sampled at bin midpoints.
GridDensity sample_on_grid(int n_bins, const std::function<double(double)>& density);

/// Midpoint quadrature of the field, (1/n) sum of x_i u_i.
double grid_field(const GridDensity& u);

/// Integral (1/n) sum of u_i; 1 for probability densities.
double grid_mass(const GridDensity& u);

/// Bin-width-weighted L1 distance.  Throws ShapeMismatch.
double l1_distance(const GridDensity& u, const GridDensity& v);

/// Discrete total variation sum |u_{i+1} - u_i|.
double grid_variation(const GridDensity& u);

/// Row-stochastic Ulam discretization of the site-map transfer operator:
/// entry (i, j) is the fraction of bin i that lands in bin j, computed in
/// closed form from the two Moebius inverse branches.
class UlamMatrix {
public:
    int n_bins() const;
    double param() const;
    std::vector<double> row_sums() const;

private:
    friend UlamMatrix build_ulam(double r, int n_bins);
    friend GridDensity apply_pfo(const UlamMatrix& m, const GridDensity& u);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

UlamMatrix build_ulam(double r, int n_bins);

/// Transfer-operator action on a grid density; preserves the integral and
/// nonnegativity.  Throws ShapeMismatch.
GridDensity apply_pfo(const UlamMatrix& m, const GridDensity& u);

/// Matrix cache keyed by the parameter rounded to 1e-6 (matrix construction
/// dominates the cost of self-consistent grid iteration).  Single-writer,
/// many-reader.
class UlamCache {
public:
    explicit UlamCache(int n_bins);
    UlamMatrix matrix(double r);
    int n_bins() const { return n_bins_; }
    std::size_t size() const;

private:
    struct State;
    int n_bins_;
    std::shared_ptr<State> state_;
};

/// One application of the self-consistent operator on the grid: the field by
/// midpoint quadrature, the feedback parameter rounded to the cache
/// resolution, then the cached matrix.
struct SelfConsistentGridStep {
    GridDensity density;
    double r_used = 0.0;
};
SelfConsistentGridStep apply_self_consistent_pfo(const Feedback& f, const GridDensity& u,
                                                 UlamCache& cache);

/// Dominant eigenvalue of the linearization at the flat density on the
/// mean-zero subspace, by power iteration on Ulam(P_0) + B [x] (x) phi.
/// The exact value is 1/2 + B/12.  Throws NoConvergence.
struct Eigenpair {
    double value = 0.0;
    std::vector<double> vector;
};
Eigenpair linearization_eigenpair(double strength, int n_bins);
double linearization_eigenvalue(double strength, int n_bins);

/// L1 residual between the directional finite difference
/// (P~(u + tau g) - P~(u))/tau and the derivative formula
/// P_r g + P_r((u v_r)') G'(phi(u)) phi(g), with v_r(x) = (4x^2-1)/(4-r^2)
/// and (u v_r)' by centered grid differences (one-sided at the boundary
/// bins, where v_r vanishes).  u must be a smooth strictly positive density
/// and g a zero-mean perturbation.  Matrices are built exactly (no cache
/// rounding) so the residual reflects the formula, not the cache.
double gateaux_residual(const Feedback& f, const GridDensity& u, const GridDensity& g, double tau);

} // namespace gcm
