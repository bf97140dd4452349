#pragma once

#include <cstddef>
#include <vector>

namespace gcm {

/// Finite weighted atom list on Y = [-2/3, 2/3]: the representing measure of
/// a kernel-density mixture.  Positions are strictly increasing, weights are
/// positive, and the total mass is 1 within 1e-12.
class AtomicMeasure {
public:
    AtomicMeasure() = default;

    /// Validating constructor: sorts by position, merges exact duplicates,
    /// clamps positions within 1e-9 of the Y endpoints, and rejects
    /// non-positive weights or total mass off 1 by more than 1e-12.
    AtomicMeasure(std::vector<double> positions, std::vector<double> weights);

    static AtomicMeasure dirac(double y);
    /// Atoms at -y and +y; the positive atom carries weight 1/2 + bias.
    static AtomicMeasure symmetric_pair(double y, double bias = 0.0);
    /// count equally spaced atoms spanning Y, equal weights.
    static AtomicMeasure equally_spaced(std::size_t count);

    std::size_t size() const { return positions_.size(); }
    bool empty() const { return positions_.empty(); }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& weights() const { return weights_; }

    double min_position() const { return positions_.front(); }
    double max_position() const { return positions_.back(); }
    /// Radius of the support around 0: max(|min|, |max|).
    double support_radius() const;

    double total_mass() const;
    /// First moment, sum of w_i y_i.
    double mean() const;

    /// Distribution function F(y) = sum of weights at positions <= y.
    double cdf(double y) const;

    friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

    /// Unvalidated assembly for internal use; data must already satisfy the
    /// class invariants.
    struct Raw {};
    AtomicMeasure(Raw, std::vector<double> positions, std::vector<double> weights)
        : positions_(std::move(positions)), weights_(std::move(weights)) {}

private:
    std::vector<double> positions_;
    std::vector<double> weights_;
};

} // namespace gcm
