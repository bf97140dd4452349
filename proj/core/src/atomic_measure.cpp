#include "gcm/atomic_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gcm/site_maps.hpp"

namespace gcm {

namespace {
constexpr double kEdgeSlack = 1e-9;
constexpr double kMassTolerance = 1e-12;
} // namespace

AtomicMeasure::AtomicMeasure(std::vector<double> positions, std::vector<double> weights) {
    if (positions.size() != weights.size()) {
        throw std::invalid_argument("atom positions and weights differ in length");
    }
    if (positions.empty()) {
        throw std::invalid_argument("measure needs at least one atom");
    }
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return positions[i] < positions[j]; });

    positions_.reserve(positions.size());
    weights_.reserve(weights.size());
    for (std::size_t k : order) {
        double y = positions[k];
        const double w = weights[k];
        if (!(w > 0.0)) throw std::invalid_argument("atom weights must be positive");
        if (std::fabs(y) > kDualHalfWidth + kEdgeSlack) {
            throw std::invalid_argument("atom position outside Y = [-2/3, 2/3]");
        }
        y = std::clamp(y, -kDualHalfWidth, kDualHalfWidth);
        if (!positions_.empty() && y == positions_.back()) {
            weights_.back() += w;
        } else {
            positions_.push_back(y);
            weights_.push_back(w);
        }
    }
    const double mass = total_mass();
    if (std::fabs(mass - 1.0) > kMassTolerance) {
        throw std::invalid_argument("atom weights must sum to 1");
    }
}

AtomicMeasure AtomicMeasure::dirac(double y) {
    return AtomicMeasure({y}, {1.0});
}

AtomicMeasure AtomicMeasure::symmetric_pair(double y, double bias) {
    if (y == 0.0) return dirac(0.0);
    return AtomicMeasure({-std::fabs(y), std::fabs(y)}, {0.5 - bias, 0.5 + bias});
}

AtomicMeasure AtomicMeasure::equally_spaced(std::size_t count) {
    std::vector<double> pos(count), w(count, 1.0 / static_cast<double>(count));
    if (count == 1) {
        pos[0] = 0.0;
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            pos[i] = -kDualHalfWidth +
                     2.0 * kDualHalfWidth * static_cast<double>(i) / static_cast<double>(count - 1);
        }
    }
    return AtomicMeasure(std::move(pos), std::move(w));
}

double AtomicMeasure::support_radius() const {
    return std::max(std::fabs(min_position()), std::fabs(max_position()));
}

double AtomicMeasure::total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double AtomicMeasure::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < positions_.size(); ++i) m += weights_[i] * positions_[i];
    return m;
}

double AtomicMeasure::cdf(double y) const {
    const auto it = std::upper_bound(positions_.begin(), positions_.end(), y);
    const auto k = static_cast<std::size_t>(it - positions_.begin());
    double f = 0.0;
    for (std::size_t i = 0; i < k; ++i) f += weights_[i];
    return f;
}

} // namespace gcm
