#include "gcm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcm/errors.hpp"
#include "gcm/ifs.hpp"
#include "gcm/site_maps.hpp"

namespace gcm {

Ensemble::Ensemble(std::vector<double> states, Feedback f, std::uint64_t seed)
    : states_(std::move(states)), f_(f), rng_(seed) {
    if (states_.empty()) throw std::invalid_argument("ensemble needs at least one coordinate");
    for (double x : states_) {
        if (std::fabs(x) > kStateHalfWidth) {
            throw std::invalid_argument("ensemble coordinate outside X = [-1/2, 1/2]");
        }
    }
}

Ensemble Ensemble::uniform_random(std::size_t n, Feedback f, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> states(n);
    for (double& x : states) x = rng.uniform01() - kStateHalfWidth;
    return Ensemble(std::move(states), f, rng.next());
}

Ensemble Ensemble::invariant_random(std::size_t n, double r, Feedback f, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> states(n);
    for (double& x : states) {
        x = std::clamp(invariant_density_quantile(r, rng.uniform01()), -kStateHalfWidth,
                       kStateHalfWidth);
    }
    return Ensemble(std::move(states), f, rng.next());
}

double Ensemble::mean_field() const {
    double s = 0.0;
    for (double x : states_) s += x;
    return s / static_cast<double>(states_.size());
}

void Ensemble::step() {
    const double r = g_eval(f_, mean_field());
    for (double& x : states_) x = site_map_unchecked(r, x);
}

void Ensemble::noisy_step(const NoiseSpec& noise) {
    const double eta = noise.epsilon > 0.0 ? rng_.symmetric(noise.epsilon) : 0.0;
    double arg = mean_field() + eta;
    if (std::fabs(arg) > kStateHalfWidth) {
        arg = std::clamp(arg, -kStateHalfWidth, kStateHalfWidth);
        ++clamp_events_;
    }
    const double r = g_eval(f_, arg);
    for (double& x : states_) x = site_map_unchecked(r, x);
}

std::vector<double> run_mean_field_series(Ensemble& e, std::size_t n_steps,
                                          const NoiseSpec& noise) {
    std::vector<double> series;
    series.reserve(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        if (noise.epsilon > 0.0) {
            e.noisy_step(noise);
        } else {
            e.step();
        }
        series.push_back(e.mean_field());
    }
    return series;
}

double expansion_bound(double r, double g) {
    if (std::fabs(r) > 0.5 || g < 0.0) {
        throw ParamOutOfRange("expansion bound stated for |r| <= 1/2, g >= 0");
    }
    const double a = std::fabs(r);
    const double front = 0.5 * (2.0 + a) / (2.0 - a);
    if (g == 0.0) return front;
    const double big_gamma = (4.0 - r * r) / g;
    const double bracket =
        1.0 + 9.0 / (16.0 * std::sqrt(3.0) * std::sqrt(big_gamma)) + 1.0 / (4.0 * big_gamma);
    return front * std::sqrt(bracket);
}

double empirical_wasserstein(std::span<const double> coords,
                             const std::function<double(double)>& reference_cdf, int n_quad) {
    if (coords.empty()) throw std::invalid_argument("empty coordinate set");
    std::vector<double> sorted(coords.begin(), coords.end());
    std::sort(sorted.begin(), sorted.end());
    const double n_inv = 1.0 / static_cast<double>(sorted.size());
    const double h = 1.0 / n_quad;
    double total = 0.0;
    std::size_t k = 0;
    for (int q = 0; q < n_quad; ++q) {
        const double x = -kStateHalfWidth + (q + 0.5) * h;
        while (k < sorted.size() && sorted[k] <= x) ++k;
        const double f_emp = static_cast<double>(k) * n_inv;
        total += std::fabs(f_emp - reference_cdf(x)) * h;
    }
    return total;
}

double empirical_wasserstein(const Ensemble& e, const AtomicMeasure& reference) {
    const AtomicMeasure compact = reference.size() > 4096 ? coalesce(reference, 1e-4) : reference;
    return empirical_wasserstein(e.states(),
                                 [&](double x) { return cdf_from_measure(compact, x); });
}

double empirical_wasserstein(const Ensemble& e, const GridDensity& reference) {
    const int n = reference.n_bins();
    std::vector<double> cumulative(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        cumulative[static_cast<std::size_t>(i) + 1] =
            cumulative[static_cast<std::size_t>(i)] + reference.values[static_cast<std::size_t>(i)] / n;
    }
    const double total = cumulative.back();
    auto cdf = [&, n, total](double x) {
        const double t = (x + kStateHalfWidth) * n;
        const int i = std::clamp(static_cast<int>(std::floor(t)), 0, n - 1);
        const double frac = t - i;
        const auto k = static_cast<std::size_t>(i);
        return (cumulative[k] + frac * (cumulative[k + 1] - cumulative[k])) / total;
    };
    return empirical_wasserstein(e.states(), cdf);
}

Autocorrelation autocorrelation(std::span<const double> series, std::size_t lag) {
    if (lag >= series.size()) throw std::invalid_argument("lag must be shorter than the series");
    const std::size_t n = series.size();
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var <= 1e-30) {
        return {std::numeric_limits<double>::quiet_NaN(), false};
    }
    double cov = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
        cov += (series[t] - mean) * (series[t + lag] - mean);
    }
    cov /= static_cast<double>(n);
    return {cov / var, true};
}

} // namespace gcm
