#include "gcm/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gcm/errors.hpp"
#include "gcm/site_maps.hpp"

namespace gcm {

namespace {

constexpr double kOrderSlack = 1e-14;

double clamp_to_dual(double y) {
    return std::clamp(y, -kDualHalfWidth, kDualHalfWidth);
}

} // namespace

double field_of_measure(const AtomicMeasure& mu) {
    double f = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        f += mu.weights()[i] * kernel_field(mu.positions()[i]);
    }
    return f;
}

AtomicMeasure apply_transfer(double r, const AtomicMeasure& mu) {
    if (std::fabs(r) > kParamBound + 1e-12) {
        throw ParamOutOfRange("dual transfer requires |r| <= 0.4");
    }
    const std::size_t n = mu.size();
    const auto& pos = mu.positions();
    const auto& w = mu.weights();

    // Both branch images are increasing, so each image list is born sorted.
    std::vector<double> lo_pos(n), lo_w(n), hi_pos(n), hi_w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = pos[i];
        lo_pos[i] = clamp_to_dual(dual_lower(r, y));
        hi_pos[i] = clamp_to_dual(dual_upper(r, y));
        lo_w[i] = w[i] * lower_weight(r, y);
        hi_w[i] = w[i] * upper_weight(r, y);
    }

    std::vector<double> out_pos, out_w;
    out_pos.reserve(2 * n);
    out_w.reserve(2 * n);
    std::size_t i = 0, j = 0;
    auto push = [&](double p, double weight) {
        if (!out_pos.empty() && out_pos.back() == p) {
            out_w.back() += weight;
        } else {
            out_pos.push_back(p);
            out_w.push_back(weight);
        }
    };
    while (i < n || j < n) {
        if (j >= n || (i < n && lo_pos[i] <= hi_pos[j])) {
            push(lo_pos[i], lo_w[i]);
            ++i;
        } else {
            push(hi_pos[j], hi_w[j]);
            ++j;
        }
    }
    return AtomicMeasure(AtomicMeasure::Raw{}, std::move(out_pos), std::move(out_w));
}

AtomicMeasure coalesce(const AtomicMeasure& mu, double eps) {
    if (eps < 0.0) throw std::invalid_argument("merge tolerance must be nonnegative");
    const auto& pos = mu.positions();
    const auto& w = mu.weights();
    std::vector<double> out_pos, out_w;
    out_pos.reserve(pos.size());
    out_w.reserve(pos.size());
    std::size_t i = 0;
    while (i < pos.size()) {
        std::size_t j = i + 1;
        while (j < pos.size() && pos[j] - pos[i] <= eps) ++j;
        if (j == i + 1) {
            out_pos.push_back(pos[i]);
            out_w.push_back(w[i]);
        } else {
            double mass = 0.0, moment = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                mass += w[k];
                moment += w[k] * pos[k];
            }
            out_pos.push_back(std::clamp(moment / mass, pos[i], pos[j - 1]));
            out_w.push_back(mass);
        }
        i = j;
    }
    return AtomicMeasure(AtomicMeasure::Raw{}, std::move(out_pos), std::move(out_w));
}

double wasserstein(const AtomicMeasure& mu, const AtomicMeasure& nu) {
    const auto& p1 = mu.positions();
    const auto& w1 = mu.weights();
    const auto& p2 = nu.positions();
    const auto& w2 = nu.weights();
    std::size_t i = 0, j = 0;
    double f1 = 0.0, f2 = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    double total = 0.0;
    while (i < p1.size() || j < p2.size()) {
        double x;
        if (j >= p2.size() || (i < p1.size() && p1[i] <= p2[j])) {
            x = p1[i];
        } else {
            x = p2[j];
        }
        if (have_prev && x > prev) total += std::fabs(f1 - f2) * (x - prev);
        while (i < p1.size() && p1[i] == x) f1 += w1[i++];
        while (j < p2.size() && p2[j] == x) f2 += w2[j++];
        prev = x;
        have_prev = true;
    }
    return total;
}

Order order_compare(const AtomicMeasure& mu, const AtomicMeasure& nu) {
    const auto& p1 = mu.positions();
    const auto& w1 = mu.weights();
    const auto& p2 = nu.positions();
    const auto& w2 = nu.weights();
    std::size_t i = 0, j = 0;
    double f1 = 0.0, f2 = 0.0;
    // mu <= nu in the stochastic order iff F_mu >= F_nu pointwise.
    bool mu_below = true, nu_below = true;
    while (i < p1.size() || j < p2.size()) {
        double x;
        if (j >= p2.size() || (i < p1.size() && p1[i] <= p2[j])) {
            x = p1[i];
        } else {
            x = p2[j];
        }
        while (i < p1.size() && p1[i] == x) f1 += w1[i++];
        while (j < p2.size() && p2[j] == x) f2 += w2[j++];
        if (f1 < f2 - kOrderSlack) mu_below = false;
        if (f2 < f1 - kOrderSlack) nu_below = false;
    }
    if (mu_below && nu_below) {
        const AtomicMeasure a = coalesce(mu, kOrderSlack);
        const AtomicMeasure b = coalesce(nu, kOrderSlack);
        bool equal = a.size() == b.size();
        for (std::size_t k = 0; equal && k < a.size(); ++k) {
            equal = std::fabs(a.positions()[k] - b.positions()[k]) <= kOrderSlack &&
                    std::fabs(a.weights()[k] - b.weights()[k]) <= kOrderSlack;
        }
        if (equal) return Order::Equal;
    }
    if (mu_below) return Order::Less;
    if (nu_below) return Order::Greater;
    return Order::Incomparable;
}

AtomicMeasure invariant_measure(double r, std::size_t n_atoms) {
    if (n_atoms == 0) throw std::invalid_argument("need at least one atom");
    if (std::fabs(r) > kParamBound) {
        throw ParamOutOfRange("invariant measure defined for |r| <= 0.4");
    }
    if (r == 0.0) return AtomicMeasure::dirac(0.0);

    // Density 1/(1 - y^2/4) on [gamma_r, delta_r] has unnormalized CDF
    // log((2+y)/(2-y)); its total over the interval is log_norm_ratio(r) and
    // the inverse is y = 2 tanh(s/2).
    const double gamma = lower_fixed_point(r);
    const double s0 = std::log((2.0 + gamma) / (2.0 - gamma));
    const double total = log_norm_ratio(r);
    const double n = static_cast<double>(n_atoms);
    std::vector<double> pos(n_atoms), w(n_atoms, 1.0 / n);
    for (std::size_t i = 0; i < n_atoms; ++i) {
        const double s = s0 + total * (static_cast<double>(i) + 0.5) / n;
        pos[i] = 2.0 * std::tanh(0.5 * s);
    }
    // log((2+y)/(2-y)) is increasing, so positions are sorted for either sign of r.
    return AtomicMeasure(AtomicMeasure::Raw{}, std::move(pos), std::move(w));
}

double density_from_measure(const AtomicMeasure& mu, double x) {
    double v = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        v += mu.weights()[i] * kernel_density(mu.positions()[i], x);
    }
    return v;
}

double cdf_from_measure(const AtomicMeasure& mu, double x) {
    double v = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        v += mu.weights()[i] * kernel_cdf(mu.positions()[i], x);
    }
    return v;
}

SupportTrack support_step(const SupportTrack& track, double r) {
    return {dual_lower(r, track.lo), dual_upper(r, track.hi)};
}

KappaEstimate estimate_kappas(int n_grid) {
    if (n_grid < 100) throw std::invalid_argument("kappa estimation needs n_grid >= 100");
    KappaEstimate est;
    for (int i = 0; i < n_grid; ++i) {
        const double r = -kParamBound + 2.0 * kParamBound * i / (n_grid - 1);
        for (int j = 0; j < n_grid; ++j) {
            const double y = -kDualHalfWidth + 2.0 * kDualHalfWidth * j / (n_grid - 1);
            const double gap = dual_upper(r, y) - dual_lower(r, y);
            const double p = lower_weight(r, y);
            const double q = upper_weight(r, y);
            const double slope_mix = dual_lower_slope(r, y) * p + dual_upper_slope(r, y) * q;
            const double dpdy = lower_weight_slope(r, y);
            est.kappa1 = std::max(est.kappa1, std::fabs(gap * dpdy + slope_mix));
            est.kappa1_abs = std::max(est.kappa1_abs, std::fabs(gap * dpdy) + std::fabs(slope_mix));

            const double dr_mix = dual_lower_dparam(r, y) * p + dual_upper_dparam(r, y) * q;
            const double dpdr = lower_weight_dparam(r, y);
            est.kappa2 = std::max(est.kappa2, std::fabs(dr_mix + gap * dpdr));
            est.kappa2_abs = std::max(est.kappa2_abs,
                                      std::fabs(dual_lower_dparam(r, y) * p) +
                                          std::fabs(dual_upper_dparam(r, y) * q) +
                                          std::fabs(gap * dpdr));
        }
    }
    return est;
}

namespace {

SelfConsistentStep transfer_with_parameter(const Feedback& f, const AtomicMeasure& mu, double arg,
                                           const IfsOptions& opts) {
    SelfConsistentStep step;
    step.field = field_of_measure(mu);
    step.r = g_eval(f, arg);
    AtomicMeasure image = apply_transfer(step.r, mu);
    double eps = opts.merge_tol;
    AtomicMeasure merged = coalesce(image, eps);
    while (merged.size() > opts.atom_cap) {
        eps = eps > 0.0 ? 2.0 * eps : 1e-16;
        merged = coalesce(image, eps);
        ++step.emergency_merges;
    }
    step.effective_merge_tol = eps;
    step.measure = std::move(merged);
    return step;
}

} // namespace

SelfConsistentStep self_consistent_step(const Feedback& f, const AtomicMeasure& mu,
                                        const IfsOptions& opts) {
    return transfer_with_parameter(f, mu, field_of_measure(mu), opts);
}

SelfConsistentStep self_consistent_step_noisy(const Feedback& f, const AtomicMeasure& mu, double t,
                                              const IfsOptions& opts) {
    const double field = field_of_measure(mu);
    if (std::fabs(field + t) > kStateHalfWidth) {
        throw FieldOutOfDomain("perturbed field left the state interval");
    }
    return transfer_with_parameter(f, mu, field + t, opts);
}

OrbitResult iterate_to_limit(const Feedback& f, const AtomicMeasure& mu0,
                             const OrbitOptions& opts) {
    OrbitResult result;
    result.limit = mu0;
    result.trace.reserve(std::min<std::size_t>(opts.max_iter, 4096));

    const Regime regime = classify_regime(f);
    const bool bistable = regime.kind == RegimeKind::Bistable;
    AtomicMeasure ref_plus, ref_minus;
    double reference_resolution = 0.0;
    if (bistable) {
        ref_plus = invariant_measure(regime.r_star, opts.reference_atoms);
        ref_minus = invariant_measure(-regime.r_star, opts.reference_atoms);
        const double width = upper_fixed_point(regime.r_star) - lower_fixed_point(regime.r_star);
        reference_resolution = width / (2.0 * static_cast<double>(opts.reference_atoms));
    }

    SupportTrack track;
    AtomicMeasure current = mu0;
    double max_merge_eps = opts.ifs.merge_tol;

    for (std::size_t n = 1; n <= opts.max_iter; ++n) {
        SelfConsistentStep step = self_consistent_step(f, current, opts.ifs);
        result.emergency_merges += static_cast<std::size_t>(step.emergency_merges);
        max_merge_eps = std::max(max_merge_eps, step.effective_merge_tol);
        track = support_step(track, step.r);

        const double moved = wasserstein(current, step.measure);
        current = std::move(step.measure);
        result.trace.push_back({n, step.r, field_of_measure(current), track.lo, track.hi, moved,
                                current.size()});

        if (current.support_radius() < opts.tol) {
            result.label = LimitLabel::Delta0;
            break;
        }
        if (bistable) {
            const double threshold = 10.0 * opts.tol + reference_resolution + 8.0 * max_merge_eps;
            if (current.min_position() > 0.0 && wasserstein(current, ref_plus) < threshold) {
                result.label = LimitLabel::MuPlus;
                break;
            }
            if (current.max_position() < 0.0 && wasserstein(current, ref_minus) < threshold) {
                result.label = LimitLabel::MuMinus;
                break;
            }
        }
    }
    result.limit = std::move(current);
    return result;
}

} // namespace gcm
