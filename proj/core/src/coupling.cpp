#include "gcm/coupling.hpp"

#include <cmath>

#include "gcm/errors.hpp"
#include "gcm/site_maps.hpp"

namespace gcm {

namespace {

void require_valid(const Feedback& f) {
    if (!(f.amplitude > 0.0) || f.strength < 0.0) {
        throw ParamOutOfRange("feedback requires amplitude > 0 and strength >= 0");
    }
}

double five_point_derivative(const Feedback& f, double (*fn)(const Feedback&, double),
                             double r, double h) {
    return (-fn(f, r + 2.0 * h) + 8.0 * fn(f, r + h) - 8.0 * fn(f, r - h) + fn(f, r - 2.0 * h)) /
           (12.0 * h);
}

double h_second(const Feedback& f, double r, double h) {
    return (-h_eval(f, r + 2.0 * h) + 16.0 * h_eval(f, r + h) - 30.0 * h_eval(f, r) +
            16.0 * h_eval(f, r - h) - h_eval(f, r - 2.0 * h)) /
           (12.0 * h * h);
}

} // namespace

double g_eval(const Feedback& f, double x) {
    require_valid(f);
    return f.amplitude * std::tanh(f.strength * x / f.amplitude);
}

double g_prime(const Feedback& f, double x) {
    require_valid(f);
    const double c = std::cosh(f.strength * x / f.amplitude);
    return f.strength / (c * c);
}

GridCheckResult check_assumption_one(const Feedback& f, int n_grid) {
    require_valid(f);
    GridCheckResult result;
    result.worst_margin = -1e300;
    for (int i = 0; i < n_grid; ++i) {
        const double x = -kStateHalfWidth + (2.0 * kStateHalfWidth * i) / (n_grid - 1);
        const double margin = g_prime(f, x) - 25.0 + 50.0 * std::fabs(g_eval(f, x));
        if (margin > result.worst_margin) {
            result.worst_margin = margin;
            result.worst_x = x;
        }
    }
    result.pass = result.worst_margin < 0.0;
    return result;
}

double h_eval(const Feedback& f, double r) {
    if (std::fabs(r) > kParamBound + 1e-2) {
        throw ParamOutOfRange("bifurcation function evaluated outside |r| <= 0.4");
    }
    return g_eval(f, invariant_field(r));
}

double h_prime(const Feedback& f, double r) {
    return five_point_derivative(f, h_eval, r, 1e-4);
}

SShapeReport check_assumption_two(const Feedback& f, int n_grid) {
    require_valid(f);
    SShapeReport report;
    if (f.strength == 0.0) {  // H == 0, nothing to be S-shaped
        report.status = SShapeStatus::NotApplicable;
        return report;
    }

    report.min_h_slope = 1e300;
    report.max_h_curvature = -1e300;
    const double h = 1e-4;
    for (int i = 1; i <= n_grid; ++i) {
        const double r = kParamBound * i / n_grid;
        // Richardson refinement of the already 4th-order stencils
        const double d1 = h_prime(f, r);
        const double d1h = (-h_eval(f, r + h) + 8.0 * h_eval(f, r + 0.5 * h) -
                            8.0 * h_eval(f, r - 0.5 * h) + h_eval(f, r - h)) /
                           (6.0 * h);
        const double slope = (16.0 * d1h - d1) / 15.0;
        const double d2 = h_second(f, r, h);
        const double d2h = h_second(f, r, 0.5 * h);
        const double curvature = (16.0 * d2h - d2) / 15.0;
        report.min_h_slope = std::min(report.min_h_slope, slope);
        report.max_h_curvature = std::max(report.max_h_curvature, curvature);
    }
    report.status = (report.min_h_slope > 0.0 && report.max_h_curvature < 0.0)
                        ? SShapeStatus::Pass
                        : SShapeStatus::Fail;

    // Secondary report: the two sufficient conditions from the series bounds.
    const double psi_h = 1e-5;
    report.slope_condition_holds = true;
    report.log_derivative_condition_holds = true;
    for (int i = 1; i <= n_grid; ++i) {
        const double x_a = (1.0 / 15.0) * i / n_grid;  // psi'(6x) needs 6x <= 0.4
        const double r6 = 6.0 * x_a;
        const double psi_slope = (-invariant_field(r6 + 2.0 * psi_h) + 8.0 * invariant_field(r6 + psi_h) -
                                  8.0 * invariant_field(r6 - psi_h) + invariant_field(r6 - 2.0 * psi_h)) /
                                 (12.0 * psi_h);
        if (g_prime(f, x_a) * psi_slope > 1.0) report.slope_condition_holds = false;

        const double x_b = kParamBound * i / n_grid;
        const double log_deriv = -2.0 * (f.strength / f.amplitude) *
                                 std::tanh(f.strength * x_b / f.amplitude);
        if (log_deriv > -(189.0 / 5.0) * 6.0 * x_b) report.log_derivative_condition_holds = false;
    }
    return report;
}

Regime classify_regime(const Feedback& f, double tol) {
    require_valid(f);
    if (f.strength <= 6.0) return {RegimeKind::Stable, 0.0};

    double lo = 1e-6;
    double hi = kParamBound;
    const double f_lo = h_eval(f, lo) - lo;
    const double f_hi = h_eval(f, hi) - hi;
    if (f_lo <= 0.0 || f_hi >= 0.0) {
        throw NoRootInRange("no bracket for H(r) = r in (0, 0.4]");
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double res = h_eval(f, mid) - mid;
        if (std::fabs(res) < tol || hi - lo < 1e-15) break;
        if (res > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {RegimeKind::Bistable, mid};
}

} // namespace gcm
