#include "gcm/site_maps.hpp"

#include <cmath>

#include "gcm/errors.hpp"

namespace gcm {

Moebius lower_branch_matrix(double r) {
    return {r + 4.0, r + 1.0, 2.0 * r, 2.0};
}

Moebius upper_branch_matrix(double r) {
    // [[1,-1],[0,1]] * M_r
    return compose({1.0, -1.0, 0.0, 1.0}, lower_branch_matrix(r));
}

double site_map(double r, double x) {
    if (std::fabs(r) >= kExpandingBound) {
        throw ParamOutOfRange("site map parameter must satisfy |r| < 2/3");
    }
    return site_map_unchecked(r, x);
}

double site_map_derivative(double r, double x) {
    if (std::fabs(r) >= kExpandingBound) {
        throw ParamOutOfRange("site map parameter must satisfy |r| < 2/3");
    }
    const double t = r * x + 1.0;
    return (4.0 - r * r) / (2.0 * t * t);
}

double site_expansion_floor(double r) {
    const double a = std::fabs(r);
    return 2.0 * (2.0 - a) / (2.0 + a);
}

double log_norm_ratio(double r) {
    // log((r^2-4)/(9r^2-4)) = log((4-r^2)/(4-9r^2)) = log1p(8r^2/(4-9r^2))
    const double r2 = r * r;
    return std::log1p(8.0 * r2 / (4.0 - 9.0 * r2));
}

double invariant_density(double r, double x) {
    if (r == 0.0) return 1.0;
    const double d1 = r * x - (1.0 - r);
    const double d2 = r * x - (1.0 + r);
    return 2.0 * r * r / (log_norm_ratio(r) * d1 * d2);
}

double invariant_density_cdf(double r, double x) {
    if (r == 0.0) return x + 0.5;
    // antiderivative of u_r is log((1+r-rx)/(1-r-rx)) / log-norm
    const double top = std::log((1.0 + r - r * x) / (1.0 - r - r * x));
    const double at_left = std::log((2.0 + 3.0 * r) / (2.0 - r));
    return (top - at_left) / log_norm_ratio(r);
}

double invariant_density_quantile(double r, double u) {
    if (r == 0.0) return u - 0.5;
    const double s = u * log_norm_ratio(r) + std::log((2.0 + 3.0 * r) / (2.0 - r));
    const double e = std::exp(s);
    // solve (1+r-rx) = e (1-r-rx)
    return (1.0 + r - e * (1.0 - r)) / (r * (1.0 - e));
}

double kernel_density(double y, double x) {
    const double t = 1.0 - x * y;
    return (1.0 - 0.25 * y * y) / (t * t);
}

double kernel_cdf(double y, double x) {
    return (1.0 - 0.25 * y * y) * (x + 0.5) / ((1.0 - x * y) * (1.0 + 0.5 * y));
}

double kernel_field_closed(double y) {
    return (0.25 - 1.0 / (y * y)) * 2.0 * std::atanh(0.5 * y) + 1.0 / y;
}

double kernel_field_series(double y) {
    const double h = 0.5 * y;
    const double h2 = h * h;
    double term = h / 3.0; // (y/2)^1 / (1*3)
    double sum = term;
    for (int k = 1; k < 64; ++k) {
        term *= h2 * (2.0 * k - 1.0) / (2.0 * k + 3.0);
        sum += term;
        if (std::fabs(term) < 1e-17) break;
    }
    return sum;
}

double kernel_field(double y) {
    return std::fabs(y) < 0.01 ? kernel_field_series(y) : kernel_field_closed(y);
}

double invariant_field_closed(double r) {
    const double r2 = r * r;
    // log((4+4r-3r^2)/(4-4r-3r^2)) = log1p(8r/(4-4r-3r^2))
    const double num = std::log1p(8.0 * r / (4.0 - 4.0 * r - 3.0 * r2));
    // log((4-9r^2)/(4-r^2)) = -log_norm_ratio(r)
    return 1.0 / r - num / log_norm_ratio(r);
}

double invariant_field_series(double r) {
    const double r2 = r * r;
    return r * (1.0 / 6.0 + r2 * (7.0 / 40.0 + r2 * (461.0 / 2016.0 + r2 * (4619.0 / 13440.0))));
}

double invariant_field(double r) {
    return std::fabs(r) < 0.02 ? invariant_field_series(r) : invariant_field_closed(r);
}

double dual_lower(double r, double y) {
    return 2.0 * (y + r) / ((r + 1.0) * y + (r + 4.0));
}

double dual_upper(double r, double y) {
    return 2.0 * (y + r) / ((r - 1.0) * y + (4.0 - r));
}

double dual_lower_slope(double r, double y) {
    const double den = (r + 1.0) * y + (r + 4.0);
    return 2.0 * (4.0 - r * r) / (den * den);
}

double dual_upper_slope(double r, double y) {
    const double den = (r - 1.0) * y + (4.0 - r);
    return 2.0 * (4.0 - r * r) / (den * den);
}

double dual_lower_dparam(double r, double y) {
    const double den = (r + 1.0) * y + (r + 4.0);
    return (8.0 - 2.0 * y * y) / (den * den);
}

double dual_upper_dparam(double r, double y) {
    const double den = (r - 1.0) * y + (4.0 - r);
    return (8.0 - 2.0 * y * y) / (den * den);
}

double lower_weight(double r, double y) {
    return 0.5 - (r + y) / (4.0 + r * y);
}

double upper_weight(double r, double y) {
    return 0.5 + (r + y) / (4.0 + r * y);
}

double lower_weight_slope(double r, double y) {
    const double den = 4.0 + r * y;
    return -(4.0 - r * r) / (den * den);
}

double lower_weight_dparam(double r, double y) {
    const double den = r * y + 4.0;
    return (y * y - 4.0) / (den * den);
}

} // namespace gcm
