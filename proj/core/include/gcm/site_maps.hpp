#pragma once

#include "gcm/moebius.hpp"

namespace gcm {

/// State interval X = [-1/2, 1/2].
inline constexpr double kStateHalfWidth = 0.5;
/// Dual interval Y = [-2/3, 2/3], invariant under both dual branches for r in R.
inline constexpr double kDualHalfWidth = 2.0 / 3.0;
/// Coupled-parameter range R = [-0.4, 0.4].
inline constexpr double kParamBound = 0.4;
/// The single-site map is uniformly expanding iff |r| < 2/3.
inline constexpr double kExpandingBound = 2.0 / 3.0;

/// Coefficient matrix of the lower branch of the site map (fixes -1/2).
Moebius lower_branch_matrix(double r);
/// Coefficient matrix of the upper branch (lower branch shifted down by 1).
Moebius upper_branch_matrix(double r);

/// Branch point alpha_r = -r/4; the lower branch acts on [-1/2, alpha_r).
inline double branch_point(double r) { return -0.25 * r; }

/// The two-branch expanding site map on X.  alpha_r itself is assigned to the
/// upper branch (value -1/2); the result is clamped into X against endpoint
/// rounding.  Throws ParamOutOfRange when |r| >= 2/3.
double site_map(double r, double x);

/// Same map without the parameter check, for callers that validated r once.
inline double site_map_unchecked(double r, double x) {
    const double num = (r + 4.0) * x + (r + 1.0);
    const double den = 2.0 * (r * x + 1.0);
    double v = num / den;
    if (x >= branch_point(r)) v -= 1.0;
    if (v > kStateHalfWidth) v = kStateHalfWidth;
    if (v < -kStateHalfWidth) v = -kStateHalfWidth;
    return v;
}

/// Derivative (4 - r^2) / (2 (r x + 1)^2), common to both branches.
double site_map_derivative(double r, double x);

/// inf_X T_r' = 2 (2 - |r|)/(2 + |r|), attained at the endpoints of X.
double site_expansion_floor(double r);

/// log((r^2-4)/(9 r^2-4)), the normalization of the invariant density,
/// evaluated cancellation-free via log1p.
double log_norm_ratio(double r);

/// Invariant probability density u_r of the site map (u_0 = 1 exactly).
double invariant_density(double r, double x);

/// Distribution function of u_r on X.
double invariant_density_cdf(double r, double x);

/// Inverse of the distribution function (used for i.i.d. sampling from u_r).
double invariant_density_quantile(double r, double u);

/// Kernel density w_y(x) = (1 - y^2/4)/(1 - x y)^2 on X, parametrized by
/// y in Y.  Every density handled by the dual IFS is a mixture of these.
double kernel_density(double y, double x);

/// Distribution function of w_y, in the cancellation-free product form
/// (1 - y^2/4)(x + 1/2) / ((1 - x y)(1 + y/2)).
double kernel_cdf(double y, double x);

/// Field (mean) of the kernel density, \int x w_y(x) dx.  Odd, with slope
/// >= 1/6 on Y.  Closed form for |y| >= 0.01, power series below.
double kernel_field(double y);
double kernel_field_closed(double y);
double kernel_field_series(double y);

/// Field of the invariant density, psi(r) = \int x u_r(x) dx.  Closed form
/// for |r| >= 0.02, 4-term odd series below.
double invariant_field(double r);
double invariant_field_closed(double r);
double invariant_field_series(double r);

// Dual branches acting on kernel parameters.  dual_lower (the dual of the
// lower branch) maps Y into [-2, 2/3], dual_upper into [-2/3, 2]; for
// |r| <= 0.4 both map Y into Y.  They share the zero -r, where they are
// tangent with slope 2/(4 - r^2), and dual_lower < dual_upper elsewhere.
double dual_lower(double r, double y);
double dual_upper(double r, double y);
double dual_lower_slope(double r, double y);
double dual_upper_slope(double r, double y);
double dual_lower_dparam(double r, double y);
double dual_upper_dparam(double r, double y);

/// Attracting fixed point gamma_r = r/(1+r) of dual_lower on Y.
inline double lower_fixed_point(double r) { return r / (1.0 + r); }
/// Attracting fixed point delta_r = r/(1-r) of dual_upper on Y.
inline double upper_fixed_point(double r) { return r / (1.0 - r); }
/// Common zero z_r = -r of both dual branches.
inline double dual_common_zero(double r) { return -r; }

/// Mass sent along the lower dual branch: p_r(y) = 1/2 - (r+y)/(4+ry),
/// which equals \int_{-1/2}^{alpha_r} w_y.
double lower_weight(double r, double y);
/// 1 - p_r(y), written as 1/2 + (r+y)/(4+ry) so that mirrored inputs give
/// bit-identical mirrored weights.
double upper_weight(double r, double y);
double lower_weight_slope(double r, double y);   // d/dy = -(4-r^2)/(4+ry)^2
double lower_weight_dparam(double r, double y);  // d/dr = (y^2-4)/(ry+4)^2

} // namespace gcm
