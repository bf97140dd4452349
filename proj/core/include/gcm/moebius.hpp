#pragma once

namespace gcm {

/// Real 2x2 coefficient matrix of the fractional-linear map
/// f(x) = (a x + b) / (c x + d).
///
/// Coefficients are stored unnormalized and never rescaled; the sign of the
/// determinant carries the orientation of the map.
struct Moebius {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    static constexpr Moebius identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double determinant() const { return a * d - b * c; }

    friend constexpr bool operator==(const Moebius&, const Moebius&) = default;
};

/// f(x) = (a x + b)/(c x + d).  Throws PoleAtPoint when |c x + d| falls below
/// 1e-14 * max|coefficient|.
double apply(const Moebius& m, double x);

/// f'(x) = (a d - b c)/(c x + d)^2, same pole guard as apply().
double derivative(const Moebius& m, double x);

/// Matrix product; satisfies f_{compose(m,n)} = f_m . f_n.
Moebius compose(const Moebius& m, const Moebius& n);

/// Dual matrix: swaps a<->d and b<->c.  f_dual(y) = 1 / f(1/y).
Moebius dual(const Moebius& m);

/// Adjugate matrix; represents the inverse map f^{-1}.
Moebius inverse(const Moebius& m);

} // namespace gcm
