#include "gcm/moebius.hpp"

#include <algorithm>
#include <cmath>

#include "gcm/errors.hpp"

namespace gcm {

namespace {

double pole_scale(const Moebius& m) {
    return std::max({std::fabs(m.a), std::fabs(m.b), std::fabs(m.c), std::fabs(m.d)});
}

double checked_denominator(const Moebius& m, double x) {
    const double den = m.c * x + m.d;
    if (std::fabs(den) < 1e-14 * pole_scale(m)) {
        throw PoleAtPoint("fractional-linear map evaluated at its pole");
    }
    return den;
}

} // namespace

double apply(const Moebius& m, double x) {
    const double den = checked_denominator(m, x);
    return (m.a * x + m.b) / den;
}

double derivative(const Moebius& m, double x) {
    const double den = checked_denominator(m, x);
    return m.determinant() / (den * den);
}

Moebius compose(const Moebius& m, const Moebius& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

Moebius dual(const Moebius& m) {
    return {m.d, m.c, m.b, m.a};
}

Moebius inverse(const Moebius& m) {
    return {m.d, -m.b, -m.c, m.a};
}

} // namespace gcm
