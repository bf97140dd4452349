#pragma once

namespace gcm {

/// S-shaped feedback G(x) = A tanh(B x / A) mapping the field into the
/// parameter range R.  amplitude = A in (0, 0.4], strength = B = G'(0)
/// in [0, 18].  Other S-shaped families can be dropped in behind the same
/// two-parameter surface, but tanh is the one that ships.
struct Feedback {
    double amplitude = 0.4;
    double strength = 8.0;

    friend constexpr bool operator==(const Feedback&, const Feedback&) = default;
};

double g_eval(const Feedback& f, double x);
double g_prime(const Feedback& f, double x);

/// Grid check of the finite-size admissibility constraint
/// G'(x) <= 25 - 50 |G(x)| on X.  Passes iff the worst margin
/// max_x [G'(x) - 25 + 50|G(x)|] is negative.
struct GridCheckResult {
    bool pass = false;
    double worst_margin = 0.0;
    double worst_x = 0.0;
};
GridCheckResult check_assumption_one(const Feedback& f, int n_grid);

/// Grid check that the bifurcation function H(r) = G(psi(r)) is S-shaped on
/// (0, 0.4]: H' > 0 and H'' < 0 by Richardson-refined finite differences.
/// The two sufficient conditions from the series analysis
/// (G'(x) <= 1/psi'(6x), G''(x)/G'(x) <= -(189/5) 6x) are evaluated as a
/// secondary report only; for the tanh family with large B they fail on part
/// of the range even though the direct check passes.
enum class SShapeStatus { Pass, Fail, NotApplicable };
struct SShapeReport {
    SShapeStatus status = SShapeStatus::Fail;
    double min_h_slope = 0.0;       // min H' over the grid, want > 0
    double max_h_curvature = 0.0;   // max H'' over (0, 0.4], want < 0
    bool slope_condition_holds = false;
    bool log_derivative_condition_holds = false;
};
SShapeReport check_assumption_two(const Feedback& f, int n_grid);

/// Bifurcation function H(r) = G(psi(r)) and its 5-point finite-difference
/// derivative (step 1e-4).
double h_eval(const Feedback& f, double r);
double h_prime(const Feedback& f, double r);

enum class RegimeKind { Stable, Bistable };

struct Regime {
    RegimeKind kind = RegimeKind::Stable;
    double r_star = 0.0;  // positive root of H(r) = r in the bistable case
};

/// Stable (r* = 0) iff B <= 6; otherwise bisects H(r) - r on [1e-6, 0.4]
/// until |H(r*) - r*| < tol.  Throws NoRootInRange if the bracket fails,
/// which signals a violated S-shape assumption.
Regime classify_regime(const Feedback& f, double tol = 1e-13);

} // namespace gcm
