#pragma once

#include <functional>
#include <limits>

namespace sap {

struct NumericsConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;  // panel budget of the adaptive Gauss-Kronrod rule
    // Radial cutoff for nearest-distance expectations, in units of the
    // mean-free-path 1/sqrt(pi*lambda). The neglected pdf mass is exp(-m^2).
    double infinite_cutoff_multiplier = 12.0;
    double root_bracket_growth = 2.0;

    void validate() const;
    NumericsConfig refined(double factor) const;  // tolerances divided by factor
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

inline QuadResult operator+(QuadResult a, QuadResult b) {
    return {a.value + b.value, a.error + b.error};
}

using Integrand = std::function<double(double)>;

/// Globally adaptive 31-point Gauss-Kronrod on a finite interval. Throws
/// NumericError when the panel budget runs out before the tolerance is met.
QuadResult integrate(const Integrand& f, double a, double b, const NumericsConfig& cfg);

/// ∫_{u1}^{u2} du / (1 + u^p) for p > 1 and 0 <= u1, u2 <= +inf. The part
/// above u = 1 is mapped onto a finite interval by w = u^(1-p), so no
/// truncation is involved.
QuadResult power_tail_integral(double p, double u1, double u2, const NumericsConfig& cfg);

/// ∫_0^inf du / (1 + u^p) = (pi/p) / sin(pi/p).
double power_tail_full(double p);

struct Bracket {
    double lo;
    double hi;
};

/// Grows [lo, hi] geometrically (hi *= growth, lo /= growth) until f changes
/// sign. Throws NumericError after max_growths attempts.
Bracket find_bracket(const std::function<double(double)>& f, double lo, double hi, double growth,
                     int max_growths = 200);

/// Bisection to relative width rel_tol (or until the midpoint stops moving).
double bisect(const std::function<double(double)>& f, Bracket b, double rel_tol = 1e-15,
              int max_iter = 400);

/// Principal Lambert W of exp(ell), i.e. the w > 0 solving w + ln(w) = ell.
/// Works for arguments whose exponential would overflow.
double lambert_w_of_exp(double ell);

/// arccos with clamping of rounding excursions up to 1e-12 beyond [-1, 1].
/// Larger violations raise NumericError.
double safe_acos(double x);

}  // namespace sap
