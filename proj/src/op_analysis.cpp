#include "sap/op_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sap/errors.hpp"

namespace sap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
    if (!(alpha > 2.0)) throw DomainError("path-loss exponent must exceed 2 for the integrals to converge");
}

// Full-ring part: ∫_a^b 2 pi y s/(y^alpha + s) dy in closed form through u = y^2 s^(-2/alpha).
QuadResult full_ring(double a, double b, double s, double alpha, const NumericsConfig& cfg) {
    if (!(b > a)) return {};
    const double s2 = std::pow(s, 2.0 / alpha);
    const double ua = a * a / s2;
    const double ub = std::isinf(b) ? kInf : b * b / s2;
    const QuadResult t = power_tail_integral(alpha / 2.0, ua, ub, cfg);
    return {kPi * s2 * t.value, kPi * s2 * t.error};
}

double ring_integrand(double y, double s, double alpha) {
    // y s / (y^alpha + s) written to avoid overflow for large y.
    const double ya = std::pow(y, alpha);
    return y * s / (ya + s);
}

}  // namespace

QuadResult rho0(double beta, double t, double alpha, const NumericsConfig& cfg) {
    check_alpha(alpha);
    if (beta < 0.0) throw ParameterError("rho0: beta must be non-negative");
    if (beta == 0.0) return {};
    const double scale = std::pow(beta, 2.0 / alpha);
    const QuadResult r = power_tail_integral(alpha / 2.0, 0.0, t, cfg);
    return {scale * r.value, scale * r.error};
}

QuadResult rho(double a, double t, double alpha, const NumericsConfig& cfg) {
    check_alpha(alpha);
    if (!(a > 0.0)) throw ParameterError("rho: a must be positive");
    const double lower = std::pow(a, -2.0 / alpha);
    const double scale = std::pow(a, 2.0 / alpha);
    const QuadResult r = power_tail_integral(alpha / 2.0, lower, t, cfg);
    return {scale * r.value, scale * r.error};
}

double interference_scale(const NetworkParams& p, double beta) {
    return beta * p.p1 * std::pow(p.d, p.alpha) / p.p2;
}

QuadResult aggregate_exponent(double R, double d, double s, double alpha, double y_max, const NumericsConfig& cfg) {
    check_alpha(alpha);
    if (s == 0.0 || !(y_max > 0.0)) return {};
    QuadResult total{};
    // Ring entirely outside the ball when R < d and y <= d - R.
    if (R < d) total = total + full_ring(0.0, std::min(d - R, y_max), s, alpha, cfg);
    // Partially covered rings.
    const double lo = std::abs(R - d);
    const double hi = std::min(R + d, y_max);
    if (hi > lo && R > 0.0) {
        const double R2d2 = R * R - d * d;
        auto f = [&](double y) {
            const double c = std::clamp((R2d2 - y * y) / (2.0 * d * y), -1.0, 1.0);
            return 2.0 * std::acos(c) * ring_integrand(y, s, alpha);
        };
        total = total + integrate(f, lo, hi, cfg);
    }
    total = total + full_ring(R + d, y_max, s, alpha, cfg);
    return total;
}

QuadResult nearest_term(double R, double d, double s, double alpha, double upper, const NumericsConfig& cfg) {
    if (!(upper > 0.0)) return {};
    if (s == 0.0) return {upper / kPi, 0.0};
    const double half = alpha / 2.0;
    auto f = [&](double nu) {
        const double D = R * R - 2.0 * d * R * std::cos(nu) + d * d;
        if (D <= 0.0) return 0.0;
        return 1.0 / (1.0 + s * std::pow(D, -half));
    };
    const QuadResult q = integrate(f, 0.0, upper, cfg);
    return {q.value / kPi, q.error / kPi};
}

QuadResult nearest_term_beam(double R, double d, double s, double alpha, double omega, double upper,
                             const NumericsConfig& cfg) {
    if (!(upper > 0.0)) return {};
    const double half = alpha / 2.0;
    auto f = [&](double nu) {
        const double pc = common_interfering_prob(nu, R, d, omega);
        const double D = R * R - 2.0 * d * R * std::cos(nu) + d * d;
        const double cov = (D <= 0.0) ? 0.0 : 1.0 / (1.0 + s * std::pow(D, -half));
        return (1.0 - pc) + pc * cov;
    };
    const QuadResult q = integrate(f, 0.0, upper, cfg);
    return {q.value / kPi, q.error / kPi};
}

double exposed_angle(double R, double L, double d) {
    if (!(R > 0.0)) return kPi;
    return safe_acos((d * d + 2.0 * L * R - L * L) / (2.0 * d * R));
}

double beam_edge_angle(double R, double d, double omega) {
    if (omega >= kPi) return kPi;
    const double so = std::sin(omega);
    const double rad = d * d - R * R * so * so;
    if (rad < 0.0) return kPi;  // the beam edge never reaches the RX
    const double arg = (R * so * so - std::abs(std::cos(omega)) * std::sqrt(rad)) / d;
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

namespace {

struct Factors {
    double nearest_s;    // scale used in the nearest-interferer term
    double aggregate_s;  // scale used in the aggregate exponent
    double power;        // exponent applied to the aggregate factor
};

Factors placement_factors(const NetworkParams& p, double beta, const OpOptions& opt) {
    if (opt.placement == BetaPlacement::Derived) {
        const double s = interference_scale(p, beta);
        return {s, s, 1.0};
    }
    const double s1 = interference_scale(p, 1.0);
    return {s1, s1, std::pow(beta, 2.0 / p.alpha)};
}

void check_common(double R, const NetworkParams& p, double beta) {
    p.validate();
    if (!(R >= 0.0)) throw ParameterError("op: empty-ball radius must be non-negative");
    if (!(beta >= 0.0)) throw ParameterError("op: beta must be non-negative");
}

OpResult infinite_radius(Regime regime, std::optional<double> L) {
    OpResult r;
    r.regime = regime;
    r.r_used = kInf;
    r.l_used = L;
    return r;
}

// Aggregate factor over the retained density lambda1 * omega / (2 pi).
double aggregate_factor(const NetworkParams& p, double R, double y_max, const Factors& f, double omega,
                        const NumericsConfig& cfg, double& err) {
    const QuadResult e = aggregate_exponent(R, p.d, f.aggregate_s, p.alpha, y_max, cfg);
    const double density = p.lambda1 * omega / (2.0 * kPi);
    const double expo = density * e.value * f.power;
    err += density * e.error * f.power * std::exp(-expo);
    return std::exp(-expo);
}

// Three-way split on R relative to the ellipse; ties go to the lower-R case.
int nearest_case(double R, double L, double d) {
    if (std::isinf(L)) return 1;
    if (R <= 0.5 * L - 0.5 * d) return 1;
    if (R <= 0.5 * L + 0.5 * d) return 2;
    return 3;
}

}  // namespace

OpResult op_below6(double R, const NetworkParams& p, double beta, const NumericsConfig& cfg, const OpOptions& opt) {
    check_common(R, p, beta);
    if (std::isinf(R)) return infinite_radius(Regime::Below6, std::nullopt);
    const Factors f = placement_factors(p, beta, opt);
    double err = 0.0;
    const double agg = aggregate_factor(p, R, kInf, f, 2.0 * kPi, cfg, err);
    // Average over nu in [0, 2 pi] equals twice the average over [0, pi].
    const QuadResult near = nearest_term(R, p.d, beta == 0.0 ? 0.0 : f.nearest_s, p.alpha, kPi, cfg);
    OpResult r;
    r.regime = Regime::Below6;
    r.r_used = R;
    r.nearest_factor = std::clamp(near.value, 0.0, 1.0);
    r.aggregate_factor = agg;
    r.value = r.nearest_factor * r.aggregate_factor;
    r.quadrature_error_estimate = near.error * agg + err;
    return r;
}

OpResult op_blockage(double R, double L, const NetworkParams& p, double beta, const NumericsConfig& cfg,
                     const OpOptions& opt) {
    check_common(R, p, beta);
    const double r_l = p.los_distance();
    if (!(L >= p.d)) throw ParameterError("op_blockage: axis length must be at least d");
    if (p.d > r_l) {
        OpResult r;
        r.regime = Regime::Blockage;
        r.r_used = R;
        r.l_used = L;
        r.value = 0.0;
        r.aggregate_factor = 0.0;
        return r;
    }
    if (std::isinf(R)) return infinite_radius(Regime::Blockage, L);
    const Factors f = placement_factors(p, beta, opt);
    double err = 0.0;
    const double agg = aggregate_factor(p, R, r_l, f, 2.0 * kPi, cfg, err);
    const double s = beta == 0.0 ? 0.0 : f.nearest_s;
    OpResult r;
    r.regime = Regime::Blockage;
    r.r_used = R;
    r.l_used = L;
    r.nearest_case = nearest_case(R, L, p.d);
    QuadResult near{1.0, 0.0};
    if (r.nearest_case == 1) {
        near = nearest_term(R, p.d, s, p.alpha, kPi, cfg);
    } else if (r.nearest_case == 2) {
        const double u = exposed_angle(R, L, p.d);
        const QuadResult part = nearest_term(R, p.d, s, p.alpha, u, cfg);
        near = {part.value + (kPi - u) / kPi, part.error};
    }
    r.nearest_factor = std::clamp(near.value, 0.0, 1.0);
    r.aggregate_factor = agg;
    r.value = r.nearest_factor * agg;
    r.quadrature_error_estimate = near.error * agg + err;
    return r;
}

OpResult op_mmw(double R, double L, const NetworkParams& p, double beta, const NumericsConfig& cfg,
                const OpOptions& opt) {
    check_common(R, p, beta);
    const double r_l = p.los_distance();
    const double omega = p.omega;
    if (!(L >= p.d)) throw ParameterError("op_mmw: axis length must be at least d");
    if (p.d > r_l) {
        OpResult r;
        r.regime = Regime::Mmw;
        r.r_used = R;
        r.l_used = L;
        r.value = 0.0;
        r.aggregate_factor = 0.0;
        return r;
    }
    if (std::isinf(R)) return infinite_radius(Regime::Mmw, L);
    const Factors f = placement_factors(p, beta, opt);
    double err = 0.0;
    const double agg = aggregate_factor(p, R, r_l, f, omega, cfg, err);
    const double s = beta == 0.0 ? 0.0 : f.nearest_s;
    OpResult r;
    r.regime = Regime::Mmw;
    r.r_used = R;
    r.l_used = L;
    r.nearest_case = nearest_case(R, L, p.d);
    QuadResult near{1.0, 0.0};
    if (r.nearest_case == 1) {
        near = nearest_term_beam(R, p.d, s, p.alpha, omega, kPi, cfg);
    } else if (r.nearest_case == 2) {
        const double u = exposed_angle(R, L, p.d);
        const double mu = opt.mmw_nearest == MmwNearestVariant::Published
                              ? std::min(beam_edge_angle(R, p.d, omega), u)
                              : u;
        const QuadResult part = nearest_term_beam(R, p.d, s, p.alpha, omega, u, cfg);
        near = {part.value + (kPi - mu) / kPi, part.error};
    }
    r.nearest_factor = std::clamp(near.value, 0.0, 1.0);
    r.aggregate_factor = agg;
    r.value = r.nearest_factor * agg;
    r.quadrature_error_estimate = near.error * agg + err;
    return r;
}

OpResult op_at_radius(double R, const NetworkParams& p, double beta, const NumericsConfig& cfg,
                      const OpOptions& opt) {
    switch (p.regime) {
        case Regime::Below6: return op_below6(R, p, beta, cfg, opt);
        case Regime::Blockage: return op_blockage(R, p.resolved_axis_length().value, p, beta, cfg, opt);
        case Regime::Mmw: return op_mmw(R, p.resolved_axis_length().value, p, beta, cfg, opt);
    }
    throw ParameterError("op_at_radius: unknown regime");
}

OpResult op_from_interference(double I, const NetworkParams& p, double beta, const NumericsConfig& cfg,
                              const OpOptions& opt) {
    if (!(I >= 0.0)) throw ParameterError("op_from_interference: I must be non-negative");
    const double R = I == 0.0 ? kInf : empty_ball_radius(I, p, cfg);
    return op_at_radius(R, p, beta, cfg, opt);
}

double op_floor_below6(const NetworkParams& p, double beta) {
    p.validate();
    const double s = interference_scale(p, beta);
    const double expo = kPi * p.lambda1 * std::pow(s, 2.0 / p.alpha) * power_tail_full(p.alpha / 2.0);
    return p.p2 * std::exp(-expo) / (p.p2 + p.p1 * beta);
}

// --- Empty-ball radius ----------------------------------------------------------

namespace {

// (1 - (R/R_L)^(alpha-2)) / (alpha - 2), continuous at alpha = 2.
double los_weight(double R, double alpha, double r_l) {
    const double e = alpha - 2.0;
    if (std::isinf(r_l)) {
        if (e <= 0.0) throw DomainError("empty-ball equation diverges at alpha = 2 without a LOS cutoff");
        return 1.0 / e;
    }
    const double lr = std::log(R / r_l);
    if (e == 0.0) return -lr;
    return -std::expm1(e * lr) / e;
}

}  // namespace

double empty_ball_residual(double R, double I, double p1, double k, double alpha, double r_l) {
    const double a = (I / p1) * std::pow(R, alpha);
    const double b = k * R * R * los_weight(R, alpha, r_l);
    return (a - b - 1.0) / (1.0 + a + std::abs(b));
}

double solve_empty_ball(double I, double p1, double k, double alpha, double r_l, const NumericsConfig& cfg) {
    if (!(I > 0.0)) throw ParameterError("empty-ball radius needs positive sensed interference");
    if (!(alpha >= 2.0)) throw DomainError("empty-ball radius needs alpha >= 2");
    if (!(r_l > 0.0)) throw ParameterError("empty-ball radius needs a positive LOS distance");
    if (k == 0.0) return std::pow(p1 / I, 1.0 / alpha);
    auto f = [&](double R) { return empty_ball_residual(R, I, p1, k, alpha, r_l); };
    const Bracket b = find_bracket(f, 1e-6, 1.0, cfg.root_bracket_growth);
    return bisect(f, b);
}

double empty_ball_radius_below6(double I, const NetworkParams& p, const NumericsConfig& cfg) {
    return solve_empty_ball(I, p.p1, 2.0 * kPi * p.lambda1, p.alpha, kInf, cfg);
}

double empty_ball_radius_blockage(double I, const NetworkParams& p, double r_l, const NumericsConfig& cfg) {
    return solve_empty_ball(I, p.p1, 2.0 * kPi * p.lambda1, p.alpha, r_l, cfg);
}

double empty_ball_radius_mmw(double I, const NetworkParams& p, double r_l, const NumericsConfig& cfg) {
    return solve_empty_ball(I, p.p1, p.omega * p.lambda1, p.alpha, r_l, cfg);
}

double empty_ball_radius(double I, const NetworkParams& p, const NumericsConfig& cfg) {
    switch (p.regime) {
        case Regime::Below6: return empty_ball_radius_below6(I, p, cfg);
        case Regime::Blockage: return empty_ball_radius_blockage(I, p, p.los_distance(), cfg);
        case Regime::Mmw: return empty_ball_radius_mmw(I, p, p.los_distance(), cfg);
    }
    throw ParameterError("empty_ball_radius: unknown regime");
}

namespace closed_form {

double radius_alpha4(double I, double lambda1, double p1) {
    const double a = kPi * lambda1 * p1;
    return std::pow(2.0 * I, -0.5) * std::sqrt(a + std::sqrt(a * a + 4.0 * p1 * I));
}

double radius_alpha4_los(double I, double lambda1, double p1, double r_l) {
    const double a = kPi * lambda1 * p1;
    const double j = I + a / (r_l * r_l);
    return std::sqrt((a + std::sqrt(a * a + 4.0 * p1 * j)) / (2.0 * j));
}

double radius_alpha4_los_quoted(double I, double lambda1, double p1, double r_l) {
    const double a = kPi * lambda1 * p1;
    const double j = I + a / (r_l * r_l);
    return std::pow(a + (a * a + 4.0 * p1 * j), 0.25) * std::pow(2.0 * j, -0.5);
}

double radius_alpha2_los(double I, double lambda1, double p1, double r_l) {
    const double b = 2.0 * kPi * lambda1;
    const double a = I / p1 - b * std::log(r_l);
    if (b == 0.0) {
        if (!(a > 0.0)) throw DomainError("alpha->2 radius: no positive root");
        return 1.0 / std::sqrt(a);
    }
    // z = 1/R^2 solves z + (b/2) ln z = a; with z = (b/2) w this is w + ln w = ell.
    const double ell = 2.0 * a / b - std::log(0.5 * b);
    const double w = lambert_w_of_exp(ell);
    return 1.0 / std::sqrt(0.5 * b * w);
}

double radius_alpha2_los_quoted(double I, double lambda1, double p1, double r_l) {
    const double v = I / p1 - 2.0 * kPi * lambda1 * std::log(r_l);
    if (!(v > 0.0)) throw DomainError("alpha->2 quoted radius requires I/P1 > 2 pi lambda1 ln(R_L)");
    return 1.0 / std::sqrt(v);
}

}  // namespace closed_form

}  // namespace sap
