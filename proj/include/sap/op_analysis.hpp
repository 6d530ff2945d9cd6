#pragma once

#include <optional>

#include "sap/channel.hpp"
#include "sap/numerics.hpp"

namespace sap {

/// Where the decoding target enters the OP product.
///   Derived: beta scales the nearest-interferer term and the aggregate
///            Laplace exponent directly (the PGFL computation).
///   Display: nearest term evaluated at beta = 1 and the aggregate factor
///            raised to beta^(2/alpha). Kept as a diagnostic.
enum class BetaPlacement { Derived, Display };

/// Angular extent of the exposed-node credit in the partially exposed mmW
/// case: the published min(nu_omega, u) or the blockage angle u alone.
enum class MmwNearestVariant { Published, Geometric };

struct OpOptions {
    BetaPlacement placement = BetaPlacement::Derived;
    MmwNearestVariant mmw_nearest = MmwNearestVariant::Published;
};

struct OpResult {
    double value = 1.0;
    Regime regime = Regime::Below6;
    double r_used = 0.0;
    std::optional<double> l_used;
    double nearest_factor = 1.0;
    double aggregate_factor = 1.0;
    double quadrature_error_estimate = 0.0;
    int nearest_case = 0;  // 1..3 for the blockage/mmW case split, 0 otherwise
};

// --- Integral helpers -------------------------------------------------------

/// beta^(2/alpha) ∫_0^t du / (1 + u^(alpha/2)); t may be +inf.
QuadResult rho0(double beta, double t, double alpha, const NumericsConfig& cfg = {});
/// a^(2/alpha) ∫_{a^(-2/alpha)}^t du / (1 + u^(alpha/2)). Signed: negative if t is
/// below the lower limit.
QuadResult rho(double a, double t, double alpha, const NumericsConfig& cfg = {});

/// beta P1 d^alpha / P2, the interference-to-signal scale (m^alpha).
double interference_scale(const NetworkParams& p, double beta);

/// ∫ A(y) y s / (y^alpha + s) dy over [[R-d]^+, y_max], where A(y) is the angle
/// of the ring of radius y around the RX lying outside the empty ball of
/// radius R around the TX (2 pi away from the ball).
QuadResult aggregate_exponent(double R, double d, double s, double alpha, double y_max, const NumericsConfig& cfg);

/// Mean of 1/(1 + s D(nu)^(-alpha/2)) over nu in [0, upper] times upper/pi,
/// where D(nu) = R^2 - 2 d R cos(nu) + d^2.
QuadResult nearest_term(double R, double d, double s, double alpha, double upper, const NumericsConfig& cfg);

/// As nearest_term, with the common-interfering weight of a beam of width omega.
QuadResult nearest_term_beam(double R, double d, double s, double alpha, double omega, double upper,
                             const NumericsConfig& cfg);

/// Exposed-node angle between the major axis and the nearest primary on the
/// ellipse boundary.
double exposed_angle(double R, double L, double d);

/// Angle at which the beam edge of the nearest primary crosses the RX.
double beam_edge_angle(double R, double d, double omega);

// --- OP formulas -------------------------------------------------------------

OpResult op_below6(double R, const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                   const OpOptions& opt = {});
OpResult op_blockage(double R, double L, const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                     const OpOptions& opt = {});
OpResult op_mmw(double R, double L, const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                const OpOptions& opt = {});

/// Regime dispatch; L comes from params.resolved_axis_length().
OpResult op_at_radius(double R, const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                      const OpOptions& opt = {});

/// OP at the expected empty-ball radius for sensed power I (I = 0 gives 1).
OpResult op_from_interference(double I, const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                              const OpOptions& opt = {});

/// R = 0 limit of the below-6 OP.
double op_floor_below6(const NetworkParams& p, double beta);

// --- Empty-ball radius ----------------------------------------------------------

/// Scaled residual of (I/P1) R^alpha - (k/(alpha-2)) R^2 (1 - (R/R_L)^(alpha-2)) - 1
/// with k the angular density (2 pi lambda1, or omega lambda1 when thinned).
/// alpha = 2 is admitted as the limiting equation.
double empty_ball_residual(double R, double I, double p1, double k, double alpha, double r_l);

/// Positive root of the equation above by bracketed bisection.
double solve_empty_ball(double I, double p1, double k, double alpha, double r_l, const NumericsConfig& cfg = {});

double empty_ball_radius_below6(double I, const NetworkParams& p, const NumericsConfig& cfg = {});
double empty_ball_radius_blockage(double I, const NetworkParams& p, double r_l, const NumericsConfig& cfg = {});
double empty_ball_radius_mmw(double I, const NetworkParams& p, double r_l, const NumericsConfig& cfg = {});
/// Regime dispatch.
double empty_ball_radius(double I, const NetworkParams& p, const NumericsConfig& cfg = {});

namespace closed_form {

/// alpha = 4, no LOS cutoff.
double radius_alpha4(double I, double lambda1, double p1);
/// alpha = 4 with LOS cutoff r_l, solved exactly as a quadratic in R^2.
double radius_alpha4_los(double I, double lambda1, double p1, double r_l);
/// The alpha = 4, LOS-cutoff expression in the form usually quoted, whose
/// outer exponent is 1/4 instead of 1/2. Only used to report the discrepancy.
double radius_alpha4_los_quoted(double I, double lambda1, double p1, double r_l);
/// alpha -> 2+ limit with LOS cutoff via the Lambert W function:
/// R^2 (I/P1 + 2 pi lambda1 ln(R / R_L)) = 1.
double radius_alpha2_los(double I, double lambda1, double p1, double r_l);
/// The alpha -> 2+ expression that drops the ln R term. Throws DomainError
/// unless I/P1 > 2 pi lambda1 ln(R_L).
double radius_alpha2_los_quoted(double I, double lambda1, double p1, double r_l);

}  // namespace closed_form

}  // namespace sap
