#pragma once

#include <string>
#include <vector>

#include "sap/op_analysis.hpp"

namespace sap {

struct SapPolicy {
    Regime regime = Regime::Below6;
    double beta = 1.0;       // decoding target; the access threshold equals it
    double c_star = 1.0;     // unclamped optimal scaling
    bool infeasible_scaling = false;  // c_star > 1: access is clamped
    double beta_min = 0.0;
    double beta_unconstrained = 1.0;  // stationary point before applying beta_min
    double s = 0.0;          // mean-value radius (m)
    std::optional<double> s_tilde;  // same constant under the LOS cutoff
    double aggregate_constant = 0.0;
    double expected_op = 1.0;
    int iterations = 0;

    /// Scaling actually applied to OP values.
    double applied_scaling() const { return c_star > 1.0 ? 1.0 : c_star; }
};

struct AseResult {
    double ase = 0.0;  // nats/s/Hz/m^2
    double beta_used = 0.0;
    double constraint_outage = 0.0;
    bool feasible = false;
};

struct CStar {
    double value = 1.0;
    bool infeasible = false;  // value > 1
};

/// Nearest-visible-primary radius law: x = (omega_eff lambda1 / 2) r^2 is
/// unit exponential, truncated at the LOS distance outside Below6.
struct RadialLaw {
    double rate = 0.0;   // omega_eff * lambda1 / 2 (1/m^2)
    double r_max = 0.0;  // upper integration radius
    double x_max = 0.0;  // rate * r_max^2
    double mass = 1.0;   // 1 - exp(-x_max)

    double radius(double x) const;
    double mean_radius() const;
};

RadialLaw radial_law(const NetworkParams& p, const NumericsConfig& cfg = {});

/// ∫ OP(r)^k pdf(r) dr with the regime's nearest-distance law.
QuadResult op_moment(const NetworkParams& p, double beta, int k, const NumericsConfig& cfg = {},
                     const OpOptions& opt = {});

double expected_op(const NetworkParams& p, double beta, const NumericsConfig& cfg = {}, const OpOptions& opt = {});

CStar c_star(const NetworkParams& p, double beta, double expected_op, const NumericsConfig& cfg = {});

/// Average access probability 1 / (pi lambda2 d^2 rho0(beta, inf)).
double average_access_probability(const NetworkParams& p, double beta, const NumericsConfig& cfg = {});

/// min(1, c * op) with c the policy's applied scaling.
double access_probability(double op_value, const SapPolicy& policy);

/// Coverage with thinned secondary interference: OP * e^-1.
double secondary_coverage(const NetworkParams& p, double beta, double R, const NumericsConfig& cfg = {},
                          const OpOptions& opt = {});

/// Primary self-interference term: rho(gamma, inf) below 6 GHz, rho(gamma, R_L)
/// (floored at zero) under blockage.
double primary_self_term(const NetworkParams& p, const NumericsConfig& cfg = {});

double primary_outage(const NetworkParams& p, double beta, const NumericsConfig& cfg = {});

/// Smallest beta meeting the outage cap. Throws InfeasibleError when no beta can.
double beta_min(const NetworkParams& p, const NumericsConfig& cfg = {});

/// Radius s with OP(s) = ∫ OP^2 pdf / ∫ OP pdf.
double mean_value_constant(const NetworkParams& p, double beta, const NumericsConfig& cfg = {},
                           const OpOptions& opt = {});

/// lambda1 (omega_eff / 2 pi) ∫ c(y, s) dy evaluated without beta, so the
/// aggregate factor reads exp(-C beta^(2/alpha)).
double aggregate_constant(const NetworkParams& p, double s, const NumericsConfig& cfg = {});

/// ln(1+beta) beta^(-2/alpha) exp(-C beta^(2/alpha)).
double reduced_ase_objective(double beta, double alpha, double C);

/// Root of -2 C beta^(2/alpha) ln(1+beta) + alpha beta/(1+beta) - 2 ln(1+beta).
double stationary_beta(double alpha, double C, const NumericsConfig& cfg = {});

struct OptimizerTrace {
    std::vector<double> beta;
    std::vector<double> s;
};

SapPolicy optimal_beta(const NetworkParams& p, const NumericsConfig& cfg = {}, OptimizerTrace* trace = nullptr);

/// Policy at a fixed beta (c*, expected OP) without optimizing it.
SapPolicy policy_at(const NetworkParams& p, double beta, const NumericsConfig& cfg = {});

AseResult ase(const NetworkParams& p, double beta, const NumericsConfig& cfg = {});

// --- Mapping families ----------------------------------------------------------

enum class MappingKind { Linear, Step, Quadratic };

std::string to_string(MappingKind k);

struct MappingFunction {
    MappingKind kind = MappingKind::Linear;
    double parameter = 1.0;  // slope, threshold or quadratic coefficient

    double operator()(double op) const;
};

/// Fit the family's parameter so the mean of F(op) over the samples equals
/// target_mean (in (0, 1)).
MappingFunction normalize_mapping(MappingKind kind, const std::vector<double>& op_samples, double target_mean);

}  // namespace sap
