#include "sap/sap_mac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sap/errors.hpp"

namespace sap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Outer integrals carry the inner quadrature noise; ask for less.
NumericsConfig outer_config(const NumericsConfig& cfg) {
    NumericsConfig out = cfg;
    out.rel_tol = std::max(cfg.rel_tol * 100.0, 1e-9);
    out.abs_tol = std::max(cfg.abs_tol * 100.0, 1e-12);
    return out;
}

}  // namespace

double RadialLaw::radius(double x) const { return rate > 0.0 ? std::sqrt(x / rate) : 0.0; }

double RadialLaw::mean_radius() const {
    if (!(rate > 0.0)) return kInf;
    const double m = 0.5 * std::sqrt(kPi / rate);
    return std::min(m, r_max);
}

RadialLaw radial_law(const NetworkParams& p, const NumericsConfig& cfg) {
    RadialLaw law;
    law.rate = 0.5 * p.effective_omega() * p.lambda1;
    if (!(law.rate > 0.0)) {
        law.r_max = kInf;
        law.x_max = 0.0;
        law.mass = 0.0;
        return law;
    }
    const double cutoff = cfg.infinite_cutoff_multiplier * cfg.infinite_cutoff_multiplier;
    law.x_max = std::min(cutoff, law.rate * p.los_distance() * p.los_distance());
    law.r_max = law.radius(law.x_max);
    law.mass = -std::expm1(-law.x_max);
    return law;
}

QuadResult op_moment(const NetworkParams& p, double beta, int k, const NumericsConfig& cfg, const OpOptions& opt) {
    p.validate();
    const RadialLaw law = radial_law(p, cfg);
    if (law.mass == 0.0) {
        // No primaries: the nearest one is infinitely far and OP = 1.
        return {1.0, 0.0};
    }
    auto f = [&](double x) {
        const double v = op_at_radius(law.radius(x), p, beta, cfg, opt).value;
        return std::pow(v, k) * std::exp(-x);
    };
    // Break at radii where the OP formula switches branch.
    std::vector<double> cuts{0.0};
    std::vector<double> radii{p.d};
    if (p.regime != Regime::Below6) {
        const double L = p.resolved_axis_length().value;
        if (std::isfinite(L)) {
            radii.push_back(0.5 * L - 0.5 * p.d);
            radii.push_back(0.5 * L + 0.5 * p.d);
        }
    }
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        const double x = law.rate * r * r;
        if (x > cuts.back() && x < law.x_max) cuts.push_back(x);
    }
    cuts.push_back(law.x_max);
    const NumericsConfig oc = outer_config(cfg);
    QuadResult total{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total = total + integrate(f, cuts[i], cuts[i + 1], oc);
    return {total.value / law.mass, total.error / law.mass};
}

double expected_op(const NetworkParams& p, double beta, const NumericsConfig& cfg, const OpOptions& opt) {
    if (!(beta > 0.0)) throw ParameterError("expected_op: beta must be positive");
    return op_moment(p, beta, 1, cfg, opt).value;
}

double average_access_probability(const NetworkParams& p, double beta, const NumericsConfig& cfg) {
    const double r0 = rho0(beta, kInf, p.alpha, cfg).value;
    return 1.0 / (kPi * p.lambda2 * p.d * p.d * r0);
}

CStar c_star(const NetworkParams& p, double beta, double expected, const NumericsConfig& cfg) {
    if (!(expected > 0.0)) throw DomainError("c_star: expected OP must be positive");
    if (expected > 1.0 + 1e-12) throw ParameterError("c_star: expected OP above 1");
    if (!(p.lambda2 > 0.0)) throw ParameterError("c_star: secondary density must be positive");
    const double v = average_access_probability(p, beta, cfg) / expected;
    return {v, v > 1.0};
}

double access_probability(double op_value, const SapPolicy& policy) {
    return std::min(1.0, policy.applied_scaling() * op_value);
}

double secondary_coverage(const NetworkParams& p, double beta, double R, const NumericsConfig& cfg,
                          const OpOptions& opt) {
    return op_at_radius(R, p, beta, cfg, opt).value * std::exp(-1.0);
}

double primary_self_term(const NetworkParams& p, const NumericsConfig& cfg) {
    if (p.regime == Regime::Below6) return rho(p.gamma, kInf, p.alpha, cfg).value;
    return std::max(0.0, rho(p.gamma, p.los_distance(), p.alpha, cfg).value);
}

double primary_outage(const NetworkParams& p, double beta, const NumericsConfig& cfg) {
    p.validate();
    if (!(beta > 0.0)) throw ParameterError("primary_outage: beta must be positive");
    const double e = 2.0 / p.alpha;
    const double self = primary_self_term(p, cfg);
    const double p2e = std::pow(p.p2, e);
    const double secondary = rho0(p.gamma, kInf, p.alpha, cfg).value * std::pow(p.p1, e) /
                             (kPi * p.d * p.d * rho0(beta, kInf, p.alpha, cfg).value);
    const double denom = secondary + p.lambda1 * p2e * (self + 1.0);
    return 1.0 - p.lambda1 * p2e / denom;
}

double beta_min(const NetworkParams& p, const NumericsConfig& cfg) {
    p.validate();
    const double self = primary_self_term(p, cfg);
    const double bracket = p.tau + self * p.tau - self;
    if (!(bracket > 0.0) || !(p.lambda1 > 0.0))
        throw InfeasibleError("primary protection infeasible at any beta");
    const double e = 2.0 / p.alpha;
    const double num = std::pow(p.p1, e) * rho0(p.gamma, kInf, p.alpha, cfg).value * (1.0 - p.tau);
    const double den = kPi * p.d * p.d * power_tail_full(p.alpha / 2.0) * p.lambda1 * std::pow(p.p2, e) * bracket;
    return std::pow(num / den, p.alpha / 2.0);
}

double mean_value_constant(const NetworkParams& p, double beta, const NumericsConfig& cfg, const OpOptions& opt) {
    const double m1 = op_moment(p, beta, 1, cfg, opt).value;
    const double m2 = op_moment(p, beta, 2, cfg, opt).value;
    const RadialLaw law = radial_law(p, cfg);
    if (law.mass == 0.0) return kInf;
    const double target = m2 / m1;
    auto g = [&](double r) { return op_at_radius(r, p, beta, cfg, opt).value - target; };
    const double g0 = g(0.0);
    const double g1 = g(law.r_max);
    if (std::abs(g1 - g0) < 1e-14) return law.mean_radius();  // OP flat in r
    // Scan for the first sign change, then bisect inside it.
    constexpr int kScan = 64;
    double prev_r = 0.0;
    double prev_g = g0;
    if (prev_g == 0.0) return 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double r = law.radius(law.x_max * i / kScan);
        const double gr = g(r);
        if (gr == 0.0) return r;
        if ((gr > 0.0) != (prev_g > 0.0)) return bisect(g, {prev_r, r}, 1e-12);
        prev_r = r;
        prev_g = gr;
    }
    throw NumericError("mean_value_constant: OP never reaches the moment ratio");
}

double aggregate_constant(const NetworkParams& p, double s, const NumericsConfig& cfg) {
    if (std::isinf(s)) return 0.0;
    const double y_max = p.regime == Regime::Below6 ? kInf : p.los_distance();
    const QuadResult e = aggregate_exponent(s, p.d, interference_scale(p, 1.0), p.alpha, y_max, cfg);
    return p.lambda1 * p.effective_omega() / (2.0 * kPi) * e.value;
}

double reduced_ase_objective(double beta, double alpha, double C) {
    const double b = std::pow(beta, 2.0 / alpha);
    return std::log1p(beta) / b * std::exp(-C * b);
}

double stationary_beta(double alpha, double C, const NumericsConfig& cfg) {
    if (!(alpha > 2.0)) throw DomainError("stationary_beta: alpha must exceed 2");
    if (!(C >= 0.0)) throw ParameterError("stationary_beta: aggregate constant must be non-negative");
    // Negated derivative condition: < 0 just above zero, > 0 for large beta.
    auto g = [&](double b) {
        const double l = std::log1p(b);
        return 2.0 * C * std::pow(b, 2.0 / alpha) * l - alpha * b / (1.0 + b) + 2.0 * l;
    };
    // Start low enough that the leading (2 - alpha) beta term dominates.
    double lo = 1e-6;
    while (g(lo) >= 0.0 && lo > 1e-300) lo *= 1e-3;
    const Bracket b = find_bracket(g, lo, std::max(1.0, 2.0 * lo), cfg.root_bracket_growth);
    return bisect(g, b, 1e-15);
}

SapPolicy policy_at(const NetworkParams& p, double beta, const NumericsConfig& cfg) {
    SapPolicy pol;
    pol.regime = p.regime;
    pol.beta = beta;
    pol.expected_op = expected_op(p, beta, cfg);
    const CStar c = c_star(p, beta, pol.expected_op, cfg);
    pol.c_star = c.value;
    pol.infeasible_scaling = c.infeasible;
    try {
        pol.beta_min = beta_min(p, cfg);
    } catch (const InfeasibleError&) {
        pol.beta_min = kInf;
    }
    pol.beta_unconstrained = beta;
    return pol;
}

SapPolicy optimal_beta(const NetworkParams& p, const NumericsConfig& cfg, OptimizerTrace* trace) {
    p.validate();
    const double bmin = beta_min(p, cfg);
    const RadialLaw law = radial_law(p, cfg);
    double s = law.mass == 0.0 ? kInf : law.mean_radius();
    double C = aggregate_constant(p, s, cfg);
    double beta = stationary_beta(p.alpha, C, cfg);
    if (trace) {
        trace->beta.push_back(beta);
        trace->s.push_back(s);
    }
    constexpr int kMaxIter = 100;
    constexpr double kDamping = 0.5;
    int it = 0;
    bool converged = law.mass == 0.0;
    while (!converged) {
        if (++it > kMaxIter) throw NumericError("optimal_beta: fixed point did not converge in 100 iterations");
        s = mean_value_constant(p, beta, cfg);
        C = aggregate_constant(p, s, cfg);
        const double target = stationary_beta(p.alpha, C, cfg);
        const double next = (1.0 - kDamping) * beta + kDamping * target;
        converged = std::abs(next - beta) <= 1e-6 * beta && std::abs(target - beta) <= 1e-6 * beta;
        beta = next;
        if (trace) {
            trace->beta.push_back(beta);
            trace->s.push_back(s);
        }
    }
    SapPolicy pol;
    pol.regime = p.regime;
    pol.beta_unconstrained = beta;
    pol.beta_min = bmin;
    pol.beta = std::max(beta, bmin);
    pol.s = s;
    if (p.regime != Regime::Below6) pol.s_tilde = s;
    pol.aggregate_constant = C;
    pol.iterations = it;
    pol.expected_op = expected_op(p, pol.beta, cfg);
    const CStar c = c_star(p, pol.beta, pol.expected_op, cfg);
    pol.c_star = c.value;
    pol.infeasible_scaling = c.infeasible;
    return pol;
}

AseResult ase(const NetworkParams& p, double beta, const NumericsConfig& cfg) {
    p.validate();
    if (!(beta > 0.0)) throw ParameterError("ase: beta must be positive");
    AseResult r;
    r.beta_used = beta;
    const double m1 = op_moment(p, beta, 1, cfg).value;
    const double m2 = op_moment(p, beta, 2, cfg).value;
    const double c = std::min(1.0, c_star(p, beta, m1, cfg).value);
    r.ase = std::exp(-1.0) * std::log1p(beta) * c * p.lambda2 * m2;
    r.constraint_outage = primary_outage(p, beta, cfg);
    r.feasible = r.constraint_outage <= p.tau + 1e-12;
    return r;
}

// --- Mapping families ----------------------------------------------------------

std::string to_string(MappingKind k) {
    switch (k) {
        case MappingKind::Linear: return "linear";
        case MappingKind::Step: return "step";
        case MappingKind::Quadratic: return "quadratic";
    }
    return "unknown";
}

double MappingFunction::operator()(double op) const {
    switch (kind) {
        case MappingKind::Linear: return std::min(1.0, parameter * op);
        case MappingKind::Step: return op >= parameter ? 1.0 : 0.0;
        case MappingKind::Quadratic: return std::min(1.0, parameter * op * op);
    }
    return 0.0;
}

MappingFunction normalize_mapping(MappingKind kind, const std::vector<double>& op_samples, double target_mean) {
    if (op_samples.empty()) throw ParameterError("normalize_mapping: no samples");
    if (!(target_mean > 0.0 && target_mean < 1.0)) throw ParameterError("normalize_mapping: target must lie in (0, 1)");
    const double n = static_cast<double>(op_samples.size());
    if (kind == MappingKind::Step) {
        // Threshold at the (1 - target) quantile.
        std::vector<double> v = op_samples;
        std::sort(v.begin(), v.end());
        const auto k = static_cast<std::size_t>(std::clamp(std::llround((1.0 - target_mean) * n), 0LL,
                                                           static_cast<long long>(v.size()) - 1));
        return {kind, v[k]};
    }
    MappingFunction f{kind, 1.0};
    auto mean_at = [&](double c) {
        f.parameter = c;
        double acc = 0.0;
        for (double x : op_samples) acc += f(x);
        return acc / n - target_mean;
    };
    double hi = 1.0;
    int guard = 0;
    while (mean_at(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw NumericError("normalize_mapping: target mean not reachable");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mean_at(mid) < 0.0) lo = mid; else hi = mid;
    }
    return {kind, 0.5 * (lo + hi)};
}

}  // namespace sap
