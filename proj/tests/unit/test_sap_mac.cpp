#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/rng.hpp"
#include "sap/sap_mac.hpp"
#include "sap/scenarios.hpp"

using namespace sap;

namespace {
const NumericsConfig kCfg;
}

TEST_CASE("stationary beta in the high-OP limit") {
    for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
        const double b = stationary_beta(alpha, 0.0, kCfg);
        CHECK(b / ((1 + b) * std::log1p(b)) == doctest::Approx(2.0 / alpha).epsilon(1e-9));
    }
}

TEST_CASE("stationary beta maximizes the reduced objective") {
    const double alpha = 4.0, C = 0.05;
    const double b = stationary_beta(alpha, C, kCfg);
    const double f = reduced_ase_objective(b, alpha, C);
    for (double r : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) CHECK(reduced_ase_objective(b * r, alpha, C) <= f + 1e-15);
}

TEST_CASE("beta_min meets the outage cap exactly") {
    for (const NetworkParams& p : {scenarios::sparse_below6(), scenarios::dense_below6()}) {
        const double bm = beta_min(p, kCfg);
        CHECK(primary_outage(p, bm, kCfg) == doctest::Approx(p.tau).epsilon(1e-9));
        CHECK(primary_outage(p, 2 * bm, kCfg) < p.tau);  // larger beta, fewer secondaries
    }
    NetworkParams loose = scenarios::sparse_below6();
    loose.tau = 0.999999;
    CHECK(beta_min(loose, kCfg) < beta_min(scenarios::sparse_below6(), kCfg));
}

TEST_CASE("expected OP against sampling the nearest-primary law") {
    const NetworkParams p = scenarios::sparse_below6();
    const RadialLaw law = radial_law(p, kCfg);
    SplitMix64 rng(5);
    double s = 0.0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) {
        // Nearest primary distance of a PPP: pi lambda r^2 is unit exponential.
        const double r = std::sqrt(rng.exponential() / (std::numbers::pi * p.lambda1));
        s += op_below6(r, p, 2.0, kCfg).value;
    }
    CHECK(expected_op(p, 2.0, kCfg) == doctest::Approx(s / n).epsilon(0.01));
    CHECK(law.mass == doctest::Approx(1.0));
    CHECK(law.mean_radius() == doctest::Approx(0.5 / std::sqrt(p.lambda1)).epsilon(1e-6));
}

TEST_CASE("optimal policy sits inside the feasible range") {
    const NetworkParams p = scenarios::sparse_below6();
    const SapPolicy pol = optimal_beta(p, kCfg);
    CHECK(pol.beta >= pol.beta_min);
    CHECK(pol.beta == doctest::Approx(std::max(pol.beta_min, pol.beta_unconstrained)));
    CHECK(ase(p, pol.beta, kCfg).feasible);
    CHECK_FALSE(ase(p, 0.5 * pol.beta_min, kCfg).feasible);
}

TEST_CASE("access probability is clamped") {
    SapPolicy pol;
    pol.c_star = 3.0;  // infeasible scaling clamps to 1
    CHECK(access_probability(0.4, pol) == doctest::Approx(0.4));
    pol.c_star = 0.5;
    CHECK(access_probability(0.4, pol) == doctest::Approx(0.2));
    CHECK(access_probability(1.0, pol) <= 1.0);
}

TEST_CASE("mapping normalization hits the target mean") {
    SplitMix64 rng(8);
    std::vector<double> ops;
    for (int k = 0; k < 5000; ++k) ops.push_back(std::pow(rng.uniform(), 0.3));
    for (MappingKind kind : {MappingKind::Linear, MappingKind::Step, MappingKind::Quadratic}) {
        const MappingFunction f = normalize_mapping(kind, ops, 0.3);
        double mean = 0.0;
        for (double v : ops) {
            const double a = f(v);
            CHECK(a >= 0.0);
            CHECK(a <= 1.0);
            mean += a;
        }
        CHECK(mean / ops.size() == doctest::Approx(0.3).epsilon(kind == MappingKind::Step ? 0.01 : 1e-6));
        CHECK(f(0.9) >= f(0.1));
    }
    CHECK_THROWS(normalize_mapping(MappingKind::Linear, ops, 1.5));
}
