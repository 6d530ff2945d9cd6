#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/op_analysis.hpp"
#include "sap/rng.hpp"
#include "sap/scenarios.hpp"

using namespace sap;

namespace {
constexpr double kPi = std::numbers::pi;
const NumericsConfig kCfg;

// Success probability at the RX when one primary sits at distance R from the
// TX at a uniform angle and the rest form a PPP outside the ball of radius R
// around the TX. Rayleigh fading on every link, secondaries silent.
double conditioned_coverage(const NetworkParams& p, double R, double beta, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const double disk = 600.0;
    const Point rx{p.d, 0.0};
    int covered = 0;
    for (int k = 0; k < n; ++k) {
        const double a0 = rng.uniform(0, 2 * kPi);
        double interference = p.p1 * rng.exponential() * std::pow(distance({R * std::cos(a0), R * std::sin(a0)}, rx), -p.alpha);
        const auto m = rng.poisson(p.lambda1 * kPi * disk * disk);
        for (std::uint64_t j = 0; j < m; ++j) {
            const double r = disk * std::sqrt(rng.uniform());
            const double a = rng.uniform(0, 2 * kPi);
            const double h = rng.exponential();
            if (r < R) continue;
            interference += p.p1 * h * std::pow(distance({r * std::cos(a), r * std::sin(a)}, rx), -p.alpha);
        }
        const double signal = p.p2 * rng.exponential() * std::pow(p.d, -p.alpha);
        covered += signal >= beta * interference;
    }
    return covered / static_cast<double>(n);
}
}  // namespace

TEST_CASE("below-6 OP against a direct Poisson-field simulation") {
    const NetworkParams p = scenarios::dense_below6();
    for (double R : {4.0, 15.0, 40.0}) {
        const int n = 20000;
        const double mc = conditioned_coverage(p, R, 1.0, n, derive_seed(77, static_cast<int>(R)));
        const double op = op_below6(R, p, 1.0, kCfg).value;
        const double sd = std::sqrt(std::max(mc * (1 - mc), 1e-4) / n);
        CHECK(std::abs(mc - op) < 4.0 * sd);
    }
}

TEST_CASE("rho0 closed form at alpha 4 and general limits") {
    const double inf = std::numeric_limits<double>::infinity();
    for (double beta : {1e-3, 0.1, 1.0, 10.0, 1e3})
        CHECK(rho0(beta, inf, 4.0, kCfg).value == doctest::Approx(0.5 * kPi * std::sqrt(beta)).epsilon(1e-10));
    // Finite t at alpha 4: arctan.
    CHECK(rho0(2.0, 3.0, 4.0, kCfg).value == doctest::Approx(std::sqrt(2.0) * std::atan(3.0)).epsilon(1e-11));
    // rho(a, t) = rho0(a, t) - rho0(a, a^(-2/alpha)) by definition.
    const double a = 3.0, t = 7.0;
    CHECK(rho(a, t, 3.0, kCfg).value ==
          doctest::Approx(rho0(a, t, 3.0, kCfg).value - rho0(a, std::pow(a, -2.0 / 3.0), 3.0, kCfg).value));
    CHECK(rho(a, 0.1, 3.0, kCfg).value < 0.0);
}

TEST_CASE("OP properties over a grid") {
    for (const NetworkParams& p : {scenarios::dense_below6(), scenarios::urban_blockage(0.04),
                                   scenarios::urban_mmw(kPi / 6)}) {
        for (double R : {0.5, 3.0, 10.0, 40.0}) {
            double prev = 1.0 + 1e-12;
            for (double beta : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
                const double v = op_at_radius(R, p, beta, kCfg).value;
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                CHECK(v <= prev + 1e-12);  // decreasing in beta
                prev = v;
            }
        }
        CHECK(op_from_interference(0.0, p, 1.0, kCfg).value == 1.0);
    }
}

TEST_CASE("below-6 OP grows with the empty-ball radius toward 1 and is floored at R = 0") {
    const NetworkParams p = scenarios::dense_below6();
    double prev = 0.0;
    for (double R : {0.0, 1.0, 3.0, 10.0, 30.0, 100.0}) {
        const double v = op_below6(R, p, 1.0, kCfg).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(prev > 0.9);
    CHECK(op_below6(1e-9, p, 1.0, kCfg).value == doctest::Approx(op_floor_below6(p, 1.0)).epsilon(1e-5));
    CHECK(op_floor_below6(p, 1.0) > 0.0);
}

TEST_CASE("empty-ball roots against closed forms") {
    const NetworkParams p = scenarios::dense_below6();
    for (double I : {1e-12, 1e-9, 1e-6, 1e-3}) {
        const double R = empty_ball_radius_below6(I, p, kCfg);
        CHECK(R == doctest::Approx(closed_form::radius_alpha4(I, p.lambda1, p.p1)).epsilon(1e-10));
        // Root of the residual.
        CHECK(std::abs(empty_ball_residual(R, I, p.p1, 2 * kPi * p.lambda1, 4.0, std::numeric_limits<double>::infinity())) <
              1e-9);
    }
    // Larger interference means a nearer primary.
    CHECK(empty_ball_radius_below6(1e-6, p, kCfg) < empty_ball_radius_below6(1e-9, p, kCfg));
    // alpha -> 2 limit: Lambert-W form solves R^2 (I/P1 + 2 pi lambda ln(R/R_L)) = 1.
    const double rl = 50.0, I = 1e-5;
    const double R2 = closed_form::radius_alpha2_los(I, p.lambda1, p.p1, rl);
    CHECK(R2 * R2 * (I / p.p1 + 2 * kPi * p.lambda1 * std::log(R2 / rl)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("vanishing blockage recovers the below-6 OP") {
    NetworkParams q = scenarios::urban_blockage(1e-9);
    q.axis_length = 1e12;
    for (double R : {1.0, 5.0, 30.0})
        CHECK(op_blockage(R, *q.axis_length, q, 1.0, kCfg).value ==
              doctest::Approx(op_below6(R, q, 1.0, kCfg).value).epsilon(1e-6));
}

TEST_CASE("narrow beams raise the mmW OP") {
    const double I = 1e-4;
    const double wide = op_from_interference(I, scenarios::urban_mmw(kPi / 6), 1.0, kCfg).value;
    const double narrow = op_from_interference(I, scenarios::urban_mmw(kPi / 18), 1.0, kCfg).value;
    CHECK(narrow >= wide - 1e-12);
    CHECK(op_from_interference(I, scenarios::urban_mmw(1e-4), 1.0, kCfg).value > 0.99);
}

TEST_CASE("beam geometry helpers") {
    // The exposed angle sweeps 0..pi as the ellipse axis goes from 2R - d to 2R + d.
    const double R = 20.0, d = 5.0;
    CHECK(exposed_angle(R, 2 * R - d, d) == doctest::Approx(0.0).scale(1.0));
    CHECK(exposed_angle(R, 2 * R + d, d) == doctest::Approx(kPi));
    double prev = -1.0;
    for (double L = 2 * R - d; L <= 2 * R + d; L += 1.0) {
        const double u = exposed_angle(R, L, d);
        CHECK(u >= prev);
        prev = u;
    }
    CHECK(beam_edge_angle(10.0, 5.0, kPi) == doctest::Approx(kPi));
    CHECK(beam_edge_angle(100.0, 5.0, kPi / 6) == doctest::Approx(kPi));  // edge never reaches the RX
    const double a = beam_edge_angle(6.0, 5.0, kPi / 18);
    CHECK(a >= 0.0);
    CHECK(a <= kPi);
}
