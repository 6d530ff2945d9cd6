#include <doctest.h>

#include <cmath>

#include "sap/channel.hpp"
#include "sap/errors.hpp"
#include "sap/rng.hpp"
#include "sap/scenarios.hpp"

using namespace sap;

TEST_CASE("fading draws are unit-mean exponential") {
    double s = 0.0, s2 = 0.0;
    int below = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double h = draw_fading(derive_seed(3, k)).h;
        s += h;
        s2 += h * h;
        below += h < std::log(2.0);  // median
    }
    CHECK(s / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(2.0).epsilon(0.03));
    CHECK(below / static_cast<double>(n) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(draw_fading(42).h == draw_fading(42).h);
}

TEST_CASE("path gain respects the regime") {
    NetworkParams p = scenarios::sparse_below6();
    CHECK(path_gain(10.0, p, 5.0) == doctest::Approx(1e-4));
    NetworkParams b = scenarios::urban_blockage(0.04);
    CHECK(path_gain(10.0, b, 5.0) == 0.0);
    CHECK(path_gain(2.0, b, 5.0) == doctest::Approx(std::pow(2.0, -2.7)));
}

TEST_CASE("regime names round-trip") {
    for (Regime r : {Regime::Below6, Regime::Blockage, Regime::Mmw}) CHECK(regime_from_string(to_string(r)) == r);
    CHECK_THROWS_AS(regime_from_string("sub6"), ParameterError);
}

TEST_CASE("SIR with pinned fading equals the hand computation") {
    NetworkParams p = scenarios::sparse_below6();
    Deployment dep;
    dep.primary_txs = {{{10.0, 0.0}, 0.0}, {{0.0, -20.0}, 0.0}};
    dep.secondary_pairs = {{{0.0, 0.0}, {3.0, 0.0}}, {{30.0, 0.0}, {33.0, 0.0}}};
    LinkContext ctx{&p, nullptr, true};
    const double signal = p.p2 * std::pow(3.0, -4.0);
    const double prim = p.p1 * (std::pow(7.0, -4.0) + std::pow(std::hypot(3.0, 20.0), -4.0));
    const double sec = p.p2 * std::pow(27.0, -4.0);
    CHECK(sir_at({3.0, 0.0}, {TxKind::Secondary, 0}, dep, {true, false}, ctx, 1) ==
          doctest::Approx(signal / prim).epsilon(1e-12));
    CHECK(sir_at({3.0, 0.0}, {TxKind::Secondary, 0}, dep, {true, true}, ctx, 1) ==
          doctest::Approx(signal / (prim + sec)).epsilon(1e-12));
    CHECK(sense_interference({0.0, 0.0}, dep, ctx, 1) ==
          doctest::Approx(p.p1 * (std::pow(10.0, -4.0) + std::pow(20.0, -4.0))).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    NetworkParams p = scenarios::sparse_below6();
    p.alpha = 2.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    NetworkParams q = scenarios::sparse_below6();
    q.regime = Regime::Blockage;
    CHECK_THROWS_AS(q.validate(), ParameterError);  // blockage regime without blockages
    CHECK(std::isinf(scenarios::sparse_below6().los_distance()));
    CHECK(scenarios::urban_mmw(0.5).effective_omega() == doctest::Approx(0.5));
    CHECK(scenarios::urban_blockage().effective_omega() == doctest::Approx(2 * 3.141592653589793));
}
