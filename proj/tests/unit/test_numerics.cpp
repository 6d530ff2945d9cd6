#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/numerics.hpp"
#include "sap/rng.hpp"
#include "sap/stats.hpp"
#include "sap/units.hpp"

using namespace sap;

TEST_CASE("integrate reproduces elementary integrals") {
    const NumericsConfig cfg;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0, cfg).value ==
          doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
    // Integrable endpoint singularity.
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, cfg).value ==
          doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("integrate reports exhaustion") {
    NumericsConfig cfg;
    cfg.max_subdivisions = 2;
    cfg.abs_tol = 1e-300;
    cfg.rel_tol = 1e-300;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, cfg), NumericError);
}

TEST_CASE("power tail integral against the Beta-function closed form") {
    const NumericsConfig cfg;
    for (double p : {1.35, 2.0, 3.0, 5.0}) {
        const double full = (std::numbers::pi / p) / std::sin(std::numbers::pi / p);
        CHECK(power_tail_full(p) == doctest::Approx(full).epsilon(1e-14));
        const double inf = std::numeric_limits<double>::infinity();
        CHECK(power_tail_integral(p, 0.0, inf, cfg).value == doctest::Approx(full).epsilon(1e-9));
        // Additivity across the u = 1 seam.
        const double a = power_tail_integral(p, 0.0, 3.0, cfg).value;
        const double b = power_tail_integral(p, 3.0, inf, cfg).value;
        CHECK(a + b == doctest::Approx(full).epsilon(1e-9));
    }
    // p = 2: arctan.
    CHECK(power_tail_integral(2.0, 0.5, 4.0, cfg).value ==
          doctest::Approx(std::atan(4.0) - std::atan(0.5)).epsilon(1e-11));
}

TEST_CASE("bracketing and bisection") {
    const auto f = [](double x) { return x * x * x - 10.0; };
    const Bracket b = find_bracket(f, 0.1, 0.2, 2.0);
    CHECK(f(b.lo) * f(b.hi) <= 0.0);
    CHECK(bisect(f, b) == doctest::Approx(std::cbrt(10.0)).epsilon(1e-14));
    CHECK_THROWS_AS(find_bracket([](double) { return 1.0; }, 1.0, 2.0, 2.0, 10), NumericError);
}

TEST_CASE("lambert_w_of_exp solves w + ln w = ell, including overflow range") {
    for (double ell : {-20.0, -1.0, 0.0, 1.0, 5.0, 50.0, 800.0, 1e5}) {
        const double w = lambert_w_of_exp(ell);
        CHECK(w > 0.0);
        CHECK(w + std::log(w) == doctest::Approx(ell).epsilon(1e-12).scale(1.0));
    }
    CHECK(lambert_w_of_exp(1.0) == doctest::Approx(1.0));
}

TEST_CASE("safe_acos clamps rounding only") {
    CHECK(safe_acos(1.0 + 1e-14) == 0.0);
    CHECK(safe_acos(-1.0 - 1e-14) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(safe_acos(1.01), NumericError);
}

TEST_CASE("unit conversions round-trip") {
    for (double dbm : {-120.0, -60.0, 0.0, 6.06, 23.0, 43.0}) {
        CHECK(units::watt_to_dbm(units::dbm_to_watt(dbm)) == doctest::Approx(dbm).epsilon(1e-9).scale(1.0));
    }
    CHECK(units::dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(units::rad_to_deg(units::deg_to_rad(10.0)) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(units::per_m2_to_per_km2(units::per_km2_to_per_m2(80.0)) == doctest::Approx(80.0));
}

TEST_CASE("seed derivation is deterministic and separates children") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(to_unit(0) == 0.0);
    CHECK(to_unit(~0ULL) < 1.0);
}

TEST_CASE("Wilson interval and paired differences") {
    const Interval w = wilson_interval(50, 100);
    CHECK(w.contains(0.5));
    CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(wilson_interval(0, 0).width() == 1.0);
    const MeanCi d = paired_difference({1.0, 2.0, 3.0}, {0.5, 1.5, 2.5});
    CHECK(d.mean == doctest::Approx(0.5));
    CHECK(d.half_width == doctest::Approx(0.0).scale(1.0));
}
