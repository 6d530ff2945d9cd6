#include "sap/scenarios.hpp"

#include "sap/units.hpp"

namespace sap::scenarios {

namespace {

NetworkParams outdoor(double lambda1_km2, double lambda2_km2, double d, double alpha) {
    NetworkParams p;
    p.lambda1 = units::per_km2_to_per_m2(lambda1_km2);
    p.lambda2 = units::per_km2_to_per_m2(lambda2_km2);
    p.p1 = units::dbm_to_watt(43.0);
    p.p2 = units::dbm_to_watt(23.0);
    p.alpha = alpha;
    p.d = d;
    p.gamma = units::db_to_linear(-60.0);
    p.tau = 0.9;
    return p;
}

BlockageModel blocks(double xi, double len, double wid) { return {xi / (len + wid), len, wid}; }

}  // namespace

NetworkParams testbed(double pair_distance) {
    NetworkParams p = outdoor(7000.0, 0.0, pair_distance, 3.0);
    p.p1 = units::dbm_to_watt(6.06);
    p.p2 = units::dbm_to_watt(3.162);
    return p;
}

NetworkParams dense_below6() { return outdoor(500.0, 16000.0, 2.0, 4.0); }

NetworkParams sparse_below6() { return outdoor(80.0, 16000.0, 3.0, 4.0); }

NetworkParams urban_blockage(double xi) {
    NetworkParams p = outdoor(80.0, 16000.0, 5.0, 2.7);
    p.regime = Regime::Blockage;
    p.blockage = blocks(xi, 10.0, 10.0);
    return p;
}

NetworkParams urban_mmw(double omega, double xi) {
    NetworkParams p = urban_blockage(xi);
    p.regime = Regime::Mmw;
    p.omega = omega;
    return p;
}

NetworkParams street_grid_mmw() {
    NetworkParams p = urban_mmw(units::deg_to_rad(10.0), 0.06);
    p.blockage = blocks(0.06, 30.0, 20.0);
    return p;
}

}  // namespace sap::scenarios
