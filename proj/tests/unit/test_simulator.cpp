#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/scenarios.hpp"
#include "sap/simulator.hpp"

using namespace sap;

namespace {
const NumericsConfig kCfg;

SlotSpec small_slots() {
    SlotSpec s;
    s.n_topologies = 6;
    s.slots_per_topology = 3;
    s.secondary_region = {15.0, 10.0};
    s.primary_half_width = 200.0;
    return s;
}

MacSpec mac(MacKind k, double threshold = 0.0) {
    MacSpec m;
    m.kind = k;
    m.threshold = threshold;
    return m;
}
}  // namespace

TEST_CASE("every MAC sees the same sensed interference in a slot") {
    const NetworkParams p = scenarios::sparse_below6();
    const SapPolicy pol = policy_at(p, 4.0, kCfg);
    const OpTable table(p, 4.0, kCfg);
    const SlotScenario sc = make_slot_scenario(p, pol, small_slots(), 99);
    const auto a = simulate_slot(sc, table, mac(MacKind::Sap), 1);
    const auto b = simulate_slot(sc, table, mac(MacKind::NoPrediction), 1);
    const auto c = simulate_slot(sc, table, mac(MacKind::TxThreshold, 4.0), 1);
    REQUIRE(!a.sensed.empty());
    CHECK(a.sensed == b.sensed);
    CHECK(a.sensed == c.sensed);
    const auto again = simulate_slot(sc, table, mac(MacKind::Sap), 1);
    CHECK(again.accessed == a.accessed);
    const auto other = simulate_slot(sc, table, mac(MacKind::Sap), 2);
    CHECK(other.sensed != a.sensed);  // fading redrawn per slot
}

TEST_CASE("pinned fading is deterministic and slot-independent") {
    const NetworkParams p = scenarios::sparse_below6();
    const SapPolicy pol = policy_at(p, 4.0, kCfg);
    const OpTable table(p, 4.0, kCfg);
    const SlotScenario sc = make_slot_scenario(p, pol, small_slots(), 5);
    const auto a = simulate_slot(sc, table, mac(MacKind::Sap), 0, true);
    const auto b = simulate_slot(sc, table, mac(MacKind::Sap), 7, true);
    CHECK(a.sensed == b.sensed);
}

TEST_CASE("results do not depend on the worker count") {
    const NetworkParams p = scenarios::sparse_below6();
    const SapPolicy pol = policy_at(p, 4.0, kCfg);
    const std::vector<MacSpec> macs{mac(MacKind::Sap), mac(MacKind::NoPrediction)};
    const SimReport one = run_slots(p, pol, macs, small_slots(), 3, 1);
    const SimReport three = run_slots(p, pol, macs, small_slots(), 3, 3);
    for (std::size_t k = 0; k < macs.size(); ++k) {
        CHECK(one.macs[k].topology_ase == three.macs[k].topology_ase);
        CHECK(one.macs[k].primary_outages == three.macs[k].primary_outages);
    }
    OracleSpec o;
    o.n_topologies = 4;
    o.probes_per_topology = 20;
    o.region = {50.0, 100.0};
    const auto r1 = conditional_op_oracle(p, 1.0, o, 8, 1);
    const auto r2 = conditional_op_oracle(p, 1.0, o, 8, 2);
    REQUIRE(r1.samples.size() == r2.samples.size());
    for (std::size_t i = 0; i < r1.samples.size(); ++i) CHECK(r1.samples[i].sir == r2.samples[i].sir);
}

TEST_CASE("a vanishing decoding target covers every probe") {
    const NetworkParams p = scenarios::dense_below6();
    OracleSpec o;
    o.n_topologies = 10;
    o.probes_per_topology = 50;
    o.region = {50.0, 100.0};
    o.min_bin_count = 1;
    o.bins = 5;
    const auto rep = conditional_op_oracle(p, 1e-12, o, 4);
    CHECK(rep.covered_total() == rep.samples.size());
    for (const auto& b : rep.bins) CHECK(b.probability == 1.0);
}

TEST_CASE("without blockages or beams no node is hidden or exposed") {
    NetworkParams p = scenarios::urban_blockage(0.04);
    p.blockage->lambda_b = 0.0;
    p.axis_length = 1e9;
    CensusSpec cs;
    cs.n_topologies = 5;
    cs.probes_per_topology = 20;
    cs.region = {50.0, 100.0};
    const NodeCensus n = node_problem_census(p, cs, 2);
    CHECK(n.probes > 0);
    CHECK(n.exposed == 0);
    CHECK(n.hidden == 0);
    CHECK(n.common == n.visible_tx);
}

TEST_CASE("oracle bins partition the samples and carry Wilson intervals") {
    std::vector<ConditionalSample> s;
    for (int k = 0; k < 1000; ++k) s.push_back({std::pow(10.0, -12 + 6.0 * k / 1000.0), k % 3 == 0, 1.0, 10.0});
    const auto bins = bin_by_interference(s, 10, 0.0, 1.0, 50);
    std::uint64_t total = 0;
    for (const auto& b : bins) {
        total += b.count;
        CHECK(b.ci.contains(b.probability));
        CHECK(b.lo <= b.centre);
        CHECK(b.centre <= b.hi);
    }
    CHECK(total == 1000);
}

TEST_CASE("OP table interpolates the direct evaluation") {
    const NetworkParams p = scenarios::dense_below6();
    const OpTable t(p, 1.0, kCfg);
    for (double I : {1e-11, 3.3e-9, 2e-7, 5e-5}) {
        const double direct = op_from_interference(I, p, 1.0, kCfg).value;
        CHECK(t(I) == doctest::Approx(direct).epsilon(2e-3));
    }
    CHECK(t(0.0) == 1.0);
}

TEST_CASE("naive predictor ignores the receiver geometry") {
    const NetworkParams p = scenarios::dense_below6();
    CHECK(naive_op(1e-9, p, 1.0) >= naive_op(1e-6, p, 1.0));
    CHECK(naive_op(0.0, p, 1.0) == 1.0);
}

TEST_CASE("polyfit recovers an exact polynomial") {
    std::vector<double> x, y;
    for (int k = 0; k < 12; ++k) {
        const double v = 0.01 * k;
        x.push_back(v);
        y.push_back(176.0 - 1318.0 * v + 5e4 * v * v - 2e5 * v * v * v);
    }
    const auto c = polyfit(x, y, 3);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == doctest::Approx(176.0).epsilon(1e-8));
    CHECK(c[1] == doctest::Approx(-1318.0).epsilon(1e-6));
    CHECK(c[3] == doctest::Approx(-2e5).epsilon(1e-5));
}

TEST_CASE("MAC labels") {
    CHECK(mac(MacKind::Sap).label() != mac(MacKind::NoPrediction).label());
    MacSpec named = mac(MacKind::Sap);
    named.name = "custom";
    CHECK(named.label() == "custom");
}
