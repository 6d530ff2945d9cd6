#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sap/config.hpp"
#include "sap/errors.hpp"
#include "sap/experiments.hpp"
#include "sap/scenarios.hpp"
#include "sap/table.hpp"
#include "sap/units.hpp"

using namespace sap;
using nlohmann::json;

namespace {
json base() {
    return json::parse(R"({
      "name": "t",
      "seed": 3,
      "network": {
        "primary_density_per_km2": 80, "secondary_density_per_km2": 16000,
        "primary_power_dbm": 43, "secondary_power_dbm": 23,
        "path_loss_exponent": 4, "pair_distance_m": 3,
        "primary_target_db": -60, "outage_cap": 0.9
      }
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("network parameters round-trip through the config units") {
    for (const NetworkParams& p : {scenarios::sparse_below6(), scenarios::urban_mmw(0.3), scenarios::testbed(1.2)}) {
        const NetworkParams q = network_from_json(network_to_json(p));
        CHECK(q.lambda1 == doctest::Approx(p.lambda1).epsilon(1e-12));
        CHECK(q.p1 == doctest::Approx(p.p1).epsilon(1e-9));
        CHECK(q.p2 == doctest::Approx(p.p2).epsilon(1e-9));
        CHECK(q.gamma == doctest::Approx(p.gamma).epsilon(1e-9));
        CHECK(q.omega == doctest::Approx(p.omega).epsilon(1e-12));
        CHECK(q.regime == p.regime);
        CHECK(q.blockage.has_value() == p.blockage.has_value());
        if (p.blockage) CHECK(q.blockage->lambda_b == doctest::Approx(p.blockage->lambda_b));
    }
}

TEST_CASE("config errors name the offending field") {
    json j = base();
    j["network"]["pair_distance_m"] = -1;
    CHECK(error_of(j).rfind("$.network.pair_distance_m", 0) == 0);

    j = base();
    j["network"]["colour"] = "red";
    CHECK(error_of(j).rfind("$.network.colour: unknown field", 0) == 0);

    j = base();
    j["ase_sweep"] = {{"beta_db", {{"from", 0}, {"to", 10}, {"points", 0}}}};
    CHECK(error_of(j).find("empty sweep") != std::string::npos);
    CHECK(error_of(j).rfind("$.ase_sweep.beta_db.points", 0) == 0);

    j = base();
    j["ase_sweep"] = {{"beta_db", {{"from", 10}, {"to", 0}, {"points", 3}}}};
    CHECK(error_of(j).find("empty sweep") != std::string::npos);

    j = base();
    j["compare_macs"] = {{"beta_over_beta_min", {1, 2}}, {"macs", {"sap", "aloha"}}};
    CHECK(error_of(j).rfind("$.compare_macs.macs[1]", 0) == 0);

    j = base();
    j["network"]["blockage"] = {{"length_m", 10}, {"width_m", 10}, {"factor", 0.04}, {"density_per_km2", 2}};
    CHECK(error_of(j).rfind("$.network.blockage", 0) == 0);

    j = base();
    j["census"] = {{"beamwidths_deg", {30}}};
    CHECK(error_of(j).rfind("$.network.regime", 0) == 0);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sweeps") {
    const Sweep lin{0.0, 10.0, 3, false};
    CHECK(lin.values() == std::vector<double>{0.0, 5.0, 10.0});
    const Sweep lg{1.0, 100.0, 3, true};
    CHECK(lg.values()[1] == doctest::Approx(10.0));
    CHECK(Sweep{2.0, 2.0, 1, false}.values() == std::vector<double>{2.0});
}

TEST_CASE("table formatting is stable") {
    Table t({"a", "b", "c", "d"});
    t.add_row({0.1, 3LL, std::string("x,y"), true});
    t.add_row({std::numeric_limits<double>::infinity(), -2LL, std::string("q\"z"), false});
    CHECK(t.csv() == "a,b,c,d\n0.1,3,\"x,y\",true\ninf,-2,\"q\"\"z\",false\n");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("ase sweep output is reproducible and marks beta_min") {
    json j = base();
    j["ase_sweep"] = {{"beta_db", {{"from", -10}, {"to", 20}, {"points", 7}}}};
    const ExperimentConfig cfg = parse_config(j);
    const CommandResult a = cmd_ase_sweep(cfg);
    const CommandResult b = cmd_ase_sweep(cfg);
    REQUIRE(a.files.size() == 2);
    CHECK(a.files[0].second.csv() == b.files[0].second.csv());
    CHECK(a.files[0].second.size() == 7);

    // tau -> 1 removes the protection constraint.
    json loose = j;
    loose["network"]["outage_cap"] = 0.999999999;
    const auto tight_markers = a.files[1].second.csv();
    const auto loose_markers = cmd_ase_sweep(parse_config(loose)).files[1].second.csv();
    CHECK(tight_markers != loose_markers);

    const auto dir = std::filesystem::temp_directory_path() / "sap_unit_outputs";
    std::filesystem::remove_all(dir);
    write_outputs(dir, "ase-sweep", a, {{"parameters", resolved_parameters(cfg)}});
    write_outputs(dir / "again", "ase-sweep", b, {{"parameters", resolved_parameters(cfg)}});
    CHECK(slurp(dir / "ase_sweep.csv") == slurp(dir / "again" / "ase_sweep.csv"));
    const json side = json::parse(slurp(dir / "ase-sweep.json"));
    CHECK(side.contains("created_utc"));
    CHECK(side["parameters"]["network"]["pair_distance_m"] == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("mac names") {
    const NetworkParams p = scenarios::street_grid_mmw();
    CHECK(mac_from_name("sap", p).kind == MacKind::Sap);
    const MacSpec nb = mac_from_name("no_blockage_op", p);
    REQUIRE(nb.op_model.has_value());
    CHECK(nb.op_model->regime == Regime::Below6);
    CHECK_THROWS_AS(mac_from_name("csma", p), ParameterError);
}
