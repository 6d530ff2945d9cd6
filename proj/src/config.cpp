#include "sap/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "sap/errors.hpp"
#include "sap/units.hpp"

namespace sap {

using nlohmann::json;

std::vector<double> Sweep::values() const {
    std::vector<double> v;
    if (points <= 0) return v;
    if (points == 1) return {from};
    v.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        v.push_back(log ? from * std::pow(to / from, t) : from + (to - from) * t);
    }
    return v;
}

namespace {

// Wraps one JSON object: typed lookups that report the field path, and a
// final check that every key was recognised.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(at(key), "must be finite");
        return x;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    double positive(const std::string& key) {
        const double x = number(key);
        if (!(x > 0.0)) throw ConfigError(at(key), "must be positive");
        return x;
    }
    double positive(const std::string& key, double fallback) { return has(key) ? positive(key) : fallback; }

    double non_negative(const std::string& key) {
        const double x = number(key);
        if (!(x >= 0.0)) throw ConfigError(at(key), "must be non-negative");
        return x;
    }

    long long integer(const std::string& key, long long lo, long long hi) {
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        const auto x = v.get<long long>();
        if (x < lo || x > hi)
            throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }
    long long integer(const std::string& key, long long lo, long long hi, long long fallback) {
        return has(key) ? integer(key, lo, hi) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    Reader child(const std::string& key) { return Reader(raw(key), at(key)); }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Sweep read_sweep(Reader r, bool positive_ends) {
    Sweep s;
    s.from = r.number("from");
    s.to = r.number("to");
    s.points = static_cast<int>(r.integer("points", 0, 100000));
    const std::string scale = r.text("scale", "linear");
    if (scale != "linear" && scale != "log") throw ConfigError(r.at("scale"), "expected 'linear' or 'log'");
    s.log = scale == "log";
    if (s.points == 0) throw ConfigError(r.at("points"), "empty sweep");
    if (s.to < s.from) throw ConfigError(r.at("to"), "empty sweep: 'to' is below 'from'");
    if ((s.log || positive_ends) && !(s.from > 0.0)) throw ConfigError(r.at("from"), "must be positive");
    r.finish();
    return s;
}

Region read_region(Reader r, Region fallback) {
    Region g;
    g.half_width = r.positive("half_width_m", fallback.half_width);
    g.guard_margin = r.has("guard_m") ? r.non_negative("guard_m") : fallback.guard_margin;
    r.finish();
    return g;
}

OracleSpec read_oracle(Reader r) {
    OracleSpec o;
    o.n_topologies = static_cast<int>(r.integer("topologies", 1, 10000000, o.n_topologies));
    o.probes_per_topology = static_cast<int>(r.integer("probes_per_topology", 1, 1000000, o.probes_per_topology));
    if (r.has("region")) o.region = read_region(r.child("region"), o.region);
    if (r.has("near_disk_radius_m")) o.near_disk_radius = r.non_negative("near_disk_radius_m");
    o.exact_blocking = r.boolean("exact_blocking", o.exact_blocking);
    o.blockage_cell = r.positive("blockage_cell_m", o.blockage_cell);
    o.bins = static_cast<int>(r.integer("bins", 1, 10000, o.bins));
    o.lower_quantile = r.number("lower_quantile", o.lower_quantile);
    o.upper_quantile = r.number("upper_quantile", o.upper_quantile);
    if (!(o.lower_quantile >= 0.0 && o.lower_quantile < o.upper_quantile && o.upper_quantile <= 1.0))
        throw ConfigError(r.at("upper_quantile"), "quantiles must satisfy 0 <= lower < upper <= 1");
    o.min_bin_count = static_cast<std::uint64_t>(r.integer("min_bin_count", 1, 1000000000, 100));
    r.finish();
    return o;
}

SlotSpec read_slots(Reader r, SlotSpec s) {
    s.n_topologies = static_cast<int>(r.integer("topologies", 1, 10000000, s.n_topologies));
    s.slots_per_topology = static_cast<int>(r.integer("slots_per_topology", 1, 1000000, s.slots_per_topology));
    if (r.has("secondary_region")) s.secondary_region = read_region(r.child("secondary_region"), s.secondary_region);
    s.primary_half_width = r.positive("primary_half_width_m", s.primary_half_width);
    s.exact_blocking = r.boolean("exact_blocking", s.exact_blocking);
    r.finish();
    return s;
}

NumericsConfig read_numerics(Reader r) {
    NumericsConfig n;
    n.abs_tol = r.positive("abs_tol", n.abs_tol);
    n.rel_tol = r.positive("rel_tol", n.rel_tol);
    n.max_subdivisions = static_cast<int>(r.integer("max_subdivisions", 1, 10000000, n.max_subdivisions));
    n.infinite_cutoff_multiplier = r.positive("cutoff_multiplier", n.infinite_cutoff_multiplier);
    r.finish();
    try {
        n.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("$.numerics", e.what());
    }
    return n;
}

}  // namespace

NetworkParams network_from_json(const json& j, const std::string& path) {
    Reader r(j, path);
    NetworkParams p;
    try {
        p.regime = regime_from_string(r.text("regime", "below6"));
    } catch (const ParameterError& e) {
        throw ConfigError(r.at("regime"), e.what());
    }
    p.lambda1 = units::per_km2_to_per_m2(r.non_negative("primary_density_per_km2"));
    p.lambda2 = r.has("secondary_density_per_km2") ? units::per_km2_to_per_m2(r.non_negative("secondary_density_per_km2"))
                                                   : 0.0;
    p.p1 = units::dbm_to_watt(r.number("primary_power_dbm"));
    p.p2 = units::dbm_to_watt(r.number("secondary_power_dbm"));
    p.alpha = r.number("path_loss_exponent");
    if (!(p.alpha > 2.0)) throw ConfigError(r.at("path_loss_exponent"), "must exceed 2");
    p.d = r.positive("pair_distance_m");
    p.omega = units::deg_to_rad(r.number("beamwidth_deg", 360.0));
    if (!(p.omega > 0.0) || p.omega > 2.0 * std::numbers::pi + 1e-12)
        throw ConfigError(r.at("beamwidth_deg"), "must lie in (0, 360]");
    p.gamma = units::db_to_linear(r.number("primary_target_db", 0.0));
    p.tau = r.number("outage_cap", p.tau);
    if (!(p.tau > 0.0 && p.tau < 1.0)) throw ConfigError(r.at("outage_cap"), "must lie in (0, 1)");
    if (r.has("blockage")) {
        Reader b = r.child("blockage");
        BlockageModel m;
        m.d_len = b.positive("length_m");
        m.d_wid = b.positive("width_m");
        const bool by_density = b.has("density_per_km2");
        const bool by_factor = b.has("factor");
        if (by_density == by_factor)
            throw ConfigError(r.at("blockage"), "give exactly one of density_per_km2 and factor");
        m.lambda_b = by_density ? units::per_km2_to_per_m2(b.non_negative("density_per_km2"))
                                : b.non_negative("factor") / (m.d_len + m.d_wid);
        b.finish();
        p.blockage = m;
    }
    if (r.has("axis_length_m")) p.axis_length = r.positive("axis_length_m");
    r.finish();
    try {
        p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(path, e.what());
    }
    return p;
}

json network_to_json(const NetworkParams& p) {
    json j;
    j["regime"] = to_string(p.regime);
    j["primary_density_per_km2"] = units::per_m2_to_per_km2(p.lambda1);
    j["secondary_density_per_km2"] = units::per_m2_to_per_km2(p.lambda2);
    j["primary_power_dbm"] = units::watt_to_dbm(p.p1);
    j["secondary_power_dbm"] = units::watt_to_dbm(p.p2);
    j["path_loss_exponent"] = p.alpha;
    j["pair_distance_m"] = p.d;
    j["beamwidth_deg"] = units::rad_to_deg(p.omega);
    j["primary_target_db"] = units::linear_to_db(p.gamma);
    j["outage_cap"] = p.tau;
    if (p.blockage) {
        j["blockage"] = {{"density_per_km2", units::per_m2_to_per_km2(p.blockage->lambda_b)},
                         {"length_m", p.blockage->d_len},
                         {"width_m", p.blockage->d_wid}};
    }
    if (p.axis_length) j["axis_length_m"] = *p.axis_length;
    return j;
}

MacSpec mac_from_name(const std::string& name, const NetworkParams& p) {
    MacSpec m;
    if (name == "sap") m.kind = MacKind::Sap;
    else if (name == "no_prediction") m.kind = MacKind::NoPrediction;
    else if (name == "tx_threshold") m.kind = MacKind::TxThreshold;
    else if (name == "genie_rx") m.kind = MacKind::GenieRx;
    else if (name == "no_blockage_op") {
        NetworkParams q = p;
        q.regime = Regime::Below6;
        q.omega = 2.0 * std::numbers::pi;
        m.op_model = q;
        m.name = name;
    } else {
        throw ParameterError("unknown MAC '" + name + "'");
    }
    return m;
}

ExperimentConfig parse_config(const json& j) {
    Reader r(j, "$");
    ExperimentConfig c;
    c.name = r.text("name", "experiment");
    c.seed = static_cast<std::uint64_t>(r.integer("seed", 0, std::numeric_limits<long long>::max(), 1));
    c.workers = static_cast<int>(r.integer("workers", 1, 1024, 1));
    if (r.has("numerics")) c.numerics = read_numerics(r.child("numerics"));
    c.network = network_from_json(r.raw("network"), r.at("network"));

    if (r.has("op_curve")) {
        Reader o = r.child("op_curve");
        OpCurveConfig oc;
        oc.beta = units::db_to_linear(o.number("beta_db", 0.0));
        if (o.has("radius_m")) {
            oc.radius = o.positive("radius_m");
            oc.beta_db = read_sweep(o.child("beta_db_sweep"), false);
            oc.radius_band = o.positive("radius_band", oc.radius_band);
        } else {
            oc.interference_dbm = read_sweep(o.child("interference_dbm"), false);
        }
        oc.monte_carlo = o.boolean("monte_carlo", true);
        if (o.has("oracle")) oc.oracle = read_oracle(o.child("oracle"));
        o.finish();
        c.op_curve = oc;
    }
    if (r.has("ase_sweep")) {
        Reader a = r.child("ase_sweep");
        AseSweepConfig ac;
        ac.beta_db = read_sweep(a.child("beta_db"), false);
        a.finish();
        c.ase_sweep = ac;
    }
    if (r.has("compare_macs")) {
        Reader m = r.child("compare_macs");
        CompareMacsConfig mc;
        mc.beta_over_beta_min = m.numbers("beta_over_beta_min");
        if (mc.beta_over_beta_min.empty()) throw ConfigError(m.at("beta_over_beta_min"), "empty sweep");
        for (std::size_t i = 0; i < mc.beta_over_beta_min.size(); ++i)
            if (!(mc.beta_over_beta_min[i] > 0.0))
                throw ConfigError(m.at("beta_over_beta_min") + "[" + std::to_string(i) + "]", "must be positive");
        mc.macs = m.strings("macs");
        if (mc.macs.empty()) throw ConfigError(m.at("macs"), "no MAC listed");
        for (std::size_t i = 0; i < mc.macs.size(); ++i) {
            try {
                (void)mac_from_name(mc.macs[i], c.network);
            } catch (const ParameterError& e) {
                throw ConfigError(m.at("macs") + "[" + std::to_string(i) + "]", e.what());
            }
        }
        mc.spec = default_compare_spec();
        if (m.has("slots")) mc.spec.slots = read_slots(m.child("slots"), mc.spec.slots);
        if (m.has("pilot")) mc.spec.pilot = read_slots(m.child("pilot"), mc.spec.pilot);
        m.finish();
        c.compare_macs = mc;
    }
    if (r.has("fit_l")) {
        Reader f = r.child("fit_l");
        FitLConfig fc;
        fc.xi = f.numbers("xi");
        if (fc.xi.empty()) throw ConfigError(f.at("xi"), "empty sweep");
        fc.axis_length_m = read_sweep(f.child("axis_length_m"), true);
        fc.beta = units::db_to_linear(f.number("beta_db", 0.0));
        if (f.has("oracle")) fc.oracle = read_oracle(f.child("oracle"));
        f.finish();
        if (c.network.regime != Regime::Blockage) throw ConfigError("$.network.regime", "fit_l needs 'blockage'");
        c.fit_l = fc;
    }
    if (r.has("census")) {
        Reader n = r.child("census");
        CensusConfig cc;
        for (double deg : n.numbers("beamwidths_deg")) {
            if (!(deg > 0.0 && deg <= 360.0)) throw ConfigError(n.at("beamwidths_deg"), "beamwidths must lie in (0, 360]");
            cc.beamwidths.push_back(units::deg_to_rad(deg));
        }
        if (cc.beamwidths.empty()) throw ConfigError(n.at("beamwidths_deg"), "empty sweep");
        cc.spec.n_topologies = static_cast<int>(n.integer("topologies", 1, 10000000, cc.spec.n_topologies));
        cc.spec.probes_per_topology =
            static_cast<int>(n.integer("probes_per_topology", 1, 1000000, cc.spec.probes_per_topology));
        if (n.has("region")) cc.spec.region = read_region(n.child("region"), cc.spec.region);
        if (n.has("distance_edges_m")) cc.spec.distance_edges = n.numbers("distance_edges_m");
        n.finish();
        if (c.network.regime == Regime::Below6) throw ConfigError("$.network.regime", "census needs blockages");
        c.census = cc;
    }
    if (r.has("validate")) {
        Reader v = r.child("validate");
        c.validate.budget_scale = v.positive("budget_scale", 1.0);
        v.finish();
    }
    r.finish();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot read '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace sap
