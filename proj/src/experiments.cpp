#include "sap/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sap/errors.hpp"
#include "sap/units.hpp"

namespace sap {

using nlohmann::json;

namespace {

json numerics_json(const NumericsConfig& n) {
    return {{"abs_tol", n.abs_tol},
            {"rel_tol", n.rel_tol},
            {"max_subdivisions", n.max_subdivisions},
            {"cutoff_multiplier", n.infinite_cutoff_multiplier}};
}

json si_json(const NetworkParams& p) {
    json j = {{"lambda1_per_m2", p.lambda1}, {"lambda2_per_m2", p.lambda2}, {"p1_w", p.p1},
              {"p2_w", p.p2},                {"alpha", p.alpha},            {"d_m", p.d},
              {"omega_rad", p.omega},        {"gamma", p.gamma},            {"tau", p.tau},
              {"regime", to_string(p.regime)}};
    if (p.blockage) {
        j["lambda_b_per_m2"] = p.blockage->lambda_b;
        j["blockage_factor"] = p.blockage->factor();
        j["los_distance_m"] = p.los_distance();
        const AxisLength L = p.resolved_axis_length();
        j["axis_length_m"] = L.value;
        j["axis_length_out_of_fit_range"] = L.out_of_fit_range;
    }
    return j;
}

json oracle_json(const OracleSpec& o) {
    return {{"topologies", o.n_topologies},
            {"probes_per_topology", o.probes_per_topology},
            {"half_width_m", o.region.half_width},
            {"guard_m", o.region.guard_margin},
            {"near_disk_radius_m", o.near_disk_radius},
            {"exact_blocking", o.exact_blocking},
            {"bins", o.bins},
            {"lower_quantile", o.lower_quantile},
            {"upper_quantile", o.upper_quantile},
            {"min_bin_count", o.min_bin_count}};
}

json slots_json(const SlotSpec& s) {
    return {{"topologies", s.n_topologies},
            {"slots_per_topology", s.slots_per_topology},
            {"secondary_half_width_m", s.secondary_region.half_width},
            {"secondary_guard_m", s.secondary_region.guard_margin},
            {"primary_half_width_m", s.primary_half_width},
            {"exact_blocking", s.exact_blocking}};
}

template <class T>
const T& need(const std::optional<T>& c, const char* path) {
    if (!c) throw ConfigError(path, "missing section for this command");
    return *c;
}

}  // namespace

json resolved_parameters(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["network"] = network_to_json(cfg.network);
    j["network_si"] = si_json(cfg.network);
    j["numerics"] = numerics_json(cfg.numerics);
    if (cfg.op_curve) {
        const auto& o = *cfg.op_curve;
        json s = {{"beta", o.beta}, {"monte_carlo", o.monte_carlo}, {"oracle", oracle_json(o.oracle)}};
        if (o.radius) {
            s["radius_m"] = *o.radius;
            s["radius_band"] = o.radius_band;
            s["beta_db"] = {{"from", o.beta_db.from}, {"to", o.beta_db.to}, {"points", o.beta_db.points}};
        } else {
            s["interference_dbm"] = {{"from", o.interference_dbm.from},
                                     {"to", o.interference_dbm.to},
                                     {"points", o.interference_dbm.points}};
        }
        j["op_curve"] = s;
    }
    if (cfg.ase_sweep)
        j["ase_sweep"] = {{"beta_db",
                           {{"from", cfg.ase_sweep->beta_db.from},
                            {"to", cfg.ase_sweep->beta_db.to},
                            {"points", cfg.ase_sweep->beta_db.points}}}};
    if (cfg.compare_macs) {
        const auto& m = *cfg.compare_macs;
        j["compare_macs"] = {{"beta_over_beta_min", m.beta_over_beta_min},
                             {"macs", m.macs},
                             {"slots", slots_json(m.spec.slots)},
                             {"pilot", slots_json(m.spec.pilot)},
                             {"threshold_factors", m.spec.threshold_factors}};
    }
    if (cfg.fit_l) {
        const auto& f = *cfg.fit_l;
        j["fit_l"] = {{"xi", f.xi},
                      {"axis_length_m", f.axis_length_m.values()},
                      {"beta", f.beta},
                      {"oracle", oracle_json(f.oracle)}};
    }
    if (cfg.census) {
        std::vector<double> deg;
        for (double w : cfg.census->beamwidths) deg.push_back(units::rad_to_deg(w));
        j["census"] = {{"beamwidths_deg", deg},
                       {"topologies", cfg.census->spec.n_topologies},
                       {"probes_per_topology", cfg.census->spec.probes_per_topology},
                       {"distance_edges_m", cfg.census->spec.distance_edges}};
    }
    return j;
}

// --- op-curve ------------------------------------------------------------------------

CommandResult cmd_op_curve(const ExperimentConfig& cfg) {
    const OpCurveConfig& oc = need(cfg.op_curve, "$.op_curve");
    const NetworkParams& p = cfg.network;
    CommandResult out;
    std::optional<ConditionalOpReport> mc;
    if (oc.monte_carlo) mc = conditional_op_oracle(p, oc.beta, oc.oracle, cfg.seed, cfg.workers);

    double max_quad = 0.0;
    if (oc.radius) {
        const double R = *oc.radius;
        Table t({"beta_db", "beta", "analytic_op", "quadrature_error", "mc_op", "ci_low", "ci_high", "mc_samples"});
        std::vector<const ConditionalSample*> near;
        if (mc)
            for (const auto& s : mc->samples)
                if (std::abs(s.nearest - R) <= oc.radius_band * R) near.push_back(&s);
        for (double db : oc.beta_db.values()) {
            const double beta = units::db_to_linear(db);
            const OpResult r = op_at_radius(R, p, beta, cfg.numerics);
            max_quad = std::max(max_quad, r.quadrature_error_estimate);
            std::uint64_t hit = 0;
            for (const auto* s : near) hit += s->sir >= beta;
            const Interval ci = wilson_interval(hit, near.size());
            const double frac = near.empty() ? std::nan("") : static_cast<double>(hit) / near.size();
            t.add_row({db, beta, r.value, r.quadrature_error_estimate, frac, near.empty() ? std::nan("") : ci.lo,
                       near.empty() ? std::nan("") : ci.hi, static_cast<long long>(near.size())});
        }
        out.files.emplace_back("op_curve_beta", std::move(t));
    } else {
        Table t({"interference_dbm", "interference_w", "empty_ball_radius_m", "analytic_op", "quadrature_error",
                 "nearest_factor", "aggregate_factor", "naive_op"});
        for (double dbm : oc.interference_dbm.values()) {
            const double I = units::dbm_to_watt(dbm);
            const OpResult r = op_from_interference(I, p, oc.beta, cfg.numerics);
            max_quad = std::max(max_quad, r.quadrature_error_estimate);
            t.add_row({dbm, I, r.r_used, r.value, r.quadrature_error_estimate, r.nearest_factor, r.aggregate_factor,
                       naive_op(I, p, oc.beta)});
        }
        out.files.emplace_back("op_curve", std::move(t));
        if (mc) {
            attach_analytic(mc->bins, mc->samples, OpTable(p, oc.beta, cfg.numerics), p);
            Table b({"i_low_w", "i_high_w", "i_centre_w", "i_centre_dbm", "samples", "mc_op", "ci_low", "ci_high",
                     "analytic_op", "naive_op", "qualifying"});
            for (const auto& bin : mc->bins)
                b.add_row({bin.lo, bin.hi, bin.centre, units::watt_to_dbm(bin.centre),
                           static_cast<long long>(bin.count), bin.probability, bin.ci.lo, bin.ci.hi, bin.analytic,
                           bin.naive, !bin.underfilled});
            out.files.emplace_back("op_curve_mc", std::move(b));
        }
    }
    out.diagnostics["max_quadrature_error"] = max_quad;
    if (mc) {
        out.diagnostics["mc_samples"] = mc->samples.size();
        out.diagnostics["rejected_probes"] = mc->rejected_probes;
        out.diagnostics["zero_interference_samples"] = mc->zero_interference;
    }
    return out;
}

// --- ase-sweep -----------------------------------------------------------------------

CommandResult cmd_ase_sweep(const ExperimentConfig& cfg) {
    const AseSweepConfig& ac = need(cfg.ase_sweep, "$.ase_sweep");
    const NetworkParams& p = cfg.network;
    CommandResult out;
    Table t({"beta_db", "beta", "ase", "feasible", "primary_outage", "c_star", "access_clamped", "expected_op"});
    for (double db : ac.beta_db.values()) {
        const double beta = units::db_to_linear(db);
        const AseResult a = ase(p, beta, cfg.numerics);
        const SapPolicy pol = policy_at(p, beta, cfg.numerics);
        t.add_row({db, beta, a.ase, a.feasible, a.constraint_outage, pol.c_star, pol.infeasible_scaling,
                   pol.expected_op});
    }
    out.files.emplace_back("ase_sweep", std::move(t));

    Table m({"marker", "beta", "beta_db"});
    auto add = [&](const std::string& name, double b) { m.add_row({name, b, units::linear_to_db(b)}); };
    try {
        const SapPolicy opt = optimal_beta(p, cfg.numerics);
        add("beta_min", opt.beta_min);
        add("beta_stationary", opt.beta_unconstrained);
        add("beta_star", opt.beta);
        out.diagnostics["optimizer_iterations"] = opt.iterations;
        out.diagnostics["mean_value_radius_m"] = opt.s;
    } catch (const InfeasibleError& e) {
        add("beta_min", std::numeric_limits<double>::infinity());
        out.diagnostics["infeasible"] = e.what();
    }
    out.files.emplace_back("ase_markers", std::move(m));
    return out;
}

// --- compare-macs --------------------------------------------------------------------

CommandResult cmd_compare_macs(const ExperimentConfig& cfg) {
    const CompareMacsConfig& mc = need(cfg.compare_macs, "$.compare_macs");
    const NetworkParams& p = cfg.network;
    const double bmin = beta_min(p, cfg.numerics);
    std::vector<double> grid;
    for (double f : mc.beta_over_beta_min) grid.push_back(f * bmin);
    std::vector<MacSpec> macs;
    for (const auto& name : mc.macs) macs.push_back(mac_from_name(name, p));
    const auto points = compare_macs(p, grid, macs, mc.spec, cfg.seed, cfg.workers, cfg.numerics);

    CommandResult out;
    Table t({"beta", "beta_over_beta_min", "mac", "threshold", "ase", "ci_low", "ci_high", "access_rate",
             "success_rate", "diff_vs_first", "diff_half_width"});
    for (std::size_t b = 0; b < points.size(); ++b) {
        const auto& rep = points[b].report;
        for (std::size_t m = 0; m < rep.macs.size(); ++m) {
            const MacTally& tm = rep.macs[m];
            const MeanCi d = paired_difference(tm.topology_ase, rep.macs.front().topology_ase);
            t.add_row({points[b].beta, mc.beta_over_beta_min[b], mc.macs[m], tm.mac.threshold, tm.ase.mean,
                       tm.ase.lo(), tm.ase.hi(), tm.access_rate(), tm.success_rate(), d.mean, d.half_width});
        }
    }
    out.files.emplace_back("compare_macs", std::move(t));
    out.diagnostics["beta_min"] = bmin;
    return out;
}

// --- fit-l ---------------------------------------------------------------------------

CommandResult cmd_fit_l(const ExperimentConfig& cfg) {
    const FitLConfig& fc = need(cfg.fit_l, "$.fit_l");
    const std::vector<double> l_grid = fc.axis_length_m.values();
    const AxisFit fit = fit_axis_length(cfg.network, fc.xi, fc.beta, l_grid, fc.oracle, cfg.seed, cfg.workers,
                                        cfg.numerics);
    CommandResult out;
    Table scan({"xi", "axis_length_m", "gap"});
    Table best({"xi", "lambda_b_per_km2", "best_axis_length_m", "gap", "flat", "unbounded", "fitted_axis_length_m",
                "published_axis_length_m"});
    for (const auto& pt : fit.points) {
        for (std::size_t i = 0; i < pt.gaps.size(); ++i) scan.add_row({pt.xi, l_grid[i], pt.gaps[i]});
        const double fitted = fit.coefficients.empty() ? std::nan("") : fit.predict(pt.xi);
        best.add_row({pt.xi, units::per_m2_to_per_km2(pt.lambda_b), pt.unbounded ? std::nan("") : pt.best_l, pt.gap,
                      pt.flat, pt.unbounded, fitted, axis_length_from_blockage_factor(pt.xi).value});
    }
    Table coef({"power", "fitted", "published"});
    for (std::size_t k = 0; k < kPublishedAxisFit.size(); ++k)
        coef.add_row({static_cast<long long>(k), k < fit.coefficients.size() ? fit.coefficients[k] : 0.0,
                      kPublishedAxisFit[k]});
    out.files.emplace_back("fit_l_scan", std::move(scan));
    out.files.emplace_back("fit_l", std::move(best));
    out.files.emplace_back("fit_l_coefficients", std::move(coef));
    out.diagnostics["sse"] = fit.sse;
    out.diagnostics["degree"] = fit.coefficients.empty() ? -1 : static_cast<int>(fit.coefficients.size()) - 1;
    return out;
}

// --- census --------------------------------------------------------------------------

CommandResult cmd_census(const ExperimentConfig& cfg) {
    const CensusConfig& cc = need(cfg.census, "$.census");
    CommandResult out;
    Table t({"beamwidth_deg", "probes", "visible_tx", "visible_rx", "common", "exposed", "hidden", "exposed_rate",
             "hidden_rate"});
    Table d({"beamwidth_deg", "nearest_low_m", "nearest_high_m", "count", "exposed", "exposed_rate"});
    for (double w : cc.beamwidths) {
        NetworkParams p = cfg.network;
        p.omega = w;
        if (w < 2.0 * std::numbers::pi - 1e-12) p.regime = Regime::Mmw;
        // Same seed for every beamwidth: the runs differ only in the beams.
        const NodeCensus c = node_problem_census(p, cc.spec, cfg.seed, cfg.workers);
        const double deg = units::rad_to_deg(w);
        t.add_row({deg, static_cast<long long>(c.probes), static_cast<long long>(c.visible_tx),
                   static_cast<long long>(c.visible_rx), static_cast<long long>(c.common),
                   static_cast<long long>(c.exposed), static_cast<long long>(c.hidden), c.exposed_rate(),
                   c.hidden_rate()});
        for (const auto& b : c.nearest)
            d.add_row({deg, b.lo, b.hi, static_cast<long long>(b.count), static_cast<long long>(b.exposed), b.rate()});
    }
    out.files.emplace_back("census", std::move(t));
    out.files.emplace_back("census_by_distance", std::move(d));
    return out;
}

// --- output --------------------------------------------------------------------------

void write_outputs(const std::filesystem::path& dir, const std::string& command, const CommandResult& result,
                   const json& metadata) {
    std::filesystem::create_directories(dir);
    json side = metadata;
    side["command"] = command;
    side["diagnostics"] = result.diagnostics;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    side["created_utc"] = ts.str();
    json files = json::array();
    for (const auto& [stem, table] : result.files) {
        const auto path = dir / (stem + ".csv");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << table.csv();
        files.push_back({{"file", stem + ".csv"}, {"columns", table.columns()}, {"rows", table.size()}});
    }
    side["outputs"] = files;
    std::ofstream f(dir / (command + ".json"), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / (command + ".json")).string());
    f << side.dump(2) << '\n';
}

}  // namespace sap
