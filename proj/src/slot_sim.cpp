#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "parallel.hpp"
#include "sap/errors.hpp"
#include "sap/rng.hpp"
#include "sap/simulator.hpp"

namespace sap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream tags under a slot seed.
enum : std::uint64_t { kSense = 1, kAccess = 2, kRx = 3, kPrimaryRx = 4 };

}  // namespace

std::string to_string(MacKind k) {
    switch (k) {
        case MacKind::Sap: return "sap";
        case MacKind::NoPrediction: return "no_prediction";
        case MacKind::TxThreshold: return "tx_threshold";
        case MacKind::GenieRx: return "genie_rx";
        case MacKind::Mapped: return "mapped";
    }
    return "unknown";
}

std::string MacSpec::label() const {
    if (!name.empty()) return name;
    std::ostringstream os;
    switch (kind) {
        case MacKind::Sap:
        case MacKind::NoPrediction: return to_string(kind);
        case MacKind::TxThreshold:
        case MacKind::GenieRx: os << to_string(kind) << "@" << threshold; return os.str();
        case MacKind::Mapped: os << to_string(mapping.kind) << "@" << mapping.parameter; return os.str();
    }
    return "unknown";
}

double MacTally::access_rate() const {
    return pair_slots ? static_cast<double>(accessed) / static_cast<double>(pair_slots) : 0.0;
}

double MacTally::success_rate() const {
    return pair_slots ? static_cast<double>(covered) / static_cast<double>(pair_slots) : 0.0;
}

double MacTally::primary_outage() const {
    return primary_samples ? static_cast<double>(primary_outages) / static_cast<double>(primary_samples) : 0.0;
}

const MacTally& SimReport::tally(const std::string& label) const {
    for (const auto& m : macs)
        if (m.label == label) return m;
    throw ParameterError("no MAC labelled '" + label + "' in report");
}

// --- Scenario ------------------------------------------------------------------------

SlotScenario make_slot_scenario(const NetworkParams& p, const SapPolicy& policy, const SlotSpec& spec,
                                std::uint64_t seed) {
    p.validate();
    spec.secondary_region.validate();
    if (policy.regime != p.regime) throw ParameterError("run_slots: policy regime does not match the network");
    if (spec.secondary_region.outer_half_width() > spec.primary_half_width)
        throw ParameterError("run_slots: secondary window must fit inside the primary window");
    SlotScenario sc;
    sc.params = p;
    sc.policy = policy;
    sc.seed = seed;
    sc.exact_blocking = spec.exact_blocking;
    sc.scene = sample_scene(p, Region{spec.primary_half_width, 0.0}, derive_seed(seed, 21), spec.blockage_cell);
    if (!spec.exact_blocking) sc.scene.index = BlockageIndex();
    const auto txs = sample_ppp(p.lambda2, spec.secondary_region, derive_seed(seed, 22));
    SplitMix64 rng(derive_seed(seed, 23));
    auto& pairs = sc.scene.deployment.secondary_pairs;
    for (const Point& tx : txs) {
        SecondaryPair pair;
        if (!place_pair(tx, p.d, sc.scene, rng, pair)) continue;
        pairs.push_back(pair);
        sc.inner.push_back(spec.secondary_region.in_inner(pair.rx));
    }
    // Reference primary RX at the origin, served by the nearest primary with
    // an unobstructed path (its beam is assumed to point at the RX).
    const LinkContext ctx = scene_context(sc.params, sc.scene, sc.exact_blocking);
    const Point origin{};
    double best = kInf;
    const auto& prim = sc.scene.deployment.primary_txs;
    for (std::size_t j = 0; j < prim.size(); ++j) {
        const double r = distance(prim[j].pos, origin);
        bool open = true;
        if (p.regime != Regime::Below6)
            open = ctx.blockages ? !ctx.blockages->blocked(prim[j].pos, origin) : r <= p.los_distance();
        if (open && r < best) {
            best = r;
            sc.serving_primary = static_cast<long>(j);
        }
    }
    return sc;
}

namespace {

struct SlotInputs {
    std::uint64_t slot_seed = 0;
    std::vector<double> sensed;
    std::vector<double> uniforms;
    std::vector<double> genie_sir;  // empty unless requested
};

SlotInputs slot_inputs(const SlotScenario& sc, const LinkContext& ctx, int slot, bool want_genie) {
    SlotInputs in;
    in.slot_seed = derive_seed(sc.seed, 31, static_cast<std::uint64_t>(slot));
    const auto& dep = sc.scene.deployment;
    const std::size_t n = dep.secondary_pairs.size();
    in.sensed.resize(n);
    in.uniforms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.sensed[i] = sense_interference(dep.secondary_pairs[i].tx, dep, ctx, derive_seed(in.slot_seed, kSense, i));
        in.uniforms[i] = to_unit(mix64(derive_seed(in.slot_seed, kAccess, i)));
    }
    if (want_genie) {
        in.genie_sir.resize(n);
        const double path = std::pow(sc.params.d, -sc.params.alpha);
        for (std::size_t i = 0; i < n; ++i) {
            // Same RX fading stream as the SIR evaluation proper.
            const std::uint64_t rs = derive_seed(in.slot_seed, kRx, i);
            const double signal = sc.params.p2 * link_fading(ctx, rs, {TxKind::Secondary, i}) * path;
            const double interference = sense_interference(dep.secondary_pairs[i].rx, dep, ctx, rs);
            in.genie_sir[i] = interference > 0.0 ? signal / interference : kInf;
        }
    }
    return in;
}

SlotOutcome apply_mac(const SlotScenario& sc, const LinkContext& ctx, const SlotInputs& in, const OpTable& table,
                      const MacSpec& mac, bool secondary_sir = true, bool primary_sir = true) {
    const NetworkParams& p = sc.params;
    const auto& dep = sc.scene.deployment;
    const std::size_t n = dep.secondary_pairs.size();
    const double c = sc.policy.applied_scaling();
    const double beta = sc.policy.beta;
    SlotOutcome out;
    out.sensed = in.sensed;
    out.op_estimate.assign(n, kNaN);
    out.accessed.assign(n, false);
    out.rx_sir.assign(n, kNaN);
    out.covered.assign(n, false);
    const double signal_scale = p.p2 * std::pow(p.d, -p.alpha);
    for (std::size_t i = 0; i < n; ++i) {
        const double I = in.sensed[i];
        double a = 0.0;
        switch (mac.kind) {
            case MacKind::Sap:
                out.op_estimate[i] = table(I);
                a = std::min(1.0, c * out.op_estimate[i]);
                break;
            case MacKind::NoPrediction:
                out.op_estimate[i] = naive_op(I, p, beta);
                a = std::min(1.0, c * out.op_estimate[i]);
                break;
            case MacKind::TxThreshold: a = (I > 0.0 ? signal_scale / I : kInf) >= mac.threshold ? 1.0 : 0.0; break;
            case MacKind::GenieRx:
                if (in.genie_sir.empty()) throw ParameterError("genie MAC needs RX-side inputs");
                a = in.genie_sir[i] >= mac.threshold ? 1.0 : 0.0;
                break;
            case MacKind::Mapped:
                out.op_estimate[i] = table(I);
                a = mac.mapping(out.op_estimate[i]);
                break;
        }
        out.accessed[i] = in.uniforms[i] < a;
    }
    for (std::size_t i = 0; i < n && secondary_sir; ++i) {
        if (!out.accessed[i] || !sc.inner[i]) continue;
        out.rx_sir[i] = sir_at(dep.secondary_pairs[i].rx, {TxKind::Secondary, i}, dep, out.accessed, ctx,
                               derive_seed(in.slot_seed, kRx, i));
        out.covered[i] = out.rx_sir[i] >= beta;
    }
    out.primary_sir = kNaN;
    if (primary_sir && !dep.primary_txs.empty()) {
        if (sc.serving_primary >= 0) {
            out.primary_sir = sir_at(Point{}, {TxKind::Primary, static_cast<std::size_t>(sc.serving_primary)}, dep,
                                     out.accessed, ctx, derive_seed(in.slot_seed, kPrimaryRx));
            out.primary_outage = out.primary_sir < p.gamma;
        } else {
            out.primary_outage = true;  // no primary reaches the reference RX
        }
    }
    return out;
}

void count_node_problems(const SlotScenario& sc, const LinkContext& ctx, std::uint64_t& hidden,
                         std::uint64_t& exposed) {
    const auto& dep = sc.scene.deployment;
    for (std::size_t i = 0; i < dep.secondary_pairs.size(); ++i) {
        if (!sc.inner[i]) continue;
        for (const PrimaryTx& j : dep.primary_txs) {
            const bool vt = primary_reaches(ctx, j, dep.secondary_pairs[i].tx);
            const bool vr = primary_reaches(ctx, j, dep.secondary_pairs[i].rx);
            hidden += !vt && vr;
            exposed += vt && !vr;
        }
    }
}

}  // namespace

SlotOutcome simulate_slot(const SlotScenario& sc, const OpTable& table, const MacSpec& mac, int slot,
                          bool pin_fading) {
    LinkContext ctx = scene_context(sc.params, sc.scene, sc.exact_blocking);
    ctx.pin_fading = pin_fading;
    const SlotInputs in = slot_inputs(sc, ctx, slot, mac.kind == MacKind::GenieRx);
    std::optional<OpTable> own;
    if (mac.op_model) own.emplace(*mac.op_model, sc.policy.beta);
    SlotOutcome out = apply_mac(sc, ctx, in, own ? *own : table, mac);
    count_node_problems(sc, ctx, out.hidden_node_events, out.exposed_node_events);
    return out;
}

namespace {

struct TopologyTally {
    std::vector<MacTally> macs;
    std::uint64_t hidden = 0;
    std::uint64_t exposed = 0;
};

TopologyTally run_topology(const NetworkParams& p, const SapPolicy& policy, const std::vector<MacSpec>& macs,
                           const SlotSpec& spec, const std::vector<const OpTable*>& tables, std::uint64_t seed) {
    const SlotScenario sc = make_slot_scenario(p, policy, spec, seed);
    const LinkContext ctx = scene_context(sc.params, sc.scene, sc.exact_blocking);
    const bool genie = std::any_of(macs.begin(), macs.end(), [](const MacSpec& m) { return m.kind == MacKind::GenieRx; });
    TopologyTally t;
    count_node_problems(sc, ctx, t.hidden, t.exposed);
    t.macs.resize(macs.size());
    const auto n_inner = static_cast<std::uint64_t>(std::count(sc.inner.begin(), sc.inner.end(), true));
    for (int s = 0; s < spec.slots_per_topology; ++s) {
        const SlotInputs in = slot_inputs(sc, ctx, s, genie);
        for (std::size_t m = 0; m < macs.size(); ++m) {
            const SlotOutcome o =
                apply_mac(sc, ctx, in, *tables[m], macs[m], spec.tally_secondaries, spec.tally_primary);
            MacTally& tm = t.macs[m];
            if (spec.tally_secondaries) {
                tm.pair_slots += n_inner;
                for (std::size_t i = 0; i < sc.inner.size(); ++i) {
                    if (!sc.inner[i]) continue;
                    tm.accessed += o.accessed[i];
                    tm.covered += o.covered[i];
                }
            }
            if (spec.tally_primary && !sc.scene.deployment.primary_txs.empty()) {
                ++tm.primary_samples;
                tm.primary_outages += o.primary_outage;
            }
        }
    }
    return t;
}

}  // namespace

SimReport run_slots(const NetworkParams& p, const SapPolicy& policy, const std::vector<MacSpec>& macs,
                    const SlotSpec& spec, std::uint64_t seed, int workers) {
    p.validate();
    if (policy.regime != p.regime) throw ParameterError("run_slots: policy regime does not match the network");
    if (macs.empty()) throw ParameterError("run_slots: no MAC to simulate");
    if (spec.n_topologies < 1 || spec.slots_per_topology < 1)
        throw ParameterError("run_slots: need at least one topology and one slot");
    const OpTable table(p, policy.beta);
    std::vector<std::optional<OpTable>> own(macs.size());
    std::vector<const OpTable*> tables;
    for (std::size_t m = 0; m < macs.size(); ++m) {
        if (macs[m].op_model) own[m].emplace(*macs[m].op_model, policy.beta);
        tables.push_back(own[m] ? &*own[m] : &table);
    }
    auto parts = detail::map_indexed<TopologyTally>(spec.n_topologies, workers, [&](int t) {
        return run_topology(p, policy, macs, spec, tables, derive_seed(seed, static_cast<std::uint64_t>(t)));
    });
    SimReport rep;
    rep.regime = p.regime;
    rep.beta = policy.beta;
    rep.n_topologies = spec.n_topologies;
    rep.slots_per_topology = spec.slots_per_topology;
    rep.macs.resize(macs.size());
    const double side = 2.0 * spec.secondary_region.half_width;
    const double rate_per_area = std::log1p(policy.beta) / (side * side * spec.slots_per_topology);
    for (std::size_t m = 0; m < macs.size(); ++m) {
        MacTally& out = rep.macs[m];
        out.mac = macs[m];
        out.label = macs[m].label();
        for (const auto& part : parts) {
            const MacTally& t = part.macs[m];
            out.pair_slots += t.pair_slots;
            out.accessed += t.accessed;
            out.covered += t.covered;
            out.primary_samples += t.primary_samples;
            out.primary_outages += t.primary_outages;
            out.topology_ase.push_back(static_cast<double>(t.covered) * rate_per_area);
        }
        out.ase = mean_ci(out.topology_ase);
        out.primary_outage_ci = wilson_interval(out.primary_outages, out.primary_samples);
    }
    for (const auto& part : parts) {
        rep.hidden_node_events += part.hidden;
        rep.exposed_node_events += part.exposed;
    }
    rep.primary_outage_defined = rep.macs.front().primary_samples > 0;
    return rep;
}

// --- MAC comparison ---------------------------------------------------------------

CompareSpec default_compare_spec() {
    CompareSpec s;
    s.slots.n_topologies = 200;
    s.slots.slots_per_topology = 10;
    s.slots.tally_primary = false;
    s.pilot = s.slots;
    s.pilot.n_topologies = 40;
    s.pilot.slots_per_topology = 5;
    s.threshold_factors.push_back(0.0);
    for (int k = -12; k <= 12; ++k) s.threshold_factors.push_back(std::pow(10.0, k / 4.0));
    return s;
}

std::vector<MacCurvePoint> compare_macs(const NetworkParams& p, const std::vector<double>& beta_grid,
                                        const std::vector<MacSpec>& macs, const CompareSpec& spec,
                                        std::uint64_t seed, int workers, const NumericsConfig& cfg) {
    p.validate();
    if (beta_grid.empty()) throw ParameterError("compare_macs: empty beta grid");
    if (std::any_of(macs.begin(), macs.end(), [](const MacSpec& m) { return m.kind == MacKind::Mapped; }))
        throw ParameterError("compare_macs: mapped MACs need an explicit mapping; use run_slots");
    std::vector<MacCurvePoint> out;
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
        const double beta = beta_grid[b];
        MacCurvePoint pt;
        pt.beta = beta;
        pt.policy = policy_at(p, beta, cfg);
        std::vector<MacSpec> final_macs;
        for (const MacSpec& base : macs) {
            MacSpec m = base;
            if (m.kind == MacKind::TxThreshold || m.kind == MacKind::GenieRx) {
                std::vector<MacSpec> candidates;
                for (double f : spec.threshold_factors) {
                    MacSpec c = m;
                    c.threshold = beta * f;
                    candidates.push_back(c);
                }
                const SimReport pilot =
                    run_slots(p, pt.policy, candidates, spec.pilot, derive_seed(seed, 0x70, b), workers);
                std::size_t best = 0;
                for (std::size_t c = 1; c < pilot.macs.size(); ++c)
                    if (pilot.macs[c].ase.mean > pilot.macs[best].ase.mean) best = c;
                m.threshold = candidates[best].threshold;
            }
            final_macs.push_back(m);
        }
        pt.report = run_slots(p, pt.policy, final_macs, spec.slots, derive_seed(seed, 0x71), workers);
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace sap
