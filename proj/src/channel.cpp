#include "sap/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/rng.hpp"

namespace sap {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Below6: return "below6";
        case Regime::Blockage: return "blockage";
        case Regime::Mmw: return "mmw";
    }
    return "unknown";
}

Regime regime_from_string(const std::string& s) {
    if (s == "below6") return Regime::Below6;
    if (s == "blockage") return Regime::Blockage;
    if (s == "mmw") return Regime::Mmw;
    throw ParameterError("unknown regime '" + s + "' (expected below6, blockage or mmw)");
}

void NetworkParams::validate() const {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw ParameterError("densities must be non-negative");
    if (!(p1 > 0.0) || !(p2 > 0.0)) throw ParameterError("powers must be positive");
    if (!(alpha > 2.0)) throw ParameterError("path-loss exponent must exceed 2");
    if (!(d > 0.0)) throw ParameterError("pair distance must be positive");
    if (!(omega > 0.0) || omega > 2.0 * std::numbers::pi + 1e-12)
        throw ParameterError("beamwidth must lie in (0, 2pi]");
    if (!(gamma > 0.0)) throw ParameterError("primary decoding target must be positive");
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("outage cap must lie in (0, 1)");
    if (regime != Regime::Below6 && !blockage) throw ParameterError("blockage and mmw regimes need a blockage model");
    if (blockage) blockage->validate();
    if (axis_length && *axis_length < d) throw ParameterError("axis length must be at least the pair distance");
}

double NetworkParams::effective_omega() const {
    return regime == Regime::Mmw ? omega : 2.0 * std::numbers::pi;
}

double NetworkParams::los_distance() const {
    if (regime == Regime::Below6 || !blockage) return std::numeric_limits<double>::infinity();
    return avg_los_distance(*blockage);
}

AxisLength NetworkParams::resolved_axis_length() const {
    if (axis_length) return {*axis_length, false};
    if (!blockage || blockage->lambda_b == 0.0) return {std::numeric_limits<double>::infinity(), false};
    return axis_length_from_blockage_factor(blockage->factor());
}

FadingDraw draw_fading(std::uint64_t key) { return {unit_exponential(key)}; }

double path_gain(double dist, const NetworkParams& params, double r_l) {
    if (!(dist > 0.0)) throw DomainError("path_gain: zero distance is a singularity");
    if (params.regime != Regime::Below6 && dist > r_l) return 0.0;
    return std::pow(dist, -params.alpha);
}

double link_fading(const LinkContext& ctx, std::uint64_t fading_seed, TxRef tx) {
    if (ctx.pin_fading) return 1.0;
    return draw_fading(derive_seed(fading_seed, static_cast<std::uint64_t>(tx.kind), tx.index)).h;
}

namespace {

double gain_to(const LinkContext& ctx, Point from, Point to) {
    const double r = distance(from, to);
    if (ctx.blockages) return std::pow(r, -ctx.params->alpha);  // blocking handled separately
    return path_gain(r, *ctx.params, ctx.params->los_distance());
}

}  // namespace

bool primary_reaches(const LinkContext& ctx, const PrimaryTx& j, Point p) {
    const NetworkParams& prm = *ctx.params;
    if (prm.regime == Regime::Mmw && !in_beam_sector(j.pos, j.beam_azimuth, prm.omega, p)) return false;
    if (prm.regime == Regime::Below6) return true;
    if (ctx.blockages) return !ctx.blockages->blocked(j.pos, p);
    return distance(j.pos, p) <= prm.los_distance();
}

bool secondary_reaches(const LinkContext& ctx, Point s, Point p) {
    const NetworkParams& prm = *ctx.params;
    if (prm.regime == Regime::Below6) return true;
    if (ctx.blockages) return !ctx.blockages->blocked(s, p);
    return distance(s, p) <= prm.los_distance();
}

double sir_at(Point rx, TxRef serving, const Deployment& dep, const std::vector<bool>& secondary_active,
              const LinkContext& ctx, std::uint64_t fading_seed) {
    const NetworkParams& prm = *ctx.params;
    if (secondary_active.size() != dep.secondary_pairs.size())
        throw ParameterError("sir_at: activity flags do not match the deployment");
    Point serving_pos;
    double serving_power;
    if (serving.kind == TxKind::Primary) {
        serving_pos = dep.primary_txs.at(serving.index).pos;
        serving_power = prm.p1;
    } else {
        if (!secondary_active.at(serving.index)) throw ParameterError("sir_at: serving TX is not active");
        serving_pos = dep.secondary_pairs[serving.index].tx;
        serving_power = prm.p2;
    }
    // Desired link follows the plain power law.
    const double signal =
        serving_power * link_fading(ctx, fading_seed, serving) * std::pow(distance(serving_pos, rx), -prm.alpha);

    double interference = 0.0;
    for (std::size_t i = 0; i < dep.primary_txs.size(); ++i) {
        if (serving.kind == TxKind::Primary && serving.index == i) continue;
        const PrimaryTx& j = dep.primary_txs[i];
        if (!primary_reaches(ctx, j, rx)) continue;
        interference += prm.p1 * link_fading(ctx, fading_seed, {TxKind::Primary, i}) * gain_to(ctx, j.pos, rx);
    }
    for (std::size_t i = 0; i < dep.secondary_pairs.size(); ++i) {
        if (!secondary_active[i]) continue;
        if (serving.kind == TxKind::Secondary && serving.index == i) continue;
        const Point s = dep.secondary_pairs[i].tx;
        if (!secondary_reaches(ctx, s, rx)) continue;
        interference += prm.p2 * link_fading(ctx, fading_seed, {TxKind::Secondary, i}) * gain_to(ctx, s, rx);
    }
    if (interference == 0.0) return std::numeric_limits<double>::infinity();
    return signal / interference;
}

double sense_interference(Point tx, const Deployment& dep, const LinkContext& ctx, std::uint64_t fading_seed) {
    const NetworkParams& prm = *ctx.params;
    double total = 0.0;
    for (std::size_t i = 0; i < dep.primary_txs.size(); ++i) {
        const PrimaryTx& j = dep.primary_txs[i];
        if (!primary_reaches(ctx, j, tx)) continue;
        total += prm.p1 * link_fading(ctx, fading_seed, {TxKind::Primary, i}) * gain_to(ctx, j.pos, tx);
    }
    return total;
}

}  // namespace sap
