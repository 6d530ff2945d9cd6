#include "sap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "sap/errors.hpp"
#include "sap/rng.hpp"

namespace sap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// --- OpTable -----------------------------------------------------------------------

OpTable::OpTable(const NetworkParams& p, double beta, double i_lo, double i_hi, int points_per_decade,
                 const NumericsConfig& cfg, const OpOptions& opt)
    : params_(p), beta_(beta), cfg_(cfg), opt_(opt) {
    p.validate();
    if (!(beta > 0.0)) throw ParameterError("OpTable: beta must be positive");
    if (!(i_lo > 0.0) || !(i_hi > i_lo)) throw ParameterError("OpTable: need 0 < i_lo < i_hi");
    if (points_per_decade < 1) throw ParameterError("OpTable: points_per_decade must be >= 1");
    log_lo_ = std::log10(i_lo);
    log_hi_ = std::log10(i_hi);
    const int n = static_cast<int>(std::ceil((log_hi_ - log_lo_) * points_per_decade)) + 1;
    step_ = (log_hi_ - log_lo_) / (n - 1);
    values_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        values_[static_cast<std::size_t>(k)] =
            op_from_interference(std::pow(10.0, log_lo_ + k * step_), p, beta, cfg, opt).value;
}

OpTable::OpTable(const NetworkParams& p, double beta, const NumericsConfig& cfg, const OpOptions& opt)
    : OpTable(p, beta, p.p1 * 1e-24, p.p1 * 1e12, 24, cfg, opt) {}

double OpTable::operator()(double interference) const {
    if (!(interference > 0.0)) return 1.0;
    const double l = std::log10(interference);
    if (l < log_lo_ || l > log_hi_) return op_from_interference(interference, params_, beta_, cfg_, opt_).value;
    const double t = (l - log_lo_) / step_;
    const auto k = std::min(static_cast<std::size_t>(t), values_.size() - 2);
    const double frac = t - static_cast<double>(k);
    return values_[k] + frac * (values_[k + 1] - values_[k]);
}

double naive_op(double interference, const NetworkParams& p, double beta) {
    if (!(interference > 0.0)) return 1.0;
    return std::exp(-beta * interference * std::pow(p.d, p.alpha) / p.p2);
}

// --- Scenes --------------------------------------------------------------------------

Scene sample_scene(const NetworkParams& p, const Region& region, std::uint64_t seed, double blockage_cell) {
    p.validate();
    region.validate();
    Scene sc;
    sc.region = region;
    const auto pts = sample_ppp(p.lambda1, region, derive_seed(seed, 11));
    SplitMix64 beams(derive_seed(seed, 12));
    sc.deployment.primary_txs.reserve(pts.size());
    for (const Point& x : pts) sc.deployment.primary_txs.push_back({x, beams.uniform(0.0, 2.0 * kPi)});
    if (p.regime != Regime::Below6 && p.blockage && p.blockage->lambda_b > 0.0) {
        sc.deployment.blockages = sample_blockages(*p.blockage, region, derive_seed(seed, 13));
        sc.index = BlockageIndex(sc.deployment.blockages, region.outer_half_width(), blockage_cell);
    }
    return sc;
}

LinkContext scene_context(const NetworkParams& p, const Scene& scene, bool exact_blocking) {
    LinkContext ctx;
    ctx.params = &p;
    if (p.regime != Regime::Below6 && exact_blocking) ctx.blockages = &scene.index;
    return ctx;
}

bool place_pair(Point tx, double d, const Scene& scene, SplitMix64& rng, SecondaryPair& out, int max_tries) {
    if (scene.index.inside_any(tx)) return false;
    for (int i = 0; i < max_tries; ++i) {
        const Point rx = tx + polar(d, rng.uniform(0.0, 2.0 * kPi));
        if (scene.index.inside_any(rx) || scene.index.blocked(tx, rx)) continue;
        out = {tx, rx};
        return true;
    }
    return false;
}

// --- Conditional OP oracle ---------------------------------------------------------

std::uint64_t ConditionalOpReport::covered_total() const {
    std::uint64_t n = 0;
    for (const auto& s : samples) n += s.covered ? 1 : 0;
    return n;
}

namespace {

struct OracleChunk {
    std::vector<ConditionalSample> samples;
    std::uint64_t rejected = 0;
};

double nearest_visible(const LinkContext& ctx, const Deployment& dep, Point tx) {
    double best = kInf;
    for (const PrimaryTx& j : dep.primary_txs)
        if (primary_reaches(ctx, j, tx)) best = std::min(best, distance(j.pos, tx));
    return best;
}

OracleChunk oracle_topology(const NetworkParams& p, double beta, const OracleSpec& spec, std::uint64_t seed) {
    OracleChunk out;
    Scene scene = sample_scene(p, spec.region, derive_seed(seed, 1), spec.blockage_cell);
    if (!spec.exact_blocking) scene.index = BlockageIndex();
    const LinkContext ctx = scene_context(p, scene, spec.exact_blocking);
    Deployment& dep = scene.deployment;
    const std::vector<bool> active{true};
    SplitMix64 rng(derive_seed(seed, 2));
    const double h = spec.region.half_width;
    out.samples.reserve(static_cast<std::size_t>(spec.probes_per_topology));
    for (int k = 0; k < spec.probes_per_topology; ++k) {
        const Point tx{rng.uniform(-h, h), rng.uniform(-h, h)};
        const bool extra = spec.near_disk_radius > 0.0;
        if (extra) {
            const double r = spec.near_disk_radius * std::sqrt(rng.uniform());
            dep.primary_txs.push_back({tx + polar(r, rng.uniform(0.0, 2.0 * kPi)), rng.uniform(0.0, 2.0 * kPi)});
        }
        SecondaryPair pair;
        if (place_pair(tx, p.d, scene, rng, pair)) {
            dep.secondary_pairs.assign(1, pair);
            const auto kk = static_cast<std::uint64_t>(k);
            ConditionalSample s;
            s.interference = sense_interference(pair.tx, dep, ctx, derive_seed(seed, 3, kk));
            s.sir = sir_at(pair.rx, {TxKind::Secondary, 0}, dep, active, ctx, derive_seed(seed, 4, kk));
            s.covered = s.sir >= beta;
            s.nearest = nearest_visible(ctx, dep, pair.tx);
            out.samples.push_back(s);
        } else {
            ++out.rejected;
        }
        if (extra) dep.primary_txs.pop_back();
    }
    return out;
}

}  // namespace

ConditionalOpReport conditional_op_oracle(const NetworkParams& p, double beta, const OracleSpec& spec,
                                          std::uint64_t seed, int workers) {
    p.validate();
    spec.region.validate();
    if (!(beta > 0.0)) throw ParameterError("conditional_op_oracle: beta must be positive");
    if (spec.n_topologies < 1 || spec.probes_per_topology < 1)
        throw ParameterError("conditional_op_oracle: need at least one topology and one probe");
    auto chunks = detail::map_indexed<OracleChunk>(spec.n_topologies, workers, [&](int t) {
        return oracle_topology(p, beta, spec, derive_seed(seed, static_cast<std::uint64_t>(t)));
    });
    ConditionalOpReport rep;
    rep.beta = beta;
    for (auto& c : chunks) {
        rep.rejected_probes += c.rejected;
        rep.samples.insert(rep.samples.end(), c.samples.begin(), c.samples.end());
    }
    for (const auto& s : rep.samples) rep.zero_interference += s.interference > 0.0 ? 0 : 1;
    rep.bins = bin_by_interference(rep.samples, spec.bins, spec.lower_quantile, spec.upper_quantile,
                                   spec.min_bin_count);
    return rep;
}

namespace {

// Index of the log-spaced bin holding x, or -1 when outside [lo, hi].
long bin_index(const std::vector<InterferenceBin>& bins, double x) {
    if (bins.empty() || !(x >= bins.front().lo) || !(x <= bins.back().hi)) return -1;
    const double l0 = std::log(bins.front().lo);
    const double width = (std::log(bins.back().hi) - l0) / static_cast<double>(bins.size());
    const auto k = static_cast<long>((std::log(x) - l0) / width);
    return std::clamp(k, 0L, static_cast<long>(bins.size()) - 1);
}

}  // namespace

std::vector<InterferenceBin> bin_by_interference(const std::vector<ConditionalSample>& samples, int bins,
                                                 double lower_quantile, double upper_quantile,
                                                 std::uint64_t min_count) {
    if (bins < 1) throw ParameterError("bin_by_interference: need at least one bin");
    if (!(0.0 <= lower_quantile && lower_quantile < upper_quantile && upper_quantile <= 1.0))
        throw ParameterError("bin_by_interference: quantiles must satisfy 0 <= lower < upper <= 1");
    std::vector<double> v;
    for (const auto& s : samples)
        if (s.interference > 0.0) v.push_back(s.interference);
    if (v.size() < 2) return {};
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) { return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))]; };
    const double lo = quantile(lower_quantile);
    const double hi = quantile(upper_quantile);
    if (!(hi > lo)) return {};
    std::vector<InterferenceBin> out(static_cast<std::size_t>(bins));
    const double l0 = std::log(lo);
    const double width = (std::log(hi) - l0) / bins;
    for (int k = 0; k < bins; ++k) {
        auto& b = out[static_cast<std::size_t>(k)];
        b.lo = std::exp(l0 + k * width);
        b.hi = k + 1 == bins ? hi : std::exp(l0 + (k + 1) * width);
        b.centre = std::sqrt(b.lo * b.hi);
    }
    out.front().lo = lo;
    for (const auto& s : samples) {
        const long k = bin_index(out, s.interference);
        if (k < 0) continue;
        auto& b = out[static_cast<std::size_t>(k)];
        ++b.count;
        b.covered += s.covered ? 1 : 0;
    }
    for (auto& b : out) {
        b.probability = b.count ? static_cast<double>(b.covered) / static_cast<double>(b.count) : 0.0;
        b.ci = wilson_interval(b.covered, b.count);
        b.underfilled = b.count < min_count;
    }
    return out;
}

void attach_analytic(std::vector<InterferenceBin>& bins, const std::vector<ConditionalSample>& samples,
                     const OpTable& table, const NetworkParams& p) {
    std::vector<double> analytic(bins.size(), 0.0);
    std::vector<double> naive(bins.size(), 0.0);
    for (const auto& s : samples) {
        const long k = bin_index(bins, s.interference);
        if (k < 0) continue;
        analytic[static_cast<std::size_t>(k)] += table(s.interference);
        naive[static_cast<std::size_t>(k)] += naive_op(s.interference, p, table.beta());
    }
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double n = static_cast<double>(bins[k].count);
        bins[k].analytic = n > 0.0 ? analytic[k] / n : 0.0;
        bins[k].naive = n > 0.0 ? naive[k] / n : 0.0;
    }
}

// --- Census ----------------------------------------------------------------------------

double NodeCensus::exposed_rate() const {
    return visible_tx ? static_cast<double>(exposed) / static_cast<double>(visible_tx) : 0.0;
}

double NodeCensus::hidden_rate() const {
    return visible_rx ? static_cast<double>(hidden) / static_cast<double>(visible_rx) : 0.0;
}

namespace {

NodeCensus census_topology(const NetworkParams& p, const CensusSpec& spec, std::uint64_t seed) {
    NodeCensus out;
    const std::size_t nb = spec.distance_edges.size() - 1;
    out.nearest.resize(nb);
    const Scene scene = sample_scene(p, spec.region, derive_seed(seed, 1), spec.blockage_cell);
    const LinkContext ctx = scene_context(p, scene, true);
    SplitMix64 rng(derive_seed(seed, 2));
    const double h = spec.region.half_width;
    for (int k = 0; k < spec.probes_per_topology; ++k) {
        SecondaryPair pair;
        if (!place_pair({rng.uniform(-h, h), rng.uniform(-h, h)}, p.d, scene, rng, pair)) continue;
        ++out.probes;
        double nearest = kInf;
        bool nearest_exposed = false;
        for (const PrimaryTx& j : scene.deployment.primary_txs) {
            const bool vt = primary_reaches(ctx, j, pair.tx);
            const bool vr = primary_reaches(ctx, j, pair.rx);
            out.visible_tx += vt;
            out.visible_rx += vr;
            out.common += vt && vr;
            out.exposed += vt && !vr;
            out.hidden += !vt && vr;
            const double r = distance(j.pos, pair.tx);
            if (vt && r < nearest) {
                nearest = r;
                nearest_exposed = !vr;
            }
        }
        for (std::size_t b = 0; b < nb; ++b) {
            if (nearest >= spec.distance_edges[b] && nearest < spec.distance_edges[b + 1]) {
                ++out.nearest[b].count;
                out.nearest[b].exposed += nearest_exposed;
                break;
            }
        }
    }
    return out;
}

}  // namespace

NodeCensus node_problem_census(const NetworkParams& p, const CensusSpec& spec, std::uint64_t seed, int workers) {
    p.validate();
    spec.region.validate();
    if (spec.distance_edges.size() < 2 || !std::is_sorted(spec.distance_edges.begin(), spec.distance_edges.end()))
        throw ParameterError("node_problem_census: distance edges must be sorted with at least two entries");
    auto parts = detail::map_indexed<NodeCensus>(spec.n_topologies, workers, [&](int t) {
        return census_topology(p, spec, derive_seed(seed, static_cast<std::uint64_t>(t)));
    });
    NodeCensus total;
    total.nearest.resize(spec.distance_edges.size() - 1);
    for (std::size_t b = 0; b < total.nearest.size(); ++b) {
        total.nearest[b].lo = spec.distance_edges[b];
        total.nearest[b].hi = spec.distance_edges[b + 1];
    }
    for (const auto& c : parts) {
        total.probes += c.probes;
        total.visible_tx += c.visible_tx;
        total.visible_rx += c.visible_rx;
        total.common += c.common;
        total.exposed += c.exposed;
        total.hidden += c.hidden;
        for (std::size_t b = 0; b < total.nearest.size(); ++b) {
            total.nearest[b].count += c.nearest[b].count;
            total.nearest[b].exposed += c.nearest[b].exposed;
        }
    }
    return total;
}

}  // namespace sap
