#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sap/rng.hpp"
#include "sap/sap_mac.hpp"
#include "sap/stats.hpp"

namespace sap {

// --- Analytic lookups ------------------------------------------------------------

/// OP versus sensed power, tabulated on a log grid and interpolated linearly
/// in log I. Queries outside the grid fall back to direct evaluation.
class OpTable {
public:
    OpTable(const NetworkParams& p, double beta, double i_lo, double i_hi, int points_per_decade = 24,
            const NumericsConfig& cfg = {}, const OpOptions& opt = {});
    /// Grid p1 * [1e-24, 1e12].
    OpTable(const NetworkParams& p, double beta, const NumericsConfig& cfg = {}, const OpOptions& opt = {});

    double operator()(double interference) const;
    double beta() const { return beta_; }

private:
    NetworkParams params_;
    double beta_;
    NumericsConfig cfg_;
    OpOptions opt_;
    double log_lo_ = 0.0;
    double log_hi_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
};

/// Coverage predicted as if the RX saw the TX's interference:
/// exp(-beta I d^alpha / P2).
double naive_op(double interference, const NetworkParams& p, double beta);

// --- Scenes ------------------------------------------------------------------------

/// One draw of the primary network and the blockages over region's outer window.
struct Scene {
    Deployment deployment;  // secondary_pairs left empty
    BlockageIndex index;
    Region region;
};

Scene sample_scene(const NetworkParams& p, const Region& region, std::uint64_t seed, double blockage_cell = 20.0);

/// Link rules for a scene: exact blocking when the regime has blockages and
/// exact_blocking is set, otherwise the LOS-ball rule.
LinkContext scene_context(const NetworkParams& p, const Scene& scene, bool exact_blocking = true);

/// Draws the RX around tx at distance d until it lies outside every blockage
/// with an unblocked TX-RX link. Returns false after max_tries failures or if
/// tx itself is inside a blockage.
bool place_pair(Point tx, double d, const Scene& scene, SplitMix64& rng, SecondaryPair& out, int max_tries = 16);

// --- Conditional OP oracle -----------------------------------------------------

struct OracleSpec {
    int n_topologies = 1000;
    int probes_per_topology = 100;
    Region region{100.0, 200.0};  // probes in the inner window, primaries and blockages in the outer one
    // > 0: one extra primary is placed uniformly in the disk of this radius
    // around each probe TX, which samples the high-interference tail.
    double near_disk_radius = 0.0;
    bool exact_blocking = true;
    double blockage_cell = 20.0;
    int bins = 40;
    double lower_quantile = 0.01;
    double upper_quantile = 0.99;
    std::uint64_t min_bin_count = 100;
};

struct ConditionalSample {
    double interference = 0.0;  // W, at the TX with secondaries silent
    bool covered = false;       // SIR at the RX >= beta
    double sir = 0.0;
    double nearest = 0.0;       // distance to the nearest primary visible from the TX (inf if none)
};

struct InterferenceBin {
    double lo = 0.0;
    double hi = 0.0;
    double centre = 0.0;  // geometric
    std::uint64_t count = 0;
    std::uint64_t covered = 0;
    double probability = 0.0;
    Interval ci;
    bool underfilled = true;
    double analytic = 0.0;  // mean analytic OP over the bin's samples
    double naive = 0.0;     // mean naive predictor over the bin's samples
};

struct ConditionalOpReport {
    double beta = 1.0;
    std::vector<ConditionalSample> samples;
    std::vector<InterferenceBin> bins;
    std::uint64_t rejected_probes = 0;
    std::uint64_t zero_interference = 0;

    std::uint64_t covered_total() const;
};

/// Sensed-interference / RX-coverage pairs with secondaries silent, binned
/// by interference.
ConditionalOpReport conditional_op_oracle(const NetworkParams& p, double beta, const OracleSpec& spec,
                                          std::uint64_t seed, int workers = 1);

/// Log-spaced bins between the lower and upper quantiles of the positive
/// interference values.
std::vector<InterferenceBin> bin_by_interference(const std::vector<ConditionalSample>& samples, int bins,
                                                 double lower_quantile, double upper_quantile,
                                                 std::uint64_t min_count);

/// Fill the analytic and naive columns of the bins.
void attach_analytic(std::vector<InterferenceBin>& bins, const std::vector<ConditionalSample>& samples,
                     const OpTable& table, const NetworkParams& p);

// --- Hidden and exposed nodes ------------------------------------------------------

struct CensusSpec {
    int n_topologies = 200;
    int probes_per_topology = 50;
    Region region{100.0, 200.0};
    double blockage_cell = 20.0;
    std::vector<double> distance_edges{0.0, 10.0, 20.0, 40.0, 80.0, 160.0};  // nearest-primary bins (m)
};

struct DistanceBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;
    std::uint64_t exposed = 0;

    double rate() const { return count ? static_cast<double>(exposed) / static_cast<double>(count) : 0.0; }
};

struct NodeCensus {
    std::uint64_t probes = 0;
    std::uint64_t visible_tx = 0;  // primaries seen by the TX
    std::uint64_t visible_rx = 0;  // primaries seen by the RX
    std::uint64_t common = 0;
    std::uint64_t exposed = 0;     // seen by the TX only
    std::uint64_t hidden = 0;      // seen by the RX only
    std::vector<DistanceBin> nearest;  // exposure of the nearest TX-visible primary by distance

    double exposed_rate() const;  // exposed / visible_tx
    double hidden_rate() const;   // hidden / visible_rx
};

NodeCensus node_problem_census(const NetworkParams& p, const CensusSpec& spec, std::uint64_t seed, int workers = 1);

// --- Slot simulation --------------------------------------------------------------

enum class MacKind {
    Sap,           // min(1, c* OP(I))
    NoPrediction,  // min(1, c* naive(I))
    TxThreshold,   // access iff P2 d^-alpha / I >= threshold
    GenieRx,       // access iff the RX's primary-only SIR >= threshold
    Mapped,        // mapping(OP(I))
};

std::string to_string(MacKind k);

struct MacSpec {
    MacKind kind = MacKind::Sap;
    double threshold = 0.0;
    MappingFunction mapping{};
    std::optional<NetworkParams> op_model;  // Sap/Mapped: OP evaluated under these parameters instead
    std::string name;                       // replaces the generated label when set

    std::string label() const;
};

struct SlotSpec {
    int n_topologies = 100;
    int slots_per_topology = 20;
    Region secondary_region{30.0, 20.0};  // tallies in the inner window
    double primary_half_width = 400.0;    // primaries and blockages
    double blockage_cell = 20.0;
    bool exact_blocking = true;
    bool tally_secondaries = true;
    bool tally_primary = true;
};

/// One slot of one MAC on one topology.
struct SlotOutcome {
    std::vector<double> sensed;       // per secondary pair
    std::vector<double> op_estimate;  // per pair; NaN where the MAC does not use OP
    std::vector<bool> accessed;
    std::vector<double> rx_sir;       // NaN unless accessed and the RX is inside the tally window
    std::vector<bool> covered;
    double primary_sir = 0.0;         // NaN when no primary serves the reference RX
    bool primary_outage = false;
    std::uint64_t hidden_node_events = 0;
    std::uint64_t exposed_node_events = 0;
};

/// Secondary deployment plus a fixed SaP policy: everything needed to replay
/// slots deterministically.
struct SlotScenario {
    NetworkParams params;
    SapPolicy policy;
    Scene scene;
    std::vector<bool> inner;  // RX inside the tally window
    long serving_primary = -1;
    std::uint64_t seed = 0;
    bool exact_blocking = true;
};

SlotScenario make_slot_scenario(const NetworkParams& p, const SapPolicy& policy, const SlotSpec& spec,
                                std::uint64_t seed);

SlotOutcome simulate_slot(const SlotScenario& sc, const OpTable& table, const MacSpec& mac, int slot,
                          bool pin_fading = false);

struct MacTally {
    std::string label;
    MacSpec mac;
    std::uint64_t pair_slots = 0;  // inner pairs x slots
    std::uint64_t accessed = 0;
    std::uint64_t covered = 0;
    std::vector<double> topology_ase;  // per topology, nats/s/Hz/m^2
    MeanCi ase;
    std::uint64_t primary_samples = 0;
    std::uint64_t primary_outages = 0;
    Interval primary_outage_ci;

    double access_rate() const;
    double success_rate() const;  // covered / pair_slots
    double primary_outage() const;
};

struct SimReport {
    Regime regime = Regime::Below6;
    double beta = 1.0;
    int n_topologies = 0;
    int slots_per_topology = 0;
    std::vector<MacTally> macs;
    bool primary_outage_defined = false;
    std::uint64_t hidden_node_events = 0;   // per inner pair and topology
    std::uint64_t exposed_node_events = 0;

    const MacTally& tally(const std::string& label) const;
};

/// Runs every MAC on the same topologies, fading and access draws.
SimReport run_slots(const NetworkParams& p, const SapPolicy& policy, const std::vector<MacSpec>& macs,
                    const SlotSpec& spec, std::uint64_t seed, int workers = 1);

struct MacCurvePoint {
    double beta = 0.0;
    SapPolicy policy;
    SimReport report;
};

struct CompareSpec {
    SlotSpec slots;
    SlotSpec pilot;  // threshold optimisation run (independent seed)
    std::vector<double> threshold_factors;  // candidate thresholds are beta times these
};

CompareSpec default_compare_spec();

/// ASE curves of the requested MACs. TxThreshold and GenieRx thresholds are
/// chosen on a pilot run; the others use the SaP policy at each beta.
std::vector<MacCurvePoint> compare_macs(const NetworkParams& p, const std::vector<double>& beta_grid,
                                        const std::vector<MacSpec>& macs, const CompareSpec& spec,
                                        std::uint64_t seed, int workers = 1, const NumericsConfig& cfg = {});

// --- Axis-length fit --------------------------------------------------------------

struct AxisScanPoint {
    double xi = 0.0;
    double lambda_b = 0.0;
    double best_l = 0.0;
    double gap = 0.0;    // sample-weighted mean |MC - analytic| at best_l
    bool flat = false;   // gap insensitive to L
    bool unbounded = false;  // no blockages: L has no effect
    std::vector<double> gaps;  // per scanned L
};

struct AxisFit {
    std::vector<double> l_grid;
    std::vector<AxisScanPoint> points;
    std::vector<double> coefficients;  // ascending powers of xi
    double sse = 0.0;

    double predict(double xi) const;
};

/// Least-squares polynomial (ascending coefficients) through (x, y).
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

/// For each xi (blockage sizes from p, density xi / (d_len + d_wid)), scan L
/// for the smallest gap between the oracle and the blockage OP, then fit a
/// quintic to (xi, L*).
AxisFit fit_axis_length(const NetworkParams& p, const std::vector<double>& xi_grid, double beta,
                        const std::vector<double>& l_grid, const OracleSpec& spec, std::uint64_t seed,
                        int workers = 1, const NumericsConfig& cfg = {});

}  // namespace sap
