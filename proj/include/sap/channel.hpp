#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sap/geometry.hpp"

namespace sap {

enum class Regime { Below6, Blockage, Mmw };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct NetworkParams {
    double lambda1 = 0.0;  // primary TX density, 1/m^2
    double lambda2 = 0.0;  // secondary TX density, 1/m^2
    double p1 = 1.0;       // primary TX power, W
    double p2 = 1.0;       // secondary TX power, W
    double alpha = 4.0;
    double d = 1.0;        // secondary pair distance, m
    double omega = 2.0 * std::numbers::pi;  // primary beamwidth, rad
    double gamma = 1.0;    // primary decoding target, linear
    double tau = 0.1;      // primary outage cap
    Regime regime = Regime::Below6;
    std::optional<BlockageModel> blockage;
    std::optional<double> axis_length;  // joint-unblocked ellipse axis; fitted curve when absent

    void validate() const;

    /// Beamwidth seen by the analysis: 2 pi unless the regime is Mmw.
    double effective_omega() const;
    /// LOS-ball radius; +inf in the Below6 regime or without blockages.
    double los_distance() const;
    /// Joint-unblocked ellipse axis, from the explicit value or the fitted curve.
    AxisLength resolved_axis_length() const;
};

struct FadingDraw {
    double h = 1.0;
};

/// Unit-mean exponential power gain addressed by a counter key.
FadingDraw draw_fading(std::uint64_t key);

/// Path-loss function: dist^-alpha, cut to zero beyond r_l outside Below6.
double path_gain(double dist, const NetworkParams& params, double r_l);

enum class TxKind : std::uint8_t { Primary = 0, Secondary = 1 };

struct TxRef {
    TxKind kind = TxKind::Secondary;
    std::size_t index = 0;
};

/// How links are tested for blocking. Without an index the LOS-ball rule of
/// path_gain applies; with one, the exact segment test is used.
struct LinkContext {
    const NetworkParams* params = nullptr;
    const BlockageIndex* blockages = nullptr;
    bool pin_fading = false;  // every h = 1, for deterministic checks
};

/// Fading of the link from tx to the receiver stream fading_seed.
double link_fading(const LinkContext& ctx, std::uint64_t fading_seed, TxRef tx);

/// Whether the primary TX j can reach point p under the regime's rules
/// (blocking and beam-sector membership).
bool primary_reaches(const LinkContext& ctx, const PrimaryTx& j, Point p);

/// Whether a secondary TX at position s can reach point p (omnidirectional).
bool secondary_reaches(const LinkContext& ctx, Point s, Point p);

/// SIR at rx served by `serving`. Primaries are always on; secondaries are on
/// iff secondary_active[i]. Returns +inf when no interferer reaches rx.
double sir_at(Point rx, TxRef serving, const Deployment& dep, const std::vector<bool>& secondary_active,
              const LinkContext& ctx, std::uint64_t fading_seed);

/// Aggregate primary power sensed at tx with all secondaries silent.
double sense_interference(Point tx, const Deployment& dep, const LinkContext& ctx, std::uint64_t fading_seed);

}  // namespace sap
