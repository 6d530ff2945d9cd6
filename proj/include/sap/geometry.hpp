#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sap {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double norm2(Point a) { return a.x * a.x + a.y * a.y; }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

/// Square window [-half_width, half_width]^2 with an extra simulated border.
struct Region {
    double half_width = 500.0;
    double guard_margin = 0.0;

    void validate() const;
    double outer_half_width() const { return half_width + guard_margin; }
    double outer_area() const;
    bool in_inner(Point p) const { return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width; }
};

/// Boolean blockage model: rectangle centres form a PPP of density lambda_b.
struct BlockageModel {
    double lambda_b = 0.0;  // 1/m^2
    double d_len = 0.0;     // m
    double d_wid = 0.0;     // m

    void validate() const;
    double factor() const { return lambda_b * (d_len + d_wid); }
};

struct Rect {
    Point center;
    double length = 0.0;  // along the azimuth direction
    double width = 0.0;
    double azimuth = 0.0;

    bool contains(Point p) const;
};

struct PrimaryTx {
    Point pos;
    double beam_azimuth = 0.0;
};

struct SecondaryPair {
    Point tx;
    Point rx;
};

struct Deployment {
    std::vector<PrimaryTx> primary_txs;
    std::vector<SecondaryPair> secondary_pairs;
    std::vector<Rect> blockages;
};

std::vector<Point> sample_ppp(double density, const Region& region, std::uint64_t seed);

/// Rectangles with fixed size (d_len, d_wid), centres from a PPP on the outer
/// window and azimuths uniform on [0, pi).
std::vector<Rect> sample_blockages(const BlockageModel& model, const Region& region, std::uint64_t seed);

/// Average LOS distance of the LOS-ball approximation. Returns +inf when
/// lambda_b == 0 (no blockages).
double avg_los_distance(const BlockageModel& model);

bool segment_hits_rect(Point p, Point q, const Rect& r);
bool is_blocked(Point p, Point q, const std::vector<Rect>& blockages);

/// Uniform-grid index over rectangles. Segment queries walk the grid cells
/// crossed by the segment instead of testing every rectangle.
class BlockageIndex {
public:
    BlockageIndex() = default;
    BlockageIndex(const std::vector<Rect>& rects, double half_extent, double cell_size);

    bool blocked(Point p, Point q) const;
    bool inside_any(Point p) const;
    bool empty() const { return rects_.empty(); }
    const std::vector<Rect>& rects() const { return rects_; }

private:
    int cell_coord(double v) const;
    const std::vector<int>& cell(int ix, int iy) const { return cells_[static_cast<std::size_t>(iy) * n_ + ix]; }

    std::vector<Rect> rects_;
    std::vector<std::vector<int>> cells_;
    double origin_ = 0.0;
    double cell_ = 1.0;
    int n_ = 0;
};

double unblocked_prob(double dist, const BlockageModel& model);
double joint_unblocked_prob(double rt, double rr, const BlockageModel& model);

bool in_joint_unblocked_ellipse(Point primary, Point tx, Point rx, double axis_length);

struct AxisLength {
    double value = 0.0;
    bool out_of_fit_range = false;
};

inline constexpr double kAxisFitXiMin = 0.0;
inline constexpr double kAxisFitXiMax = 0.1;
/// Ascending powers of xi.
inline constexpr std::array<double, 6> kPublishedAxisFit{176.0, -1318.0, -1.118e5, 3.847e6, -4.729e7, 2.051e8};

/// Published quintic fit of the joint-unblocked ellipse axis versus the
/// blockage factor xi = lambda_b (d_len + d_wid) in 1/m.
AxisLength axis_length_from_blockage_factor(double xi);

/// Interior angle at the primary TX between the directions to the secondary
/// TX (distance R) and RX, where nu is the angle at the secondary TX.
double interior_angle(double nu, double R, double d);

/// Probability that a beam of width omega that covers the secondary TX also
/// covers its RX, for a uniformly random beam azimuth.
double common_interfering_prob(double nu, double R, double d, double omega);

/// True iff target lies inside the sector of width omega centred on azimuth.
bool in_beam_sector(Point apex, double azimuth, double omega, Point target);

}  // namespace sap
