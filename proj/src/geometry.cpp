#include "sap/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "sap/errors.hpp"
#include "sap/numerics.hpp"
#include "sap/rng.hpp"

namespace sap {

namespace {
constexpr double kPi = std::numbers::pi;
}

void Region::validate() const {
    if (!(half_width > 0.0)) throw ParameterError("region: half_width must be positive");
    if (!(guard_margin >= 0.0)) throw ParameterError("region: guard_margin must be non-negative");
}

double Region::outer_area() const {
    const double side = 2.0 * outer_half_width();
    return side * side;
}

void BlockageModel::validate() const {
    if (!(lambda_b >= 0.0)) throw ParameterError("blockage: lambda_b must be non-negative");
    if (lambda_b > 0.0 && (!(d_len > 0.0) || !(d_wid > 0.0)))
        throw ParameterError("blockage: rectangle dimensions must be positive");
}

bool Rect::contains(Point p) const {
    const Point rel = p - center;
    const double c = std::cos(azimuth);
    const double s = std::sin(azimuth);
    const double u = c * rel.x + s * rel.y;
    const double v = -s * rel.x + c * rel.y;
    return std::abs(u) <= 0.5 * length && std::abs(v) <= 0.5 * width;
}

std::vector<Point> sample_ppp(double density, const Region& region, std::uint64_t seed) {
    if (!(density >= 0.0)) throw ParameterError("sample_ppp: density must be non-negative");
    region.validate();
    std::vector<Point> pts;
    if (density == 0.0) return pts;
    SplitMix64 rng(seed);
    const auto n = rng.poisson(density * region.outer_area());
    const double h = region.outer_half_width();
    pts.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-h, h);
        const double y = rng.uniform(-h, h);
        pts.push_back({x, y});
    }
    return pts;
}

std::vector<Rect> sample_blockages(const BlockageModel& model, const Region& region, std::uint64_t seed) {
    model.validate();
    std::vector<Rect> out;
    if (model.lambda_b == 0.0) return out;
    const auto centers = sample_ppp(model.lambda_b, region, derive_seed(seed, 1));
    SplitMix64 rng(derive_seed(seed, 2));
    out.reserve(centers.size());
    for (const Point& c : centers) out.push_back({c, model.d_len, model.d_wid, rng.uniform(0.0, kPi)});
    return out;
}

double avg_los_distance(const BlockageModel& model) {
    model.validate();
    if (model.lambda_b == 0.0) return std::numeric_limits<double>::infinity();
    const double num = kPi * std::sqrt(2.0 * std::exp(-model.lambda_b * model.d_len * model.d_wid));
    return num / (2.0 * model.lambda_b * (model.d_len + model.d_wid));
}

bool segment_hits_rect(Point p, Point q, const Rect& r) {
    // Liang-Barsky clipping in the rectangle's own frame.
    const double c = std::cos(r.azimuth);
    const double s = std::sin(r.azimuth);
    const Point rp = p - r.center;
    const Point rq = q - r.center;
    const double x0 = c * rp.x + s * rp.y;
    const double y0 = -s * rp.x + c * rp.y;
    const double dx = c * rq.x + s * rq.y - x0;
    const double dy = -s * rq.x + c * rq.y - y0;
    const double hx = 0.5 * r.length;
    const double hy = 0.5 * r.width;

    double t0 = 0.0;
    double t1 = 1.0;
    const double pk[4] = {-dx, dx, -dy, dy};
    const double qk[4] = {x0 + hx, hx - x0, y0 + hy, hy - y0};
    for (int k = 0; k < 4; ++k) {
        if (pk[k] == 0.0) {
            if (qk[k] < 0.0) return false;
            continue;
        }
        const double t = qk[k] / pk[k];
        if (pk[k] < 0.0) {
            if (t > t1) return false;
            t0 = std::max(t0, t);
        } else {
            if (t < t0) return false;
            t1 = std::min(t1, t);
        }
    }
    return t0 <= t1;
}

bool is_blocked(Point p, Point q, const std::vector<Rect>& blockages) {
    return std::any_of(blockages.begin(), blockages.end(),
                       [&](const Rect& r) { return segment_hits_rect(p, q, r); });
}

BlockageIndex::BlockageIndex(const std::vector<Rect>& rects, double half_extent, double cell_size)
    : rects_(rects) {
    if (!(half_extent > 0.0) || !(cell_size > 0.0)) throw ParameterError("BlockageIndex: bad grid");
    // Rectangles near the border may stick out; pad by the largest diagonal.
    double pad = 0.0;
    for (const Rect& r : rects_) pad = std::max(pad, 0.5 * std::hypot(r.length, r.width));
    origin_ = -(half_extent + pad);
    n_ = std::max(1, static_cast<int>(std::ceil(2.0 * (half_extent + pad) / cell_size)));
    cell_ = 2.0 * (half_extent + pad) / n_;
    cells_.assign(static_cast<std::size_t>(n_) * n_, {});
    for (std::size_t i = 0; i < rects_.size(); ++i) {
        const Rect& r = rects_[i];
        const double ex = 0.5 * (r.length * std::abs(std::cos(r.azimuth)) + r.width * std::abs(std::sin(r.azimuth)));
        const double ey = 0.5 * (r.length * std::abs(std::sin(r.azimuth)) + r.width * std::abs(std::cos(r.azimuth)));
        const int x0 = cell_coord(r.center.x - ex), x1 = cell_coord(r.center.x + ex);
        const int y0 = cell_coord(r.center.y - ey), y1 = cell_coord(r.center.y + ey);
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix) cells_[static_cast<std::size_t>(iy) * n_ + ix].push_back(static_cast<int>(i));
    }
}

int BlockageIndex::cell_coord(double v) const {
    const int c = static_cast<int>(std::floor((v - origin_) / cell_));
    return std::clamp(c, 0, n_ - 1);
}

bool BlockageIndex::inside_any(Point p) const {
    if (rects_.empty()) return false;
    for (int idx : cell(cell_coord(p.x), cell_coord(p.y)))
        if (rects_[idx].contains(p)) return true;
    return false;
}

bool BlockageIndex::blocked(Point p, Point q) const {
    if (rects_.empty()) return false;
    // Amanatides-Woo traversal of the cells crossed by segment pq. Points
    // outside the grid are clamped to the border cells, which only ever adds
    // candidates.
    int ix = cell_coord(p.x), iy = cell_coord(p.y);
    const int jx = cell_coord(q.x), jy = cell_coord(q.y);
    const double dx = q.x - p.x, dy = q.y - p.y;
    const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double tdx = sx != 0 ? cell_ / std::abs(dx) : inf;
    const double tdy = sy != 0 ? cell_ / std::abs(dy) : inf;
    auto boundary = [&](double start, int i, int step, double delta) {
        if (step == 0) return inf;
        const double edge = origin_ + (i + (step > 0 ? 1 : 0)) * cell_;
        return std::max(0.0, (edge - start) / delta);
    };
    double tx = boundary(p.x, ix, sx, dx);
    double ty = boundary(p.y, iy, sy, dy);
    const int max_steps = 2 * n_ + 4;
    for (int step = 0; step < max_steps; ++step) {
        for (int idx : cell(ix, iy))
            if (segment_hits_rect(p, q, rects_[idx])) return true;
        if (ix == jx && iy == jy) break;
        if (tx < ty) {
            if (tx > 1.0) break;
            ix += sx;
            tx += tdx;
        } else {
            if (ty > 1.0) break;
            iy += sy;
            ty += tdy;
        }
        if (ix < 0 || iy < 0 || ix >= n_ || iy >= n_) break;
    }
    return false;
}

double unblocked_prob(double dist, const BlockageModel& model) {
    if (dist < 0.0) throw ParameterError("unblocked_prob: distance must be non-negative");
    return std::exp(-2.0 * model.factor() * dist / kPi);
}

double joint_unblocked_prob(double rt, double rr, const BlockageModel& model) {
    if (rt < 0.0 || rr < 0.0) throw ParameterError("joint_unblocked_prob: distances must be non-negative");
    return std::exp(-2.0 * model.factor() * (rt + rr) / kPi);
}

bool in_joint_unblocked_ellipse(Point primary, Point tx, Point rx, double axis_length) {
    if (axis_length < distance(tx, rx)) throw ParameterError("ellipse: axis length shorter than pair distance");
    return distance(primary, tx) + distance(primary, rx) <= axis_length;
}

AxisLength axis_length_from_blockage_factor(double xi) {
    const auto& c = kPublishedAxisFit;
    double v = c[5];
    for (int k = 4; k >= 0; --k) v = v * xi + c[k];
    return {v, xi < kAxisFitXiMin || xi > kAxisFitXiMax};
}

double interior_angle(double nu, double R, double d) {
    const double denom = std::sqrt(std::max(0.0, R * R + d * d - 2.0 * R * d * std::cos(nu)));
    if (denom <= 1e-300) return 0.0;  // primary sits on the RX; directions coincide
    return safe_acos(std::clamp((R - d * std::cos(nu)) / denom, -1.0 - 1e-13, 1.0 + 1e-13));
}

double common_interfering_prob(double nu, double R, double d, double omega) {
    if (!(omega > 0.0) || omega > 2.0 * kPi + 1e-12)
        throw ParameterError("common_interfering_prob: omega must lie in (0, 2pi]");
    const double psi = interior_angle(nu, R, d);
    // Overlap of the two admissible beam-centre arcs, including wrap-around
    // when omega exceeds pi.
    const double overlap = std::max(0.0, omega - psi) + std::max(0.0, omega - (2.0 * kPi - psi));
    return std::min(1.0, overlap / omega);
}

bool in_beam_sector(Point apex, double azimuth, double omega, Point target) {
    if (omega >= 2.0 * kPi) return true;
    const Point v = target - apex;
    if (v.x == 0.0 && v.y == 0.0) return true;
    double diff = std::atan2(v.y, v.x) - azimuth;
    diff = std::remainder(diff, 2.0 * kPi);
    return std::abs(diff) <= 0.5 * omega;
}

}  // namespace sap
