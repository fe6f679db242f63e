#include "navstack/track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navstack/errors.hpp"

namespace navstack {

namespace {

constexpr double kSampleStep = 0.05;  // m, target polyline spacing

// Hermite basis with the Catmull-Rom tangents (p2-p0)/2, (p3-p1)/2.
Vec2 catmull_rom(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * p1 + (-2.0 * t3 + 3.0 * t2) * p2 +
           0.5 * (t3 - 2.0 * t2 + t) * (p2 - p0) + 0.5 * (t3 - t2) * (p3 - p1);
}

}  // namespace

Track::Track(std::vector<Vec2> control_points, double lane_width)
    : ctrl_(std::move(control_points)), lane_width_(lane_width) {
    if (ctrl_.size() < 2) throw ConfigError("track: need at least 2 control points");
    if (!(lane_width_ > 0.0)) throw ConfigError("track: lane_width must be > 0");

    // Flatten segment by segment; reflect the end tangents.
    pts_.push_back(ctrl_.front());
    for (size_t i = 0; i + 1 < ctrl_.size(); ++i) {
        const Vec2 p1 = ctrl_[i];
        const Vec2 p2 = ctrl_[i + 1];
        const Vec2 p0 = i > 0 ? ctrl_[i - 1] : p1 + (p1 - p2);
        const Vec2 p3 = i + 2 < ctrl_.size() ? ctrl_[i + 2] : p2 + (p2 - p1);
        const int n = std::max(4, static_cast<int>(std::ceil(distance(p1, p2) / kSampleStep)));
        for (int k = 1; k <= n; ++k)
            pts_.push_back(catmull_rom(p0, p1, p2, p3, static_cast<double>(k) / n));
    }

    cum_.resize(pts_.size());
    cum_[0] = 0.0;
    for (size_t i = 1; i < pts_.size(); ++i)
        cum_[i] = cum_[i - 1] + distance(pts_[i - 1], pts_[i]);
    if (!(cum_.back() > 0.0)) throw ConfigError("track: zero length");

    // Grid hash of sample indices.
    double max_x = pts_[0].x, max_y = pts_[0].y;
    min_x_ = pts_[0].x;
    min_y_ = pts_[0].y;
    for (const Vec2& p : pts_) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    nx_ = static_cast<int>((max_x - min_x_) / cell_) + 1;
    ny_ = static_cast<int>((max_y - min_y_) / cell_) + 1;
    cells_.resize(static_cast<size_t>(nx_) * ny_);
    for (size_t i = 0; i < pts_.size(); ++i) {
        const int cx = static_cast<int>((pts_[i].x - min_x_) / cell_);
        const int cy = static_cast<int>((pts_[i].y - min_y_) / cell_);
        cells_[static_cast<size_t>(cy) * nx_ + cx].push_back(static_cast<int>(i));
    }
}

Vec2 Track::point_at(double s) const {
    s = std::clamp(s, 0.0, cum_.back());
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), s);
    size_t i = static_cast<size_t>(it - cum_.begin());
    if (i == 0) return pts_[0];
    const double seg = cum_[i] - cum_[i - 1];
    const double t = seg > 0.0 ? (s - cum_[i - 1]) / seg : 0.0;
    return pts_[i - 1] + t * (pts_[i] - pts_[i - 1]);
}

double Track::heading_at(double s) const {
    s = std::clamp(s, 0.0, cum_.back());
    auto it = std::lower_bound(cum_.begin(), cum_.end(), s);
    size_t i = static_cast<size_t>(it - cum_.begin());
    if (i == 0) i = 1;
    const Vec2 d = pts_[i] - pts_[i - 1];
    return std::atan2(d.y, d.x);
}

// Exact projection onto the two polyline segments adjacent to sample idx.
TrackProjection Track::refine_near(const Vec2& p, size_t idx) const {
    TrackProjection best;
    double best_d = std::numeric_limits<double>::infinity();
    const size_t lo = idx > 0 ? idx - 1 : 0;
    const size_t hi = std::min(idx + 1, pts_.size() - 1);
    for (size_t a = lo; a < hi; ++a) {
        const Vec2 seg = pts_[a + 1] - pts_[a];
        const double len2 = seg.squared_norm();
        const double t = len2 > 0.0 ? std::clamp((p - pts_[a]).dot(seg) / len2, 0.0, 1.0) : 0.0;
        const Vec2 q = pts_[a] + t * seg;
        const double d = distance(p, q);
        if (d < best_d) {
            best_d = d;
            const double side = seg.cross(p - pts_[a]) >= 0.0 ? 1.0 : -1.0;
            best.s = cum_[a] + t * (cum_[a + 1] - cum_[a]);
            best.lateral = side * d;
        }
    }
    return best;
}

std::optional<TrackProjection> Track::project_within(const Vec2& p, double max_dist) const {
    const int r = static_cast<int>(max_dist / cell_) + 1;
    const int cx = static_cast<int>(std::floor((p.x - min_x_) / cell_));
    const int cy = static_cast<int>(std::floor((p.y - min_y_) / cell_));
    int best = -1;
    double best_d2 = max_dist * max_dist;
    for (int gy = std::max(0, cy - r); gy <= std::min(ny_ - 1, cy + r); ++gy)
        for (int gx = std::max(0, cx - r); gx <= std::min(nx_ - 1, cx + r); ++gx)
            for (int i : cells_[static_cast<size_t>(gy) * nx_ + gx]) {
                const double d2 = (pts_[static_cast<size_t>(i)] - p).squared_norm();
                if (d2 <= best_d2) {
                    best_d2 = d2;
                    best = i;
                }
            }
    if (best < 0) return std::nullopt;
    TrackProjection proj = refine_near(p, static_cast<size_t>(best));
    if (std::abs(proj.lateral) > max_dist) return std::nullopt;
    return proj;
}

TrackProjection Track::project(const Vec2& p) const {
    for (double r = 2.0; ; r *= 2.0) {
        if (auto proj = project_within(p, r)) return *proj;
        // Beyond any hash coverage: brute force.
        if (r > (nx_ + ny_) * cell_ + distance(p, pts_[0])) break;
    }
    size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts_.size(); ++i) {
        const double d2 = (pts_[i] - p).squared_norm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return refine_near(p, best);
}

}  // namespace navstack
