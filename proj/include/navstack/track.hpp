#ifndef NAVSTACK_TRACK_HPP
#define NAVSTACK_TRACK_HPP

#include <optional>
#include <vector>

#include "navstack/geometry.hpp"

namespace navstack {

struct TrackProjection {
    double s = 0.0;        // arc length of the closest centerline point
    double lateral = 0.0;  // signed offset, positive left of travel direction
};

// Open centerline: a Catmull-Rom spline through the control points (end
// tangents by linear reflection), flattened once into a dense polyline with
// a cumulative arc-length table. All queries run on the polyline; nearest
// points are refined by exact projection onto the adjacent segments, so the
// flattening error is second order. A coarse grid hash over the samples
// keeps per-pixel lateral queries cheap.
class Track {
  public:
    // Needs >= 2 control points. lane_width is the half-road: the black side
    // lines sit at lateral = +-lane_width. Throws ConfigError otherwise.
    Track(std::vector<Vec2> control_points, double lane_width);

    double total_length() const { return cum_.back(); }
    double lane_width() const { return lane_width_; }

    Vec2 point_at(double s) const;       // s clamped into [0, total_length]
    double heading_at(double s) const;

    // Closest centerline point anywhere on the track.
    TrackProjection project(const Vec2& p) const;
    // Same, but gives up (nullopt) beyond max_dist; this is the fast path
    // the renderer uses, hitting only nearby hash cells.
    std::optional<TrackProjection> project_within(const Vec2& p, double max_dist) const;

    const std::vector<Vec2>& polyline() const { return pts_; }
    const std::vector<Vec2>& control_points() const { return ctrl_; }

  private:
    TrackProjection refine_near(const Vec2& p, size_t idx) const;

    std::vector<Vec2> ctrl_;
    double lane_width_;
    std::vector<Vec2> pts_;     // dense samples
    std::vector<double> cum_;   // cum_[i] = arc length at pts_[i]

    // grid hash over pts_
    double cell_ = 0.5;
    double min_x_ = 0.0, min_y_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;
};

}  // namespace navstack

#endif
