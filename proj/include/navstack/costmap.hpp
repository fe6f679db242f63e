#ifndef NAVSTACK_COSTMAP_HPP
#define NAVSTACK_COSTMAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "navstack/geometry.hpp"

namespace navstack {

inline constexpr std::uint8_t kCostFree = 0;
inline constexpr std::uint8_t kCostInflatedMax = 252;
inline constexpr std::uint8_t kCostInscribed = 253;
inline constexpr std::uint8_t kCostLethal = 254;
inline constexpr std::uint8_t kCostUnknown = 255;

struct InflationParams {
    double inflation_radius = 0.6;      // m
    double cost_scaling_factor = 4.0;   // 1/m
    double inscribed_radius = 0.15;     // m
    void validate() const;
};

struct PlannerCostParams {
    double cost_factor = 0.8;
    double neutral_cost = 50.0;
    void validate() const;
};

// Row-major 2D cost grid. The origin pose is the world position of the
// center of cell (0,0); the grid is axis-aligned (origin.theta unused).
class Costmap {
public:
    Costmap() = default;
    Costmap(double resolution, int width, int height, const Pose2D& origin,
            std::uint8_t fill = kCostFree);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    const Pose2D& origin() const { return origin_; }

    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < width_ && iy >= 0 && iy < height_;
    }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * width_ + ix;
    }
    std::uint8_t at(int ix, int iy) const { return cells_[index(ix, iy)]; }
    void set(int ix, int iy, std::uint8_t value) { cells_[index(ix, iy)] = value; }

    Vec2 cell_center(int ix, int iy) const {
        return {origin_.x + ix * resolution_, origin_.y + iy * resolution_};
    }
    // Nearest cell to a world point; false if outside the grid.
    bool world_to_cell(const Vec2& world, int& ix, int& iy) const;

    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::vector<std::uint8_t>& cells() { return cells_; }

private:
    double resolution_ = 0.05;
    int width_ = 0;
    int height_ = 0;
    Pose2D origin_;
    std::vector<std::uint8_t> cells_;
};

// Marks every cell whose center lies inside any obstacle circle as lethal.
// Obstacles outside the grid are clipped.
void mark_obstacles(Costmap& map, const std::vector<Circle>& obstacles);

// Exact euclidean distance (meters) from each cell center to the nearest
// lethal cell center; +inf where the map has no lethal cells.
std::vector<double> distance_field(const Costmap& map);

// Exponential inflation around lethal cells: 253 inside the inscribed
// radius, round(252*exp(-k*(d - inscribed))) out to the inflation radius,
// existing costs are only ever raised.
void inflate(Costmap& map, const InflationParams& p);

// Per-step edge weight for the global planner: neutral_cost + cost_factor *
// cell cost. Inscribed, lethal and unknown cells are impassable and yield
// +inf.
double traversal_cost(const Costmap& map, int ix, int iy, const PlannerCostParams& p);

// Simulated planar lidar over ground-truth obstacle circles. Beam k leaves at
// pose.theta + 2*pi*k/n_beams; result is the distance to the nearest circle
// or max_range. A sensor origin inside a circle reads 0.
std::vector<double> raycast_scan(const std::vector<Circle>& obstacles, const Pose2D& pose,
                                 int n_beams, double max_range);

// Groups consecutive scan hits into obstacle circles (centroid + max spread
// + pad). Used for the APF/TEB obstacle sets.
std::vector<Circle> cluster_scan(const Pose2D& pose, const std::vector<double>& ranges,
                                 double max_range, double gap_threshold, double radius_pad);

// P5 graymap dump. Row 0 of the file is the top of the map (max y).
// Cell values are written verbatim: 0 free .. 252 inflated, 253 inscribed,
// 254 lethal, 255 unknown.
void write_pgm(const Costmap& map, const std::string& path);

}  // namespace navstack

#endif
