#ifndef NAVSTACK_SCENARIO_HPP
#define NAVSTACK_SCENARIO_HPP

#include <string>
#include <vector>

#include "navstack/apf.hpp"
#include "navstack/costmap.hpp"
#include "navstack/dwa.hpp"
#include "navstack/geometry.hpp"
#include "navstack/lane_vision.hpp"
#include "navstack/teb.hpp"
#include "navstack/track.hpp"
#include "navstack/vehicle_model.hpp"

namespace navstack {

// One benchmark episode, fully described: the track, what sits on it, the
// vehicle, which local planner runs and with what knobs. Everything has a
// shipped default except the track itself; a YAML file overrides fields by
// name (see README for the format). format_version guards against stale
// files once the schema moves.
struct Scenario {
    int format_version = 1;
    std::string name = "scenario";

    // world
    std::vector<Vec2> track_points;  // centerline control points, >= 2
    double lane_width = 0.55;        // m, half road width (side lines at +-lane_width)
    std::vector<Circle> obstacles;
    Pose2D start_pose;
    double goal_s = -1.0;  // finish arc length; < 0 means "end of track"

    VehicleParams vehicle;

    // local planner selection + per-planner knobs (only the chosen one runs)
    std::string planner = "teb";  // dwa | teb | apf
    DwaConfig dwa;
    TebConfig teb;
    ApfConfig apf;

    // rolling local costmap window, square, vehicle centered
    double map_resolution = 0.05;  // m/cell
    int map_cells = 120;
    InflationParams inflation;
    PlannerCostParams planner_cost;

    // simulated lidar -> obstacle circles for the apf/teb planners
    int scan_beams = 360;
    double scan_range = 4.0;  // m
    double scan_gap = 0.25;   // m, cluster split threshold
    double scan_pad = 0.05;   // m, added to cluster radii
    double interim_window = 1.0;  // m, carrot distance along the global path

    CameraModel camera = default_camera();
    LaneVisionConfig lane;

    double tick = 0.05;  // s
    int max_ticks = 3000;
    unsigned rng_seed = 1;
    double noise_amp = 0.0;  // camera brightness noise, 0 for benchmark runs

    Track make_track() const;  // throws ConfigError on bad geometry

    // Cross-field checks: planner name known, lane wider than the body,
    // positive radii, goal on the track, curvature within what gamma_max
    // can steer. Throws ConfigError naming the offending field.
    void validate() const;
};

// Parses YAML text. `origin` prefixes error messages (usually the file
// name) and its stem is the default scenario name. Unknown keys are
// rejected. Throws ConfigError.
Scenario parse_scenario(const std::string& yaml_text, const std::string& origin);

// parse_scenario over a file's contents.
Scenario load_scenario(const std::string& path);

}  // namespace navstack

#endif
