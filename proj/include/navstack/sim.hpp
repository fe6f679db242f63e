#ifndef NAVSTACK_SIM_HPP
#define NAVSTACK_SIM_HPP

#include <string>
#include <vector>

#include "navstack/apf.hpp"
#include "navstack/geometry.hpp"
#include "navstack/lane_vision.hpp"
#include "navstack/scenario.hpp"
#include "navstack/vehicle_model.hpp"

namespace navstack {

struct RunMetrics {
    int obstacles_avoided = 0;
    int obstacles_total = 0;
    bool collided = false;
    bool completed = false;
    double lane_deviation_rms = 0.0;  // m, rms of the signed centerline offset
    int lane_exits = 0;               // times |offset| crossed lane_width outward
    double completion_time = 0.0;     // simulated s actually run
    double mean_tick_compute = 0.0;   // ms; stays 0 unless timing was requested
};

// One record per executed tick, taken after the vehicle stepped. `pose` is
// the post-step pose, `command` what produced it, `lane_target` the
// vehicle-frame goal used that tick. local_plan is the planner's preview
// (chosen rollout / band nodes / short command extrapolation) in world
// coordinates; the force fields are only filled by apf.
struct TraceRecord {
    int tick = 0;
    Pose2D pose;
    ControlCommand command;
    LaneTarget lane_target;
    double s = 0.0;        // arc-length coordinate of pose
    double lateral = 0.0;  // signed centerline offset of pose
    double score = 0.0;    // dwa: winning trajectory score
    std::vector<Vec2> local_plan;
    Vec2 f_att, f_rep, f_escape;
};

struct TraceLog {
    std::string planner;
    std::vector<TraceRecord> records;
};

struct EpisodeResult {
    RunMetrics metrics;
    TraceLog trace;
};

// Closed loop: render the camera view, detect the lane, plan globally on a
// vehicle-centered costmap window toward the lane target, run the chosen
// local planner, step the vehicle. Ends when the arc-length coordinate
// reaches goal_s, on footprint/obstacle overlap, or after max_ticks.
// Deterministic for a given scenario; `timing` only fills
// mean_tick_compute (keep it off when outputs must be reproducible).
// Throws ConfigError on an invalid scenario.
EpisodeResult run_episode(const Scenario& scn, bool timing = false);

// JSON-lines serialization of a trace, one object per tick.
std::string trace_jsonl(const TraceLog& trace);

struct SuiteRow {
    std::string scenario;
    std::string planner;
    RunMetrics metrics;
    std::string error;  // non-empty when the cell failed to run
};

// scenarios x planners grid. A throwing cell becomes a row with `error`
// set; the suite never aborts. Rows come back sorted by (scenario,
// planner).
std::vector<SuiteRow> run_suite(const std::vector<Scenario>& scenarios,
                                const std::vector<std::string>& planners,
                                bool timing = false);

// Fixed-column CSV (RFC 4180 quoting, \n line ends). Byte-identical for
// identical rows.
std::string suite_csv(const std::vector<SuiteRow>& rows);

// Standalone SVG, top-down: road edges, red centerline, obstacles, the
// driven path (one vertex per tick), purple per-tick local-plan overlays.
std::string plot_trace(const TraceLog& trace, const Scenario& scn);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace navstack

#endif
