#ifndef NAVSTACK_DWA_HPP
#define NAVSTACK_DWA_HPP

#include <vector>

#include "navstack/costmap.hpp"
#include "navstack/geometry.hpp"
#include "navstack/global_planner.hpp"
#include "navstack/vehicle_model.hpp"

namespace navstack {

struct DwaConfig {
    double sim_time = 3.0;         // rollout horizon, s
    double sim_granularity = 0.1;  // rollout sampling step, s
    int vx_samples = 6;
    int vth_samples = 21;  // odd keeps omega = 0 in the sample grid
    double weight_goal = 1.0;
    double weight_path = 0.6;
    double weight_obstacle = 0.8;
    double weight_speed = 0.3;
    double control_period = 0.1;  // window lookahead T, s

    // Throws ConfigError: requires sim_time > sim_granularity > 0,
    // control_period > 0, sample counts >= 1, weights >= 0 and not all zero.
    void validate() const;
};

struct VelocityWindow {
    double v_min = 0.0, v_max = 0.0;
    double omega_min = 0.0, omega_max = 0.0;
};

struct ScoredTrajectory {
    double v = 0.0;
    double omega = 0.0;
    std::vector<Pose2D> states;
    double score = 0.0;
    bool collides = false;
};

// Reachable velocity rectangle: absolute limits [0, v_max] x [-W, W] with
// W = v_max*tan(gamma_max)/L, intersected with what a_max / alpha_max allow
// around (v, omega) within one control period. The current velocities are
// clamped into the absolute limits first, so the window is never empty.
VelocityWindow dynamic_window(double v, double omega, const VehicleParams& params,
                              const DwaConfig& cfg);

// Constant-command arc, sampled at t = k*sim_granularity for
// k = 0..floor(sim_time/sim_granularity). states[0] is the start pose.
std::vector<Pose2D> rollout(double v, double omega, const Pose2D& start, const DwaConfig& cfg);

// Scores one rollout. clearance_field must be distance_field(local_map).
//   f_goal  = 1/(1 + dist(endpoint, interim_goal))
//   f_path  = 1/(1 + mean over states of distance to the nearest path waypoint)
//   f_obs   = min(clearance, inflation_radius)/inflation_radius, clearance =
//             min over states of the clearance field at the state's cell
//             (states off the map count as fully clear)
//   f_speed = v/params.v_max
// score = weighted sum; collides = some footprint circle of some state
// covers a lethal cell center.
ScoredTrajectory score_trajectory(double v, double omega, std::vector<Pose2D> states,
                                  const Vec2& interim_goal, const GlobalPath& global_path,
                                  const Costmap& local_map,
                                  const std::vector<double>& clearance_field,
                                  double inflation_radius, const DwaConfig& cfg,
                                  const VehicleParams& params);

// One control step: sample vx_samples x vth_samples commands over the dynamic
// window, score every rollout, drop colliding ones and return the best as an
// Ackermann command, gamma = atan(L*omega/v) clamped to gamma_max (gamma = 0
// when v = 0). Ties break on higher v, then smaller |omega|, then smaller
// omega, so the result does not depend on evaluation order. When every sample
// collides the stop command (0, 0) is returned. If best_out is non-null it
// receives the winning trajectory (or a default-constructed one on stop).
ControlCommand plan_step(const VehicleState& state, const Vec2& interim_goal,
                         const GlobalPath& global_path, const Costmap& local_map,
                         double inflation_radius, const DwaConfig& cfg,
                         const VehicleParams& params, ScoredTrajectory* best_out = nullptr);

}  // namespace navstack

#endif
