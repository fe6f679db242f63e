#ifndef NAVSTACK_APF_HPP
#define NAVSTACK_APF_HPP

#include <utility>
#include <vector>

#include "navstack/geometry.hpp"
#include "navstack/vehicle_model.hpp"

namespace navstack {

struct ApfConfig {
    double k_att = 1.0;   // attractive gain, 1/s^2
    double k_rep = 0.5;   // repulsive gain, m^2/s^2
    double rho0 = 1.0;    // repulsive influence radius, m
    double v_max = 1.0;   // m/s
    double k_gain = 0.2;  // speed drop per nearby obstacle, m/s
    double v_min = 0.1;   // m/s
    double eps_force = 0.05;        // net-force magnitude below which we call it stuck
    double antiparallel_cos = -0.95;  // att/rep angle threshold, in [-1, 0]
    double escape_gain = 1.0;
    int escape_hold = 20;        // ticks the escape vector persists
    double k_heading = 1.5;      // proportional steering gain
    double goal_tolerance = 0.2;  // m, inside this we never flag a local minimum

    // Throws ConfigError: requires rho0 > 0, 0 <= v_min <= v_max,
    // antiparallel_cos in [-1, 0], escape_hold >= 1, gains >= 0, k_att > 0,
    // k_heading > 0.
    void validate() const;
};

struct ForceState {
    Vec2 f_att;
    Vec2 f_rep;
    Vec2 f_escape;  // zero unless in_local_min or escape_ticks_left > 0
    int n_obstacles = 0;  // obstacles with surface clearance <= rho0
    bool in_local_min = false;
    int escape_ticks_left = 0;
    bool collided = false;  // pose inside an obstacle circle
};

// Field synthesis at one pose. f_att = k_att*(goal - position). Each obstacle
// whose surface clearance rho is <= rho0 adds
//   k_rep * (1/rho - 1/rho0) * (1/rho^2) * unit(position - center),
// with rho floored at 0.05 m so near-contact does not blow up. A pose inside
// a circle sets `collided` (its rho also floors to 0.05). n_obstacles counts
// the contributing circles. Escape/latch fields are left zeroed.
ForceState forces(const Pose2D& pose, const Vec2& goal, const std::vector<Circle>& obstacles,
                  const ApfConfig& cfg);

// clamp(v_max - k_gain*n, v_min, v_max): crowded surroundings slow us down.
double speed_law(int n_obstacles, const ApfConfig& cfg);

// Stuck iff still away from the goal (dist > goal_tolerance) and either the
// net force nearly vanishes (|f_att + f_rep| < eps_force) or attraction and
// repulsion point nearly opposite ways (cos angle < antiparallel_cos). The
// angle test is skipped while either force is zero.
bool detect_local_min(const ForceState& fs, double dist_to_goal, const ApfConfig& cfg);

// One control step. Computes forces, runs the local-minimum check, and
// injects a lateral escape force when stuck: magnitude escape_gain*|f_att|,
// direction perpendicular to f_att toward the side with fewer obstacles
// inside rho0 (tie goes left). The escape vector is latched in world frame:
// while stuck it is re-armed to escape_hold ticks, otherwise it persists and
// decays one tick per call, which stops the side choice from chattering.
// Command: v = speed_law(n_obstacles), gamma = clamp(k_heading * heading
// error to atan2(f_att + f_rep + f_escape)) at +-gamma_max. `prev` carries
// the latch between calls; pass a default ForceState on the first tick.
std::pair<ControlCommand, ForceState> plan_step_apf(const VehicleState& state, const Vec2& goal,
                                                    const std::vector<Circle>& obstacles,
                                                    const ApfConfig& cfg,
                                                    const VehicleParams& params,
                                                    const ForceState& prev);

}  // namespace navstack

#endif
