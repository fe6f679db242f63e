#include "navstack/apf.hpp"

#include <algorithm>
#include <cmath>

#include "navstack/errors.hpp"

namespace navstack {

namespace {

constexpr double kRhoFloor = 0.05;  // m, keeps 1/rho^2 finite near contact

double cos_angle(const Vec2& a, const Vec2& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    return a.dot(b) / (na * nb);
}

}  // namespace

void ApfConfig::validate() const {
    if (!(rho0 > 0.0)) throw ConfigError("apf: rho0 must be > 0");
    if (!(v_min >= 0.0)) throw ConfigError("apf: v_min must be >= 0");
    if (!(v_max >= v_min)) throw ConfigError("apf: v_max must be >= v_min");
    if (!(antiparallel_cos >= -1.0 && antiparallel_cos <= 0.0))
        throw ConfigError("apf: antiparallel_cos must be in [-1, 0]");
    if (escape_hold < 1) throw ConfigError("apf: escape_hold must be >= 1");
    if (!(k_att > 0.0)) throw ConfigError("apf: k_att must be > 0");
    if (!(k_rep >= 0.0)) throw ConfigError("apf: k_rep must be >= 0");
    if (!(k_gain >= 0.0)) throw ConfigError("apf: k_gain must be >= 0");
    if (!(eps_force >= 0.0)) throw ConfigError("apf: eps_force must be >= 0");
    if (!(escape_gain >= 0.0)) throw ConfigError("apf: escape_gain must be >= 0");
    if (!(k_heading > 0.0)) throw ConfigError("apf: k_heading must be > 0");
    if (!(goal_tolerance >= 0.0)) throw ConfigError("apf: goal_tolerance must be >= 0");
}

ForceState forces(const Pose2D& pose, const Vec2& goal, const std::vector<Circle>& obstacles,
                  const ApfConfig& cfg) {
    const Vec2 pos = pose.position();
    ForceState fs;
    fs.f_att = cfg.k_att * (goal - pos);
    for (const Circle& c : obstacles) {
        const double center_dist = distance(pos, c.center);
        const double rho = center_dist - c.radius;
        if (rho < 0.0) fs.collided = true;
        if (rho > cfg.rho0) continue;
        fs.n_obstacles += 1;
        const double r = std::max(rho, kRhoFloor);
        const double mag = cfg.k_rep * (1.0 / r - 1.0 / cfg.rho0) / (r * r);
        // Degenerate pose-on-center: no direction to push, skip the term.
        const Vec2 away = (pos - c.center).normalized();
        fs.f_rep += mag * away;
    }
    return fs;
}

double speed_law(int n_obstacles, const ApfConfig& cfg) {
    return std::clamp(cfg.v_max - cfg.k_gain * n_obstacles, cfg.v_min, cfg.v_max);
}

bool detect_local_min(const ForceState& fs, double dist_to_goal, const ApfConfig& cfg) {
    if (dist_to_goal <= cfg.goal_tolerance) return false;
    if ((fs.f_att + fs.f_rep).norm() < cfg.eps_force) return true;
    return cos_angle(fs.f_att, fs.f_rep) < cfg.antiparallel_cos;
}

std::pair<ControlCommand, ForceState> plan_step_apf(const VehicleState& state, const Vec2& goal,
                                                    const std::vector<Circle>& obstacles,
                                                    const ApfConfig& cfg,
                                                    const VehicleParams& params,
                                                    const ForceState& prev) {
    cfg.validate();
    params.validate();

    const Vec2 pos = state.pose.position();
    ForceState fs = forces(state.pose, goal, obstacles, cfg);
    fs.in_local_min = detect_local_min(fs, distance(pos, goal), cfg);

    if (fs.in_local_min) {
        fs.escape_ticks_left = cfg.escape_hold;
        if (prev.escape_ticks_left > 0) {
            fs.f_escape = prev.f_escape;  // keep the latched direction
        } else {
            // Fresh escape: sideways from f_att, toward the emptier side.
            int left = 0, right = 0;
            for (const Circle& c : obstacles) {
                if (distance(pos, c.center) - c.radius > cfg.rho0) continue;
                const double side = fs.f_att.cross(c.center - pos);
                if (side > 0.0) ++left;
                else if (side < 0.0) ++right;
            }
            Vec2 dir = fs.f_att.perp().normalized();  // left of f_att
            if (right < left) dir = -1.0 * dir;
            fs.f_escape = cfg.escape_gain * fs.f_att.norm() * dir;
        }
    } else if (prev.escape_ticks_left > 0) {
        fs.escape_ticks_left = prev.escape_ticks_left - 1;
        if (fs.escape_ticks_left > 0) fs.f_escape = prev.f_escape;
    }

    const Vec2 net = fs.f_att + fs.f_rep + fs.f_escape;
    double target_heading = state.pose.theta;  // vanishing net force: hold course
    if (net.norm() > 1e-12) target_heading = std::atan2(net.y, net.x);

    ControlCommand cmd;
    cmd.v = std::min(speed_law(fs.n_obstacles, cfg), params.v_max);
    cmd.gamma = std::clamp(cfg.k_heading * wrap_angle(target_heading - state.pose.theta),
                           -params.gamma_max, params.gamma_max);
    return {cmd, fs};
}

}  // namespace navstack
