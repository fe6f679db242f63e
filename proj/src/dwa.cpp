#include "navstack/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navstack/errors.hpp"

namespace navstack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOmegaStraight = 1e-9;

double linspace_at(double lo, double hi, int n, int i) {
    if (n == 1) return 0.5 * (lo + hi);
    if (i == 0) return lo;
    if (i == n - 1) return hi;
    return lo + (hi - lo) * i / (n - 1);
}

// Minimum distance from p to the path's waypoints; +inf for an empty path.
double path_distance(const Vec2& p, const GlobalPath& path) {
    double best = kInf;
    for (const auto& wp : path.waypoints) best = std::min(best, distance(wp, p));
    return best;
}

bool circle_hits_lethal(const Circle& c, const Costmap& map) {
    const double res = map.resolution();
    const int x0 = std::max(0, static_cast<int>(std::floor((c.center.x - c.radius - map.origin().x) / res)));
    const int x1 = std::min(map.width() - 1,
                            static_cast<int>(std::ceil((c.center.x + c.radius - map.origin().x) / res)));
    const int y0 = std::max(0, static_cast<int>(std::floor((c.center.y - c.radius - map.origin().y) / res)));
    const int y1 = std::min(map.height() - 1,
                            static_cast<int>(std::ceil((c.center.y + c.radius - map.origin().y) / res)));
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
            if (map.at(ix, iy) == kCostLethal && c.contains(map.cell_center(ix, iy))) return true;
    return false;
}

}  // namespace

void DwaConfig::validate() const {
    if (!(sim_granularity > 0.0) || !(sim_time > sim_granularity))
        throw ConfigError("dwa: need sim_time > sim_granularity > 0");
    if (!(control_period > 0.0)) throw ConfigError("dwa: control_period must be positive");
    if (vx_samples < 1 || vth_samples < 1) throw ConfigError("dwa: sample counts must be >= 1");
    const double ws[4] = {weight_goal, weight_path, weight_obstacle, weight_speed};
    double total = 0.0;
    for (double w : ws) {
        if (!(w >= 0.0)) throw ConfigError("dwa: weights must be >= 0");
        total += w;
    }
    if (total == 0.0) throw ConfigError("dwa: at least one weight must be positive");
}

VelocityWindow dynamic_window(double v, double omega, const VehicleParams& params,
                              const DwaConfig& cfg) {
    const double w_abs = params.max_yaw_rate();
    v = std::clamp(v, 0.0, params.v_max);
    omega = std::clamp(omega, -w_abs, w_abs);

    const double T = cfg.control_period;
    VelocityWindow w;
    w.v_min = std::max(0.0, v - params.a_max * T);
    w.v_max = std::min(params.v_max, v + params.a_max * T);
    w.omega_min = std::max(-w_abs, omega - params.alpha_max * T);
    w.omega_max = std::min(w_abs, omega + params.alpha_max * T);
    return w;
}

std::vector<Pose2D> rollout(double v, double omega, const Pose2D& start, const DwaConfig& cfg) {
    const int n_steps = static_cast<int>(std::floor(cfg.sim_time / cfg.sim_granularity + 1e-9));
    std::vector<Pose2D> states;
    states.reserve(n_steps + 1);
    states.push_back(start);
    for (int k = 1; k <= n_steps; ++k) {
        const double t = k * cfg.sim_granularity;
        Pose2D p = start;
        if (std::abs(omega) > kOmegaStraight) {
            const double r = v / omega;
            p.theta = wrap_angle(start.theta + omega * t);
            p.x = start.x + r * (std::sin(start.theta + omega * t) - std::sin(start.theta));
            p.y = start.y - r * (std::cos(start.theta + omega * t) - std::cos(start.theta));
        } else {
            p.x = start.x + v * t * std::cos(start.theta);
            p.y = start.y + v * t * std::sin(start.theta);
        }
        states.push_back(p);
    }
    return states;
}

ScoredTrajectory score_trajectory(double v, double omega, std::vector<Pose2D> states,
                                  const Vec2& interim_goal, const GlobalPath& global_path,
                                  const Costmap& local_map,
                                  const std::vector<double>& clearance_field,
                                  double inflation_radius, const DwaConfig& cfg,
                                  const VehicleParams& params) {
    if (!(inflation_radius > 0.0)) throw ConfigError("dwa: inflation_radius must be positive");

    ScoredTrajectory out;
    out.v = v;
    out.omega = omega;
    out.states = std::move(states);

    double clearance = kInf;
    double path_dist_sum = 0.0;
    for (const auto& s : out.states) {
        int ix, iy;
        if (local_map.world_to_cell(s.position(), ix, iy))
            clearance = std::min(clearance, clearance_field[local_map.index(ix, iy)]);
        path_dist_sum += path_distance(s.position(), global_path);
        if (!out.collides) {
            for (const auto& c : footprint_circles(s, params))
                if (circle_hits_lethal(c, local_map)) {
                    out.collides = true;
                    break;
                }
        }
    }

    const double f_goal = 1.0 / (1.0 + distance(out.states.back().position(), interim_goal));
    const double mean_path_dist = path_dist_sum / static_cast<double>(out.states.size());
    const double f_path = std::isfinite(mean_path_dist) ? 1.0 / (1.0 + mean_path_dist) : 0.0;
    const double f_obs = std::min(clearance, inflation_radius) / inflation_radius;
    const double f_speed = v / params.v_max;
    out.score = cfg.weight_goal * f_goal + cfg.weight_path * f_path +
                cfg.weight_obstacle * f_obs + cfg.weight_speed * f_speed;
    return out;
}

ControlCommand plan_step(const VehicleState& state, const Vec2& interim_goal,
                         const GlobalPath& global_path, const Costmap& local_map,
                         double inflation_radius, const DwaConfig& cfg,
                         const VehicleParams& params, ScoredTrajectory* best_out) {
    cfg.validate();
    params.validate();

    const VelocityWindow w = dynamic_window(state.v, state.omega, params, cfg);
    const std::vector<double> clearance = distance_field(local_map);

    ScoredTrajectory best;
    bool have_best = false;
    for (int i = 0; i < cfg.vx_samples; ++i) {
        const double v = linspace_at(w.v_min, w.v_max, cfg.vx_samples, i);
        // the window's yaw-rate bounds assume full speed; at this v the
        // steering lock caps what an Ackermann platform can actually turn,
        // and a candidate beyond the cap would execute as a wider arc than
        // the one scored here
        const double omega_cap = v * std::tan(params.gamma_max) / params.wheelbase_L;
        for (int j = 0; j < cfg.vth_samples; ++j) {
            const double omega = linspace_at(w.omega_min, w.omega_max, cfg.vth_samples, j);
            if (std::abs(omega) > omega_cap + 1e-12) continue;
            ScoredTrajectory cand =
                score_trajectory(v, omega, rollout(v, omega, state.pose, cfg), interim_goal,
                                 global_path, local_map, clearance, inflation_radius, cfg, params);
            if (cand.collides) continue;
            const bool better =
                !have_best || cand.score > best.score ||
                (cand.score == best.score &&
                 (cand.v > best.v ||
                  (cand.v == best.v && (std::abs(cand.omega) < std::abs(best.omega) ||
                                        (std::abs(cand.omega) == std::abs(best.omega) &&
                                         cand.omega < best.omega)))));
            if (better) {
                best = std::move(cand);
                have_best = true;
            }
        }
    }

    if (!have_best) {
        if (best_out) *best_out = ScoredTrajectory{};
        return {0.0, 0.0};
    }
    if (best_out) *best_out = best;

    ControlCommand cmd;
    cmd.v = best.v;
    cmd.gamma = best.v > 0.0
                    ? std::clamp(std::atan(params.wheelbase_L * best.omega / best.v),
                                 -params.gamma_max, params.gamma_max)
                    : 0.0;
    return cmd;
}

}  // namespace navstack
