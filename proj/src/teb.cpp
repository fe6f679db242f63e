#include "navstack/teb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navstack/errors.hpp"

namespace navstack {
namespace {

constexpr double kDtMin = 1e-3;
constexpr double kTinySegment = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr double kStepMin = 1e-12;
constexpr double kRelTol = 1e-6;
constexpr int kMaxNodes = 60;

double pen(double x) { return x > 0.0 ? x : 0.0; }

// Equal-arc-length resampling of a polyline into a band. First/last node
// take the given poses verbatim; interior headings follow the polyline.
ElasticBand band_from_polyline(const std::vector<Vec2>& pts, const Pose2D& pose,
                               const Pose2D& goal, const TebConfig& cfg,
                               const VehicleParams& params) {
    std::vector<Vec2> poly;
    poly.push_back(pose.position());
    for (const auto& p : pts)
        if (distance(p, poly.back()) > kTinySegment) poly.push_back(p);
    if (distance(goal.position(), poly.back()) > kTinySegment) poly.push_back(goal.position());

    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < poly.size(); ++i)
        cum.push_back(cum.back() + distance(poly[i - 1], poly[i]));
    const double total = cum.back();

    ElasticBand band;
    if (total < kTinySegment) {
        band.nodes = {pose, goal};
        band.dts = {cfg.dt_ref};
        return band;
    }

    const double spacing = cfg.dt_ref * params.v_max;
    const int n_seg = std::max(1, static_cast<int>(std::lround(total / spacing)));

    std::vector<Vec2> positions;
    positions.reserve(n_seg + 1);
    std::size_t seg = 0;
    for (int k = 0; k <= n_seg; ++k) {
        const double s = total * k / n_seg;
        while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        positions.push_back(poly[seg] + (poly[seg + 1] - poly[seg]) * t);
    }

    band.nodes.resize(positions.size());
    band.nodes.front() = pose;
    band.nodes.back() = goal;
    for (std::size_t i = 1; i + 1 < positions.size(); ++i) {
        const Vec2 in = positions[i] - positions[i - 1];
        const Vec2 out = positions[i + 1] - positions[i];
        const double dir_in = std::atan2(in.y, in.x);
        const double dir_out = std::atan2(out.y, out.x);
        band.nodes[i] = {positions[i].x, positions[i].y, circular_mean(dir_in, dir_out)};
    }
    band.dts.resize(positions.size() - 1);
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
        band.dts[i] = std::max(kDtMin, distance(positions[i], positions[i + 1]) / params.v_max);
    return band;
}

double min_clearance(const ElasticBand& band, const std::vector<Circle>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& n : band.nodes)
        for (const auto& o : obstacles)
            best = std::min(best, distance(n.position(), o.center) - o.radius);
    return best;
}

// Free-variable layout: [x, y, theta for nodes 1..n-2] then [all dts].
std::size_t free_count(const ElasticBand& band) {
    return 3 * (band.nodes.size() - 2) + band.dts.size();
}

double get_free(const ElasticBand& band, std::size_t k) {
    const std::size_t n_node_vars = 3 * (band.nodes.size() - 2);
    if (k < n_node_vars) {
        const Pose2D& n = band.nodes[1 + k / 3];
        switch (k % 3) {
            case 0: return n.x;
            case 1: return n.y;
            default: return n.theta;
        }
    }
    return band.dts[k - n_node_vars];
}

void set_free(ElasticBand& band, std::size_t k, double value) {
    const std::size_t n_node_vars = 3 * (band.nodes.size() - 2);
    if (k < n_node_vars) {
        Pose2D& n = band.nodes[1 + k / 3];
        switch (k % 3) {
            case 0: n.x = value; break;
            case 1: n.y = value; break;
            default: n.theta = wrap_angle(value); break;
        }
        return;
    }
    band.dts[k - n_node_vars] = std::max(kDtMin, value);
}

// Gradient plus a diagonal curvature estimate from the same stencil. The
// curvature scales the descent direction (Jacobi preconditioning), which
// keeps the stiff kinematics term from freezing progress on the soft terms.
void gradient_and_curvature(const ElasticBand& band, const std::vector<Circle>& obstacles,
                            const TebConfig& cfg, const VehicleParams& params,
                            std::vector<double>& grad, std::vector<double>& curv) {
    constexpr double h = 1e-4;
    ElasticBand work = band;
    const double f0 = band_objective(band, obstacles, cfg, params);
    const std::size_t m = free_count(band);
    grad.assign(m, 0.0);
    curv.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double v0 = get_free(band, k);
        set_free(work, k, v0 + h);
        const double fp = band_objective(work, obstacles, cfg, params);
        set_free(work, k, v0 - h);
        const double fm = band_objective(work, obstacles, cfg, params);
        set_free(work, k, v0);
        grad[k] = (fp - fm) / (2.0 * h);
        curv[k] = (fp - 2.0 * f0 + fm) / (h * h);
    }
}

// One resize action per call; true when something changed.
bool resize_step(ElasticBand& band, const TebConfig& cfg, OptimizeTrace* trace) {
    const double hi = cfg.dt_ref + cfg.dt_hysteresis;
    const double lo = cfg.dt_ref - cfg.dt_hysteresis;
    if (static_cast<int>(band.nodes.size()) < kMaxNodes) {
        for (std::size_t i = 0; i < band.dts.size(); ++i) {
            if (band.dts[i] > hi) {
                const Pose2D& a = band.nodes[i];
                const Pose2D& b = band.nodes[i + 1];
                const Pose2D mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y),
                                 circular_mean(a.theta, b.theta)};
                band.nodes.insert(band.nodes.begin() + i + 1, mid);
                const double half = 0.5 * band.dts[i];
                band.dts[i] = half;
                band.dts.insert(band.dts.begin() + i + 1, half);
                if (trace) ++trace->n_insertions;
                return true;
            }
        }
    }
    if (band.nodes.size() > 2) {
        for (std::size_t i = 0; i < band.dts.size(); ++i) {
            if (band.dts[i] >= lo) continue;
            // merge only when the result stays below the split threshold,
            // otherwise insert/remove would oscillate forever
            if (i + 1 < band.dts.size() && band.dts[i] + band.dts[i + 1] <= hi) {
                band.dts[i + 1] += band.dts[i];
                band.nodes.erase(band.nodes.begin() + i + 1);
                band.dts.erase(band.dts.begin() + i);
            } else if (i > 0 && band.dts[i] + band.dts[i - 1] <= hi) {
                band.dts[i - 1] += band.dts[i];
                band.nodes.erase(band.nodes.begin() + i);
                band.dts.erase(band.dts.begin() + i);
            } else {
                continue;
            }
            if (trace) ++trace->n_removals;
            return true;
        }
    }
    return false;
}

}  // namespace

double ElasticBand::total_time() const {
    double t = 0.0;
    for (double dt : dts) t += dt;
    return t;
}

void TebConfig::validate() const {
    const double ws[6] = {weight_time,     weight_vel,      weight_acc,
                          weight_turn_radius, weight_obstacle, weight_kinematics};
    for (double w : ws)
        if (!(w >= 0.0)) throw ConfigError("teb: weights must be >= 0");
    if (!(dt_hysteresis > 0.0) || !(dt_ref > dt_hysteresis))
        throw ConfigError("teb: need dt_ref > dt_hysteresis > 0");
    if (max_iterations < 1) throw ConfigError("teb: max_iterations must be >= 1");
    if (n_alternatives < 1) throw ConfigError("teb: n_alternatives must be >= 1");
    if (!(min_obstacle_dist > 0.0)) throw ConfigError("teb: min_obstacle_dist must be > 0");
}

ElasticBand seed_band(const Pose2D& pose, const Pose2D& goal, const GlobalPath& global_path,
                      const TebConfig& cfg, const VehicleParams& params) {
    std::vector<Vec2> pts;
    if (!global_path.waypoints.empty()) {
        std::size_t i0 = 0, i1 = 0;
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < global_path.waypoints.size(); ++i) {
            const double dp = distance(global_path.waypoints[i], pose.position());
            const double dg = distance(global_path.waypoints[i], goal.position());
            if (dp < d0) {
                d0 = dp;
                i0 = i;
            }
            if (dg < d1) {
                d1 = dg;
                i1 = i;
            }
        }
        for (std::size_t i = i0; i <= i1 && i < global_path.waypoints.size(); ++i)
            pts.push_back(global_path.waypoints[i]);
    }
    return band_from_polyline(pts, pose, goal, cfg, params);
}

double band_objective(const ElasticBand& band, const std::vector<Circle>& obstacles,
                      const TebConfig& cfg, const VehicleParams& params) {
    const std::size_t n = band.nodes.size();
    double obj = 0.0;

    for (double dt : band.dts) obj += cfg.weight_time * dt;

    std::vector<double> lens(n - 1), vels(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lens[i] = distance(band.nodes[i].position(), band.nodes[i + 1].position());
        vels[i] = lens[i] / band.dts[i];
        const double pv = pen(std::abs(vels[i]) - params.v_max);
        obj += cfg.weight_vel * pv * pv;
    }

    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double a = (vels[i + 1] - vels[i]) / (0.5 * (band.dts[i] + band.dts[i + 1]));
        const double pa = pen(std::abs(a) - params.a_max);
        obj += cfg.weight_acc * pa * pa;
    }

    const double r_min = params.min_turn_radius();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (lens[i] < kTinySegment) continue;
        const double dth = std::abs(wrap_angle(band.nodes[i + 1].theta - band.nodes[i].theta));
        if (dth < 1e-12) continue;
        const double r = lens[i] / dth;
        const double pr = pen(r_min - r);
        obj += cfg.weight_turn_radius * pr * pr;
    }

    for (const auto& node : band.nodes) {
        for (const auto& o : obstacles) {
            const double d = distance(node.position(), o.center) - o.radius;
            const double po = pen(cfg.min_obstacle_dist - d);
            obj += cfg.weight_obstacle * po * po;
        }
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (lens[i] < kTinySegment) continue;
        const Vec2 d = band.nodes[i + 1].position() - band.nodes[i].position();
        const double travel_dir = std::atan2(d.y, d.x);
        const double mean_heading = circular_mean(band.nodes[i].theta, band.nodes[i + 1].theta);
        const double h = wrap_angle(travel_dir - mean_heading);
        obj += cfg.weight_kinematics * h * h;
    }

    return obj;
}

std::vector<double> band_gradient(const ElasticBand& band, const std::vector<Circle>& obstacles,
                                  const TebConfig& cfg, const VehicleParams& params, double h) {
    ElasticBand work = band;
    const std::size_t m = free_count(band);
    std::vector<double> grad(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double v0 = get_free(band, k);
        set_free(work, k, v0 + h);
        const double fp = band_objective(work, obstacles, cfg, params);
        set_free(work, k, v0 - h);
        const double fm = band_objective(work, obstacles, cfg, params);
        set_free(work, k, v0);
        grad[k] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

ElasticBand optimize(ElasticBand band, const std::vector<Circle>& obstacles,
                     const TebConfig& cfg, const VehicleParams& params, OptimizeTrace* trace) {
    if (band.nodes.size() < 2 || band.dts.size() != band.nodes.size() - 1)
        throw InvalidState("teb: malformed band");

    double f = band_objective(band, obstacles, cfg, params);
    if (!std::isfinite(f)) throw OptimizationDiverged("teb: non-finite objective");

    // Epochs of: resize to quiescence, then descend on the fixed structure.
    // max_iterations bounds the total number of accepted descent steps.
    constexpr int kStepsPerEpoch = 10;
    int accepted_total = 0;
    bool done = false;
    while (!done && accepted_total < cfg.max_iterations) {
        for (int r = 0; r < 2 * kMaxNodes && resize_step(band, cfg, trace); ++r) {
        }
        f = band_objective(band, obstacles, cfg, params);
        if (!std::isfinite(f)) throw OptimizationDiverged("teb: non-finite objective");

        for (int s = 0; s < kStepsPerEpoch && accepted_total < cfg.max_iterations; ++s) {
            std::vector<double> g, c;
            gradient_and_curvature(band, obstacles, cfg, params, g, c);
            double g2 = 0.0;
            for (double gk : g) g2 += gk * gk;
            if (g2 < 1e-18) {
                done = true;
                break;
            }

            // scaled descent direction; flat or concave coordinates fall
            // back to the raw gradient
            std::vector<double> dir(g.size());
            double slope = 0.0;  // g . dir, positive for a descent direction
            for (std::size_t k = 0; k < g.size(); ++k) {
                dir[k] = g[k] / std::max(c[k], 1.0);
                slope += g[k] * dir[k];
            }

            double t = 1.0;
            bool accepted = false;
            ElasticBand cand;
            double fc = f;
            while (t >= kStepMin) {
                cand = band;
                for (std::size_t k = 0; k < dir.size(); ++k)
                    set_free(cand, k, get_free(band, k) - t * dir[k]);
                fc = band_objective(cand, obstacles, cfg, params);
                if (std::isfinite(fc) && fc <= f - kArmijo * t * slope) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) {
                done = true;
                break;
            }

            if (trace) trace->steps.push_back({f, fc});
            ++accepted_total;
            const bool converged = (f - fc) < kRelTol * std::max(1.0, f);
            band = std::move(cand);
            f = fc;
            if (!std::isfinite(f)) throw OptimizationDiverged("teb: non-finite objective");
            if (converged) {
                done = true;
                break;
            }
        }
    }

    // leave no segment above the resize threshold
    while (true) {
        bool split = false;
        const double hi = cfg.dt_ref + cfg.dt_hysteresis;
        for (std::size_t i = 0; i < band.dts.size(); ++i)
            if (band.dts[i] > hi && static_cast<int>(band.nodes.size()) < kMaxNodes) {
                const Pose2D& a = band.nodes[i];
                const Pose2D& b = band.nodes[i + 1];
                const Pose2D mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y),
                                 circular_mean(a.theta, b.theta)};
                band.nodes.insert(band.nodes.begin() + i + 1, mid);
                const double half = 0.5 * band.dts[i];
                band.dts[i] = half;
                band.dts.insert(band.dts.begin() + i + 1, half);
                if (trace) ++trace->n_insertions;
                split = true;
                break;
            }
        if (!split) break;
    }
    return band;
}

TebPlanner::TebPlanner(TebConfig cfg, VehicleParams params)
    : cfg_(cfg), params_(params) {
    cfg_.validate();
    params_.validate();
}

ControlCommand TebPlanner::plan_step(const VehicleState& state, const Pose2D& interim_goal,
                                     const GlobalPath& global_path,
                                     const std::vector<Circle>& obstacles) {
    const Pose2D& pose = state.pose;

    std::vector<ElasticBand> candidates;

    if (incumbent_) {
        // re-pin endpoints; drop a warm start whose goal has moved too far
        if (distance(incumbent_->nodes.back().position(), interim_goal.position()) <= 1.0 &&
            incumbent_->nodes.size() >= 2) {
            ElasticBand warm = *incumbent_;
            warm.nodes.front() = pose;
            warm.nodes.back() = interim_goal;
            candidates.push_back(std::move(warm));
        } else {
            incumbent_.reset();
        }
    }

    const ElasticBand seeded = seed_band(pose, interim_goal, global_path, cfg_, params_);
    if (!incumbent_) candidates.push_back(seeded);

    // nearest obstacle that blocks the straight seed gets left/right detours
    const Circle* blocking = nullptr;
    double blocking_dist = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) {
        double clear = std::numeric_limits<double>::infinity();
        for (const auto& n : seeded.nodes)
            clear = std::min(clear, distance(n.position(), o.center) - o.radius);
        if (clear >= cfg_.min_obstacle_dist) continue;
        const double d = distance(pose.position(), o.center);
        if (d < blocking_dist) {
            blocking_dist = d;
            blocking = &o;
        }
    }
    if (blocking) {
        Vec2 dir = (interim_goal.position() - pose.position()).normalized();
        if (dir.norm() == 0.0) dir = {std::cos(pose.theta), std::sin(pose.theta)};
        const Vec2 left = dir.perp();
        const double offset =
            blocking->radius + cfg_.min_obstacle_dist + 0.5 * params_.body_width;
        for (double side : {1.0, -1.0}) {
            const Vec2 via = blocking->center + left * (side * offset);
            GlobalPath detour;
            detour.waypoints = {pose.position(), via, interim_goal.position()};
            candidates.push_back(seed_band(pose, interim_goal, detour, cfg_, params_));
        }
    }
    if (static_cast<int>(candidates.size()) > cfg_.n_alternatives)
        candidates.resize(cfg_.n_alternatives);

    ElasticBand best_band;
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    for (auto& cand : candidates) {
        ElasticBand opt;
        try {
            opt = optimize(std::move(cand), obstacles, cfg_, params_);
        } catch (const OptimizationDiverged&) {
            continue;
        }
        if (min_clearance(opt, obstacles) < 0.0) continue;  // through an obstacle
        const double obj = band_objective(opt, obstacles, cfg_, params_);
        if (!std::isfinite(obj)) continue;
        if (obj < best_obj) {
            best_obj = obj;
            best_band = std::move(opt);
            found = true;
        }
    }

    if (!found) {
        incumbent_.reset();
        return {0.0, 0.0};
    }
    incumbent_ = best_band;

    const double len = distance(best_band.nodes[0].position(), best_band.nodes[1].position());
    const double dt = best_band.dts[0];
    if (len < kTinySegment || dt <= 0.0) return {0.0, 0.0};

    ControlCommand cmd;
    cmd.v = std::clamp(len / dt, 0.0, params_.v_max);
    const double dth = wrap_angle(best_band.nodes[1].theta - best_band.nodes[0].theta);
    cmd.gamma = std::clamp(std::atan(params_.wheelbase_L * dth / len), -params_.gamma_max,
                           params_.gamma_max);
    return cmd;
}

}  // namespace navstack
