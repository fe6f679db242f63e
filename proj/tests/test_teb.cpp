#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "navstack/errors.hpp"
#include "navstack/teb.hpp"

using namespace navstack;

namespace {

// Term-by-term recomputation, written against the documented formulas.
double objective_oracle(const ElasticBand& b, const std::vector<Circle>& obs,
                        const TebConfig& cfg, const VehicleParams& pr) {
    const std::size_t n = b.nodes.size();
    double time_term = 0.0;
    for (double dt : b.dts) time_term += dt;
    time_term *= cfg.weight_time;

    auto seg_len = [&](std::size_t i) {
        return distance(b.nodes[i].position(), b.nodes[i + 1].position());
    };
    auto seg_vel = [&](std::size_t i) { return seg_len(i) / b.dts[i]; };

    double vel_term = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double over = std::abs(seg_vel(i)) - pr.v_max;
        if (over > 0.0) vel_term += cfg.weight_vel * over * over;
    }

    double acc_term = 0.0;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double a =
            (seg_vel(i + 1) - seg_vel(i)) / (0.5 * (b.dts[i] + b.dts[i + 1]));
        const double over = std::abs(a) - pr.a_max;
        if (over > 0.0) acc_term += cfg.weight_acc * over * over;
    }

    double turn_term = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double len = seg_len(i);
        if (len < 1e-9) continue;
        const double dth = std::abs(wrap_angle(b.nodes[i + 1].theta - b.nodes[i].theta));
        if (dth < 1e-12) continue;
        const double shortfall = pr.min_turn_radius() - len / dth;
        if (shortfall > 0.0) turn_term += cfg.weight_turn_radius * shortfall * shortfall;
    }

    double obs_term = 0.0;
    for (const auto& node : b.nodes)
        for (const auto& o : obs) {
            const double gap =
                cfg.min_obstacle_dist - (distance(node.position(), o.center) - o.radius);
            if (gap > 0.0) obs_term += cfg.weight_obstacle * gap * gap;
        }

    double kin_term = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (seg_len(i) < 1e-9) continue;
        const Vec2 d = b.nodes[i + 1].position() - b.nodes[i].position();
        const double h =
            wrap_angle(std::atan2(d.y, d.x) -
                       circular_mean(b.nodes[i].theta, b.nodes[i + 1].theta));
        kin_term += cfg.weight_kinematics * h * h;
    }

    return time_term + vel_term + acc_term + turn_term + obs_term + kin_term;
}

ElasticBand random_band(std::mt19937& rng, int n_nodes) {
    std::uniform_real_distribution<double> jitter(-0.15, 0.15), udt(0.15, 0.45);
    ElasticBand b;
    for (int i = 0; i < n_nodes; ++i) {
        const double x = 0.35 * i + jitter(rng);
        const double y = jitter(rng);
        b.nodes.push_back({x, y, jitter(rng)});
    }
    for (int i = 0; i + 1 < n_nodes; ++i) b.dts.push_back(udt(rng));
    return b;
}

GlobalPath straight_path(double x0, double x1, double step) {
    GlobalPath p;
    for (double x = x0; x <= x1 + 1e-9; x += step) p.waypoints.push_back({x, 0.0});
    return p;
}

}  // namespace

TEST_CASE("teb config validation") {
    TebConfig ok;
    CHECK_NOTHROW(ok.validate());
    TebConfig bad = ok;
    bad.weight_obstacle = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.dt_hysteresis = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.dt_hysteresis = bad.dt_ref;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.n_alternatives = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.min_obstacle_dist = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("seed_band: uniform seeding along a straight path") {
    TebConfig cfg;  // dt_ref = 0.3
    VehicleParams params;  // v_max = 1
    const Pose2D pose{0, 0, 0}, goal{3.0, 0, 0};
    const auto band = seed_band(pose, goal, straight_path(0.0, 3.0, 0.1), cfg, params);

    CHECK(band.nodes.size() == 11);  // 10 segments of 0.3 m
    REQUIRE(band.dts.size() == band.nodes.size() - 1);
    for (double dt : band.dts) CHECK(dt == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(band.nodes.front().x == pose.x);
    CHECK(band.nodes.front().theta == pose.theta);
    CHECK(band.nodes.back().x == goal.x);
    for (const auto& n : band.nodes) CHECK(n.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("seed_band: degenerate pose equals goal") {
    TebConfig cfg;
    VehicleParams params;
    const Pose2D pose{1.0, -2.0, 0.7};
    const auto band = seed_band(pose, pose, GlobalPath{}, cfg, params);
    REQUIRE(band.nodes.size() == 2);
    CHECK(band.nodes[0].x == pose.x);
    CHECK(band.nodes[1].x == pose.x);
    REQUIRE(band.dts.size() == 1);
    CHECK(band.dts[0] == cfg.dt_ref);
}

TEST_CASE("seed_band: curved path keeps arc length within 5%") {
    TebConfig cfg;
    VehicleParams params;
    GlobalPath quarter;
    const double R = 2.0;
    for (int i = 0; i <= 60; ++i) {
        const double a = 0.5 * M_PI * i / 60;
        quarter.waypoints.push_back({R * std::sin(a), R * (1.0 - std::cos(a))});
    }
    double path_len = 0.0;
    for (std::size_t i = 1; i < quarter.waypoints.size(); ++i)
        path_len += distance(quarter.waypoints[i - 1], quarter.waypoints[i]);

    const Pose2D pose{0, 0, 0}, goal{R, R, M_PI / 2};
    const auto band = seed_band(pose, goal, quarter, cfg, params);
    double band_len = 0.0;
    for (std::size_t i = 1; i < band.nodes.size(); ++i)
        band_len += distance(band.nodes[i - 1].position(), band.nodes[i].position());
    CHECK(band_len == doctest::Approx(path_len).epsilon(0.05));
}

TEST_CASE("band_objective: time term isolated on a stationary band") {
    TebConfig cfg;
    cfg.weight_vel = cfg.weight_acc = cfg.weight_turn_radius = 0.0;
    cfg.weight_obstacle = cfg.weight_kinematics = 0.0;
    cfg.weight_time = 2.5;
    VehicleParams params;

    ElasticBand b;
    for (int i = 0; i < 4; ++i) b.nodes.push_back({1.0, 1.0, 0.3});
    b.dts = {0.2, 0.4, 0.3};
    CHECK(band_objective(b, {}, cfg, params) == doctest::Approx(2.5 * 0.9).epsilon(1e-12));
}

TEST_CASE("band_objective: no velocity or acceleration penalty exactly at the limits") {
    TebConfig cfg;
    VehicleParams params;  // v_max = 1
    ElasticBand b;
    // 0.25 is exactly representable, so v == v_max holds bit-exactly
    for (int i = 0; i < 5; ++i) b.nodes.push_back({0.25 * i, 0.0, 0.0});
    b.dts = {0.25, 0.25, 0.25, 0.25};  // v = 1.0 on every segment, a = 0

    TebConfig only_dyn = cfg;
    only_dyn.weight_time = 0.0;
    only_dyn.weight_turn_radius = 0.0;
    only_dyn.weight_obstacle = 0.0;
    only_dyn.weight_kinematics = 0.0;
    CHECK(band_objective(b, {}, only_dyn, params) == 0.0);
}

TEST_CASE("band_objective: matches the term-by-term oracle on random bands") {
    std::mt19937 rng(31);
    TebConfig cfg;
    VehicleParams params;
    const std::vector<Circle> obs = {{{0.8, 0.1}, 0.12}, {{1.9, -0.2}, 0.2}};
    for (int trial = 0; trial < 40; ++trial) {
        const auto band = random_band(rng, 3 + trial % 8);
        const double want = objective_oracle(band, obs, cfg, params);
        const double got = band_objective(band, obs, cfg, params);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("band_gradient: consistent across finite-difference step sizes") {
    std::mt19937 rng(57);
    TebConfig cfg;
    VehicleParams params;
    const std::vector<Circle> obs = {{{1.0, 0.3}, 0.1}};
    for (int trial = 0; trial < 10; ++trial) {
        const auto band = random_band(rng, 5);
        const auto g4 = band_gradient(band, obs, cfg, params, 1e-4);
        const auto g5 = band_gradient(band, obs, cfg, params, 1e-5);
        REQUIRE(g4.size() == g5.size());
        REQUIRE(g4.size() == 3 * (band.nodes.size() - 2) + band.dts.size());
        for (std::size_t k = 0; k < g4.size(); ++k)
            CHECK(std::abs(g4[k] - g5[k]) <= 1e-4 * (1.0 + std::abs(g5[k])));
    }
}

TEST_CASE("optimize: accepted steps never increase the objective") {
    TebConfig cfg;
    cfg.max_iterations = 60;
    VehicleParams params;
    const Pose2D pose{0, 0, 0}, goal{2.0, 0, 0};
    const std::vector<Circle> obs = {{{1.0, 0.02}, 0.15}};
    auto band = seed_band(pose, goal, straight_path(0.0, 2.0, 0.1), cfg, params);

    OptimizeTrace trace;
    optimize(band, obs, cfg, params, &trace);
    REQUIRE(!trace.steps.empty());
    for (const auto& [before, after] : trace.steps) CHECK(after <= before);
}

TEST_CASE("optimize: an already optimized band is a fixed point") {
    TebConfig cfg;
    cfg.max_iterations = 120;
    VehicleParams params;
    const Pose2D pose{0, 0, 0}, goal{2.0, 0, 0};
    auto band = seed_band(pose, goal, straight_path(0.0, 2.0, 0.1), cfg, params);

    const auto once = optimize(band, {}, cfg, params);
    const double f1 = band_objective(once, {}, cfg, params);
    const auto twice = optimize(once, {}, cfg, params);
    const double f2 = band_objective(twice, {}, cfg, params);
    CHECK(std::abs(f2 - f1) <= 1e-6 * std::max(1.0, f1));
}

TEST_CASE("optimize: pushes the band off an obstacle to the clearance bound") {
    TebConfig cfg;
    cfg.max_iterations = 400;  // fresh cold-start seed needs the full budget
    VehicleParams params;
    const Pose2D pose{0, 0, 0}, goal{2.0, 0, 0};
    const std::vector<Circle> obs = {{{1.0, 0.03}, 0.15}};
    auto band = seed_band(pose, goal, straight_path(0.0, 2.0, 0.1), cfg, params);

    const auto opt = optimize(band, obs, cfg, params);
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& n : opt.nodes)
        clearance = std::min(clearance, distance(n.position(), obs[0].center) - obs[0].radius);
    CHECK(clearance >= cfg.min_obstacle_dist - 0.01);
}

TEST_CASE("optimize: shortens total time when seeded with slack") {
    TebConfig cfg;
    cfg.max_iterations = 80;
    VehicleParams params;
    const Pose2D pose{0, 0, 0}, goal{2.0, 0, 0};
    auto band = seed_band(pose, goal, straight_path(0.0, 2.0, 0.1), cfg, params);
    for (double& dt : band.dts) dt *= 2.0;  // crawl at half speed
    const double seeded_time = band.total_time();

    const auto opt = optimize(band, {}, cfg, params);
    CHECK(opt.total_time() <= seeded_time);
}

TEST_CASE("optimize: keeps endpoints and the dt band") {
    TebConfig cfg;
    cfg.max_iterations = 60;
    VehicleParams params;
    const Pose2D pose{0.1, -0.2, 0.1}, goal{2.0, 0.4, 0};
    const std::vector<Circle> obs = {{{1.0, 0.0}, 0.12}};
    auto band = seed_band(pose, goal, straight_path(0.0, 2.0, 0.1), cfg, params);

    const auto opt = optimize(band, obs, cfg, params);
    CHECK(opt.nodes.front().x == pose.x);
    CHECK(opt.nodes.front().y == pose.y);
    CHECK(opt.nodes.front().theta == pose.theta);
    CHECK(opt.nodes.back().x == goal.x);
    CHECK(opt.nodes.back().y == goal.y);
    for (double dt : opt.dts) {
        CHECK(dt > 0.0);
        CHECK(dt <= cfg.dt_ref + cfg.dt_hysteresis + 1e-12);
    }
}

TEST_CASE("planner: drives near v_max straight to a clear goal") {
    TebConfig cfg;
    VehicleParams params;
    TebPlanner planner(cfg, params);
    const VehicleState state{Pose2D{0, 0, 0}, 0.0, 0.0};
    const auto cmd = planner.plan_step(state, Pose2D{2.5, 0, 0},
                                       straight_path(0.0, 2.5, 0.1), {});
    CHECK(cmd.v >= 0.85 * params.v_max);
    CHECK(cmd.v <= params.v_max);
    CHECK(std::abs(cmd.gamma) < 0.05);
}

TEST_CASE("planner: stuck straight incumbent loses to a detour") {
    TebConfig cfg;
    VehicleParams params;
    TebPlanner planner(cfg, params);
    const VehicleState state{Pose2D{0, 0, 0}, 0.5, 0.0};
    const auto path = straight_path(0.0, 2.5, 0.1);

    // first tick with a clear map seeds a straight incumbent
    planner.plan_step(state, Pose2D{2.5, 0, 0}, path, {});
    REQUIRE(planner.incumbent().has_value());
    double mean_y = 0.0;
    for (const auto& n : planner.incumbent()->nodes) mean_y += n.y;
    CHECK(std::abs(mean_y) < 1e-6);

    // obstacle dead on the line: the straight band cannot descend sideways
    const std::vector<Circle> obs = {{{1.2, 0.0}, 0.2}};
    const auto cmd = planner.plan_step(state, Pose2D{2.5, 0, 0}, path, obs);
    REQUIRE(planner.incumbent().has_value());
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& n : planner.incumbent()->nodes)
        clearance = std::min(clearance, distance(n.position(), obs[0].center) - obs[0].radius);
    CHECK(clearance > 0.0);
    CHECK(std::abs(cmd.gamma) > 1e-3);  // actually steering around it
}

TEST_CASE("planner: symmetric fixture breaks the tie to the left") {
    TebConfig cfg;
    VehicleParams params;
    TebPlanner planner(cfg, params);
    const VehicleState state{Pose2D{-1.0, 0, 0}, 0.5, 0.0};
    const std::vector<Circle> obs = {{{0.25, 0.0}, 0.2}};
    const auto cmd =
        planner.plan_step(state, Pose2D{1.5, 0, 0}, straight_path(-1.0, 1.5, 0.1), obs);

    REQUIRE(planner.incumbent().has_value());
    double mean_y = 0.0;
    for (const auto& n : planner.incumbent()->nodes) mean_y += n.y;
    CHECK(mean_y > 0.01);     // the left homotopy
    CHECK(cmd.gamma > 0.0);   // first motion turns left
}

TEST_CASE("planner: all-infeasible input stops and emitted commands respect limits") {
    TebConfig cfg;
    VehicleParams params;
    TebPlanner planner(cfg, params);
    const VehicleState state{Pose2D{0, 0, 0}, 0.5, 0.0};
    // goal buried inside an obstacle: nothing feasible
    const std::vector<Circle> obs = {{{2.0, 0.0}, 0.5}};
    const auto cmd = planner.plan_step(state, Pose2D{2.0, 0, 0},
                                       straight_path(0.0, 2.0, 0.1), obs);
    CHECK(cmd.v == 0.0);
    CHECK(cmd.gamma == 0.0);
    CHECK_FALSE(planner.incumbent().has_value());

    // a messy but solvable scene: limits hold exactly
    TebPlanner planner2(cfg, params);
    const std::vector<Circle> messy = {{{0.8, 0.1}, 0.15}, {{1.5, -0.2}, 0.2}};
    for (int tick = 0; tick < 5; ++tick) {
        const auto c = planner2.plan_step(state, Pose2D{2.5, 0, 0},
                                          straight_path(0.0, 2.5, 0.1), messy);
        CHECK(c.v <= params.v_max);
        CHECK(c.v >= 0.0);
        CHECK(std::abs(c.gamma) <= params.gamma_max);
    }
}
