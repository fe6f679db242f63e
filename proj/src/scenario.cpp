#include "navstack/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "navstack/errors.hpp"

namespace navstack {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double get_double(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(path, "expected a number, got '" + n.Scalar() + "'");
    }
}

int get_int(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected an integer");
    try {
        return n.as<int>();
    } catch (const YAML::Exception&) {
        fail(path, "expected an integer, got '" + n.Scalar() + "'");
    }
}

std::string get_string(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected a string");
    return n.Scalar();
}

Vec2 get_vec2(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence() || n.size() != 2) fail(path, "expected [x, y]");
    return {get_double(n[0], path + "[0]"), get_double(n[1], path + "[1]")};
}

// every key in `n` must be in `allowed`; typos should not parse silently
void check_keys(const YAML::Node& n, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!n.IsMap()) fail(path, "expected a map");
    for (const auto& kv : n) {
        const std::string key = kv.first.Scalar();
        if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

// assigns d = node[key] when present
void opt(const YAML::Node& n, const char* key, const std::string& path, double& d) {
    if (n[key]) d = get_double(n[key], path + "." + key);
}
void opt(const YAML::Node& n, const char* key, const std::string& path, int& d) {
    if (n[key]) d = get_int(n[key], path + "." + key);
}

void parse_track(const YAML::Node& n, Scenario& scn) {
    check_keys(n, "track", {"lane_width", "control_points"});
    opt(n, "lane_width", "track", scn.lane_width);
    const YAML::Node pts = n["control_points"];
    if (!pts || !pts.IsSequence() || pts.size() < 2)
        fail("track.control_points", "expected a list of at least 2 [x, y] points");
    scn.track_points.clear();
    for (std::size_t i = 0; i < pts.size(); ++i)
        scn.track_points.push_back(
            get_vec2(pts[i], "track.control_points[" + std::to_string(i) + "]"));
}

void parse_obstacles(const YAML::Node& n, Scenario& scn) {
    if (!n.IsSequence()) fail("obstacles", "expected a list of [x, y, radius]");
    scn.obstacles.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string path = "obstacles[" + std::to_string(i) + "]";
        if (!n[i].IsSequence() || n[i].size() != 3) fail(path, "expected [x, y, radius]");
        Circle c;
        c.center = {get_double(n[i][0], path + "[0]"), get_double(n[i][1], path + "[1]")};
        c.radius = get_double(n[i][2], path + "[2]");
        scn.obstacles.push_back(c);
    }
}

void parse_vehicle(const YAML::Node& n, VehicleParams& v) {
    check_keys(n, "vehicle",
               {"wheelbase_L", "v_max", "gamma_max", "a_max", "alpha_max", "body_width",
                "body_length"});
    opt(n, "wheelbase_L", "vehicle", v.wheelbase_L);
    opt(n, "v_max", "vehicle", v.v_max);
    opt(n, "gamma_max", "vehicle", v.gamma_max);
    opt(n, "a_max", "vehicle", v.a_max);
    opt(n, "alpha_max", "vehicle", v.alpha_max);
    opt(n, "body_width", "vehicle", v.body_width);
    opt(n, "body_length", "vehicle", v.body_length);
}

void parse_costmap(const YAML::Node& n, Scenario& scn) {
    check_keys(n, "costmap",
               {"resolution", "cells", "inflation_radius", "cost_scaling_factor",
                "inscribed_radius"});
    opt(n, "resolution", "costmap", scn.map_resolution);
    opt(n, "cells", "costmap", scn.map_cells);
    opt(n, "inflation_radius", "costmap", scn.inflation.inflation_radius);
    opt(n, "cost_scaling_factor", "costmap", scn.inflation.cost_scaling_factor);
    opt(n, "inscribed_radius", "costmap", scn.inflation.inscribed_radius);
}

void parse_planner_cost(const YAML::Node& n, PlannerCostParams& p) {
    check_keys(n, "planner_cost", {"cost_factor", "neutral_cost"});
    opt(n, "cost_factor", "planner_cost", p.cost_factor);
    opt(n, "neutral_cost", "planner_cost", p.neutral_cost);
}

void parse_sensing(const YAML::Node& n, Scenario& scn) {
    check_keys(n, "sensing", {"beams", "range", "cluster_gap", "radius_pad", "interim_window"});
    opt(n, "beams", "sensing", scn.scan_beams);
    opt(n, "range", "sensing", scn.scan_range);
    opt(n, "cluster_gap", "sensing", scn.scan_gap);
    opt(n, "radius_pad", "sensing", scn.scan_pad);
    opt(n, "interim_window", "sensing", scn.interim_window);
}

void parse_camera(const YAML::Node& n, CameraModel& cam) {
    check_keys(n, "camera", {"width", "height", "correspondences"});
    opt(n, "width", "camera", cam.width);
    opt(n, "height", "camera", cam.height);
    if (const YAML::Node corr = n["correspondences"]) {
        if (!corr.IsSequence() || corr.size() != 4)
            fail("camera.correspondences", "expected exactly 4 [[px, py], [gx, gy]] pairs");
        std::array<std::pair<Vec2, Vec2>, 4> pairs;
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string path = "camera.correspondences[" + std::to_string(i) + "]";
            if (!corr[i].IsSequence() || corr[i].size() != 2)
                fail(path, "expected [[px, py], [gx, gy]]");
            pairs[i] = {get_vec2(corr[i][0], path + "[0]"),
                        get_vec2(corr[i][1], path + "[1]")};
        }
        try {
            cam.pixel_to_ground = homography_from_points(pairs);
        } catch (const InvalidState& e) {
            fail("camera.correspondences", e.what());
        }
    }
}

void parse_lane(const YAML::Node& n, LaneVisionConfig& lv) {
    check_keys(n, "lane",
               {"mask_lo", "mask_hi", "morph_kernel", "min_area", "max_area", "min_aspect",
                "birdeye_width", "birdeye_height", "meters_per_pixel", "lookahead_min",
                "lookahead_gain", "min_pixels", "max_rms"});
    auto hsv = [](const YAML::Node& h, const std::string& path) {
        if (!h.IsSequence() || h.size() != 3) fail(path, "expected [hue, sat, val]");
        return Hsv{get_double(h[0], path + "[0]"), get_double(h[1], path + "[1]"),
                   get_double(h[2], path + "[2]")};
    };
    if (n["mask_lo"]) lv.mask_lo = hsv(n["mask_lo"], "lane.mask_lo");
    if (n["mask_hi"]) lv.mask_hi = hsv(n["mask_hi"], "lane.mask_hi");
    opt(n, "morph_kernel", "lane", lv.morph_kernel);
    opt(n, "min_area", "lane", lv.min_area);
    opt(n, "max_area", "lane", lv.max_area);
    opt(n, "min_aspect", "lane", lv.min_aspect);
    opt(n, "birdeye_width", "lane", lv.birdeye_width);
    opt(n, "birdeye_height", "lane", lv.birdeye_height);
    opt(n, "meters_per_pixel", "lane", lv.meters_per_pixel);
    opt(n, "lookahead_min", "lane", lv.lookahead_min);
    opt(n, "lookahead_gain", "lane", lv.lookahead_gain);
    opt(n, "min_pixels", "lane", lv.min_pixels);
    opt(n, "max_rms", "lane", lv.max_rms);
}

void parse_dwa(const YAML::Node& n, DwaConfig& c) {
    check_keys(n, "dwa",
               {"sim_time", "sim_granularity", "vx_samples", "vth_samples", "weight_goal",
                "weight_path", "weight_obstacle", "weight_speed", "control_period"});
    opt(n, "sim_time", "dwa", c.sim_time);
    opt(n, "sim_granularity", "dwa", c.sim_granularity);
    opt(n, "vx_samples", "dwa", c.vx_samples);
    opt(n, "vth_samples", "dwa", c.vth_samples);
    opt(n, "weight_goal", "dwa", c.weight_goal);
    opt(n, "weight_path", "dwa", c.weight_path);
    opt(n, "weight_obstacle", "dwa", c.weight_obstacle);
    opt(n, "weight_speed", "dwa", c.weight_speed);
    opt(n, "control_period", "dwa", c.control_period);
}

void parse_teb(const YAML::Node& n, TebConfig& c) {
    check_keys(n, "teb",
               {"weight_time", "weight_vel", "weight_acc", "weight_turn_radius",
                "weight_obstacle", "weight_kinematics", "min_obstacle_dist", "dt_ref",
                "dt_hysteresis", "max_iterations", "n_alternatives"});
    opt(n, "weight_time", "teb", c.weight_time);
    opt(n, "weight_vel", "teb", c.weight_vel);
    opt(n, "weight_acc", "teb", c.weight_acc);
    opt(n, "weight_turn_radius", "teb", c.weight_turn_radius);
    opt(n, "weight_obstacle", "teb", c.weight_obstacle);
    opt(n, "weight_kinematics", "teb", c.weight_kinematics);
    opt(n, "min_obstacle_dist", "teb", c.min_obstacle_dist);
    opt(n, "dt_ref", "teb", c.dt_ref);
    opt(n, "dt_hysteresis", "teb", c.dt_hysteresis);
    opt(n, "max_iterations", "teb", c.max_iterations);
    opt(n, "n_alternatives", "teb", c.n_alternatives);
}

void parse_apf(const YAML::Node& n, ApfConfig& c) {
    check_keys(n, "apf",
               {"k_att", "k_rep", "rho0", "v_max", "k_gain", "v_min", "eps_force",
                "antiparallel_cos", "escape_gain", "escape_hold", "k_heading",
                "goal_tolerance"});
    opt(n, "k_att", "apf", c.k_att);
    opt(n, "k_rep", "apf", c.k_rep);
    opt(n, "rho0", "apf", c.rho0);
    opt(n, "v_max", "apf", c.v_max);
    opt(n, "k_gain", "apf", c.k_gain);
    opt(n, "v_min", "apf", c.v_min);
    opt(n, "eps_force", "apf", c.eps_force);
    opt(n, "antiparallel_cos", "apf", c.antiparallel_cos);
    opt(n, "escape_gain", "apf", c.escape_gain);
    opt(n, "escape_hold", "apf", c.escape_hold);
    opt(n, "k_heading", "apf", c.k_heading);
    opt(n, "goal_tolerance", "apf", c.goal_tolerance);
}

std::string stem_of(const std::string& origin) {
    std::size_t slash = origin.find_last_of("/\\");
    std::string base = slash == std::string::npos ? origin : origin.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

}  // namespace

Track Scenario::make_track() const { return Track(track_points, lane_width); }

void Scenario::validate() const {
    auto bad = [this](const std::string& field, const std::string& what) {
        throw ConfigError(name + ": " + field + ": " + what);
    };
    if (format_version != 1) bad("format_version", "unsupported version, this build reads 1");
    if (planner != "dwa" && planner != "teb" && planner != "apf")
        bad("planner", "must be one of dwa, teb, apf");
    vehicle.validate();
    dwa.validate();
    teb.validate();
    apf.validate();
    inflation.validate();
    planner_cost.validate();
    lane.validate();
    if (track_points.size() < 2) bad("track.control_points", "need at least 2 points");
    if (lane_width <= vehicle.body_width)
        bad("track.lane_width", "must exceed vehicle.body_width");
    for (std::size_t i = 0; i < obstacles.size(); ++i)
        if (!(obstacles[i].radius > 0.0))
            bad("obstacles[" + std::to_string(i) + "]", "radius must be positive");
    if (!(map_resolution > 0.0)) bad("costmap.resolution", "must be positive");
    if (map_cells < 32) bad("costmap.cells", "window too small, need at least 32 cells");
    if (camera.width <= 0 || camera.height <= 0) bad("camera", "dims must be positive");
    if (!(tick > 0.0)) bad("tick", "must be positive");
    if (max_ticks < 1) bad("max_ticks", "must be at least 1");
    if (!(noise_amp >= 0.0)) bad("noise_amp", "must be non-negative");
    if (scan_beams < 8) bad("sensing.beams", "need at least 8 beams");
    if (!(scan_range > 0.0)) bad("sensing.range", "must be positive");
    if (!(scan_gap > 0.0)) bad("sensing.cluster_gap", "must be positive");
    if (!(scan_pad >= 0.0)) bad("sensing.radius_pad", "must be non-negative");
    if (!(interim_window > 0.0)) bad("sensing.interim_window", "must be positive");

    const Track track = make_track();  // throws ConfigError on degenerate geometry
    if (goal_s > track.total_length() + 1e-9)
        bad("goal_s", "beyond the end of the track");
    if (goal_s >= 0.0 && goal_s < 1e-9) bad("goal_s", "must be positive");

    // the road has to be drivable: heading rate along the centerline must
    // stay within what full steering lock allows (5% slack for the spline
    // flattening)
    const double r_min = vehicle.min_turn_radius();
    const double ds = 0.1;
    double kappa_max = 0.0;
    for (double s = 0.0; s + ds <= track.total_length(); s += ds) {
        double dh = wrap_angle(track.heading_at(s + ds) - track.heading_at(s));
        kappa_max = std::max(kappa_max, std::abs(dh) / ds);
    }
    if (kappa_max * r_min > 1.05) {
        std::ostringstream os;
        os << "curvature " << kappa_max << " 1/m exceeds the vehicle's steering limit (1/"
           << r_min << " 1/m)";
        bad("track.control_points", os.str());
    }
}

Scenario parse_scenario(const std::string& yaml_text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    try {
        check_keys(root, "",
                   {"format_version", "name", "track", "obstacles", "start_pose", "goal_s",
                    "vehicle", "planner", "dwa", "teb", "apf", "costmap", "planner_cost",
                    "sensing", "camera", "lane", "tick", "max_ticks", "rng_seed",
                    "noise_amp"});

        Scenario scn;
        scn.name = stem_of(origin);
        if (root["format_version"])
            scn.format_version = get_int(root["format_version"], "format_version");
        if (root["name"]) scn.name = get_string(root["name"], "name");
        if (!root["track"]) fail("track", "missing section");
        parse_track(root["track"], scn);
        if (root["obstacles"]) parse_obstacles(root["obstacles"], scn);
        if (root["start_pose"]) {
            const YAML::Node p = root["start_pose"];
            if (!p.IsSequence() || p.size() != 3) fail("start_pose", "expected [x, y, theta]");
            scn.start_pose = {get_double(p[0], "start_pose[0]"),
                              get_double(p[1], "start_pose[1]"),
                              get_double(p[2], "start_pose[2]")};
        }
        if (root["goal_s"]) scn.goal_s = get_double(root["goal_s"], "goal_s");
        if (root["vehicle"]) parse_vehicle(root["vehicle"], scn.vehicle);
        if (root["planner"]) scn.planner = get_string(root["planner"], "planner");
        if (root["dwa"]) parse_dwa(root["dwa"], scn.dwa);
        if (root["teb"]) parse_teb(root["teb"], scn.teb);
        if (root["apf"]) parse_apf(root["apf"], scn.apf);
        if (root["costmap"]) parse_costmap(root["costmap"], scn);
        if (root["planner_cost"]) parse_planner_cost(root["planner_cost"], scn.planner_cost);
        if (root["sensing"]) parse_sensing(root["sensing"], scn);
        scn.camera = default_camera();  // parse_camera only overrides what was given
        if (root["camera"]) parse_camera(root["camera"], scn.camera);
        if (root["lane"]) parse_lane(root["lane"], scn.lane);
        if (root["tick"]) scn.tick = get_double(root["tick"], "tick");
        if (root["max_ticks"]) scn.max_ticks = get_int(root["max_ticks"], "max_ticks");
        if (root["rng_seed"])
            scn.rng_seed = static_cast<unsigned>(get_int(root["rng_seed"], "rng_seed"));
        if (root["noise_amp"]) scn.noise_amp = get_double(root["noise_amp"], "noise_amp");

        if (scn.goal_s < 0.0) scn.goal_s = scn.make_track().total_length();
        scn.validate();
        return scn;
    } catch (ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

}  // namespace navstack
