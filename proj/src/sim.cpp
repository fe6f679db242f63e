#include "navstack/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "navstack/costmap.hpp"
#include "navstack/dwa.hpp"
#include "navstack/errors.hpp"
#include "navstack/global_planner.hpp"
#include "navstack/teb.hpp"
#include "navstack/track.hpp"

namespace navstack {

namespace {

// Vehicle-centered square window. The origin snaps to the resolution grid
// so cell centers stay put while the vehicle moves between them — global
// plans don't jitter with sub-cell motion.
Costmap local_window(const Pose2D& pose, const Scenario& scn) {
    const int n = scn.map_cells;
    const double res = scn.map_resolution;
    const double half = 0.5 * (n - 1) * res;
    Pose2D origin{std::round((pose.x - half) / res) * res,
                  std::round((pose.y - half) / res) * res, 0.0};
    Costmap map(res, n, n, origin);
    mark_obstacles(map, scn.obstacles);
    inflate(map, scn.inflation);
    return map;
}

Vec2 clamp_into(const Costmap& map, const Vec2& p) {
    const double r = map.resolution();
    return {std::clamp(p.x, map.origin().x + 2.0 * r,
                       map.origin().x + (map.width() - 3) * r),
            std::clamp(p.y, map.origin().y + 2.0 * r,
                       map.origin().y + (map.height() - 3) * r)};
}

bool cell_passable(const Costmap& map, int ix, int iy) {
    return map.at(ix, iy) < kCostInscribed;
}

// Planner endpoints must sit on passable cells; a lane target right behind
// an inflated obstacle gets moved to the passable cell center that
// displaces it least (euclidean, row-major ring order on ties — fully
// deterministic). Unchanged when nothing free is nearby; the caller falls
// back to a straight path.
Vec2 nudge_passable(const Costmap& map, const Vec2& p, int max_r = 24) {
    int ix = 0, iy = 0;
    if (!map.world_to_cell(p, ix, iy)) return p;
    if (cell_passable(map, ix, iy)) return p;
    for (int r = 1; r <= max_r; ++r) {
        Vec2 best{};
        double best_d = -1.0;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                const int cx = ix + dx, cy = iy + dy;
                if (!map.in_bounds(cx, cy) || !cell_passable(map, cx, cy)) continue;
                const double d = distance(map.cell_center(cx, cy), p);
                if (best_d < 0.0 || d < best_d - 1e-12) {
                    best_d = d;
                    best = map.cell_center(cx, cy);
                }
            }
        }
        if (best_d >= 0.0) return best;
    }
    return p;
}

bool footprint_hits(const Pose2D& pose, const VehicleParams& veh,
                    const std::vector<Circle>& obstacles) {
    const std::vector<Circle> body = footprint_circles(pose, veh);
    for (const Circle& o : obstacles)
        for (const Circle& b : body)
            if (distance(o.center, b.center) <= o.radius + b.radius) return true;
    return false;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += '"';
    return q;
}

std::string fmt(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

}  // namespace

EpisodeResult run_episode(const Scenario& scn, bool timing) {
    scn.validate();
    const Track track = scn.make_track();
    const double goal_s = scn.goal_s < 0.0 ? track.total_length() : scn.goal_s;
    const VehicleParams& veh = scn.vehicle;

    VehicleState state;
    state.pose = scn.start_pose;

    TebPlanner teb_planner(scn.teb, veh);
    ForceState apf_prev;

    LaneTarget target;  // straight ahead until the first valid detection
    target.point = {scn.lane.lookahead_min, 0.0};
    target.lookahead = scn.lane.lookahead_min;
    // Where the vehicle is actually headed. Anchored in the world frame so a
    // detection dropout leaves a fixed point to steer back to; re-projecting
    // a stale vehicle-frame target every tick would drag the goal along in
    // front of an off-lane vehicle forever.
    Vec2 goal_anchor = scn.start_pose.to_world(target.point);

    RenderOptions ropt;
    ropt.noise_amp = scn.noise_amp;
    ropt.noise_seed = scn.rng_seed;

    EpisodeResult out;
    out.metrics.obstacles_total = static_cast<int>(scn.obstacles.size());
    out.trace.planner = scn.planner;

    // the arc-length mark past which an obstacle counts as cleared
    std::vector<double> pass_s(scn.obstacles.size());
    for (std::size_t i = 0; i < scn.obstacles.size(); ++i)
        pass_s[i] = track.project(scn.obstacles[i].center).s + scn.obstacles[i].radius +
                    0.5 * veh.body_length + 0.05;
    std::vector<char> cleared(scn.obstacles.size(), 0);

    double sq_lat_sum = 0.0;
    bool was_off = std::abs(track.project(state.pose.position()).lateral) > scn.lane_width;
    double compute_ms = 0.0;

    for (int t = 0; t < scn.max_ticks; ++t) {
        const auto t0 = std::chrono::steady_clock::now();

        // sense: camera -> lane target (stale targets persist through
        // dropouts, which is what the `valid` flag is for)
        const ImageRGB view = render_view(state.pose, track, scn.camera, ropt);
        const LaneTarget det = detect_lane(view, scn.camera, scn.lane, state.v);
        if (det.valid) {
            target = det;
            goal_anchor = state.pose.to_world(det.point);
        }
        const Vec2 goal_w = goal_anchor;

        // global plan on the rolling window
        const Costmap map = local_window(state.pose, scn);
        GlobalPath gpath;
        const Vec2 g = nudge_passable(map, clamp_into(map, goal_w));
        const Vec2 s0 = nudge_passable(map, clamp_into(map, state.pose.position()));
        try {
            gpath = plan(map, scn.planner_cost, s0, g);
        } catch (const PlanningError&) {
            gpath.waypoints = {state.pose.position(), goal_w};  // keep moving
        }
        const Vec2 interim = prune_to_window(gpath, state.pose, scn.interim_window);

        std::vector<Circle> clusters;
        if (scn.planner != "dwa") {
            const std::vector<double> ranges =
                raycast_scan(scn.obstacles, state.pose, scn.scan_beams, scn.scan_range);
            clusters = cluster_scan(state.pose, ranges, scn.scan_range, scn.scan_gap,
                                    scn.scan_pad);
        }

        TraceRecord rec;
        rec.tick = t;
        rec.lane_target = target;

        ControlCommand cmd;
        if (scn.planner == "dwa") {
            ScoredTrajectory best;
            cmd = plan_step(state, interim, gpath, map, scn.inflation.inflation_radius,
                            scn.dwa, veh, &best);
            rec.score = best.score;
            rec.local_plan.reserve(best.states.size());
            for (const Pose2D& p : best.states) rec.local_plan.push_back(p.position());
        } else if (scn.planner == "teb") {
            const Vec2 d = interim - state.pose.position();
            const double heading =
                d.norm() > 1e-9 ? std::atan2(d.y, d.x) : state.pose.theta;
            cmd = teb_planner.plan_step(state, Pose2D{interim.x, interim.y, heading}, gpath,
                                        clusters);
            if (teb_planner.incumbent())
                for (const Pose2D& p : teb_planner.incumbent()->nodes)
                    rec.local_plan.push_back(p.position());
        } else {  // apf steers at the lane target itself; no path shaping
            auto [c, fs] = plan_step_apf(state, goal_w, clusters, scn.apf, veh, apf_prev);
            cmd = c;
            apf_prev = fs;
            rec.f_att = fs.f_att;
            rec.f_rep = fs.f_rep;
            rec.f_escape = fs.f_escape;
            Pose2D p = state.pose;
            rec.local_plan.push_back(p.position());
            for (int k = 0; k < 10; ++k) {
                p = step(p, cmd, scn.tick, veh);
                rec.local_plan.push_back(p.position());
            }
        }

        // act
        state.pose = step(state.pose, cmd, scn.tick, veh);
        state.v = cmd.v;
        state.omega = cmd.v * std::tan(cmd.gamma) / veh.wheelbase_L;
        rec.command = cmd;
        rec.pose = state.pose;

        if (timing)
            compute_ms += std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();

        const TrackProjection proj = track.project(state.pose.position());
        rec.s = proj.s;
        rec.lateral = proj.lateral;
        sq_lat_sum += proj.lateral * proj.lateral;
        const bool off = std::abs(proj.lateral) > scn.lane_width;
        if (off && !was_off) ++out.metrics.lane_exits;
        was_off = off;

        const bool hit = footprint_hits(state.pose, veh, scn.obstacles);
        out.trace.records.push_back(std::move(rec));
        if (hit) {
            out.metrics.collided = true;
            break;
        }
        for (std::size_t i = 0; i < pass_s.size(); ++i) {
            if (!cleared[i] && proj.s >= pass_s[i]) {
                cleared[i] = 1;
                ++out.metrics.obstacles_avoided;
            }
        }
        if (proj.s >= goal_s) {
            out.metrics.completed = true;
            break;
        }
    }

    const std::size_t n = out.trace.records.size();
    out.metrics.completion_time = static_cast<double>(n) * scn.tick;
    out.metrics.lane_deviation_rms = n ? std::sqrt(sq_lat_sum / static_cast<double>(n)) : 0.0;
    out.metrics.mean_tick_compute = (timing && n) ? compute_ms / static_cast<double>(n) : 0.0;
    return out;
}

std::string trace_jsonl(const TraceLog& trace) {
    std::string out;
    for (const TraceRecord& r : trace.records) {
        nlohmann::ordered_json j;
        j["tick"] = r.tick;
        j["pose"] = {r.pose.x, r.pose.y, r.pose.theta};
        j["cmd"] = {r.command.v, r.command.gamma};
        j["lane"] = {{"x", r.lane_target.point.x},
                     {"y", r.lane_target.point.y},
                     {"lookahead", r.lane_target.lookahead},
                     {"valid", r.lane_target.valid}};
        j["s"] = r.s;
        j["lateral"] = r.lateral;
        if (trace.planner == "dwa") j["score"] = r.score;
        if (trace.planner == "apf") {
            j["f_att"] = {r.f_att.x, r.f_att.y};
            j["f_rep"] = {r.f_rep.x, r.f_rep.y};
            j["f_escape"] = {r.f_escape.x, r.f_escape.y};
        }
        nlohmann::ordered_json plan = nlohmann::ordered_json::array();
        for (const Vec2& p : r.local_plan) plan.push_back({p.x, p.y});
        j["plan"] = std::move(plan);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<SuiteRow> run_suite(const std::vector<Scenario>& scenarios,
                                const std::vector<std::string>& planners, bool timing) {
    std::vector<SuiteRow> rows;
    for (const Scenario& scn : scenarios) {
        for (const std::string& p : planners) {
            SuiteRow row;
            row.scenario = scn.name;
            row.planner = p;
            try {
                Scenario cell = scn;
                cell.planner = p;
                row.metrics = run_episode(cell, timing).metrics;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
        return std::tie(a.scenario, a.planner) < std::tie(b.scenario, b.planner);
    });
    return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows) {
    std::string out =
        "scenario,planner,completed,collided,obstacles_avoided,obstacles_total,"
        "lane_deviation_rms,lane_exits,completion_time,mean_tick_compute_ms,error\n";
    for (const SuiteRow& r : rows) {
        const RunMetrics& m = r.metrics;
        out += csv_quote(r.scenario) + ',' + csv_quote(r.planner) + ',';
        out += m.completed ? "true," : "false,";
        out += m.collided ? "true," : "false,";
        out += std::to_string(m.obstacles_avoided) + ',';
        out += std::to_string(m.obstacles_total) + ',';
        out += fmt(m.lane_deviation_rms, 6) + ',';
        out += std::to_string(m.lane_exits) + ',';
        out += fmt(m.completion_time, 3) + ',';
        out += fmt(m.mean_tick_compute, 3) + ',';
        out += csv_quote(r.error) + '\n';
    }
    return out;
}

std::string plot_trace(const TraceLog& trace, const Scenario& scn) {
    const Track track = scn.make_track();

    double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
    auto take = [&](const Vec2& p, double r = 0.0) {
        min_x = std::min(min_x, p.x - r);
        max_x = std::max(max_x, p.x + r);
        min_y = std::min(min_y, p.y - r);
        max_y = std::max(max_y, p.y + r);
    };
    for (const Vec2& p : track.polyline()) take(p, scn.lane_width);
    for (const Circle& o : scn.obstacles) take(o.center, o.radius);
    for (const TraceRecord& r : trace.records) take(r.pose.position());
    if (min_x > max_x) {  // empty everything; keep the viewport sane
        min_x = min_y = -1.0;
        max_x = max_y = 1.0;
    }
    const double pad = 0.6;
    min_x -= pad, min_y -= pad, max_x += pad, max_y += pad;

    const double width = 1000.0;
    const double scale = width / std::max(max_x - min_x, 1e-6);
    const double height = std::max(120.0, (max_y - min_y) * scale);
    auto X = [&](double x) { return (x - min_x) * scale; };
    auto Y = [&](double y) { return (max_y - y) * scale; };

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(1);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#fafafa\"/>\n";

    auto polyline = [&](const std::vector<Vec2>& pts, const std::string& style,
                        const std::string& id = "") {
        svg << "<polyline fill=\"none\" " << style;
        if (!id.empty()) svg << " id=\"" << id << "\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg << ' ';
            svg << X(pts[i].x) << ',' << Y(pts[i].y);
        }
        svg << "\"/>\n";
    };

    // road: black edges, red centerline
    std::vector<Vec2> center, left, right;
    const double step_s = 0.1;
    for (double s = 0.0;; s += step_s) {
        const double sc = std::min(s, track.total_length());
        const Vec2 c = track.point_at(sc);
        const double h = track.heading_at(sc);
        const Vec2 nrm{-std::sin(h), std::cos(h)};
        center.push_back(c);
        left.push_back(c + nrm * scn.lane_width);
        right.push_back(c - nrm * scn.lane_width);
        if (sc >= track.total_length()) break;
    }
    polyline(left, "stroke=\"#444\" stroke-width=\"2\"");
    polyline(right, "stroke=\"#444\" stroke-width=\"2\"");
    polyline(center, "stroke=\"#cc2222\" stroke-width=\"2\"");

    for (const Circle& o : scn.obstacles)
        svg << "<circle cx=\"" << X(o.center.x) << "\" cy=\"" << Y(o.center.y) << "\" r=\""
            << o.radius * scale << "\" fill=\"#666666\"/>\n";

    // per-tick planner previews under the driven path
    for (const TraceRecord& r : trace.records)
        if (r.local_plan.size() >= 2)
            polyline(r.local_plan,
                     "stroke=\"#9933cc\" stroke-width=\"1\" stroke-opacity=\"0.2\"");

    std::vector<Vec2> path;
    path.reserve(trace.records.size());
    for (const TraceRecord& r : trace.records) path.push_back(r.pose.position());
    polyline(path, "stroke=\"#1155cc\" stroke-width=\"2.5\"", "path");

    if (!path.empty())
        svg << "<circle cx=\"" << X(path.front().x) << "\" cy=\"" << Y(path.front().y)
            << "\" r=\"5\" fill=\"#11aa44\"/>\n";
    const double goal_s = scn.goal_s < 0.0 ? track.total_length() : scn.goal_s;
    const Vec2 fin = track.point_at(goal_s);
    svg << "<circle cx=\"" << X(fin.x) << "\" cy=\"" << Y(fin.y)
        << "\" r=\"5\" fill=\"none\" stroke=\"#11aa44\" stroke-width=\"2\"/>\n";

    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace navstack
