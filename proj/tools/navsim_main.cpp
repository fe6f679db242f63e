#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "navstack/errors.hpp"
#include "navstack/image.hpp"
#include "navstack/lane_vision.hpp"
#include "navstack/scenario.hpp"
#include "navstack/sim.hpp"

namespace fs = std::filesystem;
using namespace navstack;

namespace {

void print_metrics(const std::string& name, const std::string& planner, const RunMetrics& m,
                   bool timing) {
    std::printf("scenario    %s\n", name.c_str());
    std::printf("planner     %s\n", planner.c_str());
    std::printf("completed   %s\n", m.completed ? "yes" : "no");
    std::printf("collided    %s\n", m.collided ? "yes" : "no");
    std::printf("avoided     %d/%d\n", m.obstacles_avoided, m.obstacles_total);
    std::printf("lane rms    %.3f m\n", m.lane_deviation_rms);
    std::printf("lane exits  %d\n", m.lane_exits);
    std::printf("sim time    %.2f s\n", m.completion_time);
    if (timing) std::printf("tick cost   %.3f ms\n", m.mean_tick_compute);
}

int cmd_run(const std::string& path, const std::string& planner, const std::string& trace_path,
            const std::string& plot_path, bool strict, bool timing) {
    Scenario scn = load_scenario(path);
    if (!planner.empty()) {
        scn.planner = planner;
        scn.validate();
    }
    const EpisodeResult res = run_episode(scn, timing);
    print_metrics(scn.name, scn.planner, res.metrics, timing);
    if (!trace_path.empty()) write_text_file(trace_path, trace_jsonl(res.trace));
    if (!plot_path.empty()) write_text_file(plot_path, plot_trace(res.trace, scn));
    if (strict && res.metrics.collided) return 3;
    return 0;
}

int cmd_suite(const std::string& dir, const std::string& out_csv,
              std::vector<std::string> planners, bool timing) {
    if (planners.empty()) planners = {"dwa", "teb", "apf"};
    for (const std::string& p : planners)
        if (p != "dwa" && p != "teb" && p != "apf")
            throw ConfigError("--planners: unknown planner '" + p + "'");

    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw ConfigError(dir + ": not a directory");
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string ext = e.path().extension().string();
        if (ext == ".yaml" || ext == ".yml") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError(dir + ": no .yaml scenario files");

    std::vector<Scenario> scns;
    std::vector<SuiteRow> rows;
    for (const std::string& f : files) {
        try {
            scns.push_back(load_scenario(f));
        } catch (const std::exception& e) {  // a broken file becomes error rows
            for (const std::string& p : planners) {
                SuiteRow row;
                row.scenario = fs::path(f).stem().string();
                row.planner = p;
                row.error = e.what();
                rows.push_back(std::move(row));
            }
        }
    }
    std::vector<SuiteRow> ran = run_suite(scns, planners, timing);
    rows.insert(rows.end(), ran.begin(), ran.end());
    std::stable_sort(rows.begin(), rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
        return std::tie(a.scenario, a.planner) < std::tie(b.scenario, b.planner);
    });

    write_text_file(out_csv, suite_csv(rows));
    int failed = 0;
    for (const SuiteRow& r : rows)
        if (!r.error.empty()) ++failed;
    std::printf("%zu rows -> %s (%d failed cells)\n", rows.size(), out_csv.c_str(), failed);
    return 0;
}

int cmd_lane_detect(const std::string& img_path, const std::string& scn_path, double speed) {
    CameraModel cam = default_camera();
    LaneVisionConfig cfg;
    if (!scn_path.empty()) {
        const Scenario scn = load_scenario(scn_path);
        cam = scn.camera;
        cfg = scn.lane;
    }
    const ImageRGB img = read_ppm(img_path);
    if (img.width != cam.width || img.height != cam.height)
        throw ConfigError(img_path + ": image is " + std::to_string(img.width) + "x" +
                          std::to_string(img.height) + " but the camera model expects " +
                          std::to_string(cam.width) + "x" + std::to_string(cam.height));
    const LaneTarget t = detect_lane(img, cam, cfg, speed);
    std::printf("{\"valid\":%s,\"x\":%.6f,\"y\":%.6f,\"lookahead\":%.3f,"
                "\"a\":%.6f,\"b\":%.6f,\"c\":%.6f}\n",
                t.valid ? "true" : "false", t.point.x, t.point.y, t.lookahead, t.a, t.b, t.c);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navsim: camera lane following with swappable local planners"};
    app.require_subcommand(1);

    std::string scn_path, planner, trace_path, plot_path;
    bool strict = false, timing = false;
    CLI::App* run = app.add_subcommand("run", "run one scenario episode");
    run->add_option("scenario", scn_path, "scenario YAML file")->required();
    run->add_option("--planner", planner, "override the scenario's planner (dwa|teb|apf)");
    run->add_option("--trace", trace_path, "write a JSON-lines trace");
    run->add_option("--plot", plot_path, "write a top-down SVG");
    run->add_flag("--strict", strict, "exit 3 when the episode ends in a collision");
    run->add_flag("--timing", timing, "fill mean_tick_compute (not byte-reproducible)");

    std::string suite_dir, out_csv = "results.csv";
    std::vector<std::string> planners;
    CLI::App* suite = app.add_subcommand("suite", "run scenario x planner cells into a CSV");
    suite->add_option("dir", suite_dir, "directory of scenario YAML files")->required();
    suite->add_option("--out", out_csv, "CSV output path");
    suite->add_option("--planners", planners, "planner subset, default all three");
    suite->add_flag("--timing", timing, "fill mean_tick_compute (not byte-reproducible)");

    std::string img_path, lane_scn;
    double speed = 0.5;
    CLI::App* lane = app.add_subcommand("lane-detect", "run the lane pipeline on a P6 image");
    lane->add_option("image", img_path, "PPM (P6) camera frame")->required();
    lane->add_option("--scenario", lane_scn, "camera + lane settings from this scenario");
    lane->add_option("--speed", speed, "vehicle speed for the lookahead, m/s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(run))
            return cmd_run(scn_path, planner, trace_path, plot_path, strict, timing);
        if (app.got_subcommand(suite)) return cmd_suite(suite_dir, out_csv, planners, timing);
        if (app.got_subcommand(lane)) return cmd_lane_detect(img_path, lane_scn, speed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
