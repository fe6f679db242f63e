#include "navstack/lane_vision.hpp"

#include <algorithm>
#include <cmath>

#include "navstack/errors.hpp"

namespace navstack {

namespace {

constexpr std::uint8_t kRed[3] = {220, 20, 20};
constexpr std::uint8_t kBlack[3] = {25, 25, 25};
constexpr std::uint8_t kFloor[3] = {128, 128, 128};

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

// Smooth deterministic brightness field anchored to the world floor.
double light_field(const Vec2& w, unsigned seed) {
    const double p1 = 0.7 + 0.13 * (seed % 11);
    const double p2 = 1.9 + 0.07 * (seed % 7);
    return std::sin(1.3 * w.x + 2.1 * w.y + p1) * std::sin(2.7 * w.y - 0.8 * w.x + p2);
}

bool hue_in_range(double h, double lo, double hi) {
    if (lo <= hi) return h >= lo && h <= hi;
    return h >= lo || h <= hi;  // wraps through 0
}

ImageBinary erode(const ImageBinary& img, int r) {
    ImageBinary out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::uint8_t v = 1;
            for (int dy = -r; dy <= r && v; ++dy)
                for (int dx = -r; dx <= r && v; ++dx)
                    if (!img.at_or_zero(x + dx, y + dy)) v = 0;
            out.set(x, y, v);
        }
    return out;
}

ImageBinary dilate(const ImageBinary& img, int r) {
    ImageBinary out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::uint8_t v = 0;
            for (int dy = -r; dy <= r && !v; ++dy)
                for (int dx = -r; dx <= r && !v; ++dx)
                    if (img.at_or_zero(x + dx, y + dy)) v = 1;
            out.set(x, y, v);
        }
    return out;
}

// Solves the n x n system in place (partial pivoting). Returns false when a
// pivot collapses, which is how rank deficiency shows up here.
template <int N>
bool solve_linear(double a[N][N + 1]) {
    for (int col = 0; col < N; ++col) {
        int pivot = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-10) return false;
        if (pivot != col)
            for (int c = 0; c <= N; ++c) std::swap(a[pivot][c], a[col][c]);
        for (int r = 0; r < N; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= N; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return true;
}

}  // namespace

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double maxc = std::max({r, g, b});
    const double minc = std::min({r, g, b});
    const double delta = maxc - minc;
    Hsv out;
    out.v = maxc;
    out.s = maxc > 0.0 ? delta / maxc : 0.0;
    if (delta > 0.0) {
        double hp;
        if (maxc == r) hp = (g - b) / delta;
        else if (maxc == g) hp = (b - r) / delta + 2.0;
        else hp = (r - g) / delta + 4.0;
        out.h = 60.0 * hp;
        if (out.h < 0.0) out.h += 360.0;
    }
    return out;
}

void LaneVisionConfig::validate() const {
    if (morph_kernel < 1 || morph_kernel % 2 == 0)
        throw ConfigError("lane: morph_kernel must be odd and >= 1");
    if (min_area > max_area) throw ConfigError("lane: min_area > max_area");
    if (!(min_aspect >= 1.0)) throw ConfigError("lane: min_aspect must be >= 1");
    if (birdeye_width < 2 || birdeye_height < 2)
        throw ConfigError("lane: birdeye dims too small");
    if (!(meters_per_pixel > 0.0)) throw ConfigError("lane: meters_per_pixel must be > 0");
    if (!(lookahead_min > 0.0) || !(lookahead_gain >= 0.0))
        throw ConfigError("lane: lookahead params must be positive");
    if (min_pixels < 3) throw ConfigError("lane: min_pixels must be >= 3");
    if (!(max_rms > 0.0)) throw ConfigError("lane: max_rms must be > 0");
    if (!(mask_lo.s <= mask_hi.s && mask_lo.v <= mask_hi.v))
        throw ConfigError("lane: mask S/V range inverted");
}

ImageBinary hsv_mask(const ImageRGB& img, const Hsv& lo, const Hsv& hi) {
    ImageBinary out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.at(x, y);
            const Hsv h = rgb_to_hsv(p[0], p[1], p[2]);
            const bool in = hue_in_range(h.h, lo.h, hi.h) && h.s >= lo.s && h.s <= hi.s &&
                            h.v >= lo.v && h.v <= hi.v;
            out.set(x, y, in ? 1 : 0);
        }
    return out;
}

ImageBinary morph_open_close(const ImageBinary& img, int kernel) {
    if (kernel < 1 || kernel % 2 == 0)
        throw ConfigError("morph_open_close: kernel must be odd and >= 1");
    const int r = kernel / 2;
    if (r == 0) return img;
    const ImageBinary opened = dilate(erode(img, r), r);
    return erode(dilate(opened, r), r);
}

ImageBinary filter_components(const ImageBinary& img, int min_area, int max_area,
                              double min_aspect) {
    if (min_area > max_area) throw ConfigError("filter_components: min_area > max_area");
    ImageBinary out(img.width, img.height);
    std::vector<int> label(static_cast<size_t>(img.width) * img.height, -1);
    std::vector<int> stack;
    for (int y0 = 0; y0 < img.height; ++y0)
        for (int x0 = 0; x0 < img.width; ++x0) {
            const size_t idx0 = static_cast<size_t>(y0) * img.width + x0;
            if (!img.pixels[idx0] || label[idx0] >= 0) continue;
            // Flood one component, collecting extent and area.
            stack.assign(1, static_cast<int>(idx0));
            label[idx0] = 1;
            std::vector<int> members;
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
            while (!stack.empty()) {
                const int idx = stack.back();
                stack.pop_back();
                members.push_back(idx);
                const int x = idx % img.width, y = idx / img.width;
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
                        const size_t nidx = static_cast<size_t>(ny) * img.width + nx;
                        if (img.pixels[nidx] && label[nidx] < 0) {
                            label[nidx] = 1;
                            stack.push_back(static_cast<int>(nidx));
                        }
                    }
            }
            const int area = static_cast<int>(members.size());
            const double bw = max_x - min_x + 1, bh = max_y - min_y + 1;
            const double elongation = std::max(bw, bh) / std::min(bw, bh);
            if (area >= min_area && area <= max_area && elongation >= min_aspect)
                for (int idx : members) out.pixels[static_cast<size_t>(idx)] = 1;
        }
    return out;
}

Homography birdeye_homography(const Homography& pixel_to_ground, int out_w, int out_h,
                              double meters_per_pixel) {
    // metric (x fwd, y left) -> birdeye pixel (col, row)
    Homography metric_to_pixel;
    metric_to_pixel.m = {0.0, -1.0 / meters_per_pixel, out_w / 2.0 - 0.5,
                         -1.0 / meters_per_pixel, 0.0, out_h - 0.5,
                         0.0, 0.0, 1.0};
    return metric_to_pixel * pixel_to_ground;
}

ImageBinary birdeye(const ImageBinary& img, const Homography& h, int out_w, int out_h) {
    const Homography inv = h.inverse();
    ImageBinary out(out_w, out_h);
    for (int row = 0; row < out_h; ++row)
        for (int col = 0; col < out_w; ++col) {
            double w = 0.0;
            const Vec2 src = inv.apply({static_cast<double>(col), static_cast<double>(row)}, &w);
            if (w == 0.0 || !std::isfinite(src.x) || !std::isfinite(src.y)) continue;
            const int sx = static_cast<int>(std::lround(src.x));
            const int sy = static_cast<int>(std::lround(src.y));
            if (sx < 0 || sy < 0 || sx >= img.width || sy >= img.height) continue;
            out.set(col, row, img.at(sx, sy));
        }
    return out;
}

QuadraticFit fit_quadratic(const std::vector<Vec2>& points) {
    QuadraticFit fit;
    const size_t n = points.size();
    if (n == 0) {
        fit.degree = 0;
        return fit;
    }

    // Center and scale the forward coordinate before forming the normal
    // equations; raw f^4 sums are brutal on conditioning.
    double mean = 0.0;
    for (const Vec2& p : points) mean += p.x;
    mean /= static_cast<double>(n);
    double spread = 0.0;
    for (const Vec2& p : points) spread = std::max(spread, std::abs(p.x - mean));
    if (spread == 0.0) spread = 1.0;

    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (const Vec2& p : points) {
        const double f = (p.x - mean) / spread;
        const double f2 = f * f;
        s1 += f;
        s2 += f2;
        s3 += f2 * f;
        s4 += f2 * f2;
        t0 += p.y;
        t1 += f * p.y;
        t2 += f2 * p.y;
    }
    const double s0 = static_cast<double>(n);

    double A = 0.0, B = 0.0, C = 0.0;  // in normalized coordinates
    double quad[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    if (solve_linear<3>(quad)) {
        A = quad[0][3] / quad[0][0];
        B = quad[1][3] / quad[1][1];
        C = quad[2][3] / quad[2][2];
        fit.degree = 2;
    } else {
        double lin[2][3] = {{s2, s1, t1}, {s1, s0, t0}};
        if (solve_linear<2>(lin)) {
            B = lin[0][2] / lin[0][0];
            C = lin[1][2] / lin[1][1];
            fit.degree = 1;
        } else {
            C = t0 / s0;  // every sample at one forward value: mean lateral
            fit.degree = 0;
        }
    }

    // Expand y = A u^2 + B u + C, u = (f - mean)/spread back to raw f.
    fit.a = A / (spread * spread);
    fit.b = B / spread - 2.0 * A * mean / (spread * spread);
    fit.c = A * mean * mean / (spread * spread) - B * mean / spread + C;

    double ss = 0.0;
    for (const Vec2& p : points) {
        const double r = fit.a * p.x * p.x + fit.b * p.x + fit.c - p.y;
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

LaneTarget fit_lane(const ImageBinary& birdeye_img, double meters_per_pixel, double v,
                    double lookahead_min, double lookahead_gain, int min_pixels,
                    double max_rms) {
    std::vector<Vec2> pts;
    pts.reserve(256);
    for (int row = 0; row < birdeye_img.height; ++row)
        for (int col = 0; col < birdeye_img.width; ++col)
            if (birdeye_img.at(col, row))
                pts.push_back({(birdeye_img.height - 0.5 - row) * meters_per_pixel,
                               (birdeye_img.width / 2.0 - 0.5 - col) * meters_per_pixel});

    const QuadraticFit fit = fit_quadratic(pts);
    LaneTarget target;
    target.a = fit.a;
    target.b = fit.b;
    target.c = fit.c;
    target.lookahead = lookahead_min + lookahead_gain * v;
    target.point = {target.lookahead,
                    fit.a * target.lookahead * target.lookahead + fit.b * target.lookahead + fit.c};
    target.valid = static_cast<int>(pts.size()) >= min_pixels && fit.rms <= max_rms;
    return target;
}

LaneTarget detect_lane(const ImageRGB& view, const CameraModel& cam,
                       const LaneVisionConfig& cfg, double v) {
    cfg.validate();
    const ImageBinary mask = hsv_mask(view, cfg.mask_lo, cfg.mask_hi);
    const ImageBinary cleaned = morph_open_close(mask, cfg.morph_kernel);
    const ImageBinary lanes =
        filter_components(cleaned, cfg.min_area, cfg.max_area, cfg.min_aspect);
    const Homography h = birdeye_homography(cam.pixel_to_ground, cfg.birdeye_width,
                                            cfg.birdeye_height, cfg.meters_per_pixel);
    const ImageBinary top = birdeye(lanes, h, cfg.birdeye_width, cfg.birdeye_height);
    return fit_lane(top, cfg.meters_per_pixel, v, cfg.lookahead_min, cfg.lookahead_gain,
                    cfg.min_pixels, cfg.max_rms);
}

CameraModel default_camera() {
    CameraModel cam;
    cam.width = 160;
    cam.height = 120;
    cam.pixel_to_ground = homography_from_points({{
        {{0.0, 119.0}, {0.3, 0.21}},
        {{159.0, 119.0}, {0.3, -0.21}},
        {{0.0, 40.0}, {3.5, 2.45}},
        {{159.0, 40.0}, {3.5, -2.45}},
    }});
    return cam;
}

ImageRGB render_view(const Pose2D& pose, const Track& track, const CameraModel& cam,
                     const RenderOptions& opt) {
    ImageRGB img(cam.width, cam.height);
    const double reach = track.lane_width() + opt.side_halfwidth + 0.05;
    // The homography is only defined up to scale, so the sign of w that means
    // "in front of the camera" is whatever the bottom-center pixel gets: that
    // pixel must see floor for any sane mounting. Opposite sign = sky.
    double w_ref = 0.0;
    cam.pixel_to_ground.apply({(cam.width - 1) / 2.0, static_cast<double>(cam.height - 1)},
                              &w_ref);
    for (int row = 0; row < cam.height; ++row)
        for (int col = 0; col < cam.width; ++col) {
            double w = 0.0;
            const Vec2 local = cam.pixel_to_ground.apply(
                {static_cast<double>(col), static_cast<double>(row)}, &w);
            const std::uint8_t* color = kFloor;
            Vec2 world;
            bool on_ground = w * w_ref > 0.0 && std::isfinite(local.x) &&
                             std::isfinite(local.y) && local.squared_norm() < 100.0 * 100.0;
            if (on_ground) {
                world = pose.to_world(local);
                if (auto proj = track.project_within(world, reach)) {
                    const double lat = std::abs(proj->lateral);
                    if (lat <= opt.red_halfwidth) color = kRed;
                    else if (std::abs(lat - track.lane_width()) <= opt.side_halfwidth)
                        color = kBlack;
                }
            }
            if (opt.noise_amp > 0.0 && on_ground) {
                const double dn = opt.noise_amp * light_field(world, opt.noise_seed);
                img.set(col, row, clamp_u8(color[0] + dn), clamp_u8(color[1] + dn),
                        clamp_u8(color[2] + dn));
            } else {
                img.set(col, row, color[0], color[1], color[2]);
            }
        }
    return img;
}

}  // namespace navstack
