#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "navstack/errors.hpp"
#include "navstack/lane_vision.hpp"
#include "navstack/track.hpp"

using namespace navstack;

namespace {

// Independent HSV conversion for the mask oracle (different formulation:
// fmod-based hue, works straight off doubles).
Hsv hsv_oracle(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? (mx - mn) / mx : 0.0;
    if (mx > mn) {
        double h;
        if (mx == r) h = std::fmod((g - b) / (mx - mn), 6.0);
        else if (mx == g) h = (b - r) / (mx - mn) + 2.0;
        else h = (r - g) / (mx - mn) + 4.0;
        h *= 60.0;
        if (h < 0.0) h += 360.0;
        out.h = h;
    }
    return out;
}

bool in_box_oracle(const Hsv& p, const Hsv& lo, const Hsv& hi) {
    const bool hue_ok = lo.h <= hi.h ? (p.h >= lo.h && p.h <= hi.h) : (p.h >= lo.h || p.h <= hi.h);
    return hue_ok && p.s >= lo.s && p.s <= hi.s && p.v >= lo.v && p.v <= hi.v;
}

ImageBinary erode_oracle(const ImageBinary& img, int k) {
    const int r = k / 2;
    ImageBinary out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int mn = 1;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) mn = std::min<int>(mn, img.at_or_zero(x + dx, y + dy));
            out.set(x, y, static_cast<std::uint8_t>(mn));
        }
    return out;
}

ImageBinary dilate_oracle(const ImageBinary& img, int k) {
    const int r = k / 2;
    ImageBinary out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int mx = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) mx = std::max<int>(mx, img.at_or_zero(x + dx, y + dy));
            out.set(x, y, static_cast<std::uint8_t>(mx));
        }
    return out;
}

// BFS flood-fill labeling oracle for the component filter.
ImageBinary filter_oracle(const ImageBinary& img, int min_area, int max_area, double min_aspect) {
    ImageBinary out(img.width, img.height);
    std::vector<char> seen(img.pixels.size(), 0);
    for (size_t start = 0; start < img.pixels.size(); ++start) {
        if (!img.pixels[start] || seen[start]) continue;
        std::vector<size_t> queue = {start}, members;
        seen[start] = 1;
        size_t head = 0;
        int mnx = 1 << 30, mxx = -1, mny = 1 << 30, mxy = -1;
        while (head < queue.size()) {
            const size_t idx = queue[head++];
            members.push_back(idx);
            const int x = static_cast<int>(idx) % img.width;
            const int y = static_cast<int>(idx) / img.width;
            mnx = std::min(mnx, x); mxx = std::max(mxx, x);
            mny = std::min(mny, y); mxy = std::max(mxy, y);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
                    const size_t nidx = static_cast<size_t>(ny) * img.width + nx;
                    if (img.pixels[nidx] && !seen[nidx]) {
                        seen[nidx] = 1;
                        queue.push_back(nidx);
                    }
                }
        }
        const int area = static_cast<int>(members.size());
        const double bw = mxx - mnx + 1, bh = mxy - mny + 1;
        if (area >= min_area && area <= max_area &&
            std::max(bw, bh) / std::min(bw, bh) >= min_aspect)
            for (size_t idx : members) out.pixels[idx] = 1;
    }
    return out;
}

ImageBinary random_mask(int w, int h, double density, std::mt19937& rng) {
    ImageBinary img(w, h);
    std::bernoulli_distribution bit(density);
    for (auto& p : img.pixels) p = bit(rng) ? 1 : 0;
    return img;
}

bool same_pixels(const ImageBinary& a, const ImageBinary& b) {
    return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
}

}  // namespace

TEST_CASE("hsv conversion hits the canonical anchors") {
    Hsv red = rgb_to_hsv(255, 0, 0);
    CHECK(red.h == doctest::Approx(0.0));
    CHECK(red.s == doctest::Approx(1.0));
    CHECK(red.v == doctest::Approx(1.0));

    CHECK(rgb_to_hsv(0, 255, 0).h == doctest::Approx(120.0));
    CHECK(rgb_to_hsv(0, 0, 255).h == doctest::Approx(240.0));
    CHECK(rgb_to_hsv(255, 255, 0).h == doctest::Approx(60.0));

    Hsv gray = rgb_to_hsv(128, 128, 128);
    CHECK(gray.s == doctest::Approx(0.0));
    CHECK(gray.v == doctest::Approx(128.0 / 255.0));

    Hsv dark_red = rgb_to_hsv(128, 0, 0);
    CHECK(dark_red.h == doctest::Approx(0.0));
    CHECK(dark_red.s == doctest::Approx(1.0));
    CHECK(dark_red.v == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("pure red lands inside a wrapped hue range") {
    ImageRGB img(1, 1);
    img.set(0, 0, 255, 0, 0);
    const ImageBinary m = hsv_mask(img, Hsv{350.0, 0.5, 0.5}, Hsv{10.0, 1.0, 1.0});
    CHECK(m.at(0, 0) == 1);
    // and a gray pixel is excluded by any saturation floor
    img.set(0, 0, 180, 180, 180);
    const ImageBinary m2 = hsv_mask(img, Hsv{350.0, 0.1, 0.0}, Hsv{10.0, 1.0, 1.0});
    CHECK(m2.at(0, 0) == 0);
}

TEST_CASE("hsv mask equals the per-pixel oracle on random images") {
    std::mt19937 rng(4111u);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 6; ++trial) {
        ImageRGB img(37, 23);
        for (auto& px : img.pixels) px = static_cast<std::uint8_t>(byte(rng));
        const Hsv lo = trial % 2 ? Hsv{350.0, 0.3, 0.2} : Hsv{80.0, 0.1, 0.1};
        const Hsv hi = trial % 2 ? Hsv{15.0, 1.0, 1.0} : Hsv{200.0, 0.9, 0.95};
        const ImageBinary got = hsv_mask(img, lo, hi);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                const std::uint8_t* p = img.at(x, y);
                const bool want = in_box_oracle(hsv_oracle(p[0], p[1], p[2]), lo, hi);
                CHECK(got.at(x, y) == (want ? 1 : 0));
            }
    }
}

TEST_CASE("morphology basics: salt removal, blob idempotence, containment") {
    ImageBinary salt(20, 20);
    salt.set(10, 10, 1);
    const ImageBinary cleaned = morph_open_close(salt, 3);
    CHECK(std::count(cleaned.pixels.begin(), cleaned.pixels.end(), 1) == 0);

    ImageBinary block(20, 20);
    for (int y = 5; y < 15; ++y)
        for (int x = 5; x < 15; ++x) block.set(x, y, 1);
    CHECK(same_pixels(morph_open_close(block, 3), block));

    CHECK_THROWS_AS(morph_open_close(block, 2), ConfigError);
    CHECK_THROWS_AS(morph_open_close(block, 0), ConfigError);
}

TEST_CASE("morphology equals the sliding min-max oracle on random masks") {
    std::mt19937 rng(2222u);
    for (int trial = 0; trial < 8; ++trial) {
        const ImageBinary img = random_mask(41, 29, 0.45, rng);
        const int k = trial % 2 ? 3 : 5;
        const ImageBinary got = morph_open_close(img, k);
        const ImageBinary opened = dilate_oracle(erode_oracle(img, k), k);
        const ImageBinary want = erode_oracle(dilate_oracle(opened, k), k);
        CHECK(same_pixels(got, want));

        // closure containment: closing the opening can only keep pixels the
        // dilated opening already had
        const ImageBinary dil = dilate_oracle(opened, k);
        for (size_t i = 0; i < got.pixels.size(); ++i)
            if (got.pixels[i]) CHECK(dil.pixels[i] == 1);
    }
}

TEST_CASE("component filter: empty in, empty out; small blob removed") {
    ImageBinary empty(16, 16);
    CHECK(same_pixels(filter_components(empty, 1, 100, 1.0), empty));

    ImageBinary blob(16, 16);
    for (int i = 0; i < 5; ++i) blob.set(3 + i, 7, 1);  // 5 pixels in a row
    const ImageBinary kept = filter_components(blob, 10, 100, 1.0);
    CHECK(std::count(kept.pixels.begin(), kept.pixels.end(), 1) == 0);
    // but passes with min_area below it (elongation 5 >= 1.5)
    const ImageBinary kept2 = filter_components(blob, 3, 100, 1.5);
    CHECK(same_pixels(kept2, blob));
}

TEST_CASE("component filter matches the flood-fill oracle on random masks") {
    std::mt19937 rng(31415u);
    for (int trial = 0; trial < 10; ++trial) {
        const ImageBinary img = random_mask(48, 32, 0.35, rng);
        const int min_area = 2 + trial;
        const int max_area = 60 + 10 * trial;
        const double min_aspect = 1.0 + 0.2 * (trial % 4);
        CHECK(same_pixels(filter_components(img, min_area, max_area, min_aspect),
                          filter_oracle(img, min_area, max_area, min_aspect)));
    }
}

TEST_CASE("dlt homography reproduces its correspondences and inverts") {
    std::mt19937 rng(555u);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::array<std::pair<Vec2, Vec2>, 4> corr = {{
            {{0.0 + jitter(rng), 0.0 + jitter(rng)}, {2.0 + jitter(rng), 1.0 + jitter(rng)}},
            {{10.0 + jitter(rng), 0.5 + jitter(rng)}, {8.5 + jitter(rng), 0.8 + jitter(rng)}},
            {{9.5 + jitter(rng), 11.0 + jitter(rng)}, {9.0 + jitter(rng), 9.5 + jitter(rng)}},
            {{0.5 + jitter(rng), 10.0 + jitter(rng)}, {1.0 + jitter(rng), 10.5 + jitter(rng)}},
        }};
        const Homography h = homography_from_points(corr);
        for (const auto& [src, dst] : corr) {
            const Vec2 got = h.apply(src);
            CHECK(got.x == doctest::Approx(dst.x).epsilon(1e-9));
            CHECK(got.y == doctest::Approx(dst.y).epsilon(1e-9));
        }
        const Homography inv = h.inverse();
        const Vec2 p{3.7, 4.1};
        const Vec2 back = inv.apply(h.apply(p));
        CHECK(back.x == doctest::Approx(p.x).epsilon(1e-9));
        CHECK(back.y == doctest::Approx(p.y).epsilon(1e-9));
    }

    // three collinear source points: degenerate
    CHECK_THROWS_AS(homography_from_points({{
                        {{0.0, 0.0}, {0.0, 0.0}},
                        {{1.0, 1.0}, {1.0, 0.0}},
                        {{2.0, 2.0}, {1.0, 1.0}},
                        {{3.0, 0.0}, {0.0, 1.0}},
                    }}),
                    InvalidState);
}

TEST_CASE("identity warp leaves the mask untouched") {
    std::mt19937 rng(808u);
    const ImageBinary img = random_mask(33, 17, 0.4, rng);
    CHECK(same_pixels(birdeye(img, Homography{}, 33, 17), img));
}

TEST_CASE("warp round trip recovers interior pixels") {
    std::mt19937 rng(909u);
    const ImageBinary img = random_mask(40, 30, 0.5, rng);

    // integer translation: exactly invertible on the overlap
    Homography shift;
    shift.m = {1, 0, 7, 0, 1, -4, 0, 0, 1};
    const ImageBinary once = birdeye(img, shift, 40, 30);
    const ImageBinary back = birdeye(once, shift.inverse(), 40, 30);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) {
            const bool interior = x + 7 < 40 && y - 4 >= 0;
            if (interior) CHECK(back.at(x, y) == img.at(x, y));
        }
}

TEST_CASE("straight lane warps to a constant-width vertical band") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    Track straight({{-2.0, 0.0}, {2.0, 0.0}, {6.0, 0.0}, {10.0, 0.0}}, 0.5);
    const ImageRGB view = render_view({0.0, 0.0, 0.0}, straight, cam);
    const ImageBinary mask = hsv_mask(view, cfg.mask_lo, cfg.mask_hi);
    const Homography h = birdeye_homography(cam.pixel_to_ground, cfg.birdeye_width,
                                            cfg.birdeye_height, cfg.meters_per_pixel);
    const ImageBinary top = birdeye(mask, h, cfg.birdeye_width, cfg.birdeye_height);

    const double expected_px = 2.0 * 0.05 / cfg.meters_per_pixel;  // band width in pixels
    const double center = cfg.birdeye_width / 2.0 - 0.5;
    int rows_with_band = 0;
    for (int row = 0; row < top.height; ++row) {
        int first = -1, last = -1, n = 0;
        for (int col = 0; col < top.width; ++col)
            if (top.at(col, row)) {
                if (first < 0) first = col;
                last = col;
                ++n;
            }
        if (n == 0) continue;
        ++rows_with_band;
        CHECK(std::abs((last - first + 1) - expected_px) <= 1.0);
        CHECK(std::abs(0.5 * (first + last) - center) <= 1.0);
        CHECK(n == last - first + 1);  // no holes
    }
    // camera coverage spans roughly 0.3..3.0 m of the birdeye window
    CHECK(rows_with_band > 90);
}

TEST_CASE("quadratic fit recovers exact samples") {
    std::vector<Vec2> pts;
    for (double f = 0.3; f <= 3.0; f += 0.05)
        pts.push_back({f, 0.1 * f * f - 0.05 * f + 0.2});
    const QuadraticFit fit = fit_quadratic(pts);
    CHECK(fit.degree == 2);
    CHECK(fit.a == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(fit.b == doctest::Approx(-0.05).epsilon(1e-6));
    CHECK(fit.c == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(fit.rms < 1e-9);
}

TEST_CASE("lane fit recovers an exact quadratic pixel set") {
    // Pixel centers sit on a half-integer lattice, so a curve that lands on
    // it exactly must have half-integer-compatible coefficients in pixel
    // units: Y = F^2 + 0.25 with F = fwd/mpp gives Y(m + 0.5) = m^2 + m + 0.5,
    // one exact column per row.
    const double mpp = 0.025;
    const int w = 2048, h = 64;
    ImageBinary img(w, h);
    int placed = 0;
    for (int m = 0; m <= 31; ++m) {
        const int j = m * m + m;          // lateral index
        const int row = h - 1 - m;
        const int col = w / 2 - 1 - j;
        REQUIRE(col >= 0);
        img.set(col, row, 1);
        ++placed;
    }
    REQUIRE(placed >= 30);

    const LaneTarget t = fit_lane(img, mpp, 0.0, 0.8, 0.6);
    CHECK(t.valid);
    CHECK(t.a == doctest::Approx(1.0 / mpp).epsilon(1e-6));
    CHECK(std::abs(t.b) < 1e-6);
    CHECK(t.c == doctest::Approx(0.25 * mpp).epsilon(1e-6));
}

TEST_CASE("degenerate point sets degrade to line and mean fits") {
    // two distinct forward values: a line, fit exactly
    std::vector<Vec2> two = {{1.0, 0.5}, {2.0, 0.9}, {1.0, 0.5}, {2.0, 0.9}};
    const QuadraticFit line = fit_quadratic(two);
    CHECK(line.degree == 1);
    CHECK(line.a == 0.0);
    CHECK(line.b == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(line.c == doctest::Approx(0.1).epsilon(1e-9));

    // a single forward value: mean lateral
    std::vector<Vec2> one = {{1.5, 0.2}, {1.5, 0.6}, {1.5, 1.0}};
    const QuadraticFit mean = fit_quadratic(one);
    CHECK(mean.degree == 0);
    CHECK(mean.a == 0.0);
    CHECK(mean.b == 0.0);
    CHECK(mean.c == doctest::Approx(0.6).epsilon(1e-9));

    CHECK(fit_quadratic({}).degree == 0);
}

TEST_CASE("lookahead law is affine in speed") {
    ImageBinary img(160, 120);
    for (int row = 0; row < 120; ++row)
        for (int col = 78; col <= 81; ++col) img.set(col, row, 1);
    const LaneTarget slow = fit_lane(img, 0.025, 0.0, 0.8, 0.6);
    const LaneTarget fast = fit_lane(img, 0.025, 1.0, 0.8, 0.6);
    CHECK(slow.lookahead == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(fast.lookahead == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(slow.valid);
    CHECK(std::abs(slow.point.y) < 0.025);
    CHECK(slow.point.x == doctest::Approx(0.8));
}

TEST_CASE("noise-free render: mask hits nearly all red and nothing else") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    Track straight({{-2.0, 0.0}, {2.0, 0.0}, {6.0, 0.0}, {10.0, 0.0}}, 0.5);
    const ImageRGB view = render_view({0.1, 0.03, 0.02}, straight, cam);
    const ImageBinary mask = hsv_mask(view, cfg.mask_lo, cfg.mask_hi);

    int red_px = 0, red_hit = 0, other_px = 0, other_hit = 0;
    for (int y = 0; y < view.height; ++y)
        for (int x = 0; x < view.width; ++x) {
            const std::uint8_t* p = view.at(x, y);
            const bool is_red = p[0] == 220 && p[1] == 20 && p[2] == 20;
            if (is_red) {
                ++red_px;
                red_hit += mask.at(x, y);
            } else {
                ++other_px;
                other_hit += mask.at(x, y);
            }
        }
    REQUIRE(red_px > 100);
    CHECK(red_hit >= 0.99 * red_px);
    CHECK(other_hit <= 0.01 * other_px);
}

TEST_CASE("rendered straight lane yields a centered target") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    Track straight({{-2.0, 0.0}, {2.0, 0.0}, {6.0, 0.0}, {10.0, 0.0}}, 0.5);
    const LaneTarget t = detect_lane(render_view({0.0, 0.0, 0.0}, straight, cam), cam, cfg, 0.4);
    CHECK(t.valid);
    CHECK(t.point.x == doctest::Approx(0.8 + 0.6 * 0.4).epsilon(1e-12));
    CHECK(std::abs(t.point.y) <= cfg.meters_per_pixel);
}

TEST_CASE("fifty curved poses stay within two pixels of ground truth") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    std::vector<Vec2> cps;
    for (int i = 0; i <= 16; ++i) {
        const double s = i * 1.2;
        cps.push_back({s, 1.2 * std::sin(s * 0.35)});
    }
    Track curved(cps, 0.5);

    for (int k = 0; k < 50; ++k) {
        const double s = 0.5 + k * (curved.total_length() - 4.5) / 49.0;
        const Vec2 p = curved.point_at(s);
        const Pose2D pose{p.x, p.y, curved.heading_at(s)};
        const LaneTarget t = detect_lane(render_view(pose, curved, cam), cam, cfg, 0.5);
        REQUIRE(t.valid);

        // ground truth: centerline crossing of the forward = lookahead plane
        double gt_y = 0.0, best_dx = 1e9;
        for (double ss = s; ss < s + 2.0 * t.lookahead + 2.0; ss += 0.01) {
            const Vec2 q = pose.to_local(curved.point_at(ss));
            if (std::abs(q.x - t.lookahead) < best_dx) {
                best_dx = std::abs(q.x - t.lookahead);
                gt_y = q.y;
            }
        }
        CHECK(std::abs(t.point.y - gt_y) < 2.0 * cfg.meters_per_pixel);
    }
}

TEST_CASE("pipeline is deterministic and stable under small displacement") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    std::vector<Vec2> cps;
    for (int i = 0; i <= 16; ++i) {
        const double s = i * 1.2;
        cps.push_back({s, 1.2 * std::sin(s * 0.35)});
    }
    Track curved(cps, 0.5);
    const Vec2 cp = curved.point_at(5.0);
    const double th = curved.heading_at(5.0);
    const Pose2D base{cp.x - 0.12 * std::sin(th), cp.y + 0.12 * std::cos(th), th + 0.03};

    const ImageRGB view = render_view(base, curved, cam);
    const LaneTarget t1 = detect_lane(view, cam, cfg, 0.5);
    const LaneTarget t2 = detect_lane(view, cam, cfg, 0.5);
    CHECK(t1.point.x == t2.point.x);
    CHECK(t1.point.y == t2.point.y);
    CHECK(t1.a == t2.a);
    CHECK(t1.b == t2.b);
    CHECK(t1.c == t2.c);
    CHECK(t1.valid == t2.valid);

    const Pose2D moved{base.x + 0.01 * std::cos(th), base.y + 0.01 * std::sin(th), base.theta};
    const LaneTarget t3 = detect_lane(render_view(moved, curved, cam), cam, cfg, 0.5);
    REQUIRE(t1.valid);
    REQUIRE(t3.valid);
    CHECK(std::abs(t3.point.y - t1.point.y) < 0.05);
}

TEST_CASE("brightness noise does not move the target") {
    const CameraModel cam = default_camera();
    const LaneVisionConfig cfg;
    std::vector<Vec2> cps;
    for (int i = 0; i <= 16; ++i) {
        const double s = i * 1.2;
        cps.push_back({s, 1.2 * std::sin(s * 0.35)});
    }
    Track curved(cps, 0.5);
    const Vec2 cp = curved.point_at(6.0);
    const Pose2D pose{cp.x, cp.y, curved.heading_at(6.0)};

    const LaneTarget clean = detect_lane(render_view(pose, curved, cam), cam, cfg, 0.5);
    RenderOptions noisy;
    noisy.noise_amp = 40.0;
    noisy.noise_seed = 7;
    const LaneTarget lit = detect_lane(render_view(pose, curved, cam, noisy), cam, cfg, 0.5);
    REQUIRE(clean.valid);
    REQUIRE(lit.valid);
    // equal-channel lighting never moves the hue, so the mask is identical
    CHECK(std::abs(lit.point.y - clean.point.y) < 1e-9);
}

TEST_CASE("pnm files round trip and reject junk") {
    const std::string dir = "/tmp";
    ImageRGB img(7, 5);
    std::mt19937 rng(1234u);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(byte(rng));
    const std::string ppm = dir + "/navstack_test_roundtrip.ppm";
    write_ppm(ppm, img);
    const ImageRGB back = read_ppm(ppm);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);

    ImageBinary mask(9, 4);
    for (size_t i = 0; i < mask.pixels.size(); i += 3) mask.pixels[i] = 1;
    const std::string pgm = dir + "/navstack_test_roundtrip.pgm";
    write_pgm(pgm, mask);
    const ImageBinary mback = read_pgm(pgm);
    CHECK(mback.pixels == mask.pixels);

    CHECK_THROWS_AS(read_ppm(pgm), ConfigError);  // wrong magic
    CHECK_THROWS_AS(read_ppm(dir + "/navstack_no_such_file.ppm"), ConfigError);

    std::remove(ppm.c_str());
    std::remove(pgm.c_str());
}
