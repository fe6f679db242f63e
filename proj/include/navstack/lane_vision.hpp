#ifndef NAVSTACK_LANE_VISION_HPP
#define NAVSTACK_LANE_VISION_HPP

#include <vector>

#include "navstack/geometry.hpp"
#include "navstack/homography.hpp"
#include "navstack/image.hpp"
#include "navstack/track.hpp"

namespace navstack {

struct Hsv {
    double h = 0.0;  // degrees, [0, 360)
    double s = 0.0;  // [0, 1]
    double v = 0.0;  // [0, 1]
};

// Standard hexcone conversion.
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

struct LaneTarget {
    Vec2 point;              // vehicle frame: x forward, y left, meters
    double lookahead = 0.0;  // m
    double a = 0.0, b = 0.0, c = 0.0;  // lateral = a*fwd^2 + b*fwd + c
    bool valid = false;      // callers keep their previous target when false
};

// Forward-looking camera as a pure ground-plane homography: pixel (column,
// row, both measured at pixel centers) -> point on the floor in the vehicle
// frame. No lens model; the scenario supplies four correspondences instead
// of a calibration.
struct CameraModel {
    int width = 160;
    int height = 120;
    Homography pixel_to_ground;
};

// The shipped default geometry: 160x120, bottom row ~0.3 m ahead spanning
// +-0.21 m, row 40 at 3.5 m spanning +-2.45 m (pinhole-consistent widening).
CameraModel default_camera();

struct LaneVisionConfig {
    Hsv mask_lo{340.0, 0.35, 0.25};  // hue range wraps around 0 for red
    Hsv mask_hi{20.0, 1.0, 1.0};
    int morph_kernel = 3;
    int min_area = 25;
    int max_area = 1 << 20;
    double min_aspect = 1.5;  // bounding-box elongation, lanes are long
    int birdeye_width = 160;
    int birdeye_height = 120;
    double meters_per_pixel = 0.025;
    double lookahead_min = 0.8;   // L_d = lookahead_min + lookahead_gain * v
    double lookahead_gain = 0.6;
    int min_pixels = 30;          // below this the fit is not trusted
    double max_rms = 0.15;        // m, residual gate

    void validate() const;  // throws ConfigError
};

// pixel = 1 iff HSV lies in the box; the hue interval [lo.h, hi.h] is
// circular, so lo.h > hi.h means "wraps through 0" (red).
ImageBinary hsv_mask(const ImageRGB& img, const Hsv& lo, const Hsv& hi);

// Opening then closing with a square kernel (odd size), zero-padded borders.
// Throws ConfigError on even or non-positive kernel.
ImageBinary morph_open_close(const ImageBinary& img, int kernel);

// Keeps 8-connected components with area in [min_area, max_area] and
// bounding-box elongation max(w,h)/min(w,h) >= min_aspect.
ImageBinary filter_components(const ImageBinary& img, int min_area, int max_area,
                              double min_aspect);

// Birdeye pixel grid convention: the vehicle sits at the bottom edge center;
// forward x = (out_h - 0.5 - row) * mpp, lateral y = (out_w/2 - 0.5 - col) * mpp.
// This helper builds the camera-pixel -> birdeye-pixel map from that.
Homography birdeye_homography(const Homography& pixel_to_ground, int out_w, int out_h,
                              double meters_per_pixel);

// Inverse-mapped nearest-neighbor warp: out(col,row) samples the source at
// H^-1 (col,row); off-source pixels become 0. H maps source pixel -> output
// pixel coordinates, so the identity leaves the image unchanged.
ImageBinary birdeye(const ImageBinary& img, const Homography& h, int out_w, int out_h);

// Least-squares quadratic lateral(fwd) over (forward, lateral) samples.
// Rank-deficient normal equations degrade degree 2 -> 1 -> 0 (mean).
// Returns rms of the residuals of whatever degree was fit.
struct QuadraticFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double rms = 0.0;
    int degree = 2;  // what actually got fit
};
QuadraticFit fit_quadratic(const std::vector<Vec2>& points);  // point = (fwd, lateral)

// Fit over every set pixel of the birdeye mask (pixel centers in the metric
// frame above). Target point = (L_d, poly(L_d)) with L_d = L_min + k_v * v.
// valid = enough pixels (>= min_pixels) and rms <= max_rms.
LaneTarget fit_lane(const ImageBinary& birdeye_img, double meters_per_pixel, double v,
                    double lookahead_min, double lookahead_gain, int min_pixels = 30,
                    double max_rms = 0.15);

// Whole pipeline: mask -> morphology -> component filter -> warp -> fit.
LaneTarget detect_lane(const ImageRGB& view, const CameraModel& cam,
                       const LaneVisionConfig& cfg, double v);

struct RenderOptions {
    double red_halfwidth = 0.05;   // m, center line half width
    double side_halfwidth = 0.03;  // m, black side line half width
    double noise_amp = 0.0;        // additive brightness field, intensity units
    unsigned noise_seed = 0;
};

// Synthetic camera: every pixel is inverse-mapped to the ground plane and
// colored from the track (red center line at lateral 0, black side lines at
// +-lane_width, gray floor). Pixels above the horizon (w <= 0) or far away
// render as floor. The optional noise is a smooth world-anchored brightness
// field added equally to all channels: grays stay gray and red keeps its hue,
// like real lighting.
ImageRGB render_view(const Pose2D& pose, const Track& track, const CameraModel& cam,
                     const RenderOptions& opt = {});

}  // namespace navstack

#endif
