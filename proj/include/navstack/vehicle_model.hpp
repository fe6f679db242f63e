#ifndef NAVSTACK_VEHICLE_MODEL_HPP
#define NAVSTACK_VEHICLE_MODEL_HPP

#include <vector>

#include "navstack/geometry.hpp"

namespace navstack {

struct ControlCommand {
    double v = 0.0;      // m/s, signed
    double gamma = 0.0;  // rad, steering angle, positive = left
};

struct VehicleParams {
    double wheelbase_L = 0.33;
    double v_max = 1.0;        // m/s
    double gamma_max = 0.45;   // rad
    double a_max = 1.5;        // m/s^2
    double alpha_max = 4.0;    // rad/s^2, yaw-rate slew used by the DWA window
    double body_width = 0.25;  // m
    double body_length = 0.5;  // m

    double min_turn_radius() const;
    // Yaw rate at v_max with full steering lock, tan(gamma)=L/R.
    double max_yaw_rate() const;
    void validate() const;  // throws ConfigError if any field is non-positive
};

struct VehicleState {
    Pose2D pose;
    double v = 0.0;
    double omega = 0.0;
};

// Signed turning radius L/tan(gamma); +inf for gamma = 0.
// Throws LimitViolation when |gamma| > gamma_max.
double turning_radius(const VehicleParams& params, double gamma);

// Exact constant-command arc integration over dt. Heading of the result is
// wrapped to (-pi, pi]. Throws InvalidState on non-finite input, LimitViolation
// when the command exceeds limits or dt <= 0.
Pose2D step(const Pose2D& pose, const ControlCommand& cmd, double dt,
            const VehicleParams& params);

// Covers the body rectangle (centered on the pose, length along heading)
// with three circles. Union contains the rectangle.
std::vector<Circle> footprint_circles(const Pose2D& pose, const VehicleParams& params);

}  // namespace navstack

#endif
