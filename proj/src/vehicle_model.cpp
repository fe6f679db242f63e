#include "navstack/vehicle_model.hpp"

#include <cmath>

#include "navstack/errors.hpp"

namespace navstack {

namespace {
constexpr double kOmegaStraight = 1e-9;  // below this the arc degenerates to a line
}

double VehicleParams::min_turn_radius() const {
    return wheelbase_L / std::tan(gamma_max);
}

double VehicleParams::max_yaw_rate() const {
    return v_max * std::tan(gamma_max) / wheelbase_L;
}

void VehicleParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(wheelbase_L) || !positive(v_max) || !positive(gamma_max) ||
        !positive(a_max) || !positive(alpha_max) || !positive(body_width) ||
        !positive(body_length)) {
        throw ConfigError("vehicle params must all be strictly positive and finite");
    }
    if (gamma_max >= M_PI / 2.0 || !std::isfinite(min_turn_radius())) {
        throw ConfigError("gamma_max must leave a finite positive turning radius");
    }
}

double turning_radius(const VehicleParams& params, double gamma) {
    if (std::fabs(gamma) > params.gamma_max) {
        throw LimitViolation("steering angle exceeds gamma_max");
    }
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return params.wheelbase_L / std::tan(gamma);
}

Pose2D step(const Pose2D& pose, const ControlCommand& cmd, double dt,
            const VehicleParams& params) {
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta) ||
        !std::isfinite(cmd.v) || !std::isfinite(cmd.gamma) || !std::isfinite(dt)) {
        throw InvalidState("non-finite pose, command or dt");
    }
    if (dt <= 0.0) throw LimitViolation("dt must be positive");
    if (std::fabs(cmd.gamma) > params.gamma_max + 1e-12) {
        throw LimitViolation("steering angle exceeds gamma_max");
    }
    if (std::fabs(cmd.v) > params.v_max + 1e-12) {
        throw LimitViolation("speed exceeds v_max");
    }

    const double omega = cmd.v * std::tan(cmd.gamma) / params.wheelbase_L;
    Pose2D out = pose;
    if (std::fabs(omega) > kOmegaStraight) {
        const double radius = cmd.v / omega;
        const double theta1 = pose.theta + omega * dt;
        out.x = pose.x + radius * (std::sin(theta1) - std::sin(pose.theta));
        out.y = pose.y - radius * (std::cos(theta1) - std::cos(pose.theta));
        out.theta = wrap_angle(theta1);
    } else {
        out.x = pose.x + cmd.v * dt * std::cos(pose.theta);
        out.y = pose.y + cmd.v * dt * std::sin(pose.theta);
        out.theta = wrap_angle(pose.theta);
    }
    return out;
}

std::vector<Circle> footprint_circles(const Pose2D& pose, const VehicleParams& params) {
    const double half_w = params.body_width / 2.0;
    const double seg = params.body_length / 3.0;
    const double radius = std::hypot(seg / 2.0, half_w);

    std::vector<Circle> circles;
    circles.reserve(3);
    for (double cx : {-seg, 0.0, seg}) {
        circles.push_back({pose.to_world({cx, 0.0}), radius});
    }
    return circles;
}

}  // namespace navstack
