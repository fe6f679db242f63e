#ifndef NAVSTACK_GEOMETRY_HPP
#define NAVSTACK_GEOMETRY_HPP

#include <cmath>

namespace navstack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // 90 degrees counter-clockwise
    Vec2 perp() const { return {-y, x}; }
    Vec2 rotated(double angle) const {
        double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Wraps to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    else if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }

    // local -> world
    Vec2 to_world(const Vec2& local) const {
        Vec2 r = local.rotated(theta);
        return {x + r.x, y + r.y};
    }
    // world -> local
    Vec2 to_local(const Vec2& world) const {
        return Vec2{world.x - x, world.y - y}.rotated(-theta);
    }
};

struct Circle {
    Vec2 center;
    double radius = 0.0;

    bool contains(const Vec2& p) const { return distance(center, p) <= radius; }
};

inline double circular_mean(double a, double b) {
    return std::atan2(std::sin(a) + std::sin(b), std::cos(a) + std::cos(b));
}

}  // namespace navstack

#endif
