#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace lls {

inline constexpr double kPi = std::numbers::pi;

/// Sentinel for an infinite turning radius (straight-line frames).
inline constexpr double kInfLambda = std::numeric_limits<double>::infinity();

/// Normalize an angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    static Vec2 from_angle(double a) { return {std::cos(a), std::sin(a)}; }

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// z-component of the 2D cross product.
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }

    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    double angle() const { return std::atan2(y, x); }

    Vec2 unit() const {
        const double n = norm();
        return {x / n, y / n};
    }
    /// Rotate counter-clockwise by angle a.
    Vec2 rotated(double a) const {
        const double c = std::cos(a), s = std::sin(a);
        return {c * x - s * y, s * x + c * y};
    }
    constexpr Vec2 perp_ccw() const { return {-y, x}; }
    constexpr Vec2 perp_cw() const { return {y, -x}; }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Reflect direction angle `a` about the line with direction angle `axis`.
inline double reflect_angle(double a, double axis) { return wrap_pi(2.0 * axis - a); }

}  // namespace lls
