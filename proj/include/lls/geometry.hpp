#pragma once

#include <functional>
#include <limits>
#include <variant>

#include "lls/vec2.hpp"

namespace lls {

// Boundary curves are oriented: the tangent points along the direction of
// travel, curvature is >= 0 (the curve bends left of the tangent), and the
// tracked side lies to the right of the tangent. Circles are traversed
// counter-clockwise, so a runner outside the circle is on the tracked side.

struct CircleCurve {
    Vec2 center;
    double radius = 1.0;
};

struct LineCurve {
    Vec2 point;
    Vec2 direction;  // unit length
};

/// Arc-length parameterized convex curve given by callbacks.
struct ParametricCurve {
    std::function<Vec2(double)> point;
    std::function<double(double)> tangent_angle;  // rad, CCW from lab X
    std::function<double(double)> curvature;      // 1/m, >= 0
    double s_lo = 0.0;
    double s_hi = 1.0;
};

struct CurveModel {
    std::variant<CircleCurve, LineCurve, ParametricCurve> shape;

    static CurveModel circle(Vec2 center, double radius) { return {CircleCurve{center, radius}}; }
    static CurveModel line(Vec2 point, Vec2 direction) {
        return {LineCurve{point, direction.unit()}};
    }
    static CurveModel parametric(ParametricCurve p) { return {std::move(p)}; }

    bool is_line() const { return std::holds_alternative<LineCurve>(shape); }
};

/// Frame at the boundary point closest to a query position.
struct ClosestFrame {
    Vec2 r_c;       // closest point on the curve (m)
    double rho;     // distance from query to r_c (m)
    double zeta;    // tangent angle at r_c (rad, CCW from lab X)
    double kappa;   // curvature at r_c (1/m); 0 for lines
    double lambda;  // rho + 1/kappa (m); +inf for kappa == 0

    Vec2 tangent() const { return Vec2::from_angle(zeta); }
};

/// Closest-point frame on the curve. Closed form for circles and lines; a
/// scalar minimization over arc length for parametric curves.
/// Throws DegenerateQuery when r coincides with a circle center.
ClosestFrame closest_frame(const CurveModel& curve, const Vec2& r);

/// Steering angle of a unit direction against the frame tangent, measured CCW
/// from the tangent, in (-pi, pi]. Positive values tilt toward the curve's
/// center of curvature.
double bearing_theta(const Vec2& q_dir, const ClosestFrame& frame);

/// Signed curvature of the circumcircle through three points; 0 when
/// collinear. Throws DegeneratePoints when two points coincide.
double estimate_curvature(const Vec2& p1, const Vec2& p2, const Vec2& p3);

/// Tangent-angle advance of the closest point over one stance, from the sine
/// law: sin(gamma) = q cos(theta) / (lambda + f). Returns gamma in [0, pi/2];
/// 0 for straight lines. Throws InfeasibleGeometry when the argument leaves
/// [-1, 1].
double advance_zeta(const ClosestFrame& frame, double q, double theta, double f);

}  // namespace lls
