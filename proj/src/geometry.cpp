#include "lls/geometry.hpp"

#include <cmath>

#include "lls/errors.hpp"
#include "lls/numerics.hpp"

namespace lls {

namespace {

ClosestFrame frame_on_circle(const CircleCurve& c, const Vec2& r) {
    const Vec2 d = r - c.center;
    const double dist = d.norm();
    if (dist < 1e-12)
        throw DegenerateQuery("closest point undefined at the circle center");
    const Vec2 u = d * (1.0 / dist);
    ClosestFrame f;
    f.r_c = c.center + u * c.radius;
    f.rho = std::abs(dist - c.radius);
    f.zeta = wrap_pi(u.angle() + kPi / 2);  // CCW traversal
    f.kappa = 1.0 / c.radius;
    f.lambda = f.rho + c.radius;
    return f;
}

ClosestFrame frame_on_line(const LineCurve& l, const Vec2& r) {
    const Vec2 d = r - l.point;
    const double along = d.dot(l.direction);
    ClosestFrame f;
    f.r_c = l.point + l.direction * along;
    f.rho = (r - f.r_c).norm();
    f.zeta = wrap_pi(l.direction.angle());
    f.kappa = 0.0;
    f.lambda = kInfLambda;
    return f;
}

ClosestFrame frame_on_parametric(const ParametricCurve& p, const Vec2& r) {
    const auto dist2 = [&](double s) { return (r - p.point(s)).norm2(); };
    // Coarse scan so the golden section starts near the global minimum.
    const int n = 256;
    double best_s = p.s_lo, best_d = dist2(p.s_lo);
    for (int i = 1; i <= n; ++i) {
        const double s = p.s_lo + (p.s_hi - p.s_lo) * i / n;
        const double d = dist2(s);
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    const double half = (p.s_hi - p.s_lo) / n;
    const double lo = std::max(p.s_lo, best_s - half);
    const double hi = std::min(p.s_hi, best_s + half);
    const double s = num::golden_min(dist2, lo, hi, 1e-12);
    ClosestFrame f;
    f.r_c = p.point(s);
    f.rho = (r - f.r_c).norm();
    f.zeta = wrap_pi(p.tangent_angle(s));
    f.kappa = p.curvature(s);
    f.lambda = f.kappa > 0.0 ? f.rho + 1.0 / f.kappa : kInfLambda;
    return f;
}

}  // namespace

ClosestFrame closest_frame(const CurveModel& curve, const Vec2& r) {
    return std::visit(
        [&](const auto& shape) -> ClosestFrame {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, CircleCurve>) return frame_on_circle(shape, r);
            else if constexpr (std::is_same_v<T, LineCurve>) return frame_on_line(shape, r);
            else return frame_on_parametric(shape, r);
        },
        curve.shape);
}

double bearing_theta(const Vec2& q_dir, const ClosestFrame& frame) {
    const Vec2 t = frame.tangent();
    return std::atan2(t.cross(q_dir), t.dot(q_dir));
}

double estimate_curvature(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    const Vec2 a = p2 - p1, b = p3 - p1, c = p3 - p2;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    if (la < 1e-15 || lb < 1e-15 || lc < 1e-15)
        throw DegeneratePoints("curvature estimate needs pairwise distinct points");
    // Signed Menger curvature: 1/circumradius with the orientation sign.
    return 2.0 * a.cross(b) / (la * lb * lc);
}

double advance_zeta(const ClosestFrame& frame, double q, double theta, double f) {
    if (!(frame.kappa > 0.0)) return 0.0;
    const double s = q * std::cos(theta) / (frame.lambda + f);
    if (std::abs(s) > 1.0 + 1e-12)
        throw InfeasibleGeometry("sine-law argument above 1; stance leaves the tangent frame");
    return std::asin(std::clamp(s, -1.0, 1.0));
}

}  // namespace lls
