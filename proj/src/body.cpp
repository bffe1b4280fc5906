#include "lls/body.hpp"

#include <cmath>

#include "lls/errors.hpp"

namespace lls {

BodyState posture_targets(const BodyState& body, double heading, const PostureGains& gains,
                          double alpha, double sweep, Side side) {
    const double heading_next = heading_update(heading, alpha, sweep, side);
    const double rel = body.sigma - heading;
    BodyState target;
    if (side == Side::Right) {
        // Map toward (-C1, -C2) at rates (1-K4), (1-K5).
        target.sigma = heading_next - gains.C1 + (1.0 - gains.K4) * (rel - gains.C1);
        target.p_sigma = -gains.C2 + (1.0 - gains.K5) * (body.p_sigma - gains.C2);
    } else {
        target.sigma = heading_next + gains.C1 + (1.0 - gains.K4) * (rel + gains.C1);
        target.p_sigma = gains.C2 + (1.0 - gains.K5) * (body.p_sigma + gains.C2);
    }
    return target;
}

TorqueCoeffs torque_coeffs(const BodyState& body, const BodyState& target, double T, double I) {
    if (!(T > 0.0)) throw Error("stance duration must be positive");
    const double ds = target.sigma - body.sigma;
    const double T2 = T * T, T3 = T2 * T;
    TorqueCoeffs c;
    c.A1 = 24.0 * I * I * ds / T3 - 12.0 * I * (target.p_sigma + body.p_sigma) / T2;
    c.A2 = 12.0 * I * ds / T2 - 4.0 * target.p_sigma / T - 8.0 * body.p_sigma / T;
    return c;
}

double torque(double t, const TorqueCoeffs& c, double I, double T) {
    if (t < 0.0 || t > T) throw OutOfWindow("torque queried outside the stance window");
    return 0.5 * (c.A2 - c.A1 * t / I);
}

BodyState integrate_body(const BodyState& body, const TorqueCoeffs& c, double T, double I) {
    BodyState out;
    out.p_sigma = body.p_sigma + 0.5 * c.A2 * T - 0.25 * c.A1 * T * T / I;
    out.sigma = body.sigma + body.p_sigma * T / I + c.A2 * T * T / (4.0 * I) -
                c.A1 * T * T * T / (12.0 * I * I);
    return out;
}

double control_cost(const TorqueCoeffs& c, double T, double I) {
    // Integral of ((A2 - A1 t / I)/2)^2 over [0, T].
    const double T2 = T * T, T3 = T2 * T;
    return 0.25 * (c.A2 * c.A2 * T - c.A2 * c.A1 * T2 / I + c.A1 * c.A1 * T3 / (3.0 * I * I));
}

}  // namespace lls
