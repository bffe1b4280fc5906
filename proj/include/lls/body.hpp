#pragma once

#include "lls/stance.hpp"

namespace lls {

/// Rigid-body channel state at stance boundaries. sigma is kept unwrapped so
/// that orientation differences are true rotations.
struct BodyState {
    double sigma = 0.0;    // body orientation (rad, lab frame)
    double p_sigma = 0.0;  // angular momentum (kg m^2 / s)
};

struct PostureGains {
    double C1 = 0.0;  // target relative angle (rad)
    double C2 = 0.0;  // target momentum magnitude (kg m^2 / s)
    double K4 = 0.5;  // orientation gain, (0, 1]
    double K5 = 0.5;  // momentum gain, (0, 1]
};

/// End-of-stance target that drives (sigma - heading, p_sigma) to the
/// alternating gait (+-C1, +-C2). Right stances map toward (-C1, -C2), left
/// stances toward (+C1, +C2), each at geometric rates (1-K4), (1-K5).
BodyState posture_targets(const BodyState& body, double heading, const PostureGains& gains,
                          double alpha, double sweep, Side side);

struct TorqueCoeffs {
    double A1 = 0.0;
    double A2 = 0.0;
};

/// Coefficients of the minimum-effort torque connecting two body states over a
/// stance of duration T:
///   A1 = 24 I^2 (s1-s0)/T^3 - 12 I (p1+p0)/T^2
///   A2 = 12 I (s1-s0)/T^2 - 4 p1/T - 8 p0/T
TorqueCoeffs torque_coeffs(const BodyState& body, const BodyState& target, double T, double I);

/// Affine torque tau(t) = (A2 - A1 t / I) / 2 for t in [0, T].
/// Throws OutOfWindow outside the stance window.
double torque(double t, const TorqueCoeffs& c, double I, double T);

/// Closed-form propagation of the body under the affine torque:
///   p(T) = p0 + A2 T/2 - A1 T^2/(4I)
///   sigma(T) = sigma0 + p0 T/I + A2 T^2/(4I) - A1 T^3/(12 I^2)
BodyState integrate_body(const BodyState& body, const TorqueCoeffs& c, double T, double I);

/// Control effort integral of tau^2 over the stance.
double control_cost(const TorqueCoeffs& c, double T, double I);

}  // namespace lls
