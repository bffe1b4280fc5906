#include "doctest.h"

#include <cmath>

#include "lls/body.hpp"
#include "lls/errors.hpp"
#include "lls/validation.hpp"

using namespace lls;

namespace {
constexpr double kI = 2.0e-7;
}

TEST_CASE("deadbeat gains land on the alternating gait in one stance") {
    PostureGains g;
    g.C1 = 0.25;
    g.C2 = 3e-6;
    g.K4 = 1.0;
    g.K5 = 1.0;
    const BodyState body{2.0, 1e-6};
    const double heading = 0.3, alpha = 0.7, sweep = 0.95;
    const BodyState t = posture_targets(body, heading, g, alpha, sweep, Side::Right);
    const double heading_next = heading_update(heading, alpha, sweep, Side::Right);
    CHECK(t.sigma - heading_next == doctest::Approx(-g.C1).epsilon(1e-14));
    CHECK(t.p_sigma == doctest::Approx(-g.C2).epsilon(1e-14));
}

TEST_CASE("a converged right-stance state maps to the mirrored pair") {
    PostureGains g;
    g.C1 = 0.4;
    g.C2 = 2e-6;
    g.K4 = 0.37;
    g.K5 = 0.81;
    const double heading = -0.6, alpha = 0.55, sweep = 0.9;
    const BodyState body{heading + g.C1, g.C2};
    const BodyState t = posture_targets(body, heading, g, alpha, sweep, Side::Right);
    const double heading_next = heading_update(heading, alpha, sweep, Side::Right);
    CHECK(t.sigma - heading_next == doctest::Approx(-g.C1).epsilon(1e-13));
    CHECK(t.p_sigma == doctest::Approx(-g.C2).epsilon(1e-13));
}

TEST_CASE("right-stance recursion identity with the heading update substituted") {
    PostureGains g;
    g.C1 = 0.15;
    g.C2 = 5e-6;
    g.K4 = 0.45;
    g.K5 = 0.3;
    const BodyState body{1.3, -4e-6};
    const double heading = 0.9, alpha = 0.62, sweep = 0.88;
    const BodyState t = posture_targets(body, heading, g, alpha, sweep, Side::Right);
    const double heading_next = heading_update(heading, alpha, sweep, Side::Right);
    CHECK((t.sigma - heading_next) + g.C1 ==
          doctest::Approx((1 - g.K4) * (body.sigma - heading - g.C1)).epsilon(1e-13));
    CHECK(t.p_sigma + g.C2 == doctest::Approx((1 - g.K5) * (body.p_sigma - g.C2)).epsilon(1e-13));
}

TEST_CASE("torque coefficients at rest are zero") {
    const BodyState a{0.7, 0.0};
    const TorqueCoeffs c = torque_coeffs(a, a, 0.08, kI);
    CHECK(c.A1 == doctest::Approx(0.0));
    CHECK(c.A2 == doctest::Approx(0.0));
    CHECK(control_cost(c, 0.08, kI) == doctest::Approx(0.0));
}

TEST_CASE("torque coefficients for a pure rotation") {
    const double T = 0.1;
    const BodyState a{0.0, 0.0}, b{1.0, 0.0};
    const TorqueCoeffs c = torque_coeffs(a, b, T, kI);
    CHECK(c.A1 == doctest::Approx(24.0 * kI * kI / (T * T * T)));
    CHECK(c.A2 == doctest::Approx(12.0 * kI / (T * T)));
}

TEST_CASE("torque profile") {
    const TorqueCoeffs c{0.0, 6e-6};
    CHECK(torque(0.0, c, kI, 0.1) == doctest::Approx(3e-6));
    CHECK(torque(0.1, c, kI, 0.1) == doctest::Approx(3e-6));  // constant when A1 = 0
    CHECK_THROWS_AS((void)torque(0.2, c, kI, 0.1), OutOfWindow);
    CHECK_THROWS_AS((void)torque(-0.01, c, kI, 0.1), OutOfWindow);

    // Antisymmetric about T/2 when A2 = A1 T / (2 I).
    const double T = 0.08, A1 = 4e-5;
    const TorqueCoeffs ca{A1, A1 * T / (2 * kI)};
    for (const double x : {0.01, 0.02, 0.03}) {
        CHECK(torque(T / 2 + x, ca, kI, T) ==
              doctest::Approx(-torque(T / 2 - x, ca, kI, T)).epsilon(1e-12));
    }
}

TEST_CASE("free rotation and rest under zero torque") {
    const TorqueCoeffs zero{0.0, 0.0};
    const BodyState spin{0.2, 3e-6};
    const BodyState out = integrate_body(spin, zero, 0.05, kI);
    CHECK(out.sigma == doctest::Approx(0.2 + 3e-6 * 0.05 / kI));
    CHECK(out.p_sigma == doctest::Approx(3e-6));

    const BodyState rest{0.2, 0.0};
    const BodyState still = integrate_body(rest, zero, 0.05, kI);
    CHECK(still.sigma == doctest::Approx(0.2));
}

TEST_CASE("constant torque costs c^2 T") {
    const double cval = 5e-6, T = 0.12;
    const TorqueCoeffs c{0.0, 2 * cval};
    CHECK(control_cost(c, T, kI) == doctest::Approx(cval * cval * T).epsilon(1e-14));
}

TEST_CASE("posture suite: landing, numeric oracle, optimality, convergence") {
    const auto res = lls::validation::body_suite(25, 808);
    for (const auto& c : res.checks) {
        INFO(c.name, " measured=", c.measured, " limit=", c.limit);
        CHECK(c.pass);
    }
}

TEST_CASE("posture recursions converge geometrically to the alternating gait") {
    PostureGains g;
    g.C1 = 0.2;
    g.C2 = 4e-6;
    g.K4 = 0.5;
    g.K5 = 0.25;
    double heading = 0.0;
    BodyState body{heading + g.C1 + 0.8, g.C2 + 6e-6};
    const double alpha = 0.6, sweep = 0.92;
    Side side = Side::Right;
    double rel_err = 0.8, p_err = 6e-6;
    for (int k = 0; k < 30; ++k) {
        const BodyState t = posture_targets(body, heading, g, alpha, sweep, side);
        heading = heading_update(heading, alpha, sweep, side);
        const double sgn = (side == Side::Right) ? -1.0 : 1.0;
        const double new_rel = (t.sigma - heading) - sgn * g.C1;
        const double new_p = t.p_sigma - sgn * g.C2;
        CHECK(std::abs(new_rel) == doctest::Approx((1 - g.K4) * rel_err).epsilon(1e-11));
        CHECK(std::abs(new_p) == doctest::Approx((1 - g.K5) * p_err).epsilon(1e-11));
        rel_err = std::abs(new_rel);
        p_err = std::abs(new_p);
        body = t;
        side = other(side);
    }
    CHECK(rel_err < 1e-9);
}
