#include "doctest.h"

#include <cmath>
#include <random>

#include "lls/errors.hpp"
#include "lls/tracking.hpp"
#include "lls/validation.hpp"

using namespace lls;

TEST_CASE("feasibility intervals for a curved frame") {
    const FeasibleIntervals iv = feasible_f_intervals(0.01, 0.05);
    REQUIRE(iv.count == 2);
    CHECK(iv.parts[0].lo == doctest::Approx(-0.11));
    CHECK(iv.parts[0].hi == doctest::Approx(-0.09));
    CHECK(iv.parts[1].lo == doctest::Approx(-0.01));
    CHECK(iv.parts[1].hi == doctest::Approx(0.01));
}

TEST_CASE("feasibility intervals for a straight line") {
    const FeasibleIntervals iv = feasible_f_intervals(0.01, kInfLambda);
    REQUIRE(iv.count == 1);
    CHECK(iv.parts[0].lo == doctest::Approx(-0.01));
    CHECK(iv.parts[0].hi == doctest::Approx(0.01));
}

TEST_CASE("f = q is always feasible and steers fully away") {
    const double q = 0.013, lambda = 0.07;
    CHECK(feasible_f_intervals(q, lambda).contains(q));
    CHECK(solve_theta(q, q, lambda) == doctest::Approx(-kPi / 2));
}

TEST_CASE("gain selection") {
    CHECK(select_gain(0.0, 0.01, 0.05, 0.5) == 0.5);
    // Large error on a straight line clamps to 0.99 q / |err|.
    CHECK(select_gain(0.05, 0.01, kInfLambda, 0.5) == doctest::Approx(0.198));
    CHECK_THROWS_AS((void)select_gain(0.01, 0.2, 0.05, 0.5), StepTooLarge);
}

TEST_CASE("clamped gain always lands inside the feasible set") {
    std::mt19937_64 rng(301);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double q = 0.001 + 0.05 * u(rng);
        const double lambda = q * (0.51 + 20.0 * u(rng));
        const double err = (u(rng) - 0.3) * 0.5;
        const double K = select_gain(err, q, lambda, 0.3 + 1.6 * u(rng));
        const double f = -K * err;
        CHECK(feasible_f_intervals(q, lambda).contains(f));
        CHECK_NOTHROW((void)solve_theta(f, q, lambda));
    }
}

TEST_CASE("steering solution examples") {
    // Parallel running: f = 0.
    CHECK(solve_theta(0.0, 0.01, 0.05) == doctest::Approx(std::asin(0.1)).epsilon(1e-14));
    // Straight line: sin(theta) = -f/q.
    CHECK(solve_theta(-0.005, 0.01, kInfLambda) == doctest::Approx(kPi / 6).epsilon(1e-14));
    // Full expression.
    const double f = -0.004, q = 0.01, lambda = 0.05;
    const double s = (-f * f - 2 * lambda * f + q * q) / (2 * lambda * q);
    CHECK(s == doctest::Approx(0.484));
    CHECK(solve_theta(f, q, lambda) == doctest::Approx(std::asin(s)));
    CHECK_THROWS_AS((void)solve_theta(-0.02, 0.01, 0.05), NoSolution);
}

TEST_CASE("distance recursion examples") {
    // Parallel-running fixed point.
    const double q = 0.01, lambda = 0.05, kappa = 1.0 / (lambda - 0.02);
    const double rho = lambda - 1.0 / kappa;
    const double theta = std::asin(q / (2 * lambda));
    CHECK(step_distance_update(rho, theta, q, kappa) == doctest::Approx(rho).epsilon(1e-14));
    // Straight line, head-on.
    CHECK(step_distance_update(0.5, kPi / 2, 0.01, 0.0) == doctest::Approx(0.49));
}

TEST_CASE("exact-law identity: commanded distance change is realized") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 3000; ++i) {
        const double q = 0.001 + 0.05 * u(rng);
        const double rho = 0.001 + 0.3 * u(rng);
        const bool line = u(rng) < 0.2;
        const double kappa = line ? 0.0 : 1.0 / (0.01 + 0.5 * u(rng));
        const double lambda = line ? kInfLambda : rho + 1.0 / kappa;
        const FeasibleIntervals iv = feasible_f_intervals(q, lambda);
        // Sample from the upper interval, which keeps rho + f >= 0.
        const Interval& part = iv.parts[iv.count - 1];
        double f = part.lo + (part.hi - part.lo) * u(rng);
        if (rho + f < 0.0) f = -0.9 * rho;
        const double theta = solve_theta(f, q, lambda);
        const double next = step_distance_update(rho, theta, q, kappa);
        CHECK(std::abs(next - rho - f) < 1e-12);
    }
}

TEST_CASE("composition: solving for f then stepping lands at rho + f") {
    const double rho = 0.08, kappa = 50.0, q = 0.0153;
    const double f = -0.01;  // inside the feasible set for lambda = 0.1
    const double theta = solve_theta(f, q, rho + 1.0 / kappa);
    CHECK(step_distance_update(rho, theta, q, kappa) == doctest::Approx(0.07).epsilon(1e-12));
}

TEST_CASE("chord direction from tangent and steering angles") {
    CHECK(delta_from_theta(0.7, 0.0) == doctest::Approx(0.7));
    CHECK(delta_from_theta(0.0, kPi / 4) == doctest::Approx(kPi / 4));
    CHECK(delta_from_theta(kPi, kPi) == doctest::Approx(0.0));
    // Reference-scenario start: tangent pi/2, bearing -pi/6, chord along the
    // initial heading pi/3.
    CHECK(delta_from_theta(kPi / 2, -kPi / 6) == doctest::Approx(kPi / 3));
}

TEST_CASE("geometric decay under exact steering") {
    const auto res = lls::validation::tracking_suite(8, 30, 1e-10, 404);
    for (const auto& c : res.checks) {
        INFO(c.name, " measured=", c.measured, " limit=", c.limit);
        CHECK(c.pass);
    }
}

TEST_CASE("existence of the steering solution matches the intervals") {
    const auto res = lls::validation::lemma1_suite(2000, 405);
    CHECK(res.pass());

    // Exact boundary points solve on both routes.
    const double q = 0.012, lambda = 0.055;
    for (const double f : {q, -q, q - 2 * lambda, -(2 * lambda + q)}) {
        CHECK(feasible_f_intervals(q, lambda).contains(f));
        CHECK_NOTHROW((void)solve_theta(f, q, lambda));
    }
    CHECK_THROWS_AS((void)solve_theta(q * 1.0001, q, lambda), NoSolution);
    CHECK(!feasible_f_intervals(q, lambda).contains(q * 1.0001));
}

TEST_CASE("small-step model error stays within q^2/lambda") {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const double scale : {0.1, 1.0, 10.0}) {
        double worst_ratio = 0.0;
        for (int i = 0; i < 500; ++i) {
            const double lambda = scale * (0.2 + 0.8 * u(rng));
            const double q = lambda * 0.1 * u(rng);
            if (q <= 0.0) continue;
            const double kappa = 1.0 / (lambda * (0.3 + 0.6 * u(rng)));
            const double rho = lambda - 1.0 / kappa;
            if (rho <= 0.0) continue;
            const double theta = (u(rng) - 0.5) * kPi * 0.9;
            const double rho_c = 0.1 * scale;
            const SimplifiedStep s = simplified_update(rho, theta, q, lambda, rho_c);
            const double exact = step_distance_update(rho, theta, q, kappa) - rho_c;
            worst_ratio = std::max(worst_ratio, std::abs(s.rho_err_next - exact) / (q * q / lambda));
        }
        // The dropped term is q^2 sin^2(theta) / (2 lambda) at leading order.
        CHECK(worst_ratio < 0.56);
    }
}

TEST_CASE("small-step model flags its assumption and handles lines") {
    const SimplifiedStep warn = simplified_update(0.1, 0.2, 0.05, 0.2, 0.0);
    CHECK_FALSE(warn.assumption_ok);
    const SimplifiedStep line = simplified_update(0.1, 0.3, 0.01, kInfLambda, 0.02);
    CHECK(line.assumption_ok);
    CHECK(line.rho_err_next ==
          doctest::Approx(0.1 - 0.02 - 0.01 * std::sin(0.3)).epsilon(1e-14));
    // Parallel fixed point: theta = asin(q / 2 lambda) leaves the error unchanged.
    const double q = 0.004, lambda = 0.09, rho = 0.05, rho_c = 0.03;
    const SimplifiedStep fix = simplified_update(rho, std::asin(q / (2 * lambda)), q, lambda, rho_c);
    CHECK(fix.rho_err_next == doctest::Approx(rho - rho_c).epsilon(1e-14));
}
