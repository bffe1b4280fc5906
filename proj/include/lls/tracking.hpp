#pragma once

#include <array>
#include <cstddef>

#include "lls/vec2.hpp"

namespace lls {

struct TrackingGains {
    double K = 0.5;        // nominal gain, 0 < K < 2
    double rho_c = 0.0;    // desired distance to the curve (m)
    bool adaptive = true;  // clamp the gain when the error is large
};

/// Per-stance discrete tracking state.
struct TrackingState {
    double rho = 0.0;     // distance to the curve (m)
    double lambda = 0.0;  // rho + 1/kappa (m), +inf for lines
    double theta = 0.0;   // steering angle (rad)
    double f = 0.0;       // commanded distance change (m)
    double step = 0.0;    // chord length q (m)
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Closed intervals of distance-change commands f for which a steering angle
/// exists: [-(2*lambda+q), min(-q, q-2*lambda)] u [max(-q, q-2*lambda), q].
/// For lambda = inf the single interval [-q, q].
struct FeasibleIntervals {
    std::array<Interval, 2> parts{};
    std::size_t count = 0;
    bool contains(double f) const {
        for (std::size_t i = 0; i < count; ++i)
            if (parts[i].contains(f)) return true;
        return false;
    }
};

FeasibleIntervals feasible_f_intervals(double q, double lambda);

/// Gain selection with the large-error clamp. Returns K_nominal when
/// |rho_err| < min(q, 2*lambda-q)/2, otherwise
/// min(K_nominal, c*q/|rho_err|, c*(2*lambda-q)/|rho_err|) with c = 0.99.
/// Throws StepTooLarge when q >= 2*lambda.
double select_gain(double rho_err, double q, double lambda, double K_nominal);

/// Steering angle from sin(theta) = (-f^2 - 2*lambda*f + q^2) / (2*lambda*q);
/// for lambda = inf the straight-line limit sin(theta) = -f/q. Result in
/// [-pi/2, pi/2]. Arguments exceeding |sin| = 1 by more than 1e-12 throw
/// NoSolution; smaller excesses are clamped.
double solve_theta(double f, double q, double lambda);

/// Distance recursion: rho' = sqrt(L^2 - 2*L*q*sin(theta) + q^2) - 1/kappa
/// with L = rho + 1/kappa; for kappa = 0, rho' = rho - q*sin(theta).
double step_distance_update(double rho, double theta, double q, double kappa);

/// Lab-frame chord direction for a steering angle theta measured CCW from the
/// tangent angle zeta.
double delta_from_theta(double zeta, double theta);

struct SimplifiedStep {
    double rho_err_next = 0.0;  // rho_{i+1} - rho_c
    bool assumption_ok = true;  // q < lambda * ratio_limit
};

/// Small-step model: rho' - rho_c = (rho - rho_c) + q^2/(2*lambda) - q*sin(theta).
/// assumption_ok reflects q < lambda * ratio_limit (default 1/10); the value is
/// computed either way.
SimplifiedStep simplified_update(double rho, double theta, double q, double lambda, double rho_c,
                                 double ratio_limit = 0.1);

}  // namespace lls
