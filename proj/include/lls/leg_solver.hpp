#pragma once

#include <optional>

#include "lls/geometry.hpp"
#include "lls/stance.hpp"
#include "lls/tracking.hpp"

namespace lls {

/// Reachable chord directions at fixed chord length, with the sub-cones used
/// when turning along a curve of positive curvature.
struct Cone {
    double v_ref = 0.0;  // entry velocity direction (rad)
    Side side = Side::Right;
    double alpha_lo = 0.0, alpha_hi = 0.0;  // full cone in alpha
    double q = 0.0;                         // chord length (m)
    double gamma = 0.0;                     // sub-cone offset (rad)
    double sub_a_lo = 0.0, sub_a_hi = 0.0;  // C^A = [alpha_min, alpha_max - gamma]
    double sub_b_lo = 0.0, sub_b_hi = 0.0;  // C^B = [alpha_min + gamma, alpha_max]

    /// Chord direction produced by a given alpha (constant-q sweep).
    double edge_direction(double alpha, double sweep) const {
        return v_ref + side_sign(side) * (kPi / 2 - alpha - sweep / 2);
    }
};

struct ApproxGains {
    double K = 0.0;        // distance-loop gain actually applied
    double K_tilde = 0.0;  // backstepping gain
    double M_tilde = 0.0;  // achieved |sin(theta) - sin(theta_des)| residual
    double M_sup = 0.0;    // running supremum of M_tilde (maintained by caller)
};

/// Chord length as a function of leg placement angle at fixed spring
/// coefficient.
double q_of_alpha(double alpha, double eta_td, double b, double v, double m);

/// Spring coefficient that realizes a target chord at a given alpha.
/// Bisection to 1e-12 relative. Throws Unachievable when no b > 0 attains the
/// target (the b->0 supremum of the chord is 2*eta_td*cos(alpha)).
double b_for_q(double alpha, double q_target, double eta_td, double v, double m);

/// Context for per-stance plan synthesis.
struct SolveContext {
    double rel_angle = 0.0;  // zeta - heading at touchdown, wrapped (rad)
    Side side = Side::Right;
    double v = 0.0;  // entry speed (m/s)
    LegParams params;
    double eta_td = 0.0;
};

/// Exact per-stance synthesis: choose alpha so the stance realizes the desired
/// steering angle at the target chord, with b adjusted to hold the chord.
/// Throws NoConstrainedSolution when the required alpha leaves the bounds.
StancePlan inverse_solve(double theta_target, double q_target, const SolveContext& ctx);

/// Lower bound on the tracking radius lambda imposed by the alpha interval:
/// q / (2*sin((alpha_max - alpha_min)/2)).
double min_turn_radius(double q, double alpha_min, double alpha_max);

/// Cone of reachable chord directions and its sub-cones for turning.
/// Throws ConeEmpty when gamma >= alpha_max - alpha_min.
Cone build_cones(double heading, Side side, const LegParams& params, double q, double lambda);

/// Steering angle realized by a given alpha under the constant-q strategy,
/// mapped to [-pi/2, pi/2]. `clamped` is set when the mapping saturates.
double constant_q_theta(double alpha, double rel_angle, Side side, double sweep,
                        bool* clamped = nullptr);

struct AlphaSearchResult {
    double alpha = 0.0;
    double sin_residual = 0.0;  // sin(theta(alpha)) - sin_theta_des, signed
    bool exact = false;
    bool clamp_hit = false;  // the (-pi/2, pi/2) mapping saturated somewhere
};

/// Minimize |sin(theta(alpha)) - sin_theta_des| over [alpha_min, alpha_max].
/// Seeded multi-start with golden-section refinement; ties are broken toward
/// the mid-line of the sub-cone matching the stance side.
AlphaSearchResult approx_alpha_search(double sin_theta_des, const SolveContext& ctx, double q,
                                      double gamma);

struct ApproxStep {
    StancePlan plan;
    ApproxGains gains;
    double theta_des = 0.0;       // desired steering angle (rad)
    double theta_planned = 0.0;   // achievable steering angle at the chosen alpha
    double rho_target_next = 0.0; // (1-K)*(rho - rho_c), carried to the next stance
    bool fallback = false;        // constrained; exact solution not available
    bool clamp_hit = false;
};

/// Feedback synthesis that always returns a plan: realize the desired steering
/// exactly when possible, otherwise take the constrained minimizer of the
/// sin-residual and record the backstepping gain.
ApproxStep approx_step(double rho, double rho_target_prev, const ClosestFrame& frame,
                       const ComState& state, const LegParams& params, const TrackingGains& gains,
                       double q_target, double eta_td);

/// Steady-state distance-error bound M_sup * q / (1 - |1 - K|).
double neighborhood_bound(double M_sup, double q, double K);

}  // namespace lls
