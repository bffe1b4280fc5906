#pragma once

#include <optional>
#include <vector>

#include "lls/vec2.hpp"

namespace lls {

enum class Side { Right, Left };

inline Side other(Side s) { return s == Side::Right ? Side::Left : Side::Right; }
inline double side_sign(Side s) { return s == Side::Right ? 1.0 : -1.0; }

/// Physical constants of the runner.
struct LegParams {
    double mass = 2.5e-3;       // kg
    double inertia = 2.0e-7;    // kg m^2
    double eta0 = 0.017;        // rest leg length (m)
    double alpha_min = kPi / 6; // leg placement bounds (rad)
    double alpha_max = kPi / 3;

    void validate() const;  // throws ConfigError on bad values
};

/// Per-stance control decision plus derived kinematic quantities.
struct StancePlan {
    Side side = Side::Right;
    double alpha = 0.0;     // leg placement angle (rad)
    double b = 0.0;         // spring coefficient (N/m)
    double eta_td = 0.0;    // leg length at touchdown (m)
    double sweep = 0.0;     // angle swept about the foot (rad)
    double chord = 0.0;     // COM displacement 2*eta_td*sin(sweep/2) (m)
    double duration = 0.0;  // stance time (s)
};

/// COM state at a touchdown event.
struct ComState {
    Vec2 r;                        // position (m)
    double v = 0.0;                // speed (m/s)
    double heading = 0.0;          // velocity direction (rad), kept unwrapped
    Side side_next = Side::Right;  // leg that touches down next
};

struct TrajectorySample {
    double t;    // s since touchdown
    double eta;  // leg length (m)
    double psi;  // polar angle of the COM about the foot (rad)
};

struct StanceOutcome {
    ComState next;
    Vec2 q_vec;                        // chord displacement (m)
    Vec2 foot;                         // touchdown point of the leg (m)
    double theta_achieved = 0.0;       // filled by the harness (rad)
    double energy_drift = 0.0;         // max relative energy error
    double measured_exit_speed = 0.0;  // from the integrated final state (m/s)
    double measured_duration = 0.0;    // event-detected stance time (s)
    double measured_sweep = 0.0;       // |psi_end - psi_0| from the integrated path (rad)
    std::vector<TrajectorySample> trajectory;  // empty unless sampling requested
};

struct IntegrateOptions {
    double rel_tol = 1e-12;
    std::size_t max_steps = 2'000'000;
    bool record_trajectory = false;  // sample (t, eta, psi) at every accepted step
};

/// Spring potential V = b*(eta - eta_td)^2. Note the absence of the usual 1/2
/// factor; the parameter sweeps in this model are calibrated to this form.
double potential(double eta, double b, double eta_td);

/// Largest root below eta_td of 2E - p_psi^2/(m eta^2) - 2V(eta) = 0, the
/// turning point of the radial motion. Bisected to 1e-12 m.
/// Throws NoCompression when no root exists in (0, eta_td).
double eta_min(double E, double p_psi, double b, double eta_td, double m);

/// Sweep angle of one stance by quadrature of the reduced radial problem, with
/// the turning-point singularity removed by the substitution eta = eta_min + u^2.
double sweep_angle(double alpha, double eta_td, double b, double v, double m);

/// Stance duration by the same quadrature.
double stance_duration(double alpha, double eta_td, double b, double v, double m);

/// Chord length q = 2*eta_td*sin(sweep/2).
double chord_length(double eta_td, double sweep);

/// Heading after one stance: +/- (pi - sweep - 2*alpha) for right/left stances.
double heading_update(double heading, double alpha, double sweep, Side side);

/// Integrate the polar-coordinate stance dynamics (eta, psi, p_eta) with the
/// angular momentum held at its conserved value, from touchdown until the leg
/// returns to eta_td. Throws IntegrationDiverged / MaxStepExceeded.
StanceOutcome integrate_stance(const ComState& state, const StancePlan& plan,
                               const LegParams& params, const IntegrateOptions& opts = {});

/// Residual of the inter-stance steering-angle difference relation; zero (up
/// to integration error) for any pair of consecutive stances.
/// `side_first` is the side of stance k; gamma_k is the tangent-angle advance
/// over stance k.
double theta_difference_residual(double theta_k, double theta_k1, double alpha_k, double alpha_k1,
                                 double sweep_k, double sweep_k1, double gamma_k, Side side_first);

}  // namespace lls
