#pragma once

#include <string>
#include <vector>

#include "lls/body.hpp"
#include "lls/geometry.hpp"
#include "lls/leg_solver.hpp"
#include "lls/stance.hpp"
#include "lls/tracking.hpp"

namespace lls {

enum class Strategy { Inverse, Approx, ConstantQ };

struct ScenarioConfig {
    CurveModel curve;
    LegParams legs;

    Vec2 start;
    double speed = 0.2;
    double heading = 0.0;
    Side first_side = Side::Right;
    BodyState body0;

    TrackingGains tracking;
    PostureGains posture;

    Strategy strategy = Strategy::ConstantQ;
    double q_target = 0.0;  // chord held per stance (m)
    double eta_td = 0.0;    // 0 => legs.eta0

    int stance_budget = 60;
    double convergence_tol = 0.0;  // 0 => max(neighborhood bound, 1e-4 m)
    int convergence_consecutive = 3;
    bool stop_on_convergence = true;

    IntegrateOptions integrate;
    bool body_shadow = true;  // body channel recorded but never feeds back

    void validate() const;  // throws ConfigError
};

/// One row per stance.
struct TraceRecord {
    int stance = 0;
    double time = 0.0;  // at touchdown (s)
    Side side = Side::Right;
    Vec2 com;   // COM at touchdown (m)
    Vec2 foot;  // leg contact point (m)
    double heading = 0.0;  // velocity direction at touchdown (rad, unwrapped)
    double rho = 0.0;
    double theta = 0.0;      // achieved, measured from the integrated chord
    double theta_des = 0.0;  // desired
    double alpha = 0.0;
    double b = 0.0;
    double q = 0.0;  // measured chord length
    double sweep = 0.0;
    double duration = 0.0;
    double sigma = 0.0;
    double p_sigma = 0.0;
    double tau0 = 0.0;  // torque at stance start (N m)
    bool fallback = false;
    bool clamp_hit = false;
    double K = 0.0;
    double K_tilde = 0.0;
    double M_tilde = 0.0;
    double energy_drift = 0.0;
    double theta_residual = 0.0;  // inter-stance difference relation, vs previous stance
    double gamma = 0.0;           // measured tangent advance to the next stance
};

/// One sampled point of the continuous motion, present when trajectory
/// recording is enabled.
struct TrajectoryRow {
    int stance = 0;
    double t = 0.0;    // absolute simulated time (s)
    double eta = 0.0;  // leg length (m)
    double psi = 0.0;  // polar angle about the foot (rad)
    Vec2 com;          // COM position (m)
    double tau = 0.0;  // body torque at this instant (N m); 0 with the channel off
};

struct RunResult {
    std::vector<TraceRecord> trace;
    std::vector<TrajectoryRow> trajectory;  // empty unless sampling enabled
    bool converged = false;
    int stances_to_converge = -1;     // 1-based stance count at convergence
    double time_to_converge = 0.0;    // simulated seconds at convergence
    double total_time = 0.0;          // simulated seconds over the whole run
    double M_sup = 0.0;               // running supremum of M_tilde
    double bound = 0.0;               // neighborhood bound at the final M_sup
    ComState final_state;
    BodyState final_body;
};

struct Metrics {
    int stances_to_converge = -1;
    double final_error = 0.0;
    double max_energy_drift = 0.0;
    double max_theta_residual = 0.0;
    double steady_error = 0.0;  // max |rho - rho_c| over the trailing window
    double bound = 0.0;
    bool bound_check = false;
    bool speed_constant = false;
};

/// Run the hybrid loop: per stance, sense the curve, steer, synthesize the leg
/// plan, integrate the stance and the body channel, and record a trace.
RunResult run_scenario(const ScenarioConfig& config);

Metrics metrics(const RunResult& run, const ScenarioConfig& config);

struct SweepRow {
    double alpha = 0.0;
    double q = 0.0;       // chord at fixed b (m)
    double b = 0.0;       // spring coefficient holding q_target (N/m); NaN if unachievable
    double chord_x = 0.0; // chord vector in the velocity frame (m)
    double chord_y = 0.0;
};

/// Chord-versus-alpha and spring-versus-alpha tables for plotting.
std::vector<SweepRow> sweep_tables(const LegParams& params, const std::vector<double>& alpha_grid,
                                   double b_fixed, double q_hold, double v);

/// Delimited-text writers. Column headers carry units.
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows);
void write_summary_json(const std::string& path, const RunResult& run, const Metrics& m,
                        const ScenarioConfig& config);

}  // namespace lls
