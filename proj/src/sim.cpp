#include "lls/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "lls/errors.hpp"

namespace lls {

void ScenarioConfig::validate() const {
    legs.validate();
    if (!(speed > 0.0)) throw ConfigError("speed must be positive");
    if (!(q_target > 0.0)) throw ConfigError("q_target must be positive");
    const double etd = eta_td > 0.0 ? eta_td : legs.eta0;
    if (!(q_target < 2.0 * etd)) throw ConfigError("q_target must be below 2*eta_td");
    if (!(tracking.K > 0.0 && tracking.K < 2.0)) throw ConfigError("tracking K must be in (0, 2)");
    if (!(tracking.rho_c >= 0.0)) throw ConfigError("rho_c must be nonnegative");
    if (!(posture.K4 > 0.0 && posture.K4 <= 1.0 && posture.K5 > 0.0 && posture.K5 <= 1.0))
        throw ConfigError("posture gains must be in (0, 1]");
    if (stance_budget < 1) throw ConfigError("stance budget must be at least 1");
    if (convergence_consecutive < 1) throw ConfigError("convergence window must be at least 1");
}

namespace {

ApproxStep plan_stance(const ScenarioConfig& cfg, const ClosestFrame& frame, const ComState& state,
                       double rho_target_prev, double eta_td, int stance_index) {
    if (cfg.strategy == Strategy::Inverse) {
        const double err = frame.rho - cfg.tracking.rho_c;
        const double K = cfg.tracking.adaptive
                             ? select_gain(err, cfg.q_target, frame.lambda, cfg.tracking.K)
                             : cfg.tracking.K;
        double theta_des;
        try {
            theta_des = solve_theta(-K * err, cfg.q_target, frame.lambda);
        } catch (const NoSolution& e) {
            throw PlanFailure("stance " + std::to_string(stance_index) +
                              ": no steering solution: " + e.what());
        }
        SolveContext ctx;
        ctx.rel_angle = wrap_pi(frame.zeta - state.heading);
        ctx.side = state.side_next;
        ctx.v = state.v;
        ctx.params = cfg.legs;
        ctx.eta_td = eta_td;
        ApproxStep out;
        try {
            out.plan = inverse_solve(theta_des, cfg.q_target, ctx);
        } catch (const NoConstrainedSolution& e) {
            throw PlanFailure("stance " + std::to_string(stance_index) + ": " + e.what());
        }
        out.gains.K = K;
        out.theta_des = theta_des;
        out.theta_planned = theta_des;
        out.rho_target_next = (1.0 - K) * err;
        return out;
    }
    // The constrained feedback law solves the exact placement first and falls
    // back to the sin-residual minimizer, so it covers both remaining modes.
    return approx_step(frame.rho, rho_target_prev, frame, state, cfg.legs, cfg.tracking,
                       cfg.q_target, eta_td);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const double eta_td = cfg.eta_td > 0.0 ? cfg.eta_td : cfg.legs.eta0;

    ComState state{cfg.start, cfg.speed, cfg.heading, cfg.first_side};
    BodyState body = cfg.body0;

    RunResult run;
    run.trace.reserve(cfg.stance_budget);

    ClosestFrame frame = closest_frame(cfg.curve, state.r);
    double rho_target_prev = frame.rho - cfg.tracking.rho_c;  // zero backstepping error at start
    double time = 0.0;
    int consecutive = 0;

    for (int i = 0; i < cfg.stance_budget; ++i) {
        const ApproxStep step = plan_stance(cfg, frame, state, rho_target_prev, eta_td, i);
        const StanceOutcome out = integrate_stance(state, step.plan, cfg.legs, cfg.integrate);

        TraceRecord rec;
        rec.stance = i;
        rec.time = time;
        rec.side = step.plan.side;
        rec.com = state.r;
        rec.foot = out.foot;
        rec.heading = state.heading;
        rec.rho = frame.rho;
        rec.theta = bearing_theta(out.q_vec.unit(), frame);
        rec.theta_des = step.theta_des;
        rec.alpha = step.plan.alpha;
        rec.b = step.plan.b;
        rec.q = out.q_vec.norm();
        rec.sweep = step.plan.sweep;
        rec.duration = step.plan.duration;
        rec.fallback = step.fallback;
        rec.clamp_hit = step.clamp_hit;
        rec.K = step.gains.K;
        rec.K_tilde = step.gains.K_tilde;
        rec.M_tilde = step.gains.M_tilde;
        rec.energy_drift = out.energy_drift;

        run.M_sup = std::max(run.M_sup, step.gains.M_tilde);

        // Body channel: decoupled from the COM, recorded alongside the stance.
        rec.sigma = body.sigma;
        rec.p_sigma = body.p_sigma;
        TorqueCoeffs tc;
        if (cfg.body_shadow) {
            const BodyState target = posture_targets(body, state.heading, cfg.posture,
                                                     step.plan.alpha, step.plan.sweep,
                                                     step.plan.side);
            tc = torque_coeffs(body, target, step.plan.duration, cfg.legs.inertia);
            rec.tau0 = torque(0.0, tc, cfg.legs.inertia, step.plan.duration);
            body = integrate_body(body, tc, step.plan.duration, cfg.legs.inertia);
        }

        if (cfg.integrate.record_trajectory) {
            for (const TrajectorySample& s : out.trajectory) {
                TrajectoryRow row;
                row.stance = i;
                row.t = time + s.t;
                row.eta = s.eta;
                row.psi = s.psi;
                row.com = out.foot + s.eta * Vec2::from_angle(s.psi);
                const double tl = std::clamp(s.t, 0.0, step.plan.duration);
                row.tau = cfg.body_shadow ? torque(tl, tc, cfg.legs.inertia, step.plan.duration)
                                          : 0.0;
                run.trajectory.push_back(row);
            }
        }

        const ClosestFrame frame_next = closest_frame(cfg.curve, out.next.r);
        rec.gamma = wrap_pi(frame_next.zeta - frame.zeta);
        if (!run.trace.empty()) {
            const TraceRecord& prev = run.trace.back();
            rec.theta_residual =
                theta_difference_residual(prev.theta, rec.theta, prev.alpha, rec.alpha, prev.sweep,
                                          rec.sweep, prev.gamma, prev.side);
        }
        run.trace.push_back(rec);

        // Convergence bookkeeping on the touchdown distance.
        double tol = cfg.convergence_tol;
        if (tol <= 0.0) {
            const double bound =
                run.M_sup > 0.0 ? neighborhood_bound(run.M_sup, cfg.q_target, cfg.tracking.K) : 0.0;
            tol = std::max(bound, 1e-4);
        }
        if (std::abs(frame.rho - cfg.tracking.rho_c) <= tol) {
            if (++consecutive >= cfg.convergence_consecutive && !run.converged) {
                run.converged = true;
                run.stances_to_converge = i + 2 - cfg.convergence_consecutive;  // 1-based window start
                run.time_to_converge =
                    run.trace[run.stances_to_converge - 1].time;
            }
        } else {
            consecutive = 0;
        }

        time += step.plan.duration;
        state = out.next;
        frame = frame_next;
        rho_target_prev = step.rho_target_next;

        if (run.converged && cfg.stop_on_convergence) break;
    }

    run.total_time = time;
    run.bound = run.M_sup > 0.0 ? neighborhood_bound(run.M_sup, cfg.q_target, cfg.tracking.K) : 0.0;
    run.final_state = state;
    run.final_body = body;
    return run;
}

Metrics metrics(const RunResult& run, const ScenarioConfig& cfg) {
    Metrics m;
    m.stances_to_converge = run.stances_to_converge;
    const ClosestFrame last = closest_frame(cfg.curve, run.final_state.r);
    m.final_error = std::abs(last.rho - cfg.tracking.rho_c);
    for (const auto& r : run.trace) {
        m.max_energy_drift = std::max(m.max_energy_drift, r.energy_drift);
        m.max_theta_residual = std::max(m.max_theta_residual, std::abs(r.theta_residual));
    }
    const std::size_t n = run.trace.size();
    const std::size_t window = std::min<std::size_t>(50, n / 2 + 1);
    for (std::size_t i = n - window; i < n; ++i)
        m.steady_error =
            std::max(m.steady_error, std::abs(run.trace[i].rho - cfg.tracking.rho_c));
    m.bound = run.bound;
    m.bound_check = m.steady_error <= std::max(m.bound, 1e-4) + 1e-12;
    m.speed_constant = run.final_state.v == cfg.speed;
    return m;
}

std::vector<SweepRow> sweep_tables(const LegParams& params, const std::vector<double>& alpha_grid,
                                   double b_fixed, double q_hold, double v) {
    std::vector<SweepRow> rows;
    rows.reserve(alpha_grid.size());
    for (const double a : alpha_grid) {
        SweepRow row;
        row.alpha = a;
        const double sweep = sweep_angle(a, params.eta0, b_fixed, v, params.mass);
        row.q = chord_length(params.eta0, sweep);
        const double beta = kPi / 2 - a - sweep / 2;  // chord direction in the velocity frame
        row.chord_x = row.q * std::cos(beta);
        row.chord_y = row.q * std::sin(beta);
        try {
            row.b = b_for_q(a, q_hold, params.eta0, v, params.mass);
        } catch (const Unachievable&) {
            row.b = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path);
    f.precision(17);
    f << "stance,time_s,side,com_x_m,com_y_m,foot_x_m,foot_y_m,heading_rad,rho_m,theta_rad,"
         "theta_des_rad,"
         "alpha_rad,b_N_per_m,q_m,sweep_rad,duration_s,sigma_rad,p_sigma_kgm2_per_s,tau0_Nm,"
         "fallback,clamp,K,K_tilde,M_tilde,energy_drift_rel,theta_residual_rad,gamma_rad\n";
    for (const auto& r : trace) {
        f << r.stance << ',' << r.time << ',' << (r.side == Side::Right ? "R" : "L") << ','
          << r.com.x << ',' << r.com.y << ',' << r.foot.x << ',' << r.foot.y << ','
          << r.heading << ',' << r.rho << ','
          << r.theta << ',' << r.theta_des << ',' << r.alpha << ',' << r.b << ',' << r.q << ','
          << r.sweep << ',' << r.duration << ',' << r.sigma << ',' << r.p_sigma << ',' << r.tau0
          << ',' << (r.fallback ? 1 : 0) << ',' << (r.clamp_hit ? 1 : 0) << ',' << r.K << ','
          << r.K_tilde << ',' << r.M_tilde << ',' << r.energy_drift << ',' << r.theta_residual
          << ',' << r.gamma << '\n';
    }
    if (!f) throw IoError("failed writing " + path);
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path);
    f.precision(17);
    f << "stance,time_s,eta_m,psi_rad,com_x_m,com_y_m,tau_Nm\n";
    for (const auto& r : rows) {
        f << r.stance << ',' << r.t << ',' << r.eta << ',' << r.psi << ',' << r.com.x << ','
          << r.com.y << ',' << r.tau << '\n';
    }
    if (!f) throw IoError("failed writing " + path);
}

void write_summary_json(const std::string& path, const RunResult& run, const Metrics& m,
                        const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["converged"] = run.converged;
    j["stances_to_converge"] = run.stances_to_converge;
    j["time_to_converge_s"] = run.time_to_converge;
    j["stances"] = run.trace.size();
    j["total_time_s"] = run.total_time;
    j["final_error_m"] = m.final_error;
    j["steady_error_m"] = m.steady_error;
    j["max_energy_drift_rel"] = m.max_energy_drift;
    j["max_theta_residual_rad"] = m.max_theta_residual;
    j["M_sup"] = run.M_sup;
    j["bound_m"] = run.bound;
    j["bound_check"] = m.bound_check;
    j["speed_mps"] = run.final_state.v;
    int fallbacks = 0;
    double b_lo = std::numeric_limits<double>::infinity(), b_hi = 0.0;
    for (const auto& r : run.trace) {
        fallbacks += r.fallback ? 1 : 0;
        b_lo = std::min(b_lo, r.b);
        b_hi = std::max(b_hi, r.b);
    }
    j["fallback_count"] = fallbacks;
    j["b_min_N_per_m"] = run.trace.empty() ? 0.0 : b_lo;
    j["b_max_N_per_m"] = b_hi;
    j["rho_c_m"] = cfg.tracking.rho_c;
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("failed writing " + path);
}

}  // namespace lls
