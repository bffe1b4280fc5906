#include "lls/leg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lls/errors.hpp"
#include "lls/numerics.hpp"

namespace lls {

double q_of_alpha(double alpha, double eta_td, double b, double v, double m) {
    return chord_length(eta_td, sweep_angle(alpha, eta_td, b, v, m));
}

double b_for_q(double alpha, double q_target, double eta_td, double v, double m) {
    if (!(q_target > 0.0)) throw Unachievable("chord target must be positive");
    // The b -> 0 limit is free flight past the foot: chord 2*eta_td*cos(alpha).
    const double supremum = 2.0 * eta_td * std::cos(alpha);
    if (q_target >= supremum * (1.0 - 1e-9))
        throw Unachievable("chord target at or above the soft-spring limit");

    const auto q_of = [&](double b) { return q_of_alpha(alpha, eta_td, b, v, m); };

    double b_lo = 1.0;  // q(b) decreases with b; find q(b_lo) > q_target
    while (q_of(b_lo) <= q_target) {
        b_lo *= 0.25;
        if (b_lo < 1e-9) throw Unachievable("no soft enough spring reaches the chord target");
    }
    double b_hi = std::max(1.0, 4.0 * b_lo);
    while (q_of(b_hi) >= q_target) {
        b_hi *= 4.0;
        if (b_hi > 1e12) throw Unachievable("no stiff enough spring reaches the chord target");
    }
    while (b_hi - b_lo > 1e-12 * b_hi) {
        const double mid = 0.5 * (b_lo + b_hi);
        if (mid <= b_lo || mid >= b_hi) break;
        if (q_of(mid) > q_target) b_lo = mid;
        else b_hi = mid;
    }
    return 0.5 * (b_lo + b_hi);
}

// Largest placement angle at which a chord q is attainable: the soft-spring
// chord limit 2*eta*cos(alpha) must stay above q.
static double alpha_chord_limit(double q, double eta_td) {
    const double c = std::min(1.0, (q / (2.0 * eta_td)) * (1.0 + 1e-6));
    return std::acos(c);
}

StancePlan inverse_solve(double theta_target, double q_target, const SolveContext& ctx) {
    const double eta_td = ctx.eta_td;
    if (!(q_target > 0.0 && q_target < 2.0 * eta_td))
        throw Unachievable("chord target outside (0, 2*eta_td)");
    const double sweep = 2.0 * std::asin(q_target / (2.0 * eta_td));
    const double s = side_sign(ctx.side);
    const double alpha = kPi / 2 - sweep / 2 - s * wrap_pi(theta_target + ctx.rel_angle);
    if (alpha < ctx.params.alpha_min - 1e-12 || alpha > ctx.params.alpha_max + 1e-12)
        throw NoConstrainedSolution("required placement angle outside bounds");
    if (alpha >= alpha_chord_limit(q_target, eta_td))
        throw NoConstrainedSolution("chord target unattainable at the required placement");

    StancePlan plan;
    plan.side = ctx.side;
    plan.alpha = std::clamp(alpha, ctx.params.alpha_min, ctx.params.alpha_max);
    plan.eta_td = eta_td;
    plan.b = b_for_q(plan.alpha, q_target, eta_td, ctx.v, ctx.params.mass);
    plan.sweep = sweep;
    plan.chord = q_target;
    plan.duration = stance_duration(plan.alpha, eta_td, plan.b, ctx.v, ctx.params.mass);
    return plan;
}

double min_turn_radius(double q, double alpha_min, double alpha_max) {
    return q / (2.0 * std::sin((alpha_max - alpha_min) / 2.0));
}

Cone build_cones(double heading, Side side, const LegParams& params, double q, double lambda) {
    Cone c;
    c.v_ref = heading;
    c.side = side;
    c.alpha_lo = params.alpha_min;
    c.alpha_hi = params.alpha_max;
    c.q = q;
    if (std::isinf(lambda)) {
        c.gamma = 0.0;
    } else {
        const double s = q / (2.0 * lambda);
        if (s > 1.0) throw ConeEmpty("chord longer than the turning diameter");
        c.gamma = 2.0 * std::asin(s);
    }
    if (c.gamma >= params.alpha_max - params.alpha_min)
        throw ConeEmpty("tangent advance exceeds the placement range");
    c.sub_a_lo = params.alpha_min;
    c.sub_a_hi = params.alpha_max - c.gamma;
    c.sub_b_lo = params.alpha_min + c.gamma;
    c.sub_b_hi = params.alpha_max;
    return c;
}

double constant_q_theta(double alpha, double rel_angle, Side side, double sweep, bool* clamped) {
    double raw = wrap_pi(side_sign(side) * (kPi / 2 - alpha - sweep / 2) - rel_angle);
    bool hit = false;
    if (raw > kPi / 2) {
        raw = kPi / 2;
        hit = true;
    } else if (raw < -kPi / 2) {
        raw = -kPi / 2;
        hit = true;
    }
    if (clamped) *clamped = hit;
    return raw;
}

AlphaSearchResult approx_alpha_search(double sin_theta_des, const SolveContext& ctx, double q,
                                      double gamma) {
    const double sweep = 2.0 * std::asin(q / (2.0 * ctx.eta_td));
    const double lo = ctx.params.alpha_min;
    const double hi = std::min(ctx.params.alpha_max, alpha_chord_limit(q, ctx.eta_td));
    if (!(lo < hi))
        throw Unachievable("no placement in bounds can hold the chord target");
    const double s = side_sign(ctx.side);

    bool clamp_any = false;
    const auto residual = [&](double a) {
        bool c = false;
        const double th = constant_q_theta(a, ctx.rel_angle, ctx.side, sweep, &c);
        clamp_any = clamp_any || c;
        return std::sin(th) - sin_theta_des;
    };

    AlphaSearchResult out;

    // Closed-form candidate: theta(alpha) is affine in alpha away from clamps.
    const double theta_des = std::asin(std::clamp(sin_theta_des, -1.0, 1.0));
    const double cand = kPi / 2 - sweep / 2 - s * wrap_pi(theta_des + ctx.rel_angle);
    if (cand >= lo - 1e-14 && cand <= hi + 1e-14) {
        const double a = std::clamp(cand, lo, hi);
        const double r = residual(a);
        if (std::abs(r) < 1e-12) {
            out.alpha = a;
            out.sin_residual = r;
            out.exact = true;
            out.clamp_hit = clamp_any;
            return out;
        }
    }

    // Seeded scan with golden refinement; theta(alpha) is monotone between
    // clamp plateaus, so this finds the global minimizer cleanly.
    constexpr int kSeeds = 64;
    double best_a = lo, best = std::abs(residual(lo));
    std::vector<double> near_best;
    for (int i = 1; i <= kSeeds; ++i) {
        const double a = lo + (hi - lo) * i / kSeeds;
        const double r = std::abs(residual(a));
        if (r < best - 1e-15) {
            best = r;
            best_a = a;
        }
    }
    const double span = (hi - lo) / kSeeds;
    const double a0 = std::max(lo, best_a - span), a1 = std::min(hi, best_a + span);
    const double refined =
        num::golden_min([&](double a) { return std::abs(residual(a)); }, a0, a1, 1e-14);
    if (std::abs(residual(refined)) <= best) best_a = refined;

    // Plateau tie-break: when the residual is flat at the optimum, prefer the
    // alpha nearest the mid-line of the stance's sub-cone.
    const double r_best = residual(best_a);
    double mid;
    if (gamma < hi - lo) {
        mid = (ctx.side == Side::Right) ? 0.5 * (lo + (hi - gamma)) : 0.5 * ((lo + gamma) + hi);
    } else {
        mid = 0.5 * (lo + hi);
    }
    for (int i = 0; i <= kSeeds; ++i) {
        const double a = lo + (hi - lo) * i / kSeeds;
        if (std::abs(std::abs(residual(a)) - std::abs(r_best)) < 1e-13 &&
            std::abs(a - mid) < std::abs(best_a - mid))
            best_a = a;
    }

    out.alpha = best_a;
    out.sin_residual = residual(best_a);
    out.exact = std::abs(out.sin_residual) < 1e-12;
    out.clamp_hit = clamp_any;
    return out;
}

ApproxStep approx_step(double rho, double rho_target_prev, const ClosestFrame& frame,
                       const ComState& state, const LegParams& params, const TrackingGains& gains,
                       double q_target, double eta_td) {
    const double lambda = frame.lambda;
    const double err = rho - gains.rho_c;
    const double K = gains.adaptive ? select_gain(err, q_target, lambda, gains.K) : gains.K;
    const double f = -K * err;

    double sin_des;
    if (std::isinf(lambda)) {
        sin_des = -f / q_target;
    } else {
        sin_des = (-f * f - 2.0 * lambda * f + q_target * q_target) / (2.0 * lambda * q_target);
    }
    sin_des = std::clamp(sin_des, -1.0, 1.0);

    SolveContext ctx;
    ctx.rel_angle = wrap_pi(frame.zeta - state.heading);
    ctx.side = state.side_next;
    ctx.v = state.v;
    ctx.params = params;
    ctx.eta_td = eta_td;

    double gamma = 0.0;
    if (!std::isinf(lambda)) {
        const double sg = q_target / (2.0 * lambda);
        gamma = 2.0 * std::asin(std::min(1.0, sg));
    }

    const AlphaSearchResult found = approx_alpha_search(sin_des, ctx, q_target, gamma);

    ApproxStep out;
    out.plan.side = ctx.side;
    out.plan.alpha = found.alpha;
    out.plan.eta_td = eta_td;
    out.plan.b = b_for_q(found.alpha, q_target, eta_td, ctx.v, params.mass);
    out.plan.sweep = 2.0 * std::asin(q_target / (2.0 * eta_td));
    out.plan.chord = q_target;
    out.plan.duration = stance_duration(found.alpha, eta_td, out.plan.b, ctx.v, params.mass);

    const double e_prev = rho - gains.rho_c - rho_target_prev;
    out.gains.K = K;
    out.gains.M_tilde = found.exact ? 0.0 : std::abs(found.sin_residual);
    if (found.exact) {
        out.gains.K_tilde = 0.0;
    } else if (e_prev == 0.0) {
        // No finite gain maps a zero backstepping error onto this residual.
        out.gains.K_tilde = std::numeric_limits<double>::infinity();
    } else {
        out.gains.K_tilde = q_target * found.sin_residual / e_prev;
    }
    out.theta_des = std::asin(sin_des);
    out.theta_planned = constant_q_theta(found.alpha, ctx.rel_angle, ctx.side, out.plan.sweep);
    out.rho_target_next = (1.0 - K) * err;
    out.fallback = !found.exact;
    out.clamp_hit = found.clamp_hit;
    return out;
}

double neighborhood_bound(double M_sup, double q, double K) {
    if (!(K > 0.0 && K < 2.0)) throw Error("neighborhood bound needs K in (0, 2)");
    return M_sup * q / (1.0 - std::abs(1.0 - K));
}

}  // namespace lls
