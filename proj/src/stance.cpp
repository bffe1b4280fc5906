#include "lls/stance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lls/errors.hpp"
#include "lls/numerics.hpp"

namespace lls {

void LegParams::validate() const {
    if (!(mass > 0.0) || !(inertia > 0.0) || !(eta0 > 0.0))
        throw ConfigError("mass, inertia and eta0 must be positive");
    if (!(0.0 < alpha_min && alpha_min < alpha_max && alpha_max < kPi / 2))
        throw ConfigError("alpha bounds must satisfy 0 < alpha_min < alpha_max < pi/2");
}

double potential(double eta, double b, double eta_td) {
    const double d = eta - eta_td;
    return b * d * d;
}

namespace {

// Reduced radial problem. g(eta) = 2m(E - V) - p^2/eta^2 is (m*eta_dot)^2;
// its largest root below eta_td is the turning point.
struct Radial {
    double m, b, eta_td, E, p;  // p = |p_psi|

    double g(double eta) const {
        return 2.0 * m * (E - potential(eta, b, eta_td)) - p * p / (eta * eta);
    }
    double gprime(double eta) const {
        return -4.0 * m * b * (eta - eta_td) + 2.0 * p * p / (eta * eta * eta);
    }
    double gsecond(double eta) const {
        return -4.0 * m * b - 6.0 * p * p / (eta * eta * eta * eta);
    }
    // Derivatives of order >= 3 come from the centrifugal term alone; the
    // spring part of g is exactly quadratic.
    double gderiv(int n, double eta) const {
        double fact = 1.0;  // (n+1)!
        for (int k = 2; k <= n + 1; ++k) fact *= k;
        const double sign = (n % 2 == 0) ? -1.0 : 1.0;
        return sign * fact * p * p / std::pow(eta, n + 2);
    }
};

double turning_point(const Radial& rad) {
    const double top = rad.eta_td;
    if (rad.g(top) < 0.0)
        throw NoCompression("radial speed negative at touchdown");
    const double step = top / 512.0;
    double hi = top;
    while (hi - step > 1e-9 * top) {
        const double lo = hi - step;
        if (rad.g(lo) <= 0.0)
            return num::bisect([&](double x) { return rad.g(x); }, lo, hi, 1e-14);
        hi = lo;
    }
    throw NoCompression("spring bottoms out before the radial motion turns");
}

struct Quadrature {
    Radial rad;
    double em = 0.0;    // turning point
    double g_em = 0.0;  // residual of g at the computed turning point
    double umax = 0.0;  // sqrt(eta_td - em)
    double u2_sw = 0.0; // switch radius between series and direct evaluation
    std::array<double, 5> c{};  // c[n] = g^(n+1)(em) / (n+1)!

    // g(em + u^2) / u^2, stable through the turning point: a Taylor series in
    // the innermost slice where the direct difference would cancel.
    double G(double u) const {
        const double u2 = u * u;
        if (u2 <= u2_sw)
            return c[0] + u2 * (c[1] + u2 * (c[2] + u2 * (c[3] + u2 * c[4])));
        return (rad.g(em + u2) - g_em) / u2;
    }
};

Quadrature make_quadrature(double alpha, double eta_td, double b, double v, double m) {
    Radial rad{m, b, eta_td, 0.5 * m * v * v, m * eta_td * v * std::sin(alpha)};
    Quadrature q;
    q.rad = rad;
    q.em = turning_point(rad);
    q.g_em = rad.g(q.em);
    const double depth = std::max(0.0, eta_td - q.em);
    q.umax = std::sqrt(depth);
    q.c[0] = rad.gprime(q.em);
    q.c[1] = 0.5 * rad.gsecond(q.em);
    double fact = 2.0;
    for (int n = 3; n <= 5; ++n) {
        fact *= n;
        q.c[n - 1] = rad.gderiv(n, q.em) / fact;
    }
    // Balance the direct branch's cancellation noise (~ eps*scale / (g1 u^2))
    // against the series truncation (~ |g^(6)| u^10 / 6!) to place the switch;
    // never let the truncation exceed ~1e-12 relative. Shallow compressions
    // (grazing placements) end up fully inside the series region.
    const double g1 = std::max(std::abs(q.c[0]), 1e-300);
    const double scale = 2.0 * m * rad.E + 2.0 * m * potential(q.em, b, eta_td) +
                         rad.p * rad.p / (q.em * q.em);
    const double noise = 8.0 * 2.2e-16 * scale / g1;
    const double trunc = std::abs(rad.gderiv(6, q.em)) / (720.0 * g1);
    double u2 = depth;
    if (trunc > 0.0) {
        u2 = std::max(std::pow(noise / trunc, 1.0 / 6.0), 1e-8 * depth);
        u2 = std::min(u2, std::pow(1e-12 / trunc, 0.2));
    }
    q.u2_sw = std::min(u2, depth * (1.0 + 1e-9));
    return q;
}

constexpr double kQuadTol = 1e-11;

}  // namespace

double eta_min(double E, double p_psi, double b, double eta_td, double m) {
    Radial rad{m, b, eta_td, E, std::abs(p_psi)};
    return turning_point(rad);
}

double sweep_angle(double alpha, double eta_td, double b, double v, double m) {
    const Quadrature q = make_quadrature(alpha, eta_td, b, v, m);
    if (q.umax <= 0.0) return 0.0;
    const double p = q.rad.p;
    const auto f = [&](double u) {
        const double x = q.em + u * u;
        const double G = q.G(u);
        return (p / (x * x)) / std::sqrt(G);
    };
    return 4.0 * num::integrate(f, 0.0, q.umax, kQuadTol);
}

double stance_duration(double alpha, double eta_td, double b, double v, double m) {
    const Quadrature q = make_quadrature(alpha, eta_td, b, v, m);
    if (q.umax <= 0.0) return 0.0;
    const auto f = [&](double u) { return m / std::sqrt(q.G(u)); };
    return 4.0 * num::integrate(f, 0.0, q.umax, kQuadTol);
}

double chord_length(double eta_td, double sweep) { return 2.0 * eta_td * std::sin(sweep / 2.0); }

double heading_update(double heading, double alpha, double sweep, Side side) {
    return heading + side_sign(side) * (kPi - sweep - 2.0 * alpha);
}

StanceOutcome integrate_stance(const ComState& state, const StancePlan& plan,
                               const LegParams& params, const IntegrateOptions& opts) {
    const double s = side_sign(plan.side);
    const double m = params.mass;
    const double eta_td = plan.eta_td;
    const double v = state.v;

    const double leg_angle = state.heading - s * plan.alpha;  // body -> foot
    const Vec2 foot = state.r + eta_td * Vec2::from_angle(leg_angle);
    const double psi0 = leg_angle + kPi;  // foot -> body, kept unwrapped

    const double p_psi = -s * m * eta_td * v * std::sin(plan.alpha);
    const double E0 = 0.5 * m * v * v;  // V(eta_td) = 0 at touchdown

    // State y = (eta, psi, p_eta).
    using State = std::array<double, 3>;
    const auto rhs = [&](double, const State& y, State& dy) {
        const double eta = y[0];
        dy[0] = y[2] / m;
        dy[1] = p_psi / (m * eta * eta);
        dy[2] = p_psi * p_psi / (m * eta * eta * eta) - 2.0 * plan.b * (eta - eta_td);
    };
    const auto energy = [&](const State& y) {
        const double eta = y[0];
        return y[2] * y[2] / (2.0 * m) + p_psi * p_psi / (2.0 * m * eta * eta) +
               potential(eta, plan.b, eta_td);
    };

    const State atol = {opts.rel_tol * eta_td * 1e-2, opts.rel_tol * 1e-2,
                        opts.rel_tol * m * v * 1e-2};
    num::Rk45<3> rk(rhs, opts.rel_tol, atol);

    State y = {eta_td, psi0, -m * v * std::cos(plan.alpha)};
    double t = 0.0;
    double h = 1e-4 * eta_td / v;
    double max_drift = 0.0;

    StanceOutcome out;
    if (opts.record_trajectory) out.trajectory.push_back({0.0, eta_td, psi0});

    double t_prev = 0.0;
    State y_prev = y;
    std::size_t steps = 0;
    while (true) {
        if (++steps > opts.max_steps) throw MaxStepExceeded("stance integration step budget");
        t_prev = t;
        y_prev = y;
        rk.step(t, y, h);
        if (!(y[0] > 0.0) || !std::isfinite(y[0]))
            throw IntegrationDiverged("leg length left the physical range");
        max_drift = std::max(max_drift, std::abs(energy(y) - E0) / E0);
        if (y[2] > 0.0 && y[0] >= eta_td) break;  // the localized end sample replaces this one
        if (opts.record_trajectory) out.trajectory.push_back({t, y[0], y[1]});
    }

    // Localize the exit time eta(t*) = eta_td within the last step; safeguarded
    // Newton on substeps from the last accepted state.
    double lo = 0.0, hi = t - t_prev;
    double dt = hi;
    State y_end = y;
    {
        const double e0 = y_prev[0], e1 = y[0];
        if (e1 > e0) dt = (eta_td - e0) / (e1 - e0) * (t - t_prev);
        for (int it = 0; it < 80; ++it) {
            dt = std::clamp(dt, lo, hi);
            y_end = (dt == hi) ? y : rk.fixed_step(t_prev, y_prev, dt);
            const double F = y_end[0] - eta_td;
            if (std::abs(F) <= 1e-12) break;
            if (F < 0.0) lo = dt;
            else hi = dt;
            const double Fd = y_end[2] / m;
            double next = (Fd != 0.0) ? dt - F / Fd : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            dt = next;
        }
    }
    const double t_end = t_prev + dt;

    const Vec2 e_r = Vec2::from_angle(y_end[1]);
    const Vec2 e_psi = e_r.perp_ccw();
    const Vec2 r_next = foot + y_end[0] * e_r;
    const Vec2 vel = (y_end[2] / m) * e_r + (p_psi / (m * y_end[0])) * e_psi;

    out.next.r = r_next;
    out.next.v = state.v;  // conserved across the stance
    out.next.heading = state.heading + wrap_pi(vel.angle() - wrap_pi(state.heading));
    out.next.side_next = other(plan.side);
    out.q_vec = r_next - state.r;
    out.foot = foot;
    out.energy_drift = max_drift;
    out.measured_exit_speed = vel.norm();
    out.measured_duration = t_end;
    out.measured_sweep = std::abs(y_end[1] - psi0);
    out.theta_achieved = std::numeric_limits<double>::quiet_NaN();  // filled by the harness
    if (opts.record_trajectory) out.trajectory.push_back({t_end, y_end[0], y_end[1]});
    return out;
}

double theta_difference_residual(double theta_k, double theta_k1, double alpha_k, double alpha_k1,
                                 double sweep_k, double sweep_k1, double gamma_k, Side side_first) {
    const double s1 = side_sign(side_first);
    const double d_theta = theta_k1 - theta_k;
    const double d_alpha = alpha_k1 - alpha_k;
    const double d_sweep = sweep_k1 - sweep_k;
    return wrap_pi(d_theta - s1 * (d_alpha + 0.5 * d_sweep) + gamma_k);
}

}  // namespace lls
