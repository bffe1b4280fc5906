#include "lls/tracking.hpp"

#include <algorithm>
#include <cmath>

#include "lls/errors.hpp"

namespace lls {

FeasibleIntervals feasible_f_intervals(double q, double lambda) {
    FeasibleIntervals out;
    if (std::isinf(lambda)) {
        out.parts[0] = {-q, q};
        out.count = 1;
        return out;
    }
    const double lo1 = -(2.0 * lambda + q);
    const double hi1 = std::min(-q, q - 2.0 * lambda);
    const double lo2 = std::max(-q, q - 2.0 * lambda);
    out.parts[0] = {lo1, hi1};
    out.parts[1] = {lo2, q};
    out.count = 2;
    return out;
}

double select_gain(double rho_err, double q, double lambda, double K_nominal) {
    if (std::isinf(lambda)) {
        const double a = std::abs(rho_err);
        if (a < 0.5 * q) return K_nominal;
        return std::min(K_nominal, 0.99 * q / a);
    }
    if (q >= 2.0 * lambda) throw StepTooLarge("step q must be below 2*lambda");
    const double a = std::abs(rho_err);
    if (a < 0.5 * std::min(q, 2.0 * lambda - q)) return K_nominal;
    const double c = 0.99;
    return std::min({K_nominal, c * q / a, c * (2.0 * lambda - q) / a});
}

double solve_theta(double f, double q, double lambda) {
    double s;
    if (std::isinf(lambda)) {
        s = -f / q;
    } else {
        s = (-f * f - 2.0 * lambda * f + q * q) / (2.0 * lambda * q);
    }
    if (std::abs(s) > 1.0 + 1e-12)
        throw NoSolution("no steering angle for this distance command");
    return std::asin(std::clamp(s, -1.0, 1.0));
}

double step_distance_update(double rho, double theta, double q, double kappa) {
    const double st = std::sin(theta);
    if (kappa == 0.0) return rho - q * st;
    const double L = rho + 1.0 / kappa;
    // (L - q sin)^2 + (q cos)^2: nonnegative by construction.
    const double next = std::sqrt(L * L - 2.0 * L * q * st + q * q);
    return next - 1.0 / kappa;
}

double delta_from_theta(double zeta, double theta) { return wrap_pi(zeta + theta); }

SimplifiedStep simplified_update(double rho, double theta, double q, double lambda, double rho_c,
                                 double ratio_limit) {
    SimplifiedStep out;
    out.assumption_ok = std::isinf(lambda) || q < lambda * ratio_limit;
    const double curvature_term = std::isinf(lambda) ? 0.0 : q * q / (2.0 * lambda);
    out.rho_err_next = (rho - rho_c) + curvature_term - q * std::sin(theta);
    return out;
}

}  // namespace lls
