#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "lls/errors.hpp"

namespace lls::num {

/// Adaptive Gauss-Kronrod quadrature on [a, b]. Throws QuadratureFailure if the
/// error estimate exceeds `tol` relative to max(1, |result|).
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of opposite
/// sign (or zero). Refines until the interval is below `xtol` absolute.
double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol);

/// Golden-section minimization of f on [lo, hi] to interval width `xtol`.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol);

/// Embedded Dormand-Prince 5(4) pair with adaptive step size control.
///
/// State is a fixed-size array. Tolerance is applied per component as
/// atol[i] + rtol*|y[i]|. Steps are accepted when the weighted RMS of the
/// embedded error estimate is <= 1.
template <std::size_t N>
class Rk45 {
  public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(double, const State&, State&)>;

    Rk45(Rhs rhs, double rtol, const State& atol) : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

    /// One adaptive macro-step from (t, y). On return t and y are advanced and
    /// h holds the suggestion for the next step. h may shrink internally.
    void step(double& t, State& y, double& h) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            State y_new, err;
            stage(t, y, h, y_new, err);
            double rms = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = atol_[i] + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
                const double r = err[i] / sc;
                rms += r * r;
            }
            rms = std::sqrt(rms / static_cast<double>(N));
            if (!std::isfinite(rms)) throw IntegrationDiverged("non-finite state in RK45 step");
            if (rms <= 1.0) {
                t += h;
                y = y_new;
                const double grow = 0.9 * std::pow(std::max(rms, 1e-10), -0.2);
                h *= std::min(5.0, std::max(0.2, grow));
                return;
            }
            h *= std::max(0.2, 0.9 * std::pow(rms, -0.2));
        }
        throw IntegrationDiverged("RK45 step size underflow");
    }

    /// Single fixed step of size h from (t0, y0); no error control. Used for
    /// event localization inside an already accepted step.
    State fixed_step(double t0, const State& y0, double h) const {
        State y_new, err;
        stage(t0, y0, h, y_new, err);
        return y_new;
    }

  private:
    void stage(double t, const State& y, double h, State& y_new, State& err) const {
        // Dormand-Prince RK5(4)7M coefficients.
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State k1, k2, k3, k4, k5, k6, k7, tmp;
        rhs_(t, y, k1);
        comb1(tmp, y, h, k1, a21);
        rhs_(t + c2 * h, tmp, k2);
        comb2(tmp, y, h, k1, a31, k2, a32);
        rhs_(t + c3 * h, tmp, k3);
        comb3(tmp, y, h, k1, a41, k2, a42, k3, a43);
        rhs_(t + c4 * h, tmp, k4);
        comb4(tmp, y, h, k1, a51, k2, a52, k3, a53, k4, a54);
        rhs_(t + c5 * h, tmp, k5);
        comb5(tmp, y, h, k1, a61, k2, a62, k3, a63, k4, a64, k5, a65);
        rhs_(t + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs_(t + h, y_new, k7);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    static void comb1(State& out, const State& y, double h, const State& k1, double a) {
        for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * a * k1[i];
    }
    static void comb2(State& o, const State& y, double h, const State& k1, double a1, const State& k2,
                      double a2) {
        for (std::size_t i = 0; i < N; ++i) o[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i]);
    }
    static void comb3(State& o, const State& y, double h, const State& k1, double a1, const State& k2,
                      double a2, const State& k3, double a3) {
        for (std::size_t i = 0; i < N; ++i) o[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i]);
    }
    static void comb4(State& o, const State& y, double h, const State& k1, double a1, const State& k2,
                      double a2, const State& k3, double a3, const State& k4, double a4) {
        for (std::size_t i = 0; i < N; ++i)
            o[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i]);
    }
    static void comb5(State& o, const State& y, double h, const State& k1, double a1, const State& k2,
                      double a2, const State& k3, double a3, const State& k4, double a4,
                      const State& k5, double a5) {
        for (std::size_t i = 0; i < N; ++i)
            o[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i] + a5 * k5[i]);
    }

    Rhs rhs_;
    double rtol_;
    State atol_;
};

}  // namespace lls::num
