#include "lls/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace lls::num {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol, &err);
    if (!(err <= tol * std::max(1.0, std::abs(value)) * 10.0) || !std::isfinite(value))
        throw QuadratureFailure("quadrature did not reach the requested tolerance");
    return value;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw Error("bisect: endpoints do not bracket a root");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace lls::num
