// quadrature.cpp — Thin layer over Boost.Math's adaptive Gauss-Kronrod rule.

#include "wgqed/quadrature.hpp"

#include "wgqed/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wgqed::quad {

double integrate(const Integrand& f, double a, double b, const Options& opt) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    // Boost 1.74 reports the local error of a subinterval without its
    // half-width factor, so integrate on [−1, 1] where that factor is one.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto unit = [&](double u) { return half * f(mid + half * u); };
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        unit, -1.0, 1.0, opt.max_depth, opt.rel_tol, &error, &l1);
    if (!(error <= opt.abs_tol) && !(error <= 10.0 * opt.rel_tol * l1)) {
        std::ostringstream os;
        os << "quadrature on [" << a << ", " << b << "] did not reach tolerance: error " << error;
        throw NumericalError(os.str());
    }
    return value;
}

namespace {

// ∫_a^b f with breakpoints at a + δ·10^k (or b − δ·10^k), for integrands with
// structure of width δ next to one endpoint.
double integrate_graded(const Integrand& f, double a, double b, double delta, bool at_left, const Options& opt) {
    double acc = 0.0;
    double lo = a;
    double hi = b;
    for (double step = delta; step < 0.5 * (hi - lo); step *= 10.0) {
        if (at_left) {
            acc += integrate(f, lo, a + step, opt);
            lo = a + step;
        } else {
            acc += integrate(f, b - step, hi, opt);
            hi = b - step;
        }
    }
    return acc + integrate(f, lo, hi, opt);
}

} // namespace

double principal_value(const Integrand& g, double omega, double a, double b, const Options& opt) {
    if (omega < a || omega > b) {
        auto f = [&](double x) { return g(x) / (omega - x); };
        return omega < a ? integrate_graded(f, a, b, a - omega, true, opt)
                         : integrate_graded(f, a, b, omega - b, false, opt);
    }

    const double g0 = g(omega);
    if (omega == a || omega == b) {
        if (g0 != 0.0) {
            // ln|ω − a| or −ln|b − ω| diverges; sign follows g(ω) ln|(ω−a)/(b−ω)|.
            const double sign = (omega == b) == (g0 > 0.0) ? 1.0 : -1.0;
            return sign * std::numeric_limits<double>::infinity();
        }
        return integrate([&](double x) { return g(x) / (omega - x); }, a, b, opt);
    }

    auto subtracted = [&](double x) { return (g(x) - g0) / (omega - x); };
    const double left = integrate(subtracted, a, omega, opt);
    const double right = integrate(subtracted, omega, b, opt);
    return left + right + g0 * std::log((omega - a) / (b - omega));
}

} // namespace wgqed::quad
