// quadrature.hpp — Adaptive Gauss-Kronrod integration and Cauchy principal values.

#pragma once

#include <functional>

namespace wgqed::quad {

struct Options {
    double abs_tol{1e-10};
    double rel_tol{1e-11};
    unsigned max_depth{25};
};

using Integrand = std::function<double(double)>;

/// ∫_a^b f(x) dx. Throws NumericalError when the error estimate exceeds
/// both abs_tol and 10·rel_tol·∫|f|.
double integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// P∫_a^b g(x)/(ω − x) dx by singularity subtraction:
///   ∫ (g(x) − g(ω))/(ω − x) dx + g(ω) ln|(ω − a)/(b − ω)|
/// Outside [a, b] the integrand is regular and integrated directly. At ω = a or
/// ω = b the one-sided limit is returned, which is ±∞ unless g vanishes there.
double principal_value(const Integrand& g, double omega, double a, double b, const Options& opt = {});

} // namespace wgqed::quad
