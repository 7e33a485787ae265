// pv_oracle.hpp — Excluded-window principal value with Richardson extrapolation.

#pragma once

#include <cmath>
#include <vector>

#include "wgqed/quadrature.hpp"

namespace wgqed::testing {

// Naive oracle: integrate outside a symmetric window (ω−h, ω+h), using
// dyadic shells towards the pole, and Richardson-extrapolate h → 0. The
// remainder is odd in h (h, h³, h⁵, ...).
inline double pv_window(const quad::Integrand& g, double omega, double a, double b) {
    auto f = [&](double x) { return g(x) / (omega - x); };
    auto cut = [&](double h) {
        double acc = 0.0;
        double lo = h;
        for (; omega - 2 * lo > a; lo *= 2) acc += quad::integrate(f, omega - 2 * lo, omega - lo);
        acc += quad::integrate(f, a, omega - lo);
        double hi = h;
        for (; omega + 2 * hi < b; hi *= 2) acc += quad::integrate(f, omega + hi, omega + 2 * hi);
        return acc + quad::integrate(f, omega + hi, b);
    };
    const double h = 0.04;
    std::vector<double> t;
    for (int i = 0; i < 4; ++i) t.push_back(cut(h / std::pow(2.0, i)));
    for (int order = 1; order <= 5; order += 2) {
        const double factor = std::pow(2.0, order);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = (factor * t[i + 1] - t[i]) / (factor - 1);
        t.pop_back();
    }
    return t[0];
}

} // namespace wgqed::testing
