// test_quadrature.cpp — adaptive integration and principal values.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "support/pv_oracle.hpp"
#include "wgqed/model.hpp"
#include "wgqed/quadrature.hpp"

using namespace wgqed;
using wgqed::testing::pv_window;

TEST_CASE("plain integration") {
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(quad::integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    // tiny interval: the error scaling must not force refinement
    CHECK(quad::integrate([](double x) { return x; }, 1.0, 1.0 + 1e-9) == doctest::Approx(1e-9).epsilon(1e-9));
}

TEST_CASE("principal value closed forms") {
    for (double w : {0.1, 0.5, 0.93}) {
        CHECK(quad::principal_value([](double) { return 1.0; }, w, 0.0, 1.0) ==
              doctest::Approx(std::log(w / (1 - w))).epsilon(1e-12));
        CHECK(quad::principal_value([](double x) { return x; }, 2 * w, 0.0, 2.0) ==
              doctest::Approx(-2.0 + 2 * w * std::log(2 * w / (2 - 2 * w))).epsilon(1e-12));
    }
}

TEST_CASE("principal value matches the excluded-window oracle") {
    auto g = [](double x) { return 0.1 * x * std::cos(1.3 * x) / ((x + 0.9) * (x + 0.9)); };
    for (double w : {0.3, 0.95, 2.2, 4.1}) {
        const double pv = quad::principal_value(g, w, 0.0, 5.0);
        CHECK(std::abs(pv - pv_window(g, w, 0.0, 5.0)) < 1e-8);
    }
}

TEST_CASE("outside the interval the integral is regular") {
    auto g = [](double x) { return x * std::cos(x); };
    for (double w : {-1.0, -1e-3, 5.5}) {
        const double direct = quad::integrate([&](double x) { return g(x) / (w - x); }, 0.0, 5.0);
        CHECK(quad::principal_value(g, w, 0.0, 5.0) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("endpoint singularities") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(quad::principal_value([](double) { return 1.0; }, 1.0, 0.0, 1.0) == inf);
    CHECK(quad::principal_value([](double) { return 1.0; }, 0.0, 0.0, 1.0) == -inf);
    // g vanishes at the endpoint → finite: ∫₀¹ x/(0 − x) dx = −1
    CHECK(quad::principal_value([](double x) { return x; }, 0.0, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("non-convergence is reported") {
    quad::Options opt;
    opt.max_depth = 2;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-15;
    CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(200.0 * x * x); }, 0.0, 10.0, opt), NumericalError);
}
