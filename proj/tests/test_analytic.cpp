// test_analytic.cpp — renormalization, kernels and closed-form spectra.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/pv_oracle.hpp"
#include "wgqed/analysis.hpp"
#include "wgqed/analytic.hpp"

using namespace wgqed;

namespace {

// Oracle for η: bisection on g(η) = η − exp(−½∫J/(x + ηω₀)²), with the
// integral done numerically rather than in closed form.
double eta_bisection(double alpha, double omega_c) {
    auto g = [&](double eta) {
        const double integral =
            quad::integrate([&](double x) { return 2.0 * alpha * x / ((x + eta) * (x + eta)); }, 0.0, omega_c);
        return eta - std::exp(-0.5 * integral);
    };
    double lo = 0.05, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

ResolventPair random_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {cplx(u(rng), 0.1 + std::abs(u(rng))), cplx(u(rng), u(rng))};
}

} // namespace

TEST_CASE("renormalization factor") {
    CHECK(solve_eta(ModelParams::with_distance(0.0, 1.0, InitialState::Psi0)) == 1.0);
    const double e05 = solve_eta(ModelParams::with_distance(0.05, 1.0, InitialState::Psi0));
    const double e10 = solve_eta(ModelParams::with_distance(0.1, 1.0, InitialState::Psi0));
    CHECK(e05 == doctest::Approx(eta_bisection(0.05, 5.0)).epsilon(1e-10));
    CHECK(e10 == doctest::Approx(eta_bisection(0.1, 5.0)).epsilon(1e-10));
    CHECK(std::abs(e05 - 0.9516) < 1e-3);
    CHECK(std::abs(e10 - 0.902) < 1e-3);
    double prev = 1.0;
    for (double a : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        const double e = solve_eta(ModelParams::with_distance(a, 1.0, InitialState::Psi0));
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("closed-form eta exponent matches quadrature") {
    for (double a : {0.3, 0.95, 2.0}) {
        const double q = quad::integrate([&](double x) { return 0.2 * x / ((x + a) * (x + a)); }, 0.0, 5.0);
        CHECK(eta_exponent_integral(0.1, 5.0, a) == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("induced dipole coupling") {
    CHECK(dipole_coupling_vc(ModelParams::with_distance(0.0, 1.0, InitialState::Psi0), 1.0) == 0.0);
    const auto p0 = ModelParams::with_distance(0.05, 0.0, InitialState::Psi0);
    CHECK(dipole_coupling_vc(p0, solve_eta(p0)) < 0.0);
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::Psi0);
    const double eta = solve_eta(p);
    const double vc = dipole_coupling_vc(p, eta);
    CHECK(vc == doctest::Approx(0.0654).epsilon(2e-3));
    const double discrete = dipole_coupling_vc_discrete(p, discretize(p, 3000), eta);
    CHECK(std::abs(discrete / vc - 1.0) < 1e-4);
    // even in d
    const auto pm = ModelParams::with_distance(0.05, -1.0, InitialState::Psi0);
    CHECK(dipole_coupling_vc(pm, eta) == doctest::Approx(vc).epsilon(1e-13));
}

TEST_CASE("Lamb shifts against the excluded-window oracle") {
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::Psi0);
    const TrwaKernels tk(p);
    const SpKernels sk(p);
    const double a = tk.renormalized_frequency();
    auto g_trwa = [&](double x) {
        const double r = a / (x + a);
        return 0.1 * x * std::cos(x) * r * r;
    };
    CHECK(std::abs(tk.delta(a, 1.0) - testing::pv_window(g_trwa, a, 0.0, 5.0)) < 1e-8);
    auto g_sp = [](double x) { return 0.025 * x; };
    CHECK(std::abs(sk.delta(1.3, 0.0) - testing::pv_window(g_sp, 1.3, 0.0, 5.0)) < 1e-8);
    // negative frequency: ordinary integral, here in closed form
    // ∫₀⁵ 0.025x/(−1 − x) dx = −0.025(5 − ln 6)
    CHECK(sk.delta(-1.0, 0.0) == doctest::Approx(-0.025 * (5.0 - std::log(6.0))).epsilon(1e-10));
    CHECK(sk.pole_shift() == doctest::Approx(2.0 * sk.delta(-1.0, 0.0)).epsilon(1e-15));

    const auto free = ModelParams::with_distance(0.0, 1.0, InitialState::Psi0);
    CHECK(TrwaKernels(free).delta(1.0, 1.0) == 0.0);
    CHECK(SpKernels(free).delta(0.7, 3.0) == 0.0);
}

TEST_CASE("linewidths") {
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::Psi0);
    const SpKernels sk(p);
    const TrwaKernels tk(p);
    CHECK(sk.gamma(1.0, 0.0) == doctest::Approx(0.0785398).epsilon(1e-6));
    CHECK(std::abs(sk.gamma(std::numbers::pi / 2.0, 1.0)) < 1e-17);
    const double a = tk.renormalized_frequency();
    CHECK(tk.gamma(a, 0.0) == doctest::Approx(std::numbers::pi / 2.0 * 0.05 * a).epsilon(1e-14));
    CHECK(linewidth(a, 0.0, tk) == tk.gamma(a, 0.0));
    CHECK(lamb_shift_pv(0.8, 1.0, sk) == sk.delta(0.8, 1.0));
}

TEST_CASE("superposition identity for random resolvent pairs") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const auto ab = random_pair(rng);
        const double kd = u(rng);
        const double eta_w = 0.5 + 0.1 * u(rng);
        // TRWA: N₀ = ½|amp₊ + amp₋|² with amp± = λ̃(1 ± e)/√2 · (1/(Ã ∓ B̃) + 1/(2ηω₀))
        const cplx e = std::polar(1.0, -kd);
        const double r = 1.0 / std::sqrt(2.0);
        const cplx tp = r * (1.0 + e) * (1.0 / (ab.a - ab.b) + 1.0 / (2.0 * eta_w));
        const cplx tm = r * (1.0 - e) * (1.0 / (ab.a + ab.b) + 1.0 / (2.0 * eta_w));
        const double n0 = trwa_photon_number(ab, eta_w, kd, 1.0, InitialState::Psi0);
        CHECK(std::abs(n0 - 0.5 * std::norm(tp + tm)) <= 1e-12 * n0);
        CHECK(trwa_photon_number(ab, eta_w, kd, 1.0, InitialState::PsiPlus) ==
              doctest::Approx(std::norm(tp)).epsilon(1e-12));
        const cplx sp = 0.5 * r * (1.0 + e) / (ab.a - ab.b);
        const cplx sm = 0.5 * r * (1.0 - e) / (ab.a + ab.b);
        const double s0 = sp_photon_number(ab, kd, 1.0, InitialState::Psi0);
        CHECK(std::abs(s0 - 0.5 * std::norm(sp + sm)) <= 1e-12 * s0);
        CHECK(sp_photon_number(ab, kd, 1.0, InitialState::PsiMinus) == doctest::Approx(std::norm(sm)).epsilon(1e-12));
    }
}

TEST_CASE("correlated amplitudes reproduce the spectra") {
    const auto p = ModelParams::with_distance(0.05, 3.0, InitialState::Psi0);
    const TrwaKernels tk(p);
    const SpKernels sk(p);
    for (double w : {0.6, 0.97, 1.4}) {
        const double kd = w * 3.0;
        const double l2 = 1e-3;
        const auto ta = trwa_correlated_amplitudes(tk, w, kd, l2);
        const auto ab = tk.pair(tk.omega_tilde(w));
        const double lt2 = tk.lambda_tilde2(l2, w);
        CHECK(std::norm(ta.plus) == doctest::Approx(trwa_photon_number(ab, tk.renormalized_frequency(), kd, lt2,
                                                                       InitialState::PsiPlus)).epsilon(1e-12));
        CHECK(0.5 * std::norm(ta.plus + ta.minus) ==
              doctest::Approx(trwa_photon_number(ab, tk.renormalized_frequency(), kd, lt2, InitialState::Psi0))
                  .epsilon(1e-12));
        const auto sa = sp_correlated_amplitudes(sk, w, kd, l2);
        const auto sab = sk.pair(sk.omega_prime(w));
        CHECK(0.5 * std::norm(sa.plus + sa.minus) ==
              doctest::Approx(sp_photon_number(sab, kd, l2, InitialState::Psi0)).epsilon(1e-12));
    }
}

TEST_CASE("antisymmetric state does not radiate at zero distance") {
    const auto p = ModelParams::with_distance(0.05, 0.0, InitialState::PsiMinus);
    const auto grid = default_grid(5.0, 201);
    const auto t = trwa_spectrum(TrwaKernels(p), grid, 5.0 / 201, InitialState::PsiMinus);
    const auto s = sp_spectrum(SpKernels(p), grid, 5.0 / 201, InitialState::PsiMinus);
    CHECK(t.max_value() == 0.0);
    CHECK(s.max_value() == 0.0);
}

TEST_CASE("spectra are nonnegative, even in d and carry metadata") {
    const auto grid = default_grid(5.0, 500);
    for (auto st : {InitialState::Psi0, InitialState::PsiPlus, InitialState::PsiMinus}) {
        const auto p = ModelParams::with_distance(0.05, 3.0, st);
        const auto q = ModelParams::with_distance(0.05, -3.0, st);
        const auto a = trwa_spectrum(TrwaKernels(p), grid, 0.01, st);
        const auto b = trwa_spectrum(TrwaKernels(q), grid, 0.01, st);
        const auto c = sp_spectrum(SpKernels(p), grid, 0.01, st);
        const auto d = sp_spectrum(SpKernels(q), grid, 0.01, st);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(a.value[i] >= 0.0);
            CHECK(c.value[i] >= 0.0);
            CHECK(a.value[i] == doctest::Approx(b.value[i]).epsilon(1e-12));
            CHECK(c.value[i] == doctest::Approx(d.value[i]).epsilon(1e-12));
        }
        a.validate();
        CHECK(a.meta.method == "TRWA");
        CHECK(c.meta.method == "SP");
        CHECK(a.meta.tags.at("initial_state") == to_string(st));
        CHECK(a.meta.values.count("eta") == 1);
        CHECK(c.meta.values.count("pole_shift") == 1);
    }
}

TEST_CASE("bath form uses the mode weights") {
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::PsiPlus);
    const auto bath = discretize(p, 100);
    const TrwaKernels tk(p);
    const auto s = trwa_spectrum(tk, bath, InitialState::PsiPlus);
    REQUIRE(s.size() == 100);
    const double w = bath.omega(10);
    const double l2 = bath.lambda(10) * bath.lambda(10);
    const auto amp = trwa_correlated_amplitudes(tk, w, w, l2);
    const auto amp_m = trwa_correlated_amplitudes(tk, w, -w, l2);
    CHECK(s.value[10] == doctest::Approx(std::norm(amp.plus) + std::norm(amp_m.plus)).epsilon(1e-12));
}

TEST_CASE("theories converge as the coupling vanishes") {
    auto gap = [](double alpha) {
        const auto p = ModelParams::with_distance(alpha, 1.0, InitialState::PsiPlus);
        const auto g = uniform_grid(0.6, 1.4, 4001);
        return compare(trwa_spectrum(TrwaKernels(p), g, 2e-4, InitialState::PsiPlus),
                       sp_spectrum(SpKernels(p), g, 2e-4, InitialState::PsiPlus))
            .linf;
    };
    const double g1 = gap(0.02), g2 = gap(0.005), g3 = gap(0.001);
    CHECK(g2 < g1);
    CHECK(g3 < g2);
}

TEST_CASE("grids") {
    const auto g = default_grid(5.0);
    CHECK(g.size() == 2001);
    CHECK(g.front() > 0.0);
    CHECK(g.back() == 5.0);
    const auto u = uniform_grid(0.8, 1.2, 5);
    CHECK(u[2] == doctest::Approx(1.0).epsilon(1e-15));
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::Psi0);
    const std::vector<double> bad{0.0, 1.0};
    CHECK_THROWS_AS(trwa_spectrum(TrwaKernels(p), bad, 0.1, InitialState::Psi0), ValidationError);
    const std::vector<double> beyond{1.0, 5.5};
    CHECK_THROWS_AS(sp_spectrum(SpKernels(p), beyond, 0.1, InitialState::Psi0), ValidationError);
}
