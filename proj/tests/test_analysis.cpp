// test_analysis.cpp — peak finding, comparison metrics, splitting estimate.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "wgqed/analysis.hpp"

using namespace wgqed;

namespace {

SpectrumSeries lorentzian(double center, double hwhm, double scale = 1.0, double lo = 0.0, double hi = 2.0,
                          std::size_t n = 2001) {
    SpectrumSeries s;
    s.omega = uniform_grid(lo, hi, n);
    for (double w : s.omega) s.value.push_back(scale * hwhm * hwhm / ((w - center) * (w - center) + hwhm * hwhm));
    return s;
}

} // namespace

TEST_CASE("single line") {
    const auto s = lorentzian(1.0123, 0.05);
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].position - 1.0123) <= 1e-3);
    CHECK(peaks[0].fwhm == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(peaks[0].height == doctest::Approx(1.0).epsilon(1e-3));
    const auto scaled = find_peaks(lorentzian(1.0123, 0.05, 7.5));
    REQUIRE(scaled.size() == 1);
    CHECK(scaled[0].position == peaks[0].position);
    CHECK(scaled[0].fwhm == doctest::Approx(peaks[0].fwhm).epsilon(1e-12));
}

TEST_CASE("doublet, plateaus, edges and empty input") {
    auto s = lorentzian(0.8, 0.02);
    const auto t = lorentzian(1.2, 0.05, 0.6);
    for (std::size_t i = 0; i < s.size(); ++i) s.value[i] += t.value[i];
    const auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].position < peaks[1].position);
    CHECK(dominant_peak(s).position == peaks[0].position);

    SpectrumSeries flat;
    flat.omega = {0.0, 1.0, 2.0, 3.0, 4.0};
    flat.value = {0.0, 1.0, 1.0, 1.0, 0.0};
    CHECK(find_peaks(flat).size() == 1);

    // an interior maximum next to the edge has no left half-height crossing (and
    // hardly any prominence);
    // a maximum on the edge itself is not a peak
    CHECK(find_peaks(lorentzian(0.0, 0.1)).empty());
    const auto edge = lorentzian(0.01, 0.1);
    CHECK(find_peaks(edge).empty());
    const auto ep = find_peaks(edge, 0.0);
    REQUIRE(ep.size() == 1);
    CHECK(std::isnan(ep[0].fwhm));

    SpectrumSeries zero;
    zero.omega = {0.0, 1.0, 2.0};
    zero.value = {0.0, 0.0, 0.0};
    CHECK(find_peaks(zero).empty());
    CHECK_THROWS_AS(dominant_peak(zero), ValidationError);

    // small ripples below the prominence threshold are ignored
    auto rippled = lorentzian(1.0, 0.1);
    for (std::size_t i = 0; i < rippled.size(); ++i) rippled.value[i] += 1e-3 * std::sin(400.0 * rippled.omega[i]);
    CHECK(find_peaks(rippled).size() == 1);
}

TEST_CASE("peaks CSV") {
    std::ostringstream os;
    write_peaks_csv(os, {{1.0, 2.0, 1.5, 0.1}});
    CHECK(os.str().rfind("position,height,prominence,fwhm\n1,2,1.5,0.1", 0) == 0);
}

TEST_CASE("comparison metrics") {
    const auto a = lorentzian(1.0, 0.05);
    const auto same = compare(a, a);
    CHECK(same.linf == 0.0);
    CHECK(same.rel_l2 == 0.0);
    CHECK(same.peak_offset == 0.0);
    CHECK(compare(a, lorentzian(1.0, 0.05, 2.0)).linf < 1e-15);

    const auto b = lorentzian(1.02, 0.05, 1.0, 0.5, 2.5, 1301);
    const auto ab = compare(a, b);
    const auto ba = compare(b, a);
    CHECK(ab.linf == doctest::Approx(ba.linf).epsilon(1e-12));
    CHECK(ab.rel_l2 > 0.0);
    CHECK(ab.peak_offset == doctest::Approx(-0.02).epsilon(1e-2));
    CHECK(ab.omega_lo == 0.5);
    CHECK(ab.omega_hi == 2.0);
    // shifted unit Lorentzians: max difference ≈ 0.65·(shift/hwhm) for small shifts
    CHECK(ab.linf == doctest::Approx(0.65 * 0.4).epsilon(0.15));

    const auto j = nlohmann::json::parse(ab.to_json());
    CHECK(j.at("linf").get<double>() == ab.linf);

    CHECK_THROWS_AS(compare(lorentzian(1.0, 0.1, 1.0, 0.0, 1.0), lorentzian(3.0, 0.1, 1.0, 2.0, 4.0)),
                    ValidationError);
}

TEST_CASE("interpolation") {
    SpectrumSeries s;
    s.omega = {0.0, 1.0, 3.0};
    s.value = {0.0, 2.0, 0.0};
    CHECK(interpolate(s, 0.5) == 1.0);
    CHECK(interpolate(s, 2.0) == 1.0);
    CHECK(interpolate(s, 3.0) == 0.0);
}

TEST_CASE("splitting estimate") {
    CHECK(splitting_estimate(TrwaKernels(ModelParams::with_distance(0.0, 1.0, InitialState::Psi0))) == 0.0);
    const auto p = ModelParams::with_distance(0.05, 1.0, InitialState::Psi0);
    const TrwaKernels k(p);
    const double est = splitting_estimate(k);
    CHECK(est == doctest::Approx(0.2210).epsilon(2e-3));
    CHECK(est == doctest::Approx(splitting_estimate(TrwaKernels(ModelParams::with_distance(0.05, -1.0,
                                                                                           InitialState::Psi0))))
                     .epsilon(1e-12));

    const auto spec = trwa_spectrum(k, default_grid(5.0, 20001), 5.0 / 20001, InitialState::Psi0);
    const auto peaks = find_peaks(spec);
    REQUIRE(peaks.size() == 2);
    const double measured = peaks[1].position - peaks[0].position;
    CHECK(std::abs(measured / est - 1.0) < 0.15);

    double prev = 0.0;
    for (double a = 0.01; a <= 0.1 + 1e-12; a += 0.01) {
        const double e = splitting_estimate(TrwaKernels(ModelParams::with_distance(a, 1.0, InitialState::Psi0)));
        CHECK(e > prev);
        prev = e;
    }
}
