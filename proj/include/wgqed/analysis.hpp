// analysis.hpp — Peak extraction and spectrum comparison.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wgqed/analytic.hpp"
#include "wgqed/spectrum.hpp"

namespace wgqed {

struct Peak {
    double position{0.0};
    double height{0.0};
    double prominence{0.0};
    /// Full width at half height by linear interpolation; NaN when a side
    /// never drops below half height inside the series.
    double fwhm{0.0};
};

/// Local maxima whose topographic prominence is at least
/// min_prominence × global maximum, ordered by position.
std::vector<Peak> find_peaks(const SpectrumSeries& s, double min_prominence = 0.02);

/// Highest peak of the series. Throws on an empty or all-zero series.
Peak dominant_peak(const SpectrumSeries& s, double min_prominence = 0.02);

void write_peaks_csv(std::ostream& os, const std::vector<Peak>& peaks);

struct ComparisonReport {
    std::string method_a;
    std::string method_b;
    std::size_t points{0};
    double omega_lo{0.0};
    double omega_hi{0.0};
    double linf{0.0};
    double rel_l2{0.0};
    double peak_a{0.0};
    double peak_b{0.0};
    double peak_offset{0.0};   // peak_a − peak_b
    double fwhm_a{0.0};
    double fwhm_b{0.0};

    std::string to_json() const;
};

/// Linear interpolation of s at ω (ω inside the sampled range).
double interpolate(const SpectrumSeries& s, double omega);

/// Both series are normalized to unit maximum and compared on the union of
/// their grid points inside the overlapping range. Throws ValidationError when
/// the ranges are disjoint.
ComparisonReport compare(const SpectrumSeries& a, const SpectrumSeries& b);

/// Expected separation of the Ψ₀ doublet, 2|V_c + Δ̃(ηω₀, d)|.
double splitting_estimate(const TrwaKernels& k);

} // namespace wgqed
