// analysis.cpp — Peak extraction and spectrum comparison.

#include "wgqed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace wgqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return x0;
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

double half_width(const SpectrumSeries& s, std::size_t i) {
    const auto& y = s.value;
    const auto& x = s.omega;
    const double half = 0.5 * y[i];
    double left = kNaN;
    for (std::size_t j = i; j-- > 0;) {
        if (y[j] <= half) {
            left = crossing(x[j], y[j], x[j + 1], y[j + 1], half);
            break;
        }
    }
    double right = kNaN;
    for (std::size_t j = i + 1; j < y.size(); ++j) {
        if (y[j] <= half) {
            right = crossing(x[j - 1], y[j - 1], x[j], y[j], half);
            break;
        }
    }
    return right - left;
}

double prominence(const std::vector<double>& y, std::size_t i) {
    double left_min = y[i];
    for (std::size_t j = i; j-- > 0;) {
        if (y[j] > y[i]) break;
        left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < y.size(); ++j) {
        if (y[j] > y[i]) break;
        right_min = std::min(right_min, y[j]);
    }
    return y[i] - std::max(left_min, right_min);
}

} // namespace

std::vector<Peak> find_peaks(const SpectrumSeries& s, double min_prominence) {
    s.validate();
    std::vector<Peak> peaks;
    const auto& y = s.value;
    const std::size_t n = y.size();
    if (n == 0) return peaks;
    const double top = s.max_value();
    if (!(top > 0.0)) return peaks;

    for (std::size_t i = 0; i < n; ++i) {
        // Plateaus count once, at their left edge.
        const bool rises = i == 0 || y[i] > y[i - 1];
        std::size_t k = i;
        while (k + 1 < n && y[k + 1] == y[i]) ++k;
        const bool falls = k + 1 == n || y[k + 1] < y[i];
        if (!rises || !falls) {
            i = k;
            continue;
        }
        const double prom = prominence(y, i);
        if (prom >= min_prominence * top) {
            Peak p;
            p.position = 0.5 * (s.omega[i] + s.omega[k]);
            p.height = y[i];
            p.prominence = prom;
            p.fwhm = half_width(s, i);
            peaks.push_back(p);
        }
        i = k;
    }
    return peaks;
}

Peak dominant_peak(const SpectrumSeries& s, double min_prominence) {
    const auto peaks = find_peaks(s, min_prominence);
    if (peaks.empty()) throw ValidationError("spectrum has no peak");
    return *std::max_element(peaks.begin(), peaks.end(),
                             [](const Peak& a, const Peak& b) { return a.height < b.height; });
}

void write_peaks_csv(std::ostream& os, const std::vector<Peak>& peaks) {
    os << "position,height,prominence,fwhm\n" << std::setprecision(12);
    for (const auto& p : peaks) os << p.position << ',' << p.height << ',' << p.prominence << ',' << p.fwhm << '\n';
}

double interpolate(const SpectrumSeries& s, double omega) {
    const auto& x = s.omega;
    if (x.empty() || omega < x.front() || omega > x.back()) throw ValidationError("interpolation outside spectrum range");
    auto it = std::lower_bound(x.begin(), x.end(), omega);
    const auto j = static_cast<std::size_t>(it - x.begin());
    if (x[j] == omega) return s.value[j];
    const double t = (omega - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - t) * s.value[j - 1] + t * s.value[j];
}

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["method_a"] = method_a;
    j["method_b"] = method_b;
    j["points"] = points;
    j["omega_range"] = {omega_lo, omega_hi};
    j["linf"] = linf;
    j["rel_l2"] = rel_l2;
    j["peak_a"] = peak_a;
    j["peak_b"] = peak_b;
    j["peak_offset"] = peak_offset;
    j["fwhm_a"] = std::isfinite(fwhm_a) ? nlohmann::json(fwhm_a) : nlohmann::json(nullptr);
    j["fwhm_b"] = std::isfinite(fwhm_b) ? nlohmann::json(fwhm_b) : nlohmann::json(nullptr);
    return j.dump(2);
}

ComparisonReport compare(const SpectrumSeries& a, const SpectrumSeries& b) {
    a.validate();
    b.validate();
    if (a.empty() || b.empty()) throw ValidationError("cannot compare an empty spectrum");
    const double lo = std::max(a.omega.front(), b.omega.front());
    const double hi = std::min(a.omega.back(), b.omega.back());
    if (!(lo < hi)) throw ValidationError("spectra have disjoint frequency ranges");
    const double na = a.max_value();
    const double nb = b.max_value();
    if (!(na > 0.0) || !(nb > 0.0)) throw ValidationError("cannot normalize an all-zero spectrum");

    std::vector<double> grid;
    for (const auto* s : {&a, &b})
        for (double w : s->omega)
            if (w >= lo && w <= hi) grid.push_back(w);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    ComparisonReport r;
    r.method_a = a.meta.method;
    r.method_b = b.meta.method;
    r.points = grid.size();
    r.omega_lo = lo;
    r.omega_hi = hi;
    double diff2 = 0.0, a2 = 0.0, b2 = 0.0;
    for (double w : grid) {
        const double ya = interpolate(a, w) / na;
        const double yb = interpolate(b, w) / nb;
        r.linf = std::max(r.linf, std::abs(ya - yb));
        diff2 += (ya - yb) * (ya - yb);
        a2 += ya * ya;
        b2 += yb * yb;
    }
    r.rel_l2 = std::sqrt(diff2) / std::sqrt(std::max(a2, b2));
    const Peak pa = dominant_peak(a);
    const Peak pb = dominant_peak(b);
    r.peak_a = pa.position;
    r.peak_b = pb.position;
    r.peak_offset = pa.position - pb.position;
    r.fwhm_a = pa.fwhm;
    r.fwhm_b = pb.fwhm;
    return r;
}

double splitting_estimate(const TrwaKernels& k) {
    const double a = k.renormalized_frequency();
    return 2.0 * std::abs(k.v_c() + k.delta(a, k.params().d()));
}

} // namespace wgqed
