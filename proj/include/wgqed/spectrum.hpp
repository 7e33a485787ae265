// spectrum.hpp — Sampled emission spectrum N(ω) with provenance metadata.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wgqed {

struct SpectrumMeta {
    std::string method;                    // "multiD1", "TRWA", "SP"
    std::string params_hash;
    double time{0.0};                      // evaluation time; 0 for steady-state theories
    std::map<std::string, double> values;  // eta, V_c, alpha, d, ...
    std::map<std::string, std::string> tags;
};

struct SpectrumSeries {
    std::vector<double> omega;
    std::vector<double> value;
    SpectrumMeta meta;

    std::size_t size() const noexcept { return omega.size(); }
    bool empty() const noexcept { return omega.empty(); }
    double max_value() const noexcept;
    /// ω strictly increasing, sizes equal, values ≥ −1e−12.
    void validate() const;
};

void write_spectrum_csv(std::ostream& os, const SpectrumSeries& s);
SpectrumSeries read_spectrum_csv(std::istream& is);
std::string spectrum_meta_json(const SpectrumSeries& s);

/// Writes <stem>.csv and <stem>.json.
void save_spectrum(const std::filesystem::path& stem, const SpectrumSeries& s);
/// Reads <path>; picks up a .json sidecar next to it when present.
SpectrumSeries load_spectrum(const std::filesystem::path& csv_path);

} // namespace wgqed
