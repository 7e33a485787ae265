// spectrum.cpp — SpectrumSeries persistence.

#include "wgqed/spectrum.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wgqed/model.hpp"

namespace wgqed {

double SpectrumSeries::max_value() const noexcept {
    if (value.empty()) return 0.0;
    return *std::max_element(value.begin(), value.end());
}

void SpectrumSeries::validate() const {
    if (omega.size() != value.size()) throw ValidationError("spectrum: omega/value size mismatch");
    for (std::size_t i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1])) throw ValidationError("spectrum: omega must be strictly increasing");
    for (double v : value)
        if (!(v >= -1e-12)) throw ValidationError("spectrum: negative value");
}

void write_spectrum_csv(std::ostream& os, const SpectrumSeries& s) {
    os << "omega,N\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i) os << s.omega[i] << ',' << s.value[i] << '\n';
}

SpectrumSeries read_spectrum_csv(std::istream& is) {
    SpectrumSeries s;
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("spectrum csv: empty input");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("spectrum csv: malformed line '" + line + "'");
        s.omega.push_back(std::stod(line.substr(0, comma)));
        s.value.push_back(std::stod(line.substr(comma + 1)));
    }
    return s;
}

std::string spectrum_meta_json(const SpectrumSeries& s) {
    nlohmann::json j;
    j["method"] = s.meta.method;
    j["params_hash"] = s.meta.params_hash;
    j["time"] = s.meta.time;
    j["points"] = s.size();
    j["values"] = s.meta.values;
    j["tags"] = s.meta.tags;
    return j.dump(2);
}

void save_spectrum(const std::filesystem::path& stem, const SpectrumSeries& s) {
    auto csv = stem;
    csv += ".csv";
    auto meta = stem;
    meta += ".json";
    std::ofstream c(csv);
    if (!c) throw std::runtime_error("cannot write " + csv.string());
    write_spectrum_csv(c, s);
    std::ofstream m(meta);
    if (!m) throw std::runtime_error("cannot write " + meta.string());
    m << spectrum_meta_json(s) << '\n';
}

SpectrumSeries load_spectrum(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ValidationError("cannot open spectrum " + csv_path.string());
    auto s = read_spectrum_csv(in);
    auto sidecar = csv_path;
    sidecar.replace_extension(".json");
    if (std::ifstream m(sidecar); m) {
        const auto j = nlohmann::json::parse(m);
        s.meta.method = j.value("method", "");
        s.meta.params_hash = j.value("params_hash", "");
        s.meta.time = j.value("time", 0.0);
        if (j.contains("values")) s.meta.values = j["values"].get<std::map<std::string, double>>();
        if (j.contains("tags")) s.meta.tags = j["tags"].get<std::map<std::string, std::string>>();
    }
    return s;
}

} // namespace wgqed
