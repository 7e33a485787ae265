// run.hpp — Executes a RunConfig and writes its artifact directory.
//
// Layout of <output>/:
//   config.ini                 echo of the effective configuration
//   bath.csv                   mode table
//   trajectory.csv             t,P1,P2,norm,sigma2,energy        (multiD1)
//   photon_numbers.csv         N(ω_k, t) per output time         (multiD1)
//   final_state.json           checkpoint of the last state      (multiD1)
//   spectrum_<method>.csv/json final or steady-state spectrum
//   peaks_<method>.csv         peaks of that spectrum
//   compare_<a>_<b>.json       pairwise comparison (≥ 2 methods)
//   summary.json               file list, timings and solver diagnostics

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wgqed/analysis.hpp"
#include "wgqed/config.hpp"
#include "wgqed/dynamics.hpp"
#include "wgqed/spectrum.hpp"

namespace wgqed {

/// Environment variable that relative output directories are resolved against.
inline constexpr const char* kOutputRootEnv = "WGQED_OUTPUT_ROOT";

/// output_dir (or the run name when empty), prefixed by $WGQED_OUTPUT_ROOT
/// when that is set and the path is relative.
std::filesystem::path resolve_output_dir(const RunConfig& c);

struct RunResult {
    std::filesystem::path directory;
    std::map<Method, SpectrumSeries> spectra;
    std::vector<ComparisonReport> comparisons;
    std::optional<Trajectory> trajectory;
    std::vector<std::filesystem::path> files;
};

using ProgressCallback = std::function<void(const std::string&)>;

/// Validates, computes every selected method and writes the artifacts.
/// IntegrationFailure from the variational method propagates after the
/// configuration echo and bath table have been written.
RunResult run(const RunConfig& config, const ProgressCallback& progress = {});

/// Analytic spectrum of one theory on the grid selected by the config.
SpectrumSeries analytic_spectrum(const RunConfig& config, Method theory, const DiscretizedBath& bath);

} // namespace wgqed
