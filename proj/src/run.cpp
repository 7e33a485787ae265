// run.cpp — Run orchestration and artifact persistence.

#include "wgqed/run.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wgqed/analytic.hpp"
#include "wgqed/bath.hpp"
#include "wgqed/multi_d1.hpp"

namespace wgqed {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.precision(17);
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridKind effective_grid(const RunConfig& c) {
    if (c.grid != GridKind::Auto) return c.grid;
    return c.has(Method::MultiD1) ? GridKind::Bath : GridKind::Uniform;
}

} // namespace

fs::path resolve_output_dir(const RunConfig& c) {
    fs::path dir = c.output_dir.empty() ? fs::path(c.name) : c.output_dir;
    if (dir.is_relative())
        if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') dir = fs::path(root) / dir;
    return dir;
}

SpectrumSeries analytic_spectrum(const RunConfig& config, Method theory, const DiscretizedBath& bath) {
    const InitialState st = config.model.initial_state;
    const bool on_bath = effective_grid(config) == GridKind::Bath;
    const auto grid = default_grid(config.model.omega_c, config.grid_points);
    const double bin = config.model.omega_c / static_cast<double>(config.grid_points);
    switch (theory) {
        case Method::TRWA: {
            const TrwaKernels k(config.model);
            return on_bath ? trwa_spectrum(k, bath, st) : trwa_spectrum(k, grid, bin, st);
        }
        case Method::SP: {
            const SpKernels k(config.model);
            return on_bath ? sp_spectrum(k, bath, st) : sp_spectrum(k, grid, bin, st);
        }
        case Method::MultiD1: break;
    }
    throw ValidationError("analytic_spectrum: multiD1 is not an analytic theory");
}

RunResult run(const RunConfig& config, const ProgressCallback& progress) {
    config.validate();
    auto say = [&](const std::string& msg) {
        if (progress) progress(msg);
    };

    RunResult result;
    result.directory = resolve_output_dir(config);
    fs::create_directories(result.directory);
    auto write = [&](const std::string& name) {
        const fs::path p = result.directory / name;
        result.files.push_back(p);
        return open_out(p);
    };

    nlohmann::json summary;
    summary["name"] = config.name;
    summary["methods"] = nlohmann::json::array();
    for (Method m : config.methods) summary["methods"].push_back(to_string(m));

    {
        auto out = write("config.ini");
        write_config(out, config);
    }
    const DiscretizedBath bath = discretize(config.model, config.n_b);
    {
        auto out = write("bath.csv");
        write_bath_csv(out, bath);
    }

    if (config.has(Method::MultiD1)) {
        say("multiD1: propagating to t=" + std::to_string(config.integrator.t_final));
        const auto t0 = std::chrono::steady_clock::now();
        IntegratorConfig ic = config.integrator;
        ic.noise_seed = config.seed;
        const VariationalDynamics dyn(config.model, bath, ic.epsilon_reg);
        const auto init = MultiD1State::initial(initial_amplitudes(config.model.initial_state), config.multiplicity,
                                                static_cast<Eigen::Index>(bath.size()), ic.noise_seed, ic.noise_scale);
        Trajectory traj = propagate(init, dyn, ic);
        {
            auto out = write("trajectory.csv");
            write_trajectory_csv(out, traj.records);
        }
        {
            auto out = write("photon_numbers.csv");
            write_photon_matrix_csv(out, traj.records, bath);
        }
        const fs::path ckpt = result.directory / "final_state.json";
        save_checkpoint(ckpt.string(), traj.final_state);
        result.files.push_back(ckpt);

        SpectrumSeries s = emission_spectrum_snapshot(traj.records.back().n_k, bath, traj.records.back().t);
        result.spectra.emplace(Method::MultiD1, std::move(s));

        double max_sigma2 = 0.0;
        double max_norm_drift = 0.0;
        for (const auto& r : traj.records) {
            max_sigma2 = std::max(max_sigma2, r.sigma2);
            max_norm_drift = std::max(max_norm_drift, std::abs(r.norm - 1.0));
        }
        summary["multiD1"] = {{"seconds", seconds_since(t0)},
                              {"steps", traj.steps},
                              {"regularized_solves", traj.regularized_solves},
                              {"residual_exceedances", traj.residual_exceedances},
                              {"max_residual", traj.max_residual},
                              {"max_sigma2", max_sigma2},
                              {"max_norm_drift", max_norm_drift},
                              {"warnings", traj.diagnostics.warnings}};
        result.trajectory = std::move(traj);
    }

    for (Method m : {Method::TRWA, Method::SP}) {
        if (!config.has(m)) continue;
        say(to_string(m) + ": evaluating spectrum");
        const auto t0 = std::chrono::steady_clock::now();
        result.spectra.emplace(m, analytic_spectrum(config, m, bath));
        summary[to_string(m)] = {{"seconds", seconds_since(t0)}};
    }

    for (auto& [m, s] : result.spectra) {
        s.meta.tags["run"] = config.name;
        const fs::path stem = result.directory / ("spectrum_" + to_string(m));
        save_spectrum(stem, s);
        result.files.push_back(fs::path(stem).concat(".csv"));
        result.files.push_back(fs::path(stem).concat(".json"));
        auto out = write("peaks_" + to_string(m) + ".csv");
        write_peaks_csv(out, find_peaks(s));
    }

    for (auto a = result.spectra.begin(); a != result.spectra.end(); ++a)
        for (auto b = std::next(a); b != result.spectra.end(); ++b) {
            ComparisonReport rep = compare(a->second, b->second);
            auto out = write("compare_" + to_string(a->first) + "_" + to_string(b->first) + ".json");
            out << rep.to_json() << '\n';
            result.comparisons.push_back(std::move(rep));
        }

    summary["files"] = nlohmann::json::array();
    for (const auto& f : result.files) summary["files"].push_back(f.filename().string());
    {
        auto out = write("summary.json");
        out << summary.dump(2) << '\n';
    }
    say("wrote " + result.directory.string());
    return result;
}

} // namespace wgqed
