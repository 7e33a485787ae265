// wgqed.cpp — Command-line front end: run, presets, compare, bath-dump.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
// failure (integration or quadrature), 1 anything else (I/O, ...).

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wgqed/analysis.hpp"
#include "wgqed/bath.hpp"
#include "wgqed/config.hpp"
#include "wgqed/run.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct ConfigSource {
    std::string preset;
    std::string file;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
    auto* p = cmd->add_option("-p,--preset", src.preset, "Start from a named preset");
    auto* f = cmd->add_option("-c,--config", src.file, "Start from an INI config file");
    p->excludes(f);
    cmd->add_option("-s,--set", src.overrides, "Override a key, e.g. --set model.alpha=0.1")->take_all();
}

wgqed::RunConfig build_config(const ConfigSource& src) {
    wgqed::RunConfig c;
    if (!src.preset.empty()) c = wgqed::preset(src.preset);
    if (!src.file.empty()) c = wgqed::load_config(src.file);
    for (const auto& o : src.overrides) wgqed::apply_override(c, o);
    return c;
}

int cmd_run(const ConfigSource& src, const std::string& output, bool quiet) {
    auto c = build_config(src);
    if (!output.empty()) c.output_dir = output;
    auto progress = [quiet](const std::string& msg) {
        if (!quiet) std::cerr << "[wgqed] " << msg << '\n';
    };
    const auto r = wgqed::run(c, progress);
    for (const auto& rep : r.comparisons)
        std::cout << rep.method_a << " vs " << rep.method_b << ": linf=" << rep.linf << " rel_l2=" << rep.rel_l2
                  << " peak_offset=" << rep.peak_offset << '\n';
    std::cout << r.directory.string() << '\n';
    return 0;
}

int cmd_presets(const std::string& show) {
    if (!show.empty()) {
        wgqed::write_config(std::cout, wgqed::preset(show));
        return 0;
    }
    for (const auto& p : wgqed::presets()) std::cout << p.name << '\t' << p.description << '\n';
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& output) {
    const auto sa = wgqed::load_spectrum(a);
    const auto sb = wgqed::load_spectrum(b);
    const auto rep = wgqed::compare(sa, sb);
    if (output.empty()) {
        std::cout << rep.to_json() << '\n';
    } else {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot write " + output);
        out << rep.to_json() << '\n';
    }
    return 0;
}

int cmd_bath_dump(const ConfigSource& src, const std::string& output) {
    const auto c = build_config(src);
    c.validate();
    const auto bath = wgqed::discretize(c.model, c.n_b);
    if (output.empty()) {
        wgqed::write_bath_csv(std::cout, bath);
    } else {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot write " + output);
        wgqed::write_bath_csv(out, bath);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit waveguide emission spectra: multi-D1 dynamics, TRWA and SP theories"};
    app.require_subcommand(1);

    ConfigSource run_src;
    std::string run_output;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Execute a configuration and write its artifact directory");
    add_config_options(run, run_src);
    run->add_option("-o,--output", run_output, "Output directory (relative paths use $WGQED_OUTPUT_ROOT)");
    run->add_flag("-q,--quiet", quiet, "No progress messages");

    std::string show;
    auto* pre = app.add_subcommand("presets", "List presets, or print one as INI");
    pre->add_option("--show", show, "Preset to print");

    std::string cmp_a, cmp_b, cmp_out;
    auto* cmp = app.add_subcommand("compare", "Compare two spectrum CSV files");
    cmp->add_option("a", cmp_a, "First spectrum CSV")->required()->check(CLI::ExistingFile);
    cmp->add_option("b", cmp_b, "Second spectrum CSV")->required()->check(CLI::ExistingFile);
    cmp->add_option("-o,--output", cmp_out, "Write the JSON report here instead of stdout");

    ConfigSource bath_src;
    std::string bath_out;
    auto* bd = app.add_subcommand("bath-dump", "Print the discretized mode table as CSV");
    add_config_options(bd, bath_src);
    bd->add_option("-o,--output", bath_out, "Write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) return cmd_run(run_src, run_output, quiet);
        if (*pre) return cmd_presets(show);
        if (*cmp) return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (*bd) return cmd_bath_dump(bath_src, bath_out);
    } catch (const wgqed::ValidationError& e) {
        std::cerr << "wgqed: invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const wgqed::IntegrationFailure& e) {
        std::cerr << "wgqed: integration failed at t=" << e.time() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const wgqed::NumericalError& e) {
        std::cerr << "wgqed: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "wgqed: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
