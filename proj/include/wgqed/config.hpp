// config.hpp — Run configuration, its INI representation and named presets.
//
// File schema (all keys optional, defaults shown by `wgqed presets --show`):
//
//   [run]         name, methods (comma list of multiD1/TRWA/SP), output_dir, seed
//   [model]       omega0, alpha, omega_c, v_g, x1, x2, initial_state (Psi0/PsiPlus/PsiMinus)
//   [bath]        n_b
//   [ansatz]      multiplicity
//   [integrator]  dt, t_final, epsilon_reg, noise_scale, output_stride, norm_abort,
//                 residual_tol, residual_abort, epsilon_max
//   [spectrum]    grid (auto/bath/uniform), points
//
// Unknown sections or keys are rejected. Doubles are written in shortest
// round-trip form, so parse → serialize → parse is exact.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

enum class Method { MultiD1, TRWA, SP };

std::string to_string(Method m);
Method method_from_string(std::string_view name);

/// Where analytic spectra are sampled. `auto` uses the bath frequencies when
/// the variational method is part of the run, a uniform grid otherwise.
enum class GridKind { Auto, Bath, Uniform };

std::string to_string(GridKind g);
GridKind grid_kind_from_string(std::string_view name);

struct RunConfig {
    std::string name{"run"};
    ModelParams model;
    std::set<Method> methods{Method::TRWA, Method::SP};
    IntegratorConfig integrator;
    std::size_t n_b{300};
    int multiplicity{3};
    std::filesystem::path output_dir;  // empty → <name>
    std::uint64_t seed{1};
    GridKind grid{GridKind::Auto};
    std::size_t grid_points{2001};

    bool has(Method m) const { return methods.count(m) != 0; }
    /// Throws ValidationError: no methods, α ∉ [0,1], M ∉ [1,16], n_b ∉ [8,5000], ...
    void validate() const;

    bool operator==(const RunConfig&) const;
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& os, const RunConfig& c);
std::string serialize_config(const RunConfig& c);

/// Applies "section.key=value" (or key and value separately).
void apply_override(RunConfig& c, std::string_view assignment);
void apply_override(RunConfig& c, const std::string& key, const std::string& value);

struct Preset {
    std::string name;
    std::string description;
    RunConfig config;
};

/// fig1a..fig1i (α = 0.05, all methods), fig2a..fig2i (α = 0.1, multiD1 and
/// TRWA), fig3, weak (α = 0.001), and a "-desk" variant of every variational
/// preset with reduced N_b, M and t_final ≤ 150.
std::vector<Preset> presets();
/// Throws ValidationError for unknown names.
RunConfig preset(std::string_view name);

} // namespace wgqed
