// model.hpp — Two-qubit waveguide model: parameters, Ohmic spectral density,
// initial states and system operators in the σˣ product basis.
//
// Units: ω₀ = 1 sets frequency/time units, L₀ = v_g/ω₀ sets distance.
// Basis ordering j = 0..3 is (|++⟩, |+−⟩, |−+⟩, |−−⟩) with σˣ|±⟩ = ±|±⟩.

#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace wgqed {

using cplx = std::complex<double>;

inline constexpr int kBasisSize = 4;

/// Thrown for out-of-range physical or numerical configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure (quadrature, fixed point, propagation)
/// cannot reach its target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class InitialState { Psi0, PsiPlus, PsiMinus };

std::string to_string(InitialState s);
InitialState initial_state_from_string(std::string_view name);

struct ModelParams {
    double omega0{1.0};
    double alpha{0.05};
    double omega_c{5.0};
    double v_g{1.0};
    double x1{1.0};
    double x2{0.0};
    InitialState initial_state{InitialState::Psi0};

    /// Validated construction; positions in units of L₀.
    static ModelParams make(double alpha, double omega_c, double x1, double x2,
                            InitialState state, double v_g = 1.0, double omega0 = 1.0);
    /// Convenience: qubits at x1 = d, x2 = 0.
    static ModelParams with_distance(double alpha, double d, InitialState state,
                                     double omega_c = 5.0);

    double d() const noexcept { return x1 - x2; }
    double position(int qubit) const noexcept { return qubit == 0 ? x1 : x2; }

    void validate() const;
};

/// J(ω) = 2αω Θ(ω_c − ω) for ω > 0; zero at and beyond ω_c and for ω ≤ 0.
double spectral_density(double omega, const ModelParams& p) noexcept;

/// Amplitudes of the two-qubit initial state over the σˣ product basis.
struct InitialQubitAmplitudes {
    std::array<cplx, kBasisSize> c{};
    double norm_squared() const noexcept;
};

InitialQubitAmplitudes initial_amplitudes(InitialState state);

/// ±1 eigenvalue of σ_hˣ (h = 0, 1) on basis state j.
constexpr int sigma_x_sign(int qubit, int j) noexcept {
    const int bit = qubit == 0 ? (j >> 1) & 1 : j & 1;
    return bit == 0 ? 1 : -1;
}

/// Dense 4×4 operators of the two-qubit system in the σˣ basis.
struct SystemMatrices {
    Eigen::Matrix4cd h_s;                  // (ω₀/2)(σ₁ᶻ + σ₂ᶻ)
    Eigen::Matrix4cd h_s_squared;
    std::array<Eigen::Matrix4cd, 2> sx;    // σ_hˣ, diagonal
    std::array<Eigen::Matrix4cd, 2> sz;    // σ_hᶻ, flips label h
    Eigen::Matrix4cd sx1sx2;
    std::array<Eigen::Matrix4cd, 2> anti_hs_sx;  // {H_S, σ_hˣ}
};

SystemMatrices system_matrix_elements(double omega0 = 1.0);

} // namespace wgqed
