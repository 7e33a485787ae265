// analytic.hpp — Closed-form steady-state emission spectra.
//
// TRWA: polaron-like transformation followed by the rotating-wave
// approximation, with renormalized splitting ηω₀, induced coupling V_c σ₁ˣσ₂ˣ
// and couplings λ̃_k = λ_k ηω₀/(ηω₀ + ω_k).
// SP: second-order resolvent treatment of the untransformed Hamiltonian.
//
// Photon numbers per mode k (phase e^{−ikd}, d = x₁ − x₂):
//   TRWA Ψ₀ : λ̃²|(Ã + e^{−ikd}B̃)/(Ã² − B̃²) + 1/(2ηω₀)|²   at ω̃_k = ω_k − V_c²/(2ηω₀)
//   TRWA Ψ± : λ̃²|(1 ± e^{−ikd})/√2|² |1/(Ã ∓ B̃) + 1/(2ηω₀)|²
//   SP   Ψ₀ : (λ²/4)|(A + e^{−ikd}B)/(A² − B²)|²              at ω′_k = ω_k + 2Δ(−ω₀, 0)
//   SP   Ψ± : (λ²/4)|(1 ± e^{−ikd})/√2|² / |A ∓ B|²

#pragma once

#include <span>
#include <vector>

#include "wgqed/bath.hpp"
#include "wgqed/model.hpp"
#include "wgqed/quadrature.hpp"
#include "wgqed/spectrum.hpp"

namespace wgqed {

enum class Theory { TRWA, SP };

std::string to_string(Theory t);

/// ∫₀^{ω_c} J(x)/(x + a)² dx = 2α[ln((ω_c + a)/a) + a/(ω_c + a) − 1].
double eta_exponent_integral(double alpha, double omega_c, double a);

/// Fixed point of η = exp[−½∫₀^{ω_c} J(x)/(x + ηω₀)² dx], damped iteration
/// with factor 0.5 until |Δη| < tol. Throws after max_iter iterations.
double solve_eta(const ModelParams& p, double tol = 1e-13, int max_iter = 200);

/// V_c = −∫₀^{ω_c} J(x)(x + 2ηω₀)/(2(x + ηω₀)²) cos(xd/v_g) dx.
double dipole_coupling_vc(const ModelParams& p, double eta, const quad::Options& opt = {});
/// Same quantity as the mode sum Σ_k (λ_k²/2ω_k)(ξ_k² − 2ξ_k) cos(kd).
double dipole_coupling_vc_discrete(const ModelParams& p, const DiscretizedBath& bath, double eta);

/// Pair of coefficients entering the resolvent denominators.
struct ResolventPair {
    cplx a;
    cplx b;
};

class TrwaKernels {
public:
    explicit TrwaKernels(const ModelParams& p, quad::Options opt = {});

    const ModelParams& params() const noexcept { return p_; }
    double eta() const noexcept { return eta_; }
    double v_c() const noexcept { return v_c_; }
    double renormalized_frequency() const noexcept { return eta_ * p_.omega0; }

    /// Δ̃(ω,d) = P∫ J(x) cos(xd/v_g)/(ω − x) (ηω₀/(x + ηω₀))² dx.
    double delta(double omega, double d) const;
    /// Γ̃(ω,d) = π (ηω₀/(ω + ηω₀))² J(ω) cos(ωd/v_g).
    double gamma(double omega, double d) const;
    cplx a_tilde(double omega) const;
    cplx b_tilde(double omega) const;
    ResolventPair pair(double omega) const;
    double omega_tilde(double omega_k) const;
    /// λ̃_k² from the bare λ_k².
    double lambda_tilde2(double lambda2, double omega_k) const;

private:
    ModelParams p_;
    quad::Options opt_;
    double eta_;
    double v_c_;
};

class SpKernels {
public:
    explicit SpKernels(const ModelParams& p, quad::Options opt = {});

    const ModelParams& params() const noexcept { return p_; }

    /// Δ(ω,d) = P∫ J(x) cos(xd/v_g)/(4(ω − x)) dx.
    double delta(double omega, double d) const;
    /// Γ(ω,d) = (π/4) J(ω) cos(ωd/v_g).
    double gamma(double omega, double d) const;
    cplx a(double omega) const;
    cplx b(double omega) const;
    ResolventPair pair(double omega) const;
    /// ω′_k = ω_k + 2Δ(−ω₀, 0).
    double omega_prime(double omega_k) const;
    double pole_shift() const noexcept { return shift_; }

private:
    ModelParams p_;
    quad::Options opt_;
    double shift_;
};

/// Lamb shift Δ̃ (TRWA) or Δ (SP).
double lamb_shift_pv(double omega, double d, const TrwaKernels& k);
double lamb_shift_pv(double omega, double d, const SpKernels& k);
/// Linewidth Γ̃ (TRWA) or Γ (SP).
double linewidth(double omega, double d, const TrwaKernels& k);
double linewidth(double omega, double d, const SpKernels& k);

/// Emission amplitudes of the correlated states for one mode with phase kd.
/// N_{Ψ±}(k) = |amp_±|² and N_{Ψ₀}(k) = ½|amp₊ + amp₋|².
struct CorrelatedAmplitudes {
    cplx plus;
    cplx minus;
};

CorrelatedAmplitudes trwa_correlated_amplitudes(const TrwaKernels& k, double omega_k, double kd, double lambda2);
CorrelatedAmplitudes sp_correlated_amplitudes(const SpKernels& k, double omega_k, double kd, double lambda2);

/// Closed-form photon number of one mode, given its resolvent pair at the shifted frequency.
double trwa_photon_number(const ResolventPair& ab, double eta_omega0, double kd, double lambda_tilde2,
                          InitialState state);
double sp_photon_number(const ResolventPair& ab, double kd, double lambda2, InitialState state);

/// Mirror-summed spectra N(ω) = N(k) + N(−k). The grid form uses the per-mode
/// weight λ² = ½J(ω)·bin_width; the bath form uses the bath's own λ_k².
/// Grid points must lie in (0, ω_c].
SpectrumSeries trwa_spectrum(const TrwaKernels& k, std::span<const double> grid, double bin_width,
                             InitialState state);
SpectrumSeries trwa_spectrum(const TrwaKernels& k, const DiscretizedBath& bath, InitialState state);
SpectrumSeries sp_spectrum(const SpKernels& k, std::span<const double> grid, double bin_width, InitialState state);
SpectrumSeries sp_spectrum(const SpKernels& k, const DiscretizedBath& bath, InitialState state);

/// n uniform points ω_i = ω_c·i/n, i = 1..n, on (0, ω_c].
std::vector<double> default_grid(double omega_c, std::size_t n = 2001);
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

} // namespace wgqed
