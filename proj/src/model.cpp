// model.cpp — Model parameters, spectral density and basis operators.

#include "wgqed/model.hpp"

#include <cmath>

namespace wgqed {

std::string to_string(InitialState s) {
    switch (s) {
        case InitialState::Psi0: return "Psi0";
        case InitialState::PsiPlus: return "PsiPlus";
        case InitialState::PsiMinus: return "PsiMinus";
    }
    return "unknown";
}

InitialState initial_state_from_string(std::string_view name) {
    if (name == "Psi0" || name == "psi0") return InitialState::Psi0;
    if (name == "PsiPlus" || name == "psiplus" || name == "Psi+") return InitialState::PsiPlus;
    if (name == "PsiMinus" || name == "psiminus" || name == "Psi-") return InitialState::PsiMinus;
    throw ValidationError("unknown initial state '" + std::string(name) + "'");
}

ModelParams ModelParams::make(double alpha, double omega_c, double x1, double x2,
                              InitialState state, double v_g, double omega0) {
    ModelParams p;
    p.alpha = alpha;
    p.omega_c = omega_c;
    p.x1 = x1;
    p.x2 = x2;
    p.initial_state = state;
    p.v_g = v_g;
    p.omega0 = omega0;
    p.validate();
    return p;
}

ModelParams ModelParams::with_distance(double alpha, double d, InitialState state, double omega_c) {
    return make(alpha, omega_c, d, 0.0, state);
}

void ModelParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be >= 0");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ValidationError("omega_c must be > 0");
    if (!(v_g > 0.0) || !std::isfinite(v_g)) throw ValidationError("v_g must be > 0");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ValidationError("omega0 must be > 0");
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw ValidationError("qubit positions must be finite");
}

double spectral_density(double omega, const ModelParams& p) noexcept {
    if (!(omega > 0.0) || !(omega < p.omega_c)) return 0.0;
    return 2.0 * p.alpha * omega;
}

double InitialQubitAmplitudes::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return s;
}

InitialQubitAmplitudes initial_amplitudes(InitialState state) {
    // |e⟩ = (|+⟩ + |−⟩)/√2, |g⟩ = (|+⟩ − |−⟩)/√2
    // |eg⟩ = (|++⟩ − |+−⟩ + |−+⟩ − |−−⟩)/2, |ge⟩ = (|++⟩ + |+−⟩ − |−+⟩ − |−−⟩)/2
    const double r = 1.0 / std::sqrt(2.0);
    InitialQubitAmplitudes out;
    switch (state) {
        case InitialState::Psi0:
            out.c = {0.5, -0.5, 0.5, -0.5};
            break;
        case InitialState::PsiPlus:
            out.c = {r, 0.0, 0.0, -r};
            break;
        case InitialState::PsiMinus:
            out.c = {0.0, -r, r, 0.0};
            break;
    }
    return out;
}

SystemMatrices system_matrix_elements(double omega0) {
    SystemMatrices m;
    for (int h = 0; h < 2; ++h) {
        m.sx[h].setZero();
        m.sz[h].setZero();
        const int flip = h == 0 ? 2 : 1;
        for (int j = 0; j < kBasisSize; ++j) {
            m.sx[h](j, j) = static_cast<double>(sigma_x_sign(h, j));
            m.sz[h](j ^ flip, j) = 1.0;
        }
    }
    m.h_s = 0.5 * omega0 * (m.sz[0] + m.sz[1]);
    m.h_s_squared = m.h_s * m.h_s;
    m.sx1sx2 = m.sx[0] * m.sx[1];
    for (int h = 0; h < 2; ++h) m.anti_hs_sx[h] = m.h_s * m.sx[h] + m.sx[h] * m.h_s;
    return m;
}

} // namespace wgqed
