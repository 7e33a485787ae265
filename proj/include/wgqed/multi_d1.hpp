// multi_d1.hpp — Multi-Davydov-D1 state, coherent-state overlaps and observables.
//
//   |D⟩ = Σ_j Σ_n A_nj |φ_j⟩ |f_nj⟩,   |f⟩ = exp[Σ_k (f_k b_k† − h.c.)]|0⟩
//
// Storage: a is M×4 (row n, column j); f[j] is K×M (column n holds f_nj).

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/bath.hpp"
#include "wgqed/model.hpp"
#include "wgqed/spectrum.hpp"

namespace wgqed {

struct MultiD1State {
    int m{1};
    Eigen::MatrixXcd a;                          // M × 4
    std::array<Eigen::MatrixXcd, kBasisSize> f;  // K × M per branch
    double t{0.0};

    Eigen::Index modes() const noexcept { return f[0].rows(); }
    bool all_finite() const noexcept;

    /// Zero state with the right shapes.
    static MultiD1State zeros(int m, Eigen::Index modes);
    /// A_1j = c_j, all other A = 0. f_1j = 0 (vacuum); for n > 1 the
    /// displacements get complex Gaussian jitter of the given scale.
    static MultiD1State initial(const InitialQubitAmplitudes& amp, int m, Eigen::Index modes,
                                std::uint64_t seed = 0, double noise_scale = 1e-3);

    MultiD1State& operator+=(const MultiD1State& other);
    MultiD1State& operator*=(double s);
};

/// Adds s·x to y in place (parameters only; y.t unchanged).
void axpy(double s, const MultiD1State& x, MultiD1State& y);

/// log⟨f_a|f_b⟩ = Σ_k [f*_a f_b − (|f_a|² + |f_b|²)/2].
cplx log_overlap(const Eigen::Ref<const Eigen::VectorXcd>& fa, const Eigen::Ref<const Eigen::VectorXcd>& fb);
cplx overlap(const Eigen::Ref<const Eigen::VectorXcd>& fa, const Eigen::Ref<const Eigen::VectorXcd>& fb);

/// All overlaps ⟨f_mj|f_nl⟩, stored as block(j, l)(m, n).
class OverlapTable {
public:
    explicit OverlapTable(const MultiD1State& s);
    const Eigen::MatrixXcd& block(int j, int l) const noexcept { return blocks_[j][l]; }

private:
    std::array<std::array<Eigen::MatrixXcd, kBasisSize>, kBasisSize> blocks_;
};

/// Gram matrix G_mn = ⟨f_m|f_n⟩ of a set of displacement vectors (columns).
Eigen::MatrixXcd gram_matrix(const Eigen::MatrixXcd& displacements);

double state_norm(const MultiD1State& s, const OverlapTable& ov);
double state_norm(const MultiD1State& s);

/// ⟨D|op ⊗ 1|D⟩ for a 4×4 operator acting on the qubits only.
cplx system_expectation(const MultiD1State& s, const OverlapTable& ov, const Eigen::Matrix4cd& op);

/// Excited-state populations P_j^e = ⟨σ_j⁺σ_j⁻⟩ = ⟨(1 + σ_jᶻ)/2⟩.
std::array<double, 2> populations(const MultiD1State& s, const OverlapTable& ov);
std::array<double, 2> populations(const MultiD1State& s);

struct ObservableDiagnostics {
    double max_imag_residue{0.0};
    double min_photon_number{0.0};
    std::vector<std::string> warnings;
};

/// N(k,t) = ⟨b_k†b_k⟩ for every mode. Imaginary residues below 1e−10 are dropped;
/// larger residues and values below −1e−8 are reported through diag.
Eigen::VectorXd photon_numbers(const MultiD1State& s, const OverlapTable& ov,
                               ObservableDiagnostics* diag = nullptr);
Eigen::VectorXd photon_numbers(const MultiD1State& s);

/// Mirror-summed N(ω_k, t) = N(k,t) + N(−k,t) on the right-branch frequencies.
SpectrumSeries emission_spectrum_snapshot(const MultiD1State& s, const DiscretizedBath& bath);
SpectrumSeries emission_spectrum_snapshot(const Eigen::VectorXd& n_k, const DiscretizedBath& bath, double t);

struct ObservableRecord {
    double t{0.0};
    std::array<double, 2> p_e{};
    Eigen::VectorXd n_k;
    double norm{1.0};
    double sigma2{0.0};
    double energy{0.0};  // lab-frame ⟨H⟩
};

/// CSV with columns t,P1,P2,norm,sigma2,energy.
void write_trajectory_csv(std::ostream& os, const std::vector<ObservableRecord>& records);
/// Rows are output times, columns N(ω_k, t) on the right-branch frequencies.
void write_photon_matrix_csv(std::ostream& os, const std::vector<ObservableRecord>& records,
                             const DiscretizedBath& bath);

} // namespace wgqed
