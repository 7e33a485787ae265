// multi_d1.cpp — Multi-D1 state algebra and observables.

#include "wgqed/multi_d1.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace wgqed {

bool MultiD1State::all_finite() const noexcept {
    if (!a.allFinite()) return false;
    for (const auto& fj : f)
        if (!fj.allFinite()) return false;
    return std::isfinite(t);
}

MultiD1State MultiD1State::zeros(int m, Eigen::Index modes) {
    if (m < 1) throw ValidationError("multiplicity must be >= 1");
    MultiD1State s;
    s.m = m;
    s.a = Eigen::MatrixXcd::Zero(m, kBasisSize);
    for (auto& fj : s.f) fj = Eigen::MatrixXcd::Zero(modes, m);
    return s;
}

MultiD1State MultiD1State::initial(const InitialQubitAmplitudes& amp, int m, Eigen::Index modes,
                                   std::uint64_t seed, double noise_scale) {
    auto s = zeros(m, modes);
    for (int j = 0; j < kBasisSize; ++j) s.a(0, j) = amp.c[static_cast<std::size_t>(j)];
    if (m > 1 && noise_scale > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, noise_scale / std::sqrt(2.0));
        for (int j = 0; j < kBasisSize; ++j)
            for (int n = 1; n < m; ++n)
                for (Eigen::Index k = 0; k < modes; ++k) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    s.f[j](k, n) = cplx(re, im);
                }
    }
    return s;
}

MultiD1State& MultiD1State::operator+=(const MultiD1State& other) {
    a += other.a;
    for (int j = 0; j < kBasisSize; ++j) f[j] += other.f[j];
    return *this;
}

MultiD1State& MultiD1State::operator*=(double s) {
    a *= s;
    for (auto& fj : f) fj *= s;
    return *this;
}

void axpy(double s, const MultiD1State& x, MultiD1State& y) {
    y.a.noalias() += s * x.a;
    for (int j = 0; j < kBasisSize; ++j) y.f[j].noalias() += s * x.f[j];
}

cplx log_overlap(const Eigen::Ref<const Eigen::VectorXcd>& fa, const Eigen::Ref<const Eigen::VectorXcd>& fb) {
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < fa.size(); ++k)
        acc += std::conj(fa(k)) * fb(k) - 0.5 * (std::norm(fa(k)) + std::norm(fb(k)));
    return acc;
}

cplx overlap(const Eigen::Ref<const Eigen::VectorXcd>& fa, const Eigen::Ref<const Eigen::VectorXcd>& fb) {
    if (fa.size() != fb.size()) throw ValidationError("overlap: length mismatch");
    return std::exp(log_overlap(fa, fb));
}

namespace {

Eigen::MatrixXcd overlap_block(const Eigen::MatrixXcd& fa, const Eigen::VectorXd& na,
                               const Eigen::MatrixXcd& fb, const Eigen::VectorXd& nb) {
    Eigen::MatrixXcd out = fa.adjoint() * fb;
    for (Eigen::Index n = 0; n < out.cols(); ++n)
        for (Eigen::Index m = 0; m < out.rows(); ++m)
            out(m, n) = std::exp(out(m, n) - 0.5 * (na(m) + nb(n)));
    return out;
}

} // namespace

OverlapTable::OverlapTable(const MultiD1State& s) {
    std::array<Eigen::VectorXd, kBasisSize> norms;
    for (int j = 0; j < kBasisSize; ++j) norms[j] = s.f[j].colwise().squaredNorm().transpose();
    for (int j = 0; j < kBasisSize; ++j) {
        for (int l = j; l < kBasisSize; ++l) {
            blocks_[j][l] = overlap_block(s.f[j], norms[j], s.f[l], norms[l]);
            if (l != j) blocks_[l][j] = blocks_[j][l].adjoint();
        }
        blocks_[j][j].diagonal().setOnes();
    }
}

Eigen::MatrixXcd gram_matrix(const Eigen::MatrixXcd& displacements) {
    const Eigen::VectorXd norms = displacements.colwise().squaredNorm().transpose();
    Eigen::MatrixXcd g = overlap_block(displacements, norms, displacements, norms);
    g.diagonal().setOnes();
    return g;
}

cplx system_expectation(const MultiD1State& s, const OverlapTable& ov, const Eigen::Matrix4cd& op) {
    cplx acc = 0.0;
    for (int j = 0; j < kBasisSize; ++j)
        for (int l = 0; l < kBasisSize; ++l) {
            if (op(j, l) == cplx(0.0)) continue;
            acc += op(j, l) * s.a.col(j).dot(ov.block(j, l) * s.a.col(l));
        }
    return acc;
}

double state_norm(const MultiD1State& s, const OverlapTable& ov) {
    double acc = 0.0;
    for (int j = 0; j < kBasisSize; ++j) acc += std::real(s.a.col(j).dot(ov.block(j, j) * s.a.col(j)));
    return acc;
}

double state_norm(const MultiD1State& s) { return state_norm(s, OverlapTable(s)); }

std::array<double, 2> populations(const MultiD1State& s, const OverlapTable& ov) {
    static const SystemMatrices sys = system_matrix_elements(1.0);
    const double norm = state_norm(s, ov);
    std::array<double, 2> p{};
    for (int h = 0; h < 2; ++h) p[h] = 0.5 * (norm + std::real(system_expectation(s, ov, sys.sz[h])));
    return p;
}

std::array<double, 2> populations(const MultiD1State& s) { return populations(s, OverlapTable(s)); }

Eigen::VectorXd photon_numbers(const MultiD1State& s, const OverlapTable& ov, ObservableDiagnostics* diag) {
    const Eigen::Index modes = s.modes();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(modes);
    for (int j = 0; j < kBasisSize; ++j) {
        const Eigen::MatrixXcd fa = s.f[j] * s.a.col(j).asDiagonal();
        const Eigen::MatrixXcd t = fa * ov.block(j, j).transpose();
        acc += fa.conjugate().cwiseProduct(t).rowwise().sum();
    }
    Eigen::VectorXd n = acc.real();
    const double imag = modes > 0 ? acc.imag().cwiseAbs().maxCoeff() : 0.0;
    const double lowest = modes > 0 ? n.minCoeff() : 0.0;
    if (diag) {
        diag->max_imag_residue = std::max(diag->max_imag_residue, imag);
        diag->min_photon_number = std::min(diag->min_photon_number, lowest);
        if (imag > 1e-10) {
            std::ostringstream os;
            os << "photon number imaginary residue " << imag << " at t=" << s.t;
            diag->warnings.push_back(os.str());
        }
        if (lowest < -1e-8) {
            std::ostringstream os;
            os << "negative photon number " << lowest << " at t=" << s.t;
            diag->warnings.push_back(os.str());
        }
    }
    return n;
}

Eigen::VectorXd photon_numbers(const MultiD1State& s) { return photon_numbers(s, OverlapTable(s)); }

SpectrumSeries emission_spectrum_snapshot(const Eigen::VectorXd& n_k, const DiscretizedBath& bath, double t) {
    if (static_cast<std::size_t>(n_k.size()) != bath.size())
        throw ValidationError("emission_spectrum_snapshot: state and bath mode counts differ");
    SpectrumSeries out;
    out.omega.resize(bath.n_b);
    out.value.resize(bath.n_b);
    for (std::size_t i = 0; i < bath.n_b; ++i) {
        out.omega[i] = bath.omega(static_cast<Eigen::Index>(i));
        out.value[i] = n_k(static_cast<Eigen::Index>(i)) + n_k(static_cast<Eigen::Index>(bath.mirror(i)));
    }
    out.meta.method = "multiD1";
    out.meta.time = t;
    return out;
}

SpectrumSeries emission_spectrum_snapshot(const MultiD1State& s, const DiscretizedBath& bath) {
    return emission_spectrum_snapshot(photon_numbers(s), bath, s.t);
}

void write_trajectory_csv(std::ostream& os, const std::vector<ObservableRecord>& records) {
    os << "t,P1,P2,norm,sigma2,energy\n" << std::setprecision(17);
    for (const auto& r : records)
        os << r.t << ',' << r.p_e[0] << ',' << r.p_e[1] << ',' << r.norm << ',' << r.sigma2 << ','
           << r.energy << '\n';
}

void write_photon_matrix_csv(std::ostream& os, const std::vector<ObservableRecord>& records,
                             const DiscretizedBath& bath) {
    os << std::setprecision(17) << 't';
    for (std::size_t i = 0; i < bath.n_b; ++i) os << ',' << bath.omega(static_cast<Eigen::Index>(i));
    os << '\n';
    for (const auto& r : records) {
        os << r.t;
        for (std::size_t i = 0; i < bath.n_b; ++i)
            os << ',' << r.n_k(static_cast<Eigen::Index>(i)) + r.n_k(static_cast<Eigen::Index>(bath.mirror(i)));
        os << '\n';
    }
}

} // namespace wgqed
