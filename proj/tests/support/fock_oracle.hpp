// fock_oracle.hpp — Dense truncated-Fock reference for small baths.
//
// Basis: qubit label j (σx basis, same order as the library) ⊗ occupation
// numbers n_0..n_{K-1} in [0, nmax], mixed radix with mode 0 slowest.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/bath.hpp"
#include "wgqed/model.hpp"
#include "wgqed/multi_d1.hpp"

namespace wgqed::testing {

class FockSpace {
public:
    FockSpace(const ModelParams& p, const DiscretizedBath& bath, int nmax)
        : p_(p), bath_(bath), nmax_(nmax), modes_(static_cast<int>(bath.size())) {
        stride_.assign(modes_, 1);
        for (int k = modes_ - 2; k >= 0; --k) stride_[k] = stride_[k + 1] * (nmax_ + 1);
        bath_dim_ = modes_ == 0 ? 1 : stride_[0] * (nmax_ + 1);
        sys_ = system_matrix_elements(p.omega0);
    }

    Eigen::Index dim() const { return kBasisSize * bath_dim_; }
    Eigen::Index bath_dim() const { return bath_dim_; }
    int occupation(Eigen::Index b, int k) const { return static_cast<int>((b / stride_[k]) % (nmax_ + 1)); }

    /// Truncated (unrenormalized) coherent state of the bath.
    Eigen::VectorXcd coherent(const Eigen::VectorXcd& f) const {
        Eigen::VectorXcd v(bath_dim_);
        std::vector<std::vector<cplx>> c(modes_, std::vector<cplx>(nmax_ + 1));
        for (int k = 0; k < modes_; ++k) {
            cplx term = std::exp(-0.5 * std::norm(f(k)));
            for (int n = 0; n <= nmax_; ++n) {
                c[k][n] = term;
                term *= f(k) / std::sqrt(static_cast<double>(n + 1));
            }
        }
        for (Eigen::Index b = 0; b < bath_dim_; ++b) {
            cplx acc = 1.0;
            for (int k = 0; k < modes_; ++k) acc *= c[k][occupation(b, k)];
            v(b) = acc;
        }
        return v;
    }

    Eigen::VectorXcd embed(int j, const Eigen::VectorXcd& bath_vec) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
        v.segment(j * bath_dim_, bath_dim_) = bath_vec;
        return v;
    }

    Eigen::VectorXcd state(const MultiD1State& s) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
        for (int j = 0; j < kBasisSize; ++j)
            for (int n = 0; n < s.m; ++n) v.segment(j * bath_dim_, bath_dim_) += s.a(n, j) * coherent(s.f[j].col(n));
        return v;
    }

    /// b_k† on a bath vector (the top level is truncated away).
    Eigen::VectorXcd create(const Eigen::VectorXcd& v, int k) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
        for (Eigen::Index b = 0; b < v.size(); ++b) {
            const int n = occupation(b, k);
            if (n < nmax_) out(b + stride_[k]) += std::sqrt(static_cast<double>(n + 1)) * v(b);
        }
        return out;
    }

    Eigen::VectorXcd annihilate(const Eigen::VectorXcd& v, int k) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
        for (Eigen::Index b = 0; b < v.size(); ++b) {
            const int n = occupation(b, k);
            if (n > 0) out(b - stride_[k]) += std::sqrt(static_cast<double>(n)) * v(b);
        }
        return out;
    }

    /// Interaction-picture H̃(t) (lab = false) or lab-frame H (lab = true) applied to v.
    Eigen::VectorXcd apply_h(const Eigen::VectorXcd& v, double t, bool lab) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
        for (int j = 0; j < kBasisSize; ++j)
            for (int l = 0; l < kBasisSize; ++l)
                if (sys_.h_s(j, l) != 0.0)
                    out.segment(j * bath_dim_, bath_dim_) += sys_.h_s(j, l) * v.segment(l * bath_dim_, bath_dim_);
        for (int j = 0; j < kBasisSize; ++j) {
            const Eigen::VectorXcd vj = v.segment(j * bath_dim_, bath_dim_);
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(bath_dim_);
            for (int k = 0; k < modes_; ++k) {
                cplx g = 0.0;
                for (int h = 0; h < 2; ++h) {
                    const double phase = bath_.k(k) * p_.position(h) + (lab ? 0.0 : bath_.omega(k) * t);
                    g += static_cast<double>(sigma_x_sign(h, j)) * 0.5 * bath_.lambda(k) * std::polar(1.0, -phase);
                }
                acc += g * annihilate(vj, k) + std::conj(g) * create(vj, k);
            }
            if (lab) {
                for (Eigen::Index b = 0; b < bath_dim_; ++b) {
                    double e = 0.0;
                    for (int k = 0; k < modes_; ++k) e += bath_.omega(k) * occupation(b, k);
                    acc(b) += e * vj(b);
                }
            }
            out.segment(j * bath_dim_, bath_dim_) += acc;
        }
        return out;
    }

    /// One step of exp(−iH dt) for the lab-frame Hamiltonian by Taylor series.
    Eigen::VectorXcd step_lab(const Eigen::VectorXcd& v, double dt) const {
        Eigen::VectorXcd out = v;
        Eigen::VectorXcd term = v;
        for (int n = 1; n < 60; ++n) {
            term = apply_h(term, 0.0, true) * cplx(0.0, -dt / n);
            out += term;
            if (term.norm() < 1e-17 * out.norm()) break;
        }
        return out;
    }

    /// Lab-frame free evolution of the bath, which maps interaction-picture
    /// states to lab-frame states: b_k → b_k e^{−iω_k t}.
    Eigen::VectorXcd to_lab(const Eigen::VectorXcd& v, double t) const {
        Eigen::VectorXcd out = v;
        for (int j = 0; j < kBasisSize; ++j)
            for (Eigen::Index b = 0; b < bath_dim_; ++b) {
                double e = 0.0;
                for (int k = 0; k < modes_; ++k) e += bath_.omega(k) * occupation(b, k);
                out(j * bath_dim_ + b) *= std::polar(1.0, -e * t);
            }
        return out;
    }

    /// Excited-state populations in the lab frame (picture independent).
    std::array<double, 2> populations(const Eigen::VectorXcd& v) const {
        std::array<double, 2> p{};
        for (int q = 0; q < 2; ++q) {
            double sz = 0.0;
            const int flip = q == 0 ? 2 : 1;
            for (int j = 0; j < kBasisSize; ++j)
                sz += std::real(v.segment(j * bath_dim_, bath_dim_).dot(v.segment((j ^ flip) * bath_dim_, bath_dim_)));
            p[q] = 0.5 * (v.squaredNorm() + sz);
        }
        return p;
    }

    Eigen::VectorXd photon_numbers(const Eigen::VectorXcd& v) const {
        Eigen::VectorXd n = Eigen::VectorXd::Zero(modes_);
        for (int j = 0; j < kBasisSize; ++j)
            for (Eigen::Index b = 0; b < bath_dim_; ++b) {
                const double w = std::norm(v(j * bath_dim_ + b));
                for (int k = 0; k < modes_; ++k) n(k) += w * occupation(b, k);
            }
        return n;
    }

private:
    ModelParams p_;
    DiscretizedBath bath_;
    int nmax_;
    int modes_;
    std::vector<Eigen::Index> stride_;
    Eigen::Index bath_dim_{1};
    SystemMatrices sys_;
};

} // namespace wgqed::testing
