// bath.hpp — Linear discretization of the Ohmic waveguide into 2N_b modes.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/model.hpp"

namespace wgqed {

enum class Branch : int { Left = -1, Right = +1 };

/// Flat mode table. Modes 0..n_b-1 are the right branch (k > 0) in order of
/// increasing frequency; modes n_b..2n_b-1 are their left-branch mirrors.
struct DiscretizedBath {
    std::size_t n_b{0};
    Eigen::VectorXd omega;    // ω_k
    Eigen::VectorXd lambda;   // λ_k ≥ 0
    Eigen::VectorXd k;        // signed wavenumber, ω_k = v_g|k|
    std::vector<Branch> branch;
    double omega_c{0.0};
    double v_g{1.0};

    std::size_t size() const noexcept { return 2 * n_b; }
    std::size_t mirror(std::size_t mode) const noexcept { return mode < n_b ? mode + n_b : mode - n_b; }
    double bin_lower(std::size_t n) const noexcept { return omega_c * static_cast<double>(n) / static_cast<double>(n_b); }
    double bin_upper(std::size_t n) const noexcept { return omega_c * static_cast<double>(n + 1) / static_cast<double>(n_b); }

    /// Right-branch frequencies, the abscissa of mirror-summed spectra.
    Eigen::VectorXd right_frequencies() const { return omega.head(static_cast<Eigen::Index>(n_b)); }
};

/// Bins [x_{n−1}, x_n], x_n = nω_c/N_b. λ² = ½∫J over the bin,
/// ω = ∫ωJ / ∫J over the bin; left modes mirror the right ones.
DiscretizedBath discretize(const ModelParams& params, std::size_t n_b);

/// CSV with columns index,branch,k,omega,lambda.
void write_bath_csv(std::ostream& os, const DiscretizedBath& bath);

} // namespace wgqed
