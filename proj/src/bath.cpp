// bath.cpp — Ohmic bath discretization.

#include "wgqed/bath.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace wgqed {

DiscretizedBath discretize(const ModelParams& params, std::size_t n_b) {
    if (n_b == 0) throw ValidationError("discretize: n_b must be >= 1");
    params.validate();

    DiscretizedBath bath;
    bath.n_b = n_b;
    bath.omega_c = params.omega_c;
    bath.v_g = params.v_g;
    const auto total = static_cast<Eigen::Index>(2 * n_b);
    bath.omega.resize(total);
    bath.lambda.resize(total);
    bath.k.resize(total);
    bath.branch.resize(2 * n_b);

    for (std::size_t n = 0; n < n_b; ++n) {
        const double lo = bath.bin_lower(n);
        const double hi = bath.bin_upper(n);
        // ∫2αω dω = α(hi² − lo²), ∫2αω² dω = (2α/3)(hi³ − lo³); the α cancels in the mean.
        const double sq = hi * hi - lo * lo;
        const double cube = hi * hi * hi - lo * lo * lo;
        const double lambda2 = 0.5 * params.alpha * sq;
        const double w = (2.0 / 3.0) * cube / sq;

        const auto r = static_cast<Eigen::Index>(n);
        const auto l = static_cast<Eigen::Index>(n + n_b);
        bath.omega(r) = bath.omega(l) = w;
        bath.lambda(r) = bath.lambda(l) = std::sqrt(lambda2);
        bath.k(r) = w / params.v_g;
        bath.k(l) = -w / params.v_g;
        bath.branch[n] = Branch::Right;
        bath.branch[n + n_b] = Branch::Left;
    }
    return bath;
}

void write_bath_csv(std::ostream& os, const DiscretizedBath& bath) {
    os << "index,branch,k,omega,lambda\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < bath.size(); ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        os << i << ',' << (bath.branch[i] == Branch::Right ? "right" : "left") << ','
           << bath.k(e) << ',' << bath.omega(e) << ',' << bath.lambda(e) << '\n';
    }
}

} // namespace wgqed
