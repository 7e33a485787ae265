// analytic.cpp — TRWA and SP spectrum kernels.

#include "wgqed/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wgqed {

namespace {

constexpr cplx kI{0.0, 1.0};

SpectrumMeta analytic_meta(const ModelParams& p, Theory theory, InitialState state) {
    SpectrumMeta m;
    m.method = to_string(theory);
    m.values["alpha"] = p.alpha;
    m.values["omega_c"] = p.omega_c;
    m.values["d"] = p.d();
    m.values["v_g"] = p.v_g;
    m.tags["initial_state"] = to_string(state);
    std::ostringstream h;
    h << std::hexfloat << p.alpha << ':' << p.omega_c << ':' << p.d() << ':' << p.v_g << ':' << to_string(state);
    m.params_hash = std::to_string(std::hash<std::string>{}(h.str()));
    return m;
}

void check_grid(std::span<const double> grid, double omega_c) {
    for (double w : grid)
        if (!(w > 0.0) || w > omega_c) throw ValidationError("spectrum grid point outside (0, omega_c]");
}

// N(ω) = N(k) + N(−k): per_mode(ω, λ²) returns a callable of kd.
template <class PerMode>
SpectrumSeries mirror_sum(std::span<const double> omegas, std::span<const double> lambda2, double d, double v_g,
                          PerMode&& per_mode) {
    SpectrumSeries s;
    s.omega.assign(omegas.begin(), omegas.end());
    s.value.resize(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (lambda2[i] == 0.0) {
            s.value[i] = 0.0;
            continue;
        }
        const double kd = omegas[i] / v_g * d;
        auto n = per_mode(omegas[i], lambda2[i]);
        s.value[i] = n(kd) + n(-kd);
    }
    return s;
}

std::vector<double> grid_weights(std::span<const double> grid, double bin_width, const ModelParams& p) {
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = 0.5 * spectral_density(grid[i], p) * bin_width;
    return w;
}

std::vector<double> bath_weights(const DiscretizedBath& bath) {
    std::vector<double> w(bath.n_b);
    for (std::size_t i = 0; i < bath.n_b; ++i) w[i] = bath.lambda(static_cast<Eigen::Index>(i)) * bath.lambda(static_cast<Eigen::Index>(i));
    return w;
}

std::vector<double> bath_omegas(const DiscretizedBath& bath) {
    std::vector<double> w(bath.n_b);
    for (std::size_t i = 0; i < bath.n_b; ++i) w[i] = bath.omega(static_cast<Eigen::Index>(i));
    return w;
}

} // namespace

std::string to_string(Theory t) { return t == Theory::TRWA ? "TRWA" : "SP"; }

double eta_exponent_integral(double alpha, double omega_c, double a) {
    return 2.0 * alpha * (std::log((omega_c + a) / a) + a / (omega_c + a) - 1.0);
}

double solve_eta(const ModelParams& p, double tol, int max_iter) {
    p.validate();
    double eta = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const double target = std::exp(-0.5 * eta_exponent_integral(p.alpha, p.omega_c, eta * p.omega0));
        const double next = 0.5 * eta + 0.5 * target;
        if (std::abs(next - eta) < tol) return next;
        eta = next;
    }
    throw NumericalError("solve_eta: fixed-point iteration did not converge");
}

double dipole_coupling_vc(const ModelParams& p, double eta, const quad::Options& opt) {
    if (p.alpha == 0.0) return 0.0;
    const double a = eta * p.omega0;
    auto integrand = [&](double x) {
        const double j = 2.0 * p.alpha * x;
        return j * (x + 2.0 * a) / (2.0 * (x + a) * (x + a)) * std::cos(x * p.d() / p.v_g);
    };
    return -quad::integrate(integrand, 0.0, p.omega_c, opt);
}

double dipole_coupling_vc_discrete(const ModelParams& p, const DiscretizedBath& bath, double eta) {
    const double a = eta * p.omega0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < bath.omega.size(); ++i) {
        const double w = bath.omega(i);
        const double xi = w / (w + a);
        acc += bath.lambda(i) * bath.lambda(i) / (2.0 * w) * (xi * xi - 2.0 * xi) * std::cos(bath.k(i) * p.d());
    }
    return acc;
}

TrwaKernels::TrwaKernels(const ModelParams& p, quad::Options opt)
    : p_(p), opt_(opt), eta_(solve_eta(p)), v_c_(dipole_coupling_vc(p, eta_, opt)) {}

double TrwaKernels::delta(double omega, double d) const {
    if (p_.alpha == 0.0) return 0.0;
    const double a = eta_ * p_.omega0;
    auto g = [&](double x) {
        const double r = a / (x + a);
        return 2.0 * p_.alpha * x * std::cos(x * d / p_.v_g) * r * r;
    };
    return quad::principal_value(g, omega, 0.0, p_.omega_c, opt_);
}

double TrwaKernels::gamma(double omega, double d) const {
    const double a = eta_ * p_.omega0;
    const double r = a / (omega + a);
    return std::numbers::pi * r * r * spectral_density(omega, p_) * std::cos(omega * d / p_.v_g);
}

cplx TrwaKernels::a_tilde(double omega) const {
    return omega - eta_ * p_.omega0 - delta(omega, 0.0) + kI * gamma(omega, 0.0);
}

cplx TrwaKernels::b_tilde(double omega) const {
    return v_c_ + delta(omega, p_.d()) - kI * gamma(omega, p_.d());
}

ResolventPair TrwaKernels::pair(double omega) const { return {a_tilde(omega), b_tilde(omega)}; }

double TrwaKernels::omega_tilde(double omega_k) const { return omega_k - v_c_ * v_c_ / (2.0 * eta_ * p_.omega0); }

double TrwaKernels::lambda_tilde2(double lambda2, double omega_k) const {
    const double a = eta_ * p_.omega0;
    const double r = a / (a + omega_k);
    return lambda2 * r * r;
}

SpKernels::SpKernels(const ModelParams& p, quad::Options opt) : p_(p), opt_(opt), shift_(0.0) {
    p_.validate();
    shift_ = 2.0 * delta(-p_.omega0, 0.0);
}

double SpKernels::delta(double omega, double d) const {
    if (p_.alpha == 0.0) return 0.0;
    auto g = [&](double x) { return 0.25 * 2.0 * p_.alpha * x * std::cos(x * d / p_.v_g); };
    return quad::principal_value(g, omega, 0.0, p_.omega_c, opt_);
}

double SpKernels::gamma(double omega, double d) const {
    return 0.25 * std::numbers::pi * spectral_density(omega, p_) * std::cos(omega * d / p_.v_g);
}

cplx SpKernels::a(double omega) const {
    const double w2 = omega - 2.0 * p_.omega0;
    return omega - p_.omega0 - delta(omega, 0.0) - delta(w2, 0.0) + kI * (gamma(omega, 0.0) + gamma(w2, 0.0));
}

cplx SpKernels::b(double omega) const {
    const double w2 = omega - 2.0 * p_.omega0;
    const double d = p_.d();
    return delta(omega, d) + delta(w2, d) - kI * (gamma(omega, d) + gamma(w2, d));
}

ResolventPair SpKernels::pair(double omega) const { return {a(omega), b(omega)}; }

double SpKernels::omega_prime(double omega_k) const { return omega_k + shift_; }

double lamb_shift_pv(double omega, double d, const TrwaKernels& k) { return k.delta(omega, d); }
double lamb_shift_pv(double omega, double d, const SpKernels& k) { return k.delta(omega, d); }
double linewidth(double omega, double d, const TrwaKernels& k) { return k.gamma(omega, d); }
double linewidth(double omega, double d, const SpKernels& k) { return k.gamma(omega, d); }

double trwa_photon_number(const ResolventPair& ab, double eta_omega0, double kd, double lambda_tilde2,
                          InitialState state) {
    const cplx e = std::polar(1.0, -kd);
    const double direct = 1.0 / (2.0 * eta_omega0);
    switch (state) {
        case InitialState::Psi0:
            return lambda_tilde2 * std::norm((ab.a + e * ab.b) / (ab.a * ab.a - ab.b * ab.b) + direct);
        case InitialState::PsiPlus:
            return lambda_tilde2 * 0.5 * std::norm(1.0 + e) * std::norm(1.0 / (ab.a - ab.b) + direct);
        case InitialState::PsiMinus:
            return lambda_tilde2 * 0.5 * std::norm(1.0 - e) * std::norm(1.0 / (ab.a + ab.b) + direct);
    }
    return 0.0;
}

double sp_photon_number(const ResolventPair& ab, double kd, double lambda2, InitialState state) {
    const cplx e = std::polar(1.0, -kd);
    switch (state) {
        case InitialState::Psi0:
            return 0.25 * lambda2 * std::norm((ab.a + e * ab.b) / (ab.a * ab.a - ab.b * ab.b));
        case InitialState::PsiPlus:
            return 0.25 * lambda2 * 0.5 * std::norm(1.0 + e) / std::norm(ab.a - ab.b);
        case InitialState::PsiMinus:
            return 0.25 * lambda2 * 0.5 * std::norm(1.0 - e) / std::norm(ab.a + ab.b);
    }
    return 0.0;
}

CorrelatedAmplitudes trwa_correlated_amplitudes(const TrwaKernels& k, double omega_k, double kd, double lambda2) {
    const auto ab = k.pair(k.omega_tilde(omega_k));
    const double lt = std::sqrt(k.lambda_tilde2(lambda2, omega_k));
    const cplx e = std::polar(1.0, -kd);
    const double direct = 1.0 / (2.0 * k.renormalized_frequency());
    const double r = 1.0 / std::sqrt(2.0);
    return {lt * r * (1.0 + e) * (1.0 / (ab.a - ab.b) + direct), lt * r * (1.0 - e) * (1.0 / (ab.a + ab.b) + direct)};
}

CorrelatedAmplitudes sp_correlated_amplitudes(const SpKernels& k, double omega_k, double kd, double lambda2) {
    const auto ab = k.pair(k.omega_prime(omega_k));
    const double l = 0.5 * std::sqrt(lambda2);
    const cplx e = std::polar(1.0, -kd);
    const double r = 1.0 / std::sqrt(2.0);
    return {l * r * (1.0 + e) / (ab.a - ab.b), l * r * (1.0 - e) / (ab.a + ab.b)};
}

namespace {

SpectrumSeries trwa_impl(const TrwaKernels& k, std::span<const double> omegas, std::span<const double> weights,
                         InitialState state) {
    const auto& p = k.params();
    auto s = mirror_sum(omegas, weights, p.d(), p.v_g, [&](double w, double l2) {
        const auto ab = k.pair(k.omega_tilde(w));
        const double lt2 = k.lambda_tilde2(l2, w);
        return [&k, ab, lt2, state](double kd) {
            return trwa_photon_number(ab, k.renormalized_frequency(), kd, lt2, state);
        };
    });
    s.meta = analytic_meta(p, Theory::TRWA, state);
    s.meta.values["eta"] = k.eta();
    s.meta.values["V_c"] = k.v_c();
    return s;
}

SpectrumSeries sp_impl(const SpKernels& k, std::span<const double> omegas, std::span<const double> weights,
                       InitialState state) {
    const auto& p = k.params();
    auto s = mirror_sum(omegas, weights, p.d(), p.v_g, [&](double w, double l2) {
        const auto ab = k.pair(k.omega_prime(w));
        return [ab, l2, state](double kd) { return sp_photon_number(ab, kd, l2, state); };
    });
    s.meta = analytic_meta(p, Theory::SP, state);
    s.meta.values["pole_shift"] = k.pole_shift();
    return s;
}

} // namespace

SpectrumSeries trwa_spectrum(const TrwaKernels& k, std::span<const double> grid, double bin_width,
                             InitialState state) {
    check_grid(grid, k.params().omega_c);
    const auto w = grid_weights(grid, bin_width, k.params());
    return trwa_impl(k, grid, w, state);
}

SpectrumSeries trwa_spectrum(const TrwaKernels& k, const DiscretizedBath& bath, InitialState state) {
    const auto om = bath_omegas(bath);
    const auto w = bath_weights(bath);
    return trwa_impl(k, om, w, state);
}

SpectrumSeries sp_spectrum(const SpKernels& k, std::span<const double> grid, double bin_width, InitialState state) {
    check_grid(grid, k.params().omega_c);
    const auto w = grid_weights(grid, bin_width, k.params());
    return sp_impl(k, grid, w, state);
}

SpectrumSeries sp_spectrum(const SpKernels& k, const DiscretizedBath& bath, InitialState state) {
    const auto om = bath_omegas(bath);
    const auto w = bath_weights(bath);
    return sp_impl(k, om, w, state);
}

std::vector<double> default_grid(double omega_c, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = omega_c * static_cast<double>(i + 1) / static_cast<double>(n);
    return g;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

} // namespace wgqed
