// dynamics.cpp — Multi-D1 equations of motion, block solver and RK4 driver.

#include "wgqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace wgqed {

namespace {

constexpr cplx kI{0.0, 1.0};

// 𝓜 blocks share one structure; `disp` may be the full K-mode displacements
// or their coordinates in a reduced orthonormal basis.
Eigen::MatrixXcd dense_gram(const Eigen::MatrixXcd& s, const Eigen::VectorXcd& amp, const Eigen::MatrixXcd& disp) {
    const Eigen::Index m = amp.size();
    const Eigen::Index k = disp.rows();
    const Eigen::Index dim = m * (1 + k);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            const cplx smn = s(r, c);
            out(r, c) = smn;
            const Eigen::Index fr = m + r * k;
            const Eigen::Index fc = m + c * k;
            for (Eigen::Index q = 0; q < k; ++q) {
                out(r, fc + q) = amp(c) * std::conj(disp(q, r)) * smn;
                out(fr + q, c) = std::conj(amp(r)) * disp(q, c) * smn;
            }
            const cplx w = std::conj(amp(r)) * amp(c) * smn;
            for (Eigen::Index q = 0; q < k; ++q) {
                for (Eigen::Index kk = 0; kk < k; ++kk)
                    out(fr + q, fc + kk) = w * std::conj(disp(kk, r)) * disp(q, c);
                out(fr + q, fc + q) += w;
            }
        }
    }
    return out;
}

double diagonal_norm(const MultiD1State& s) {
    double acc = 0.0;
    for (int j = 0; j < kBasisSize; ++j) acc += std::real(s.a.col(j).dot(gram_matrix(s.f[j]) * s.a.col(j)));
    return acc;
}

struct Evaluation {
    OverlapTable ov;
    EomBlocks blocks;
    Derivatives deriv;
};

} // namespace

int Derivatives::regularized_blocks() const noexcept {
    int n = 0;
    for (const auto& b : blocks) n += b.regularized ? 1 : 0;
    return n;
}

Eigen::MatrixXcd EomSystem::dense_matrix() const { return dense_gram(overlaps, amplitudes, displacements); }

Eigen::VectorXcd EomSystem::dense_inhomogeneity() const {
    const Eigen::Index m = multiplicity();
    const Eigen::Index k = modes();
    Eigen::VectorXcd out(dimension());
    out.head(m) = inhom_a;
    for (Eigen::Index r = 0; r < m; ++r) out.segment(m + r * k, k) = inhom_f.col(r);
    return out;
}

void EomSystem::apply(const Eigen::VectorXcd& y_a, const Eigen::MatrixXcd& y_f, Eigen::VectorXcd& out_a,
                      Eigen::MatrixXcd& out_f) const {
    const Eigen::Index m = multiplicity();
    const Eigen::MatrixXcd w = displacements.adjoint() * y_f;  // f_m†ḟ_n
    Eigen::MatrixXcd c(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index n = 0; n < m; ++n) c(r, n) = overlaps(r, n) * (y_a(n) + amplitudes(n) * w(r, n));
    out_a = c.rowwise().sum();
    out_f = displacements * c.transpose() + y_f * amplitudes.asDiagonal() * overlaps.transpose();
    out_f = out_f * amplitudes.conjugate().asDiagonal();
}

namespace {

struct HermitianEigen {
    Eigen::VectorXd lam;
    Eigen::MatrixXcd u;

    explicit HermitianEigen(const Eigen::MatrixXcd& mat) {
        if (mat.rows() == 0) return;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mat + mat.adjoint()));
        lam = es.eigenvalues();
        u = es.eigenvectors();
    }
};

// Spectral summary of a matrix whose eigenvalues are the union of the parts,
// each part repeated `multiplicity` times.
struct SpectrumStats {
    double lmax{0.0};
    double lmin{std::numeric_limits<double>::infinity()};
    double trace{0.0};
    double count{0.0};

    void add(const Eigen::VectorXd& lam, double multiplicity) {
        if (lam.size() == 0 || multiplicity == 0.0) return;
        lmax = std::max(lmax, lam.cwiseAbs().maxCoeff());
        lmin = std::min(lmin, lam.cwiseAbs().minCoeff());
        trace += multiplicity * lam.sum();
        count += multiplicity * static_cast<double>(lam.size());
    }
    double condition() const {
        return lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    }
    double mean_diagonal() const { return count > 0.0 ? std::abs(trace) / count : 0.0; }
};

struct FilterChoice {
    bool regularized{false};
    double epsilon_abs{0.0};
    double cutoff{0.0};
};

FilterChoice choose_filter(const SpectrumStats& st, double eps_rel) {
    FilterChoice f;
    if (eps_rel > 0.0) {
        // Tikhonov filter λ/(λ² + ε) on every solve keeps the derivative field
        // continuous in the parameters; a hard switch to it at the condition
        // threshold makes RK4 stages inconsistent.
        f.regularized = st.condition() > 1.0 / eps_rel;
        f.epsilon_abs = eps_rel * st.mean_diagonal();
    } else {
        // eps_rel == 0: pseudo-inverse at machine precision for exactly singular input
        f.cutoff = st.count * std::numeric_limits<double>::epsilon() * st.lmax;
    }
    return f;
}

Eigen::MatrixXcd apply_filter(const HermitianEigen& e, const FilterChoice& f, const Eigen::MatrixXcd& rhs) {
    const Eigen::Index n = e.lam.size();
    if (n == 0) return Eigen::MatrixXcd::Zero(0, rhs.cols());
    Eigen::VectorXd filter(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = e.lam(i);
        if (f.epsilon_abs > 0.0) filter(i) = l / (l * l + f.epsilon_abs);
        else filter(i) = std::abs(l) > f.cutoff ? 1.0 / l : 0.0;
    }
    return e.u * (filter.asDiagonal() * (e.u.adjoint() * rhs));
}

} // namespace

RegularizedResult solve_hermitian_regularized(const Eigen::MatrixXcd& mat, const Eigen::MatrixXcd& rhs,
                                              double eps_rel) {
    RegularizedResult out;
    const Eigen::Index n = mat.rows();
    out.x = Eigen::MatrixXcd::Zero(n, rhs.cols());
    if (n == 0) return out;

    const HermitianEigen e(mat);
    SpectrumStats st;
    st.add(e.lam, 1.0);
    out.condition = st.condition();
    if (st.lmax == 0.0) {
        out.regularized = true;
        return out;
    }
    const FilterChoice f = choose_filter(st, eps_rel);
    out.regularized = f.regularized;
    out.epsilon_abs = f.epsilon_abs;
    out.x = apply_filter(e, f, rhs);
    return out;
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(t_final >= 0.0)) throw ValidationError("t_final must be >= 0");
    if (!(epsilon_reg >= 0.0)) throw ValidationError("epsilon_reg must be >= 0");
    if (!(noise_scale >= 0.0)) throw ValidationError("noise_scale must be >= 0");
    if (output_stride < 1) throw ValidationError("output_stride must be >= 1");
    if (!(residual_tol > 0.0) || !(residual_abort >= residual_tol))
        throw ValidationError("need 0 < residual_tol <= residual_abort");
    if (!(epsilon_max >= epsilon_reg)) throw ValidationError("epsilon_max must be >= epsilon_reg");
    if (!(norm_abort > 0.0)) throw ValidationError("norm_abort must be > 0");
}

VariationalDynamics::VariationalDynamics(const ModelParams& params, DiscretizedBath bath, double epsilon_reg)
    : params_(params), bath_(std::move(bath)), sys_(system_matrix_elements(params.omega0)), epsilon_reg_(epsilon_reg) {
    params_.validate();
    half_lambda_ = 0.5 * bath_.lambda;
    for (int h = 0; h < 2; ++h) phase_[h] = bath_.k * params_.position(h);
    lambda2_quarter_sum_ = half_lambda_.squaredNorm();
    const Eigen::ArrayXd cos_kd = (bath_.k * params_.d()).array().cos();
    lambda2_quarter_cos_ = (half_lambda_.array().square() * cos_kd).sum();
}

std::array<Eigen::VectorXcd, 2> VariationalDynamics::drive(double t) const {
    std::array<Eigen::VectorXcd, 2> out;
    const Eigen::Index n = bath_.omega.size();
    for (int h = 0; h < 2; ++h) {
        out[h].resize(n);
        for (Eigen::Index k = 0; k < n; ++k)
            out[h](k) = half_lambda_(k) * std::polar(1.0, -(phase_[h](k) + bath_.omega(k) * t));
    }
    return out;
}

EomBlocks VariationalDynamics::assemble_eom(const MultiD1State& s, double t) const {
    return assemble_eom(s, OverlapTable(s), t);
}

EomBlocks VariationalDynamics::assemble_eom(const MultiD1State& s, const OverlapTable& ov, double t) const {
    if (static_cast<std::size_t>(s.modes()) != bath_.size())
        throw ValidationError("assemble_eom: state and bath mode counts differ");
    const auto eps = drive(t);
    const Eigen::Index m = s.m;
    EomBlocks blocks;
    for (int j = 0; j < kBasisSize; ++j) {
        auto& b = blocks[j];
        b.branch = j;
        b.epsilon = epsilon_reg_;
        b.overlaps = ov.block(j, j);
        b.amplitudes = s.a.col(j);
        b.displacements = s.f[j];

        const Eigen::VectorXcd g = static_cast<double>(sigma_x_sign(0, j)) * eps[0] +
                                   static_cast<double>(sigma_x_sign(1, j)) * eps[1];
        const Eigen::VectorXcd gamma = s.f[j].transpose() * g;  // Σ_k g_k f_nk
        const Eigen::MatrixXcd& sjj = b.overlaps;
        const Eigen::VectorXcd& amp = b.amplitudes;
        const Eigen::VectorXcd s_amp = sjj * amp;

        // ⟨φ_j f_m| H̃ |D⟩
        Eigen::VectorXcd r = sjj * amp.cwiseProduct(gamma) + gamma.conjugate().cwiseProduct(s_amp);
        // ⟨φ_j f_m| b_q H̃ |D⟩, column m
        Eigen::MatrixXcd w2(m, m);
        for (Eigen::Index n = 0; n < m; ++n)
            for (Eigen::Index mm = 0; mm < m; ++mm) w2(n, mm) = amp(n) * sjj(mm, n) * (gamma(n) + std::conj(gamma(mm)));
        Eigen::MatrixXcd p = s.f[j] * w2 + g.conjugate() * s_amp.transpose();

        for (int l = 0; l < kBasisSize; ++l) {
            const cplx hjl = sys_.h_s(j, l);
            if (hjl == cplx(0.0)) continue;
            const Eigen::MatrixXcd& sjl = ov.block(j, l);
            r += hjl * (sjl * s.a.col(l));
            p += hjl * (s.f[l] * (s.a.col(l).asDiagonal() * sjl.transpose()));
        }

        b.inhom_a = r;
        b.inhom_f = p * amp.conjugate().asDiagonal();
    }
    return blocks;
}

namespace {

// 𝓜 is unitarily equivalent to diag(𝓜_red, C ⊗ 1_{K−r}): 𝓜_red acts on
// (a, Q†ḟ) with Q an orthonormal basis of span{f_n}, C = diag(Ā) S diag(A)
// acts on the components orthogonal to that span. The condition estimate and
// the Tikhonov scale are taken from the combined spectrum, so the result is
// the same as a dense solve of the full block.
BlockSolution solve_block_once(const EomSystem& b, double eps_rel) {
    const Eigen::Index m = b.multiplicity();
    const Eigen::Index k = b.modes();
    const Eigen::Index r = std::min(m, k);

    Eigen::MatrixXcd q;
    if (k > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b.displacements);
        q = qr.householderQ() * Eigen::MatrixXcd::Identity(k, r);
    } else {
        q = Eigen::MatrixXcd::Zero(0, 0);
    }

    const Eigen::MatrixXcd phi = q.adjoint() * b.displacements;
    const Eigen::MatrixXcd proj_rhs = q.adjoint() * b.inhom_f;
    Eigen::VectorXcd red_rhs(m * (1 + r));
    red_rhs.head(m) = b.inhom_a;
    for (Eigen::Index c = 0; c < m; ++c) red_rhs.segment(m + c * r, r) = proj_rhs.col(c);

    const HermitianEigen red(dense_gram(b.overlaps, b.amplitudes, phi));
    const bool has_perp = k > r;
    const HermitianEigen comp(has_perp
                                  ? Eigen::MatrixXcd(b.amplitudes.conjugate().asDiagonal() * b.overlaps *
                                                     b.amplitudes.asDiagonal())
                                  : Eigen::MatrixXcd());
    SpectrumStats st;
    st.add(red.lam, 1.0);
    if (has_perp) st.add(comp.lam, static_cast<double>(k - r));

    BlockSolution sol;
    sol.a = Eigen::VectorXcd::Zero(m);
    sol.fdot = Eigen::MatrixXcd::Zero(k, m);
    if (st.lmax == 0.0) {
        sol.regularized = true;
        sol.residual = 1.0;
        return sol;
    }
    const FilterChoice f = choose_filter(st, eps_rel);
    sol.regularized = f.regularized;
    sol.epsilon_used = f.epsilon_abs;

    const Eigen::VectorXcd y = apply_filter(red, f, -kI * red_rhs).col(0);
    sol.a = y.head(m);
    Eigen::MatrixXcd g(r, m);
    for (Eigen::Index c = 0; c < m; ++c) g.col(c) = y.segment(m + c * r, r);
    sol.fdot = q * g;

    // Σ_n conj(A_m) S_mn A_n h_n = −i P⊥ 𝓘_m
    if (has_perp) {
        const Eigen::MatrixXcd perp = b.inhom_f - q * proj_rhs;
        sol.fdot += apply_filter(comp, f, -kI * perp.transpose()).transpose();
    }

    Eigen::VectorXcd out_a;
    Eigen::MatrixXcd out_f;
    b.apply(sol.a, sol.fdot, out_a, out_f);
    const double num = std::sqrt((out_a + kI * b.inhom_a).squaredNorm() + (out_f + kI * b.inhom_f).squaredNorm());
    const double den = std::sqrt(b.inhom_a.squaredNorm() + b.inhom_f.squaredNorm());
    sol.residual = den > 0.0 ? num / den : 0.0;
    return sol;
}

} // namespace

Derivatives VariationalDynamics::solve_eom(const EomBlocks& blocks, const MultiD1State& s, double t,
                                           double residual_abort, double epsilon_max) const {
    Derivatives d;
    d.rate = MultiD1State::zeros(s.m, s.modes());
    d.rate.t = t;
    for (int j = 0; j < kBasisSize; ++j) {
        const auto& b = blocks[j];
        const bool zero_rhs = b.inhom_a.squaredNorm() == 0.0 && b.inhom_f.squaredNorm() == 0.0;
        BlockSolution sol;
        if (zero_rhs) {
            sol.a = Eigen::VectorXcd::Zero(b.multiplicity());
            sol.fdot = Eigen::MatrixXcd::Zero(b.modes(), b.multiplicity());
        } else {
            double eps = b.epsilon;
            for (;;) {
                sol = solve_block_once(b, eps);
                if (sol.a.allFinite() && sol.fdot.allFinite() && std::isfinite(sol.residual)) break;
                eps = eps <= 0.0 ? kDefaultEpsilonReg : 10.0 * eps;
                if (eps > epsilon_max * (1.0 + 1e-9)) {
                    std::ostringstream os;
                    os << "EOM solve on branch " << j << " at t=" << t << " stays non-finite with epsilon up to "
                       << epsilon_max;
                    throw IntegrationFailure(os.str(), t);
                }
            }
            if (sol.residual > residual_abort) {
                std::ostringstream os;
                os << "EOM solve failed on branch " << j << " at t=" << t << ": residual " << sol.residual
                   << " exceeds " << residual_abort;
                throw IntegrationFailure(os.str(), t);
            }
        }
        // Ȧ_nj = a_nj + A_nj Re(f_nj† ḟ_nj)
        const Eigen::VectorXcd fdotf = (b.displacements.adjoint() * sol.fdot).diagonal();
        d.rate.a.col(j) = sol.a + b.amplitudes.cwiseProduct(fdotf.real().cast<cplx>());
        d.rate.f[j] = sol.fdot;
        d.blocks[j] = std::move(sol);
    }
    return d;
}

Derivatives VariationalDynamics::derivatives(const MultiD1State& s, double t) const {
    const OverlapTable ov(s);
    return solve_eom(assemble_eom(s, ov, t), s, t);
}

double VariationalDynamics::interaction_energy(const MultiD1State& s, const OverlapTable& ov, double t) const {
    const auto eps = drive(t);
    double e = std::real(system_expectation(s, ov, sys_.h_s));
    for (int j = 0; j < kBasisSize; ++j) {
        const Eigen::VectorXcd g = static_cast<double>(sigma_x_sign(0, j)) * eps[0] +
                                   static_cast<double>(sigma_x_sign(1, j)) * eps[1];
        const Eigen::VectorXcd gamma = s.f[j].transpose() * g;
        const Eigen::VectorXcd& amp = s.a.col(j);
        const Eigen::MatrixXcd& sjj = ov.block(j, j);
        // Σ_mn A*_m A_n S_mn (γ_n + γ*_m)
        e += std::real(amp.dot(sjj * amp.cwiseProduct(gamma)) +
                       amp.cwiseProduct(gamma).dot(sjj * amp));
    }
    return e;
}

double VariationalDynamics::hamiltonian_squared(const MultiD1State& s, const OverlapTable& ov, double t) const {
    const auto eps = drive(t);
    // β_h[l]_n = Σ_k ε_hk f_nlk, so ⟨f_mj|X_h|f_nl⟩ = S (β_h[l]_n + conj β_h[j]_m)
    std::array<std::array<Eigen::VectorXcd, kBasisSize>, 2> beta;
    for (int h = 0; h < 2; ++h)
        for (int l = 0; l < kBasisSize; ++l) beta[h][l] = s.f[l].transpose() * eps[h];

    double total = std::real(system_expectation(s, ov, sys_.h_s_squared));

    const Eigen::Index m = s.m;
    for (int h = 0; h < 2; ++h) {
        for (int j = 0; j < kBasisSize; ++j)
            for (int l = 0; l < kBasisSize; ++l) {
                const cplx kjl = sys_.anti_hs_sx[h](j, l);
                if (kjl == cplx(0.0)) continue;
                const Eigen::MatrixXcd& sjl = ov.block(j, l);
                cplx acc = 0.0;
                for (Eigen::Index mm = 0; mm < m; ++mm)
                    for (Eigen::Index n = 0; n < m; ++n)
                        acc += std::conj(s.a(mm, j)) * s.a(n, l) * sjl(mm, n) *
                               (beta[h][l](n) + std::conj(beta[h][j](mm)));
                total += std::real(kjl * acc);
            }
    }

    for (int j = 0; j < kBasisSize; ++j) {
        const double s12 = static_cast<double>(sigma_x_sign(0, j) * sigma_x_sign(1, j));
        const Eigen::MatrixXcd& sjj = ov.block(j, j);
        cplx acc = 0.0;
        for (Eigen::Index mm = 0; mm < m; ++mm)
            for (Eigen::Index n = 0; n < m; ++n) {
                const cplx x1 = beta[0][j](n) + std::conj(beta[0][j](mm));
                const cplx x2 = beta[1][j](n) + std::conj(beta[1][j](mm));
                const cplx bracket = x1 * x1 + x2 * x2 + 2.0 * lambda2_quarter_sum_ +
                                     2.0 * s12 * (x1 * x2 + lambda2_quarter_cos_);
                acc += std::conj(s.a(mm, j)) * s.a(n, j) * sjj(mm, n) * bracket;
            }
        total += std::real(acc);
    }
    return total;
}

double VariationalDynamics::derivative_norm(const EomBlocks& blocks, const Derivatives& d) const {
    double acc = 0.0;
    for (int j = 0; j < kBasisSize; ++j) {
        const auto& sol = d.blocks[j];
        Eigen::VectorXcd out_a;
        Eigen::MatrixXcd out_f;
        blocks[j].apply(sol.a, sol.fdot, out_a, out_f);
        acc += std::real(sol.a.dot(out_a)) + std::real((sol.fdot.conjugate().cwiseProduct(out_f)).sum());
    }
    return acc;
}

double VariationalDynamics::lab_energy(const MultiD1State& s, const OverlapTable& ov, const Eigen::VectorXd& n_k) const {
    return interaction_energy(s, ov, s.t) + bath_.omega.dot(n_k);
}

double VariationalDynamics::deviation_norm(const MultiD1State& s, const EomBlocks& blocks, const Derivatives& d,
                                           double t, ObservableDiagnostics* diag) const {
    const OverlapTable ov(s);
    const double w2 = params_.omega0 * params_.omega0;
    const double sigma2 = (hamiltonian_squared(s, ov, t) - derivative_norm(blocks, d)) / w2;
    if (sigma2 < -1e-8 && diag) {
        std::ostringstream os;
        os << "negative deviation norm " << sigma2 << " at t=" << t;
        diag->warnings.push_back(os.str());
    }
    return std::max(sigma2, 0.0);
}

ObservableRecord VariationalDynamics::observe(const MultiD1State& s, double t, ObservableDiagnostics* diag) const {
    const OverlapTable ov(s);
    const auto blocks = assemble_eom(s, ov, t);
    const auto d = solve_eom(blocks, s, t);
    ObservableRecord rec;
    rec.t = t;
    rec.p_e = populations(s, ov);
    rec.n_k = photon_numbers(s, ov, diag);
    rec.norm = state_norm(s, ov);
    rec.sigma2 = deviation_norm(s, blocks, d, t, diag);
    rec.energy = interaction_energy(s, ov, t) + bath_.omega.dot(rec.n_k);
    return rec;
}

Trajectory propagate(const MultiD1State& initial, const VariationalDynamics& dyn, const IntegratorConfig& config,
                     const RecordObserver& observer) {
    config.validate();
    if (!initial.all_finite()) throw IntegrationFailure("initial state has non-finite parameters", initial.t);
    const double norm0 = state_norm(initial);
    if (std::abs(norm0 - 1.0) > config.norm_abort)
        throw ValidationError("propagate: initial state is not normalized");

    Trajectory traj;
    MultiD1State s = initial;
    double t = s.t;
    const double span = config.t_final - t;
    const auto n_steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9)) : std::size_t{0};

    auto evaluate = [&](const MultiD1State& st, double tt) {
        const OverlapTable ov(st);
        auto blocks = dyn.assemble_eom(st, ov, tt);
        for (auto& b : blocks) b.epsilon = config.epsilon_reg;
        auto d = dyn.solve_eom(blocks, st, tt, config.residual_abort, config.epsilon_max);
        traj.regularized_solves += static_cast<std::size_t>(d.regularized_blocks());
        for (const auto& b : d.blocks) {
            traj.max_residual = std::max(traj.max_residual, b.residual);
            if (b.residual > config.residual_tol) ++traj.residual_exceedances;
        }
        return Evaluation{ov, std::move(blocks), std::move(d)};
    };
    auto record = [&](const MultiD1State& st, const Evaluation& ev) {
        ObservableRecord rec;
        rec.t = st.t;
        rec.p_e = populations(st, ev.ov);
        rec.n_k = photon_numbers(st, ev.ov, &traj.diagnostics);
        rec.norm = state_norm(st, ev.ov);
        rec.sigma2 = dyn.deviation_norm(st, ev.blocks, ev.deriv, st.t, &traj.diagnostics);
        rec.energy = dyn.interaction_energy(st, ev.ov, st.t) + dyn.bath().omega.dot(rec.n_k);
        if (observer) observer(rec, st);
        traj.records.push_back(std::move(rec));
    };

    MultiD1State tmp = s;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double h = std::min(config.dt, config.t_final - t);
        const Evaluation e1 = evaluate(s, t);
        if (step % static_cast<std::size_t>(config.output_stride) == 0) record(s, e1);
        const MultiD1State& k1 = e1.deriv.rate;

        tmp = s;
        axpy(0.5 * h, k1, tmp);
        const MultiD1State k2 = evaluate(tmp, t + 0.5 * h).deriv.rate;
        tmp = s;
        axpy(0.5 * h, k2, tmp);
        const MultiD1State k3 = evaluate(tmp, t + 0.5 * h).deriv.rate;
        tmp = s;
        axpy(h, k3, tmp);
        const MultiD1State k4 = evaluate(tmp, t + h).deriv.rate;

        axpy(h / 6.0, k1, s);
        axpy(h / 3.0, k2, s);
        axpy(h / 3.0, k3, s);
        axpy(h / 6.0, k4, s);
        t = (step + 1 == n_steps) ? config.t_final : t + h;
        s.t = t;
        ++traj.steps;

        if (!s.all_finite()) throw IntegrationFailure("non-finite variational parameter", t);
        const double norm = diagonal_norm(s);
        if (std::abs(norm - 1.0) > config.norm_abort) {
            std::ostringstream os;
            os << "norm drifted to " << norm << " at t=" << t;
            throw IntegrationFailure(os.str(), t);
        }
    }
    record(s, evaluate(s, t));
    if (traj.residual_exceedances > 0) {
        std::ostringstream os;
        os << traj.residual_exceedances << " block solves had residual above " << config.residual_tol
           << " (max " << traj.max_residual << ")";
        traj.diagnostics.warnings.push_back(os.str());
    }
    traj.final_state = std::move(s);
    return traj;
}

void save_checkpoint(const std::string& path, const MultiD1State& s) {
    nlohmann::json j;
    j["m"] = s.m;
    j["modes"] = s.modes();
    j["t"] = s.t;
    auto pack = [](const Eigen::MatrixXcd& mat) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < mat.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < mat.cols(); ++c) row.push_back({mat(r, c).real(), mat(r, c).imag()});
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["a"] = pack(s.a);
    for (int b = 0; b < kBasisSize; ++b) j["f"].push_back(pack(s.f[b]));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out << std::setprecision(17) << j.dump() << '\n';
}

MultiD1State load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open checkpoint " + path);
    const auto j = nlohmann::json::parse(in);
    const int m = j.at("m").get<int>();
    const auto modes = j.at("modes").get<Eigen::Index>();
    auto s = MultiD1State::zeros(m, modes);
    s.t = j.at("t").get<double>();
    auto unpack = [](const nlohmann::json& rows, Eigen::MatrixXcd& mat) {
        for (Eigen::Index r = 0; r < mat.rows(); ++r)
            for (Eigen::Index c = 0; c < mat.cols(); ++c) {
                const auto& v = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
                mat(r, c) = cplx(v.at(0).get<double>(), v.at(1).get<double>());
            }
    };
    unpack(j.at("a"), s.a);
    for (int b = 0; b < kBasisSize; ++b) unpack(j.at("f").at(static_cast<std::size_t>(b)), s.f[b]);
    return s;
}

} // namespace wgqed
