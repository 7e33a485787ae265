// dynamics.hpp — Dirac-Frenkel equations of motion for the multi-D1 ansatz in
// the interaction picture of the reservoir, RK4 propagation and the
// deviation-vector error metric σ²(t).
//
// Per qubit branch j the stationarity conditions read i𝓜_j y_j = 𝓘_j with
// unknowns y_j = (a_1j..a_Mj, ḟ_1j, .., ḟ_Mj). The rows are the projections
// onto |φ_j f_mj⟩ and A_mj b_q†|φ_j f_mj⟩, so 𝓜_j is the Gram matrix of the
// tangent vectors (Hermitian, positive semidefinite).

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/bath.hpp"
#include "wgqed/model.hpp"
#include "wgqed/multi_d1.hpp"

namespace wgqed {

/// Tikhonov parameter relative to the mean diagonal of each block. Small
/// enough that the filter bias keeps ⟨D|D⟩ conserved to ~1e-7 over t = 50.
inline constexpr double kDefaultEpsilonReg = 1e-14;

/// Thrown when the linear solve or the propagation cannot continue.
class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double t)
        : NumericalError(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// One branch block of the equations of motion.
struct EomSystem {
    int branch{0};
    Eigen::MatrixXcd overlaps;     // S_mn = ⟨f_mj|f_nj⟩
    Eigen::VectorXcd amplitudes;   // A_nj
    Eigen::MatrixXcd displacements;  // K × M, column n = f_nj
    Eigen::VectorXcd inhom_a;      // 𝓘 rows for a_m
    Eigen::MatrixXcd inhom_f;      // 𝓘 rows for ḟ_mq, column m
    double epsilon{kDefaultEpsilonReg};  // relative Tikhonov parameter

    int multiplicity() const noexcept { return static_cast<int>(amplitudes.size()); }
    Eigen::Index modes() const noexcept { return displacements.rows(); }
    Eigen::Index dimension() const noexcept { return multiplicity() * (1 + modes()); }

    /// Dense 𝓜 of size M(1+K); unknown order (a_1..a_M, ḟ_1(·), .., ḟ_M(·)).
    Eigen::MatrixXcd dense_matrix() const;
    Eigen::VectorXcd dense_inhomogeneity() const;
    /// 𝓜 y without forming 𝓜; y_a is M, y_f is K × M.
    void apply(const Eigen::VectorXcd& y_a, const Eigen::MatrixXcd& y_f,
               Eigen::VectorXcd& out_a, Eigen::MatrixXcd& out_f) const;
};

using EomBlocks = std::array<EomSystem, kBasisSize>;

/// Solution of one block: y with 𝓜y = −i𝓘, plus solver bookkeeping.
struct BlockSolution {
    Eigen::VectorXcd a;    // a_nj
    Eigen::MatrixXcd fdot; // ḟ_nj, K × M
    double residual{0.0};  // ‖𝓜y + i𝓘‖ / ‖𝓘‖
    double epsilon_used{0.0};
    bool regularized{false};
};

/// Time derivative of all parameters plus the per-block solutions.
struct Derivatives {
    MultiD1State rate;                       // Ȧ and ḟ in state layout
    std::array<BlockSolution, kBasisSize> blocks;
    int regularized_blocks() const noexcept;
};

/// Hermitian PSD solve of mat·x = rhs as the Tikhonov solution of
/// (mat†mat + εI)x = mat†rhs with ε = eps_rel × mean |diag(mat)|, i.e. the
/// eigenvalue filter λ/(λ² + ε). `regularized` reports a condition number
/// above 1/eps_rel. eps_rel = 0 gives the pseudo-inverse.
struct RegularizedResult {
    Eigen::MatrixXcd x;
    double epsilon_abs{0.0};
    double condition{0.0};
    bool regularized{false};
};
RegularizedResult solve_hermitian_regularized(const Eigen::MatrixXcd& mat, const Eigen::MatrixXcd& rhs,
                                              double eps_rel);

struct IntegratorConfig {
    double dt{0.01};
    double t_final{300.0};
    double epsilon_reg{kDefaultEpsilonReg};
    std::uint64_t noise_seed{1};
    double noise_scale{1e-3};
    int output_stride{10};
    double norm_abort{1e-3};      // abort when |⟨D|D⟩ − 1| exceeds this
    double residual_tol{1e-6};    // solves above this are counted in the trajectory
    double residual_abort{0.5};   // a solve above this aborts the run
    double epsilon_max{1e-6};     // ε escalation limit for non-finite solves

    void validate() const;
};

struct Trajectory {
    std::vector<ObservableRecord> records;
    MultiD1State final_state;
    ObservableDiagnostics diagnostics;
    std::size_t regularized_solves{0};
    std::size_t residual_exceedances{0};  // block solves with residual above residual_tol
    double max_residual{0.0};
    std::size_t steps{0};
};

/// Evaluation context for one model/bath pair. Immutable after construction.
class VariationalDynamics {
public:
    VariationalDynamics(const ModelParams& params, DiscretizedBath bath, double epsilon_reg = kDefaultEpsilonReg);

    const DiscretizedBath& bath() const noexcept { return bath_; }
    const ModelParams& params() const noexcept { return params_; }
    const SystemMatrices& system() const noexcept { return sys_; }

    /// Reservoir drive amplitudes ε_hk(t) = (λ_k/2) e^{−ikx_h − iω_k t}.
    std::array<Eigen::VectorXcd, 2> drive(double t) const;

    EomBlocks assemble_eom(const MultiD1State& s, double t) const;
    EomBlocks assemble_eom(const MultiD1State& s, const OverlapTable& ov, double t) const;

    /// Solves each block with its own ε and recovers Ȧ_nj = a_nj + A_nj Re(f_nj†ḟ_nj).
    /// Non-finite solutions are retried with ε × 10 up to epsilon_max; a
    /// residual ‖𝓜y + i𝓘‖/‖𝓘‖ above residual_abort throws IntegrationFailure.
    Derivatives solve_eom(const EomBlocks& blocks, const MultiD1State& s, double t,
                          double residual_abort = 0.5, double epsilon_max = 1e-6) const;

    Derivatives derivatives(const MultiD1State& s, double t) const;

    /// ⟨H̃(t)⟩ over the variational state.
    double interaction_energy(const MultiD1State& s, const OverlapTable& ov, double t) const;
    /// ⟨H̃²(t)⟩.
    double hamiltonian_squared(const MultiD1State& s, const OverlapTable& ov, double t) const;
    /// ⟨Ḋ|Ḋ⟩ from solved block derivatives.
    double derivative_norm(const EomBlocks& blocks, const Derivatives& d) const;
    /// Lab-frame energy ⟨H̃(t)⟩ + Σ_k ω_k N(k,t).
    double lab_energy(const MultiD1State& s, const OverlapTable& ov, const Eigen::VectorXd& n_k) const;

    /// σ²(t) = (⟨H̃²⟩ − ⟨Ḋ|Ḋ⟩)/ω₀²; negatives beyond −1e−8 are reported
    /// through diag, smaller ones are clamped to zero.
    double deviation_norm(const MultiD1State& s, const EomBlocks& blocks, const Derivatives& d, double t,
                          ObservableDiagnostics* diag = nullptr) const;

    ObservableRecord observe(const MultiD1State& s, double t, ObservableDiagnostics* diag = nullptr) const;

private:
    ModelParams params_;
    DiscretizedBath bath_;
    SystemMatrices sys_;
    double epsilon_reg_;
    std::array<Eigen::VectorXd, 2> phase_;  // k x_h
    Eigen::VectorXd half_lambda_;
    double lambda2_quarter_sum_{0.0};       // Σ_k λ_k²/4
    double lambda2_quarter_cos_{0.0};       // Σ_k λ_k²/4 cos(kd)
};

using RecordObserver = std::function<void(const ObservableRecord&, const MultiD1State&)>;

/// Classic fixed-step RK4 from state.t to config.t_final. Observables are
/// recorded at the start and every output_stride steps (and at the end).
Trajectory propagate(const MultiD1State& initial, const VariationalDynamics& dyn, const IntegratorConfig& config,
                     const RecordObserver& observer = {});

/// Checkpoint (A, f, t) as JSON.
void save_checkpoint(const std::string& path, const MultiD1State& s);
MultiD1State load_checkpoint(const std::string& path);

} // namespace wgqed
