// diag.hpp — positivity and sum-rule diagnostics, discretized-bath and truncated-Fock oracles
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bathcoh/exact.hpp"
#include "bathcoh/meq.hpp"
#include "bathcoh/model_bath.hpp"
#include "bathcoh/moments.hpp"

namespace bathcoh {

// Boundary of the physical set: F = u u† with u = (√n_a, √n_b e^{-iθ}).
struct MinimumUncertaintyState {
    double n_a{0.0};
    double n_b{0.0};
    double theta{0.0};  // phase in [0, 2π)

    // diag(n_a, n_b), F_ab = √(n_a n_b) e^{iθ}; one zero eigenvalue.
    SecondMoments covariance() const;
    // Null vector (√n_b, -√n_a e^{-iθ}).
    Eigen::Vector2cd null_vector() const;
};

struct OracleConfig {
    std::size_t N{0};      // bath modes per channel; 0 = sized from the time grid
    double nu_max{0.0};    // discretization cutoff; 0 = bath support upper edge
    int n_max{6};          // Fock truncation per mode
};

// ---- Diagnostics ----

// Smaller eigenvalue λ_m of the Hermitian 2×2 F, in closed form.
double min_eigen_F(const SecondMoments& m);

// ℓM + (ω_a-ω_b)φ_aφ_b·e4 with ℓ = (φ_b², φ_a², -φ_aφ_b, 0), so that ℓ·f = ⟨X†X⟩ for
// X = φ_b a - φ_a b. Zero when X feels the bath only through free rotation.
Eigen::RowVector4d sum_rule_residual(const Generator& g, const SystemSpec& sys);

// φ_a²K'_{a↑}n_b + φ_b²K'_{b↑}n_a - 2φ_aφ_b√(n_a n_b)[K̄'_↑cosθ - δK''_↑sinθ].
// Negative ⇒ the BR map pushes s out of the physical set.
double gaussian_positivity_violation(const SystemSpec& sys, const BathSpec& bath, const MinimumUncertaintyState& s);

// ---- Discretized-bath oracle ----

// Recurrence time 2π/δν of the uniform grid used for a channel.
double oracle_recurrence_time(const BathSpec& bath, const OracleConfig& cfg, double t_max);

// Unitary dynamics of the system plus N discretized modes per bath; system starts in
// vacuum, bath modes thermally occupied. Times must stay below the recurrence time.
std::vector<SecondMoments> discretized_bath_oracle(const SystemSpec& sys, const BathSpec& bath,
                                                   const OracleConfig& cfg, std::span<const double> times);
std::vector<SecondMoments> discretized_bath_oracle(const MultiBathSpec& multi, const SystemSpec& sys,
                                                   const OracleConfig& cfg, std::span<const double> times);

// ---- Truncated-Fock oracle ----

// Quadratic master equation on the two-mode number basis |n_a, n_b⟩, n ≤ n_max.
class FockModel {
public:
    FockModel(const QuadraticCoefficients& q, int n_max);
    // Bloch-Redfield dissipator and Lamb shift of (sys, bath).
    FockModel(const SystemSpec& sys, const BathSpec& bath, int n_max);

    int n_max() const noexcept { return n_max_; }
    int dimension() const noexcept { return dim_; }
    int index(int na, int nb) const { return na * (n_max_ + 1) + nb; }

    Eigen::MatrixXcd vacuum() const;
    Eigen::MatrixXcd pure_state(const Eigen::VectorXcd& psi) const;

    // ρ̇ for the truncated generator.
    Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& rho) const;
    SecondMoments moments(const Eigen::MatrixXcd& rho) const;
    // Population on states with n_a = n_max or n_b = n_max.
    double boundary_population(const Eigen::MatrixXcd& rho) const;

    // Adaptive Dormand-Prince propagation; TruncationError once the boundary
    // population at an output time exceeds guard.
    std::vector<Eigen::MatrixXcd> propagate(const Eigen::MatrixXcd& rho0, std::span<const double> times,
                                            double tol = 1e-12, double guard = 1e-8) const;

private:
    int n_max_;
    int dim_;
    Eigen::MatrixXcd a_[2];  // annihilators for modes a, b
    Eigen::SparseMatrix<cplx> liouvillian_;  // acts on column-stacked ρ
};

std::vector<SecondMoments> fock_oracle(const SystemSpec& sys, const BathSpec& bath, const OracleConfig& cfg,
                                       std::span<const double> times);

}  // namespace bathcoh
