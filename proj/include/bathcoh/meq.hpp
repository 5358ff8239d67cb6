// meq.hpp — time-local moment equations ∂t f = -M f + f0 for the two-mode model
#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bathcoh/exact.hpp"
#include "bathcoh/model_bath.hpp"
#include "bathcoh/moments.hpp"

namespace bathcoh {

enum class GeneratorKind { BR, SpBR, Secular, CollectiveLindblad, IndividualLindblad };

const char* to_string(GeneratorKind k);

struct Generator {
    Eigen::Matrix4d M{Eigen::Matrix4d::Zero()};
    Eigen::Vector4d f0{Eigen::Vector4d::Zero()};
    GeneratorKind kind{GeneratorKind::BR};
};

// Kossakowski matrices of the Bloch-Redfield dissipator and the Lamb-shift matrix.
struct KossakowskiPair {
    Eigen::Matrix2cd Ldown;
    Eigen::Matrix2cd Lup;
    Eigen::Matrix2cd h;
};

struct LindbladRates {
    Eigen::Vector2d down;  // ascending eigenvalues of L↓
    Eigen::Vector2d up;    // ascending eigenvalues of L↑
};

// ---- Generators ----

Generator br_generator(const SystemSpec& sys, const BathSpec& bath);
Generator spbr_generator(const SystemSpec& sys, const BathSpec& bath);
Generator secularize(const Generator& g);
Generator collective_generator(const SystemSpec& sys, const BathSpec& bath);
Generator individual_generator(const SystemSpec& sys, const BathSpec& bath);
// kind ∈ {BR, SpBR}: bath-summed matrix and inhomogeneity.
Generator multibath_generator(const MultiBathSpec& multi, const SystemSpec& sys, GeneratorKind kind);

// Moment equations of a general quadratic Lindblad-type equation
//   ρ̇ = -i[Σ H1_ij ψ_i†ψ_j, ρ] + Σ A_ij (2ψ_j ρ ψ_i† - {ψ_i†ψ_j, ρ})
//                              + Σ B_ij (2ψ_j† ρ ψ_i - {ψ_i ψ_j†, ρ}).
Generator quadratic_generator(const Eigen::Matrix2cd& H1, const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B,
                              GeneratorKind kind);

KossakowskiPair kossakowski(const SystemSpec& sys, const BathSpec& bath);

// Coefficients (H1, A, B) of the Bloch-Redfield equation in the quadratic form above:
// H1 = diag(ω) - h∘φφ, A = L↓∘φφ, B = L↑∘φφ.
struct QuadraticCoefficients {
    Eigen::Matrix2cd H1;
    Eigen::Matrix2cd A;
    Eigen::Matrix2cd B;
};
QuadraticCoefficients br_coefficients(const SystemSpec& sys, const BathSpec& bath);
LindbladRates lindblad_rates(const KossakowskiPair& kp);
// λ_σ = K̄'_σ ± S_σ, S_σ² = (K̄'_σ)² + |δK_σ|², in ascending order.
LindbladRates lindblad_rates_closed_form(const SystemSpec& sys, const BathSpec& bath);

// ---- Evolution ----

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentVector> f;
    bool used_integrator{false};  // M was (numerically) defective
};

Trajectory evolve(const Generator& g, const MomentVector& f_init, std::span<const double> times);
// Always uses the adaptive Dormand-Prince integrator (tolerance tol).
Trajectory evolve_integrator(const Generator& g, const MomentVector& f_init, std::span<const double> times,
                             double tol = 1e-10);

// Fixed point M⁻¹f0; NoSteadyState when cond(M) > 1e12.
MomentVector steady_state(const Generator& g);
double condition_number(const Eigen::Matrix4d& M);

// ---- Spectra and rates ----

std::array<cplx, 4> closed_form_eigenvalues(const SystemSpec& sys, const BathSpec& bath);
std::array<cplx, 4> closed_form_eigenvalues(const MultiBathSpec& multi, const SystemSpec& sys);
std::array<cplx, 4> numeric_eigenvalues(const Eigen::Matrix4d& M);

// 2Δ²K̃'_aK̃'_b + Δ(K̃'_a+K̃'_b)(K̃'_aK̃''_b - K̃'_bK̃''_a); positive ⇒ stable.
double stability_margin(const SystemSpec& sys, const BathSpec& bath);

// |dK/dω|·|K| at Ω, and whether it reaches the advisory threshold 0.1.
double markov_scale(const SystemSpec& sys, const BathSpec& bath);
inline constexpr double kMarkovThreshold = 0.1;
inline bool markov_flag(const SystemSpec& sys, const BathSpec& bath)
{
    return markov_scale(sys, bath) >= kMarkovThreshold;
}

// Slow eigenvalue μ0 of M to second order in Δ (BR includes the δK term).
double br_perturbative_rate(const SystemSpec& sys, const BathSpec& bath);
double spbr_perturbative_rate(const SystemSpec& sys, const BathSpec& bath);

}  // namespace bathcoh
