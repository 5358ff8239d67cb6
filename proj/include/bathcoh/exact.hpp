// exact.hpp — exact reduced dynamics of two modes coupled linearly to harmonic baths
#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bathcoh/model_bath.hpp"
#include "bathcoh/moments.hpp"

namespace bathcoh {

// One bath together with the pattern (φ_a, φ_b) of system operators it couples to.
struct Channel {
    BathSpec bath;
    double phi_a{0.0};
    double phi_b{0.0};
};

class MultiBathSpec {
public:
    explicit MultiBathSpec(std::vector<Channel> channels);
    static MultiBathSpec single(const SystemSpec& sys, const BathSpec& bath);

    const std::vector<Channel>& channels() const noexcept { return channels_; }
    // True when all coupling vectors are parallel (rank-one coupling matrix).
    bool parallel_couplings() const;

private:
    std::vector<Channel> channels_;
};

struct Pole {
    cplx zeta{0.0};
    double residual{0.0};    // |d(ζ0)|
    bool violation{false};   // Im ζ0 above the real axis beyond tolerance
};

struct PoleSet {
    std::vector<Pole> roots;
    bool has_violation() const;
    // Root with the smallest decay rate -Im ζ0.
    const Pole& slowest() const;
};

// d(ζ) = -(ω_a-ζ)(ω_b-ζ) + iK*(ζ)[φ_a²(ω_b-ζ) + φ_b²(ω_a-ζ)]
cplx denominator_d(const SystemSpec& sys, const BathSpec& bath, cplx zeta);

// 𝒢(ζ) from [𝒢⁻¹]_ij = iδ_ij(ω_i-ζ) + Σ_n φ_i φ_j K*_n(ζ); real ζ uses the +i0 limit.
Eigen::Matrix2cd green_matrix(const MultiBathSpec& multi, const SystemSpec& sys, cplx zeta);
Eigen::Matrix2cd green_inverse(const MultiBathSpec& multi, const SystemSpec& sys, cplx zeta);

PoleSet find_poles(const SystemSpec& sys, const BathSpec& bath);
PoleSet find_poles(const MultiBathSpec& multi, const SystemSpec& sys);

// -Im ζ0 of the slow root to second order in Δ.
double perturbative_pole_rate(const SystemSpec& sys, const BathSpec& bath);

// D_i(t) for mode i (0 = a, 1 = b).
cplx propagator_D(const SystemSpec& sys, const BathSpec& bath, int mode, double t);
// D_i^(n)(k·dt), k = 0..n-1, for every channel n and mode i: result[n][i][k].
std::vector<std::array<std::vector<cplx>, 2>> propagator_grid(const MultiBathSpec& multi, const SystemSpec& sys,
                                                              double dt, std::size_t n);

// F(t) on a uniform grid starting at 0, by the incremental double convolution.
std::vector<SecondMoments> exact_moments(const SystemSpec& sys, const BathSpec& bath, std::span<const double> times);
std::vector<SecondMoments> exact_moments_multibath(const MultiBathSpec& multi, const SystemSpec& sys,
                                                   std::span<const double> times);

// F(t) from the frequency-domain form ∫ J n W_i* W_j dν (independent cross-check).
SecondMoments exact_moments_spectral(const SystemSpec& sys, const BathSpec& bath, double t);
SecondMoments exact_moments_spectral(const MultiBathSpec& multi, const SystemSpec& sys, double t);

// Late-time limit. Throws NoSteadyState at exact degeneracy with parallel couplings.
SecondMoments exact_steady_state(const SystemSpec& sys, const BathSpec& bath);
SecondMoments exact_steady_state(const MultiBathSpec& multi, const SystemSpec& sys);

}  // namespace bathcoh
