// model_bath.hpp — system/bath specifications and bath response functions
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <shared_mutex>
#include <variant>
#include <vector>

#include "bathcoh/errors.hpp"

namespace bathcoh {

using cplx = std::complex<double>;

// ---- Spectral densities ----

// J(ν) = J0 e^{z - zν/ω0} (ν/ω0)^z for ν > 0, peak J0 at ν = ω0.
struct SuperOhmic {
    double J0{0.001};
    double omega0{0.9};
    double z{3.0};
};

// J(ν) = J0 on [nu_min, nu_max], zero elsewhere.
struct Flat {
    double J0{0.001};
    double nu_min{0.0};
    double nu_max{2.0};
};

struct MultiPeak {
    std::vector<SuperOhmic> peaks;
};

// Piecewise-linear interpolation of (nu, J) samples; zero outside the grid.
struct Tabulated {
    std::vector<double> nu;
    std::vector<double> J;
};

using SpectralDensity = std::variant<SuperOhmic, Flat, MultiPeak, Tabulated>;

double j_value(const SpectralDensity& spec, double nu);

// Closed-form J continued to complex argument (SuperOhmic, MultiPeak, Flat).
cplx j_continued(const SpectralDensity& spec, cplx zeta);

// ---- Occupations ----

struct Thermal {
    double kBT{0.52};
};

struct FlatOccupation {
    double n0{0.0};
};

using Occupation = std::variant<Thermal, FlatOccupation>;

// Which occupation factor multiplies J in a bath integral.
enum class Weight { Bare, Up, Down };  // J, J·n, J·(n+1)

struct BathResponse {
    cplx K{0.0};      // K = πJ + i PV∫J/(x-ω)
    cplx Kup{0.0};    // same with J·n
    cplx Kdown{0.0};  // same with J·(n+1)
};

// Write-once/read-many store of response values keyed by frequency.
class ResponseCache {
public:
    bool lookup(double omega, BathResponse& out) const;
    void store(double omega, const BathResponse& r);
    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<double, BathResponse> table_;
};

class BathSpec {
public:
    BathSpec(SpectralDensity spectral, Occupation occupation);

    const SpectralDensity& spectral() const noexcept { return spectral_; }
    const Occupation& occupation() const noexcept { return occupation_; }

    // Integration support [lo, hi] after the tail cutoff.
    double support_lo() const noexcept { return lo_; }
    double support_hi() const noexcept { return hi_; }
    // Interior points where the integrand has kinks or peaks.
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    // Smallest frequency scale on which J varies appreciably.
    double structure_scale() const noexcept { return scale_; }
    // Reference height used for the tail cutoff and tolerances.
    double j_reference() const noexcept { return jref_; }
    bool is_zero() const noexcept { return jref_ == 0.0; }
    bool is_thermal() const noexcept { return std::holds_alternative<Thermal>(occupation_); }

    double j(double nu) const { return j_value(spectral_, nu); }
    double weighted(double nu, Weight w) const;

    ResponseCache& cache() const { return *cache_; }

private:
    SpectralDensity spectral_;
    Occupation occupation_;
    double lo_{0.0}, hi_{0.0}, scale_{1.0}, jref_{0.0};
    std::vector<double> breaks_;
    std::shared_ptr<ResponseCache> cache_;
};

// ---- System ----

class SystemSpec {
public:
    // Complex couplings are accepted and rotated to real nonnegative amplitudes.
    SystemSpec(double omega_a, double omega_b, cplx phi_a, cplx phi_b);
    static SystemSpec from_detuning(double Omega, double Delta, cplx phi_a, cplx phi_b);

    double omega_a() const noexcept { return wa_; }
    double omega_b() const noexcept { return wb_; }
    double phi_a() const noexcept { return pa_; }
    double phi_b() const noexcept { return pb_; }
    double omega(int i) const noexcept { return i == 0 ? wa_ : wb_; }
    double phi(int i) const noexcept { return i == 0 ? pa_ : pb_; }
    double delta() const noexcept { return 0.5 * (wa_ - wb_); }
    double center() const noexcept { return 0.5 * (wa_ + wb_); }

private:
    double wa_, wb_, pa_, pb_;
};

// ---- Response functions ----

double occupation(const BathSpec& bath, double nu);

// α(τ) = ∫ J n e^{-iντ} dν.
cplx alpha(const BathSpec& bath, double tau);

// α(k·dt) for k = 0..n-1 on a shared quadrature grid.
std::vector<cplx> alpha_grid(const BathSpec& bath, double dt, std::size_t n);

// Cached K, K↑, K↓ at a real frequency.
BathResponse response(const BathSpec& bath, double omega);

// PV∫ J·w/(x-ω) dx over the bath support (uncached).
double hilbert_pv(const BathSpec& bath, double omega, Weight w);

// PV∫ J·w/(x-ω) on a fixed composite Gauss-Legendre rule, for cheap repeated
// evaluation at many real frequencies (bulk grids in the exact solver).
class HilbertTable {
public:
    HilbertTable(const BathSpec& bath, Weight w);
    double pv(double omega) const;
    // πJ(ω) - i PV∫J/(x-ω): the boundary value of K* (Bare weight only)
    cplx k_conj(double omega) const;

private:
    const BathSpec* bath_;
    Weight w_;
    double lo_, hi_;
    std::vector<double> x_, wq_, g_;
};

// K*(ζ) continued from the real axis: upper half plane by the Cauchy
// integral, real axis by its boundary value, lower half plane through the cut.
cplx response_continued(const BathSpec& bath, cplx zeta);

}  // namespace bathcoh
