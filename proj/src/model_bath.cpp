// model_bath.cpp — spectral densities, occupations, Hilbert transforms, continuation

#include "bathcoh/model_bath.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "bathcoh/quadrature.hpp"

namespace bathcoh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-12;

double super_ohmic(const SuperOhmic& s, double nu)
{
    if (!(nu > 0.0)) return 0.0;
    const double x = nu / s.omega0;
    const double u = x - 1.0;
    // log x - (x - 1) cancels near the peak; log1p keeps it accurate there
    const double e = std::abs(u) < 0.5 ? std::log1p(u) - u : std::log(x) - u;
    return s.J0 * std::exp(s.z * e);
}

cplx super_ohmic(const SuperOhmic& s, cplx zeta)
{
    const cplx x = zeta / s.omega0;
    if (x == 0.0) return 0.0;
    return s.J0 * std::exp(s.z - s.z * x + s.z * std::log(x));
}

void check_super_ohmic(const SuperOhmic& s)
{
    if (!(s.J0 >= 0.0) || !(s.omega0 > 0.0) || !(s.z > 0.0))
        throw DomainError("SuperOhmic: need J0 >= 0, omega0 > 0, z > 0");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---- Spectral densities ----

double j_value(const SpectralDensity& spec, double nu)
{
    return std::visit(
        overloaded{
            [&](const SuperOhmic& s) { return super_ohmic(s, nu); },
            [&](const Flat& f) { return (nu >= f.nu_min && nu <= f.nu_max) ? f.J0 : 0.0; },
            [&](const MultiPeak& m) {
                double acc = 0.0;
                for (const auto& p : m.peaks) acc += super_ohmic(p, nu);
                return acc;
            },
            [&](const Tabulated& t) {
                if (t.nu.empty() || nu < t.nu.front() || nu > t.nu.back()) return 0.0;
                auto it = std::upper_bound(t.nu.begin(), t.nu.end(), nu);
                if (it == t.nu.end()) return t.J.back();
                const std::size_t k = static_cast<std::size_t>(it - t.nu.begin());
                const double x0 = t.nu[k - 1], x1 = t.nu[k];
                const double s = (nu - x0) / (x1 - x0);
                return (1.0 - s) * t.J[k - 1] + s * t.J[k];
            },
        },
        spec);
}

cplx j_continued(const SpectralDensity& spec, cplx zeta)
{
    return std::visit(
        overloaded{
            [&](const SuperOhmic& s) { return super_ohmic(s, zeta); },
            [&](const Flat& f) { return cplx(f.J0); },
            [&](const MultiPeak& m) {
                cplx acc = 0.0;
                for (const auto& p : m.peaks) acc += super_ohmic(p, zeta);
                return acc;
            },
            [&](const Tabulated&) -> cplx {
                throw DomainError("j_continued: tabulated spectral density has no analytic continuation");
            },
        },
        spec);
}

// ---- Cache ----

bool ResponseCache::lookup(double omega, BathResponse& out) const
{
    std::shared_lock lock(mu_);
    auto it = table_.find(omega);
    if (it == table_.end()) return false;
    out = it->second;
    return true;
}

void ResponseCache::store(double omega, const BathResponse& r)
{
    std::unique_lock lock(mu_);
    table_.emplace(omega, r);  // first writer wins; entries never change
}

std::size_t ResponseCache::size() const
{
    std::shared_lock lock(mu_);
    return table_.size();
}

// ---- BathSpec ----

BathSpec::BathSpec(SpectralDensity spectral, Occupation occ)
    : spectral_(std::move(spectral)), occupation_(std::move(occ)), cache_(std::make_shared<ResponseCache>())
{
    std::visit(overloaded{
                   [](const Thermal& t) {
                       if (!(t.kBT > 0.0)) throw DomainError("Thermal: kBT must be > 0");
                   },
                   [](const FlatOccupation& f) {
                       if (!(f.n0 >= 0.0)) throw DomainError("FlatOccupation: n0 must be >= 0");
                   },
               },
               occupation_);

    // peaks (for the tail search) and structural breakpoints
    std::vector<SuperOhmic> peaks;
    std::visit(overloaded{
                   [&](const SuperOhmic& s) {
                       check_super_ohmic(s);
                       peaks.push_back(s);
                   },
                   [&](const Flat& f) {
                       if (!(f.J0 >= 0.0) || !(f.nu_max > f.nu_min))
                           throw DomainError("Flat: need J0 >= 0 and nu_max > nu_min");
                       if (is_thermal() && f.nu_min <= 0.0 && f.J0 > 0.0)
                           throw DomainError("Flat: thermal occupation requires nu_min > 0");
                       lo_ = f.nu_min;
                       hi_ = f.nu_max;
                       jref_ = f.J0;
                       scale_ = f.nu_max - f.nu_min;
                   },
                   [&](const MultiPeak& m) {
                       if (m.peaks.empty()) throw DomainError("MultiPeak: at least one component required");
                       for (const auto& p : m.peaks) check_super_ohmic(p);
                       peaks = m.peaks;
                   },
                   [&](const Tabulated& t) {
                       if (t.nu.size() < 2 || t.nu.size() != t.J.size())
                           throw DomainError("Tabulated: need >= 2 matching (nu, J) samples");
                       for (std::size_t k = 0; k < t.nu.size(); ++k) {
                           if (k > 0 && !(t.nu[k] > t.nu[k - 1]))
                               throw DomainError("Tabulated: nu grid must be strictly increasing");
                           if (!(t.J[k] >= 0.0)) throw DomainError("Tabulated: J must be >= 0");
                           if (is_thermal() && t.nu[k] <= 0.0 && t.J[k] > 0.0)
                               throw DomainError("Tabulated: thermal occupation requires J = 0 at nu <= 0");
                       }
                       lo_ = t.nu.front();
                       hi_ = t.nu.back();
                       jref_ = *std::max_element(t.J.begin(), t.J.end());
                       scale_ = hi_ - lo_;
                       for (std::size_t k = 1; k < t.nu.size(); ++k) {
                           scale_ = std::min(scale_, t.nu[k] - t.nu[k - 1]);
                           if (k + 1 < t.nu.size()) breaks_.push_back(t.nu[k]);
                       }
                   },
               },
               spectral_);

    if (!peaks.empty()) {
        lo_ = 0.0;
        double top = 0.0;
        scale_ = 1e300;
        for (const auto& p : peaks) {
            jref_ = std::max(jref_, p.J0);
            top = std::max(top, p.omega0);
            scale_ = std::min(scale_, p.omega0 / std::sqrt(p.z));
            breaks_.push_back(p.omega0);
        }
        if (jref_ == 0.0) {
            hi_ = top;
        } else {
            // tail cutoff: J·max(n+1, 1) < 1e-14·J0
            const double thr = 1e-14 * jref_;
            auto tail = [&](double nu) { return weighted(nu, Weight::Down); };
            double a = top, b = 2.0 * top;
            while (tail(b) >= thr) {
                a = b;
                b *= 2.0;
            }
            for (int it = 0; it < 200 && b - a > 1e-9 * b; ++it) {
                const double m = 0.5 * (a + b);
                (tail(m) >= thr ? a : b) = m;
            }
            hi_ = b;
        }
        std::sort(breaks_.begin(), breaks_.end());
    }
}

double BathSpec::weighted(double nu, Weight w) const
{
    const double J = j(nu);
    if (w == Weight::Bare || J == 0.0) return w == Weight::Bare || w == Weight::Down ? J : 0.0;
    double n = 0.0;
    if (const auto* t = std::get_if<Thermal>(&occupation_)) {
        if (!(nu > 0.0)) throw DomainError("occupation: thermal occupation undefined at nu <= 0 inside the support");
        n = 1.0 / std::expm1(nu / t->kBT);
    } else {
        n = std::get<FlatOccupation>(occupation_).n0;
    }
    return w == Weight::Up ? J * n : J * (n + 1.0);
}

// ---- System ----

SystemSpec::SystemSpec(double omega_a, double omega_b, cplx phi_a, cplx phi_b)
    : wa_(omega_a), wb_(omega_b), pa_(std::abs(phi_a)), pb_(std::abs(phi_b))
{
    if (!std::isfinite(wa_) || !std::isfinite(wb_) || !std::isfinite(pa_) || !std::isfinite(pb_))
        throw DomainError("SystemSpec: non-finite parameter");
}

SystemSpec SystemSpec::from_detuning(double Omega, double Delta, cplx phi_a, cplx phi_b)
{
    return SystemSpec(Omega + Delta, Omega - Delta, phi_a, phi_b);
}

// ---- Response functions ----

double occupation(const BathSpec& bath, double nu)
{
    if (const auto* t = std::get_if<Thermal>(&bath.occupation())) {
        if (!(nu > 0.0)) throw DomainError("occupation: thermal occupation requires nu > 0");
        return 1.0 / std::expm1(nu / t->kBT);
    }
    return std::get<FlatOccupation>(bath.occupation()).n0;
}

namespace {

std::vector<double> pieces(const BathSpec& bath, std::vector<double> extra)
{
    // keep GK panels a few structure scales long so adaptivity starts well
    const double lo = bath.support_lo(), hi = bath.support_hi();
    const double h = std::max(4.0 * bath.structure_scale(), (hi - lo) / 64.0);
    std::vector<double> pts = bath.breakpoints();
    for (double x = lo + h; x < hi; x += h) pts.push_back(x);
    // dyadic grading toward lo, where J·n may behave like a fractional power of ν
    const double first = std::min(h, hi - lo);
    for (int k = 1; k <= 30; ++k) pts.push_back(lo + std::ldexp(first, -k));
    // a sliver panel next to a subtracted singularity confuses the error
    // estimate, so structural points too close to an extra point are dropped
    const double gap = 1e-2 * bath.structure_scale();
    std::erase_if(pts, [&](double p) {
        return std::any_of(extra.begin(), extra.end(), [&](double e) { return std::abs(p - e) < gap; });
    });
    pts.insert(pts.end(), extra.begin(), extra.end());
    return quad::clip_points(lo, hi, pts);
}

}  // namespace

cplx alpha(const BathSpec& bath, double tau)
{
    if (bath.is_zero()) return 0.0;
    const double at = std::abs(tau);
    std::vector<double> extra;
    if (at > 0.0) {
        const double h = 2.0 * kPi / at;  // one oscillation per piece
        for (double x = bath.support_lo() + h; x < bath.support_hi(); x += h) extra.push_back(x);
    }
    auto f = [&](double nu) { return bath.weighted(nu, Weight::Up) * std::polar(1.0, -nu * at); };
    const cplx v = quad::integrate(f, pieces(bath, extra), kQuadTol, 0.0, "alpha");
    return tau < 0.0 ? std::conj(v) : v;
}

std::vector<cplx> alpha_grid(const BathSpec& bath, double dt, std::size_t n)
{
    std::vector<cplx> out(n, 0.0);
    if (bath.is_zero() || n == 0) return out;
    const double tmax = dt * static_cast<double>(n - 1);
    const double hosc = tmax > 0.0 ? 1.5 / tmax : 1e300;
    const double hmax = std::min(0.25 * bath.structure_scale(), hosc);
    const auto br = quad::graded_breaks(bath.support_lo(), bath.support_hi(), {}, {}, hmax, bath.breakpoints());
    const quad::Rule rule = quad::gauss_legendre(br);

    std::vector<cplx> amp(rule.x.size()), step(rule.x.size());
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        amp[q] = rule.w[q] * bath.weighted(rule.x[q], Weight::Up);
        step[q] = std::polar(1.0, -rule.x[q] * dt);
    }
    std::vector<cplx> ph(rule.x.size(), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (k % 256 == 0) {  // re-anchor phasors to stop rounding drift
            for (std::size_t q = 0; q < ph.size(); ++q) ph[q] = std::polar(1.0, -rule.x[q] * dt * double(k));
        }
        cplx acc = 0.0;
        for (std::size_t q = 0; q < ph.size(); ++q) {
            acc += amp[q] * ph[q];
            ph[q] *= step[q];
        }
        out[k] = acc;
    }
    return out;
}

double hilbert_pv(const BathSpec& bath, double omega, Weight w)
{
    if (bath.is_zero()) return 0.0;
    const double lo = bath.support_lo(), hi = bath.support_hi();
    const double floor = 1e-3 * bath.j_reference();
    if (omega > lo && omega < hi) {
        const double g0 = bath.weighted(omega, w);
        // Core [ω-δ, ω+δ] folded onto (g(ω+u) - g(ω-u))/u with a fixed rule: the
        // adaptive routine would otherwise chase rounding noise of g(x) - g0 at x → ω.
        double delta = std::min({0.25 * bath.structure_scale(), 0.5 * (omega - lo), 0.5 * (hi - omega)});
        for (double b : bath.breakpoints())
            if (b != omega) delta = std::min(delta, 0.5 * std::abs(b - omega));
        double core = 0.0;
        if (delta > 0.0) {
            auto odd = [&](double u) { return (bath.weighted(omega + u, w) - bath.weighted(omega - u, w)) / u; };
            core = boost::math::quadrature::gauss<double, 30>::integrate(odd, 0.0, delta);
        }
        auto f = [&](double x) { return (bath.weighted(x, w) - g0) / (x - omega); };
        std::vector<double> pts = pieces(bath, {omega - delta, omega + delta});
        double v = core;
        v += quad::integrate(f, quad::clip_points(lo, omega - delta, pts), kQuadTol, floor, "hilbert_pv");
        v += quad::integrate(f, quad::clip_points(omega + delta, hi, pts), kQuadTol, floor, "hilbert_pv");
        return v + g0 * std::log((hi - omega) / (omega - lo));
    }
    if ((omega == lo || omega == hi) && bath.weighted(omega, w) != 0.0)
        throw DomainError("hilbert_pv: principal value diverges at a band edge");
    auto f = [&](double x) { return bath.weighted(x, w) / (x - omega); };
    return quad::integrate(f, pieces(bath, {}), kQuadTol, floor, "hilbert_pv");
}

HilbertTable::HilbertTable(const BathSpec& bath, Weight w)
    : bath_(&bath), w_(w), lo_(bath.support_lo()), hi_(bath.support_hi())
{
    if (bath.is_zero()) return;
    const double panel = std::min(bath.structure_scale() / 8.0, (hi_ - lo_) / 64.0);
    const auto br = quad::graded_breaks(lo_, hi_, {}, {}, panel, bath.breakpoints());
    const auto rule = quad::gauss_legendre(br);
    x_ = rule.x;
    wq_ = rule.w;
    g_.resize(x_.size());
    for (std::size_t q = 0; q < x_.size(); ++q) g_[q] = bath.weighted(x_[q], w);
}

double HilbertTable::pv(double omega) const
{
    if (x_.empty()) return 0.0;
    double acc = 0.0;
    if (omega > lo_ && omega < hi_) {
        const double g0 = bath_->weighted(omega, w_);
        for (std::size_t q = 0; q < x_.size(); ++q) {
            const double dx = x_[q] - omega;
            if (dx != 0.0) {
                acc += wq_[q] * (g_[q] - g0) / dx;
            } else {
                const double h = 1e-6 * std::max(1.0, std::abs(omega));
                acc += wq_[q] * (bath_->weighted(omega + h, w_) - bath_->weighted(omega - h, w_)) / (2.0 * h);
            }
        }
        return acc + g0 * std::log((hi_ - omega) / (omega - lo_));
    }
    if ((omega == lo_ || omega == hi_) && bath_->weighted(omega, w_) != 0.0)
        throw DomainError("HilbertTable: principal value diverges at a band edge");
    for (std::size_t q = 0; q < x_.size(); ++q) acc += wq_[q] * g_[q] / (x_[q] - omega);
    return acc;
}

cplx HilbertTable::k_conj(double omega) const
{
    return cplx(kPi * bath_->j(omega), -pv(omega));
}

BathResponse response(const BathSpec& bath, double omega)
{
    BathResponse r;
    if (bath.cache().lookup(omega, r)) return r;
    const double pi = kPi;
    r.K = cplx(pi * bath.weighted(omega, Weight::Bare), hilbert_pv(bath, omega, Weight::Bare));
    r.Kup = cplx(pi * bath.weighted(omega, Weight::Up), hilbert_pv(bath, omega, Weight::Up));
    r.Kdown = cplx(pi * bath.weighted(omega, Weight::Down), hilbert_pv(bath, omega, Weight::Down));
    bath.cache().store(omega, r);
    return r;
}

cplx response_continued(const BathSpec& bath, cplx zeta)
{
    if (bath.is_zero()) return 0.0;
    const double x0 = zeta.real(), y0 = zeta.imag();
    if (y0 == 0.0) return cplx(kPi * bath.j(x0), -hilbert_pv(bath, x0, Weight::Bare));

    const bool tabulated = std::holds_alternative<Tabulated>(bath.spectral());
    if (tabulated && y0 < 0.0)
        throw DomainError("response_continued: tabulated spectral density cannot be continued below the axis");

    const double lo = bath.support_lo(), hi = bath.support_hi();
    const double floor = 1e-3 * bath.j_reference();
    cplx I;
    if (!tabulated && x0 > lo && x0 < hi) {
        // ∫[J(x) - J(ζ)]/(x-ζ) + J(ζ)[log(hi-ζ) - log(lo-ζ)]
        const cplx jz = j_continued(bath.spectral(), zeta);
        auto f = [&](double x) { return (bath.j(x) - jz) / (x - zeta); };
        I = quad::integrate(f, pieces(bath, {x0}), kQuadTol, floor, "response_continued");
        I += jz * (std::log(cplx(hi) - zeta) - std::log(cplx(lo) - zeta));
    } else {
        auto f = [&](double x) { return bath.j(x) / (x - zeta); };
        I = quad::integrate(f, pieces(bath, {x0}), kQuadTol, floor, "response_continued");
    }
    cplx k = cplx(0.0, -1.0) * I;
    if (y0 < 0.0) k += 2.0 * kPi * j_continued(bath.spectral(), zeta);
    return k;
}

}  // namespace bathcoh
