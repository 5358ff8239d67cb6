// exact.cpp — poles, propagators and second moments of the exactly solvable model
//
// The propagator f_i(ζ) = -i[adj(𝒢⁻¹)φ]_i / det 𝒢⁻¹ is transformed to the
// time domain by pole subtraction: the near-real poles (and one far "tail"
// pole carrying the remaining 1/ζ weight) are transformed analytically, the
// smooth remainder by a trapezoid sum on a uniform real-axis grid.

#include "bathcoh/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "bathcoh/quadrature.hpp"

namespace bathcoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

using Vec2 = Eigen::Vector2cd;

// (e^{ix} - 1)/x, accurate for small |x|
cplx expm1_ratio(cplx x)
{
    if (std::abs(x) < 1e-3) return kI * (1.0 + kI * x / 2.0 - x * x / 6.0 - kI * x * x * x / 24.0);
    return (std::exp(kI * x) - 1.0) / x;
}

class Engine {
public:
    Engine(const MultiBathSpec& multi, const SystemSpec& sys) : multi_(multi), sys_(sys)
    {
        tables_.reserve(multi.channels().size());
        for (const auto& c : multi.channels()) tables_.emplace_back(c.bath, Weight::Bare);
    }

    const SystemSpec& sys() const { return sys_; }
    const std::vector<Channel>& channels() const { return multi_.channels(); }
    std::size_t nch() const { return multi_.channels().size(); }

    Eigen::Matrix2cd ginv(cplx z) const
    {
        Eigen::Matrix2cd G;
        G << kI * (sys_.omega_a() - z), 0.0, 0.0, kI * (sys_.omega_b() - z);
        for (std::size_t n = 0; n < nch(); ++n) {
            const auto& c = channels()[n];
            if (c.phi_a == 0.0 && c.phi_b == 0.0) continue;
            const cplx k = z.imag() == 0.0 ? tables_[n].k_conj(z.real()) : response_continued(c.bath, z);
            G(0, 0) += c.phi_a * c.phi_a * k;
            G(1, 1) += c.phi_b * c.phi_b * k;
            G(0, 1) += c.phi_a * c.phi_b * k;
            G(1, 0) += c.phi_a * c.phi_b * k;
        }
        return G;
    }

    static cplx det(const Eigen::Matrix2cd& G) { return G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0); }
    cplx det(cplx z) const { return det(ginv(z)); }

    // -i adj(G) φ^(n), the numerator of f^(n)
    Vec2 numerator(const Eigen::Matrix2cd& G, const Channel& c) const
    {
        Vec2 v;
        v(0) = G(1, 1) * c.phi_a - G(0, 1) * c.phi_b;
        v(1) = -G(1, 0) * c.phi_a + G(0, 0) * c.phi_b;
        return -kI * v;
    }

    // f^(n)(z) for every channel
    std::vector<Vec2> f_all(cplx z) const
    {
        const auto G = ginv(z);
        const cplx d = det(G);
        std::vector<Vec2> out;
        out.reserve(nch());
        for (const auto& c : channels()) out.push_back(numerator(G, c) / d);
        return out;
    }

    cplx ddet(cplx z) const
    {
        const double h = 1e-4 * std::max(1.0, std::abs(z));
        return (-det(z + 2.0 * h) + 8.0 * det(z + h) - 8.0 * det(z - h) + det(z - 2.0 * h)) / (12.0 * h);
    }

    double scale() const
    {
        const double w = std::max({1.0, std::abs(sys_.omega_a()), std::abs(sys_.omega_b())});
        return w * w;
    }

private:
    const MultiBathSpec& multi_;
    SystemSpec sys_;
    std::vector<HilbertTable> tables_;
};

cplx newton(const std::function<cplx(cplx)>& g, cplx z, double tol)
{
    for (int it = 0; it < 100; ++it) {
        const cplx v = g(z);
        if (std::abs(v) <= 1e-3 * tol) return z;
        const double h = 1e-7 * std::max(1.0, std::abs(z));
        const cplx dv = (g(z + h) - g(z - h)) / (2.0 * h);
        if (dv == 0.0 || !std::isfinite(std::abs(dv))) break;
        const cplx step = v / dv;
        z -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) return z;
    }
    if (std::abs(g(z)) < tol) return z;
    throw ConvergenceError("find_poles: Newton iteration did not converge near zeta = " +
                           std::to_string(z.real()) + std::to_string(z.imag()) + "i");
}

PoleSet poles_of(const Engine& e)
{
    const double tol = 1e-12 * e.scale();
    PoleSet ps;
    std::vector<cplx> found;
    for (double seed : {e.sys().omega_a(), e.sys().omega_b()}) {
        cplx z0 = seed;
        for (cplx r : found)
            if (std::abs(z0 - r) < 1e-6 * std::max(1.0, std::abs(r))) z0 -= kI * 1e-3 * std::max(1.0, std::abs(r));
        auto g = [&](cplx z) {
            cplx v = e.det(z);
            for (cplx r : found) v /= (z - r);
            return v;
        };
        const cplx root = newton(g, z0, tol);
        const double res = std::abs(e.det(root));
        if (!(res < tol)) throw ConvergenceError("find_poles: deflated Newton converged to a non-root");
        found.push_back(root);
        ps.roots.push_back(Pole{root, res, root.imag() > 1e-12 * std::max(1.0, std::abs(root))});
    }
    return ps;
}

// ---- Pole-subtracted representation of f^(n)_i on the real axis ----

struct Expansion {
    std::vector<cplx> poles;                 // near-real poles, then the tail pole
    std::vector<std::vector<Vec2>> residue;  // [pole][channel]
    double lo{0.0}, h{0.0};
    std::size_t nz{0};
    std::vector<std::vector<Vec2>> rem;      // [grid point][channel]

    cplx zeta(std::size_t k) const { return lo + h * double(k); }
    double weight(std::size_t k) const { return (k == 0 || k + 1 == nz) ? 0.5 * h : h; }
};

double largest_kbt(const std::vector<Channel>& chs)
{
    double t = 0.0;
    for (const auto& c : chs)
        if (const auto* th = std::get_if<Thermal>(&c.bath.occupation())) t = std::max(t, th->kBT);
    return t;
}

Expansion expand(const Engine& e, double t_max)
{
    Expansion ex;
    const PoleSet ps = poles_of(e);
    const double Om = e.sys().center();
    const double Dl = std::abs(e.sys().delta());

    for (const auto& p : ps.roots) {
        const auto G = e.ginv(p.zeta);
        const cplx dd = e.ddet(p.zeta);
        std::vector<Vec2> r;
        for (const auto& c : e.channels()) r.push_back(e.numerator(G, c) / dd);
        ex.poles.push_back(p.zeta);
        ex.residue.push_back(std::move(r));
    }
    // tail pole: carries the rest of the 1/ζ weight so the remainder decays as 1/ζ²
    const double gamma_tail = 1.0;
    ex.poles.push_back(cplx(Om, -gamma_tail));
    {
        std::vector<Vec2> r;
        for (std::size_t n = 0; n < e.nch(); ++n) {
            const auto& c = e.channels()[n];
            Vec2 v(c.phi_a, c.phi_b);
            for (std::size_t p = 0; p + 1 < ex.poles.size(); ++p) v -= ex.residue[p][n];
            r.push_back(v);
        }
        ex.residue.push_back(std::move(r));
    }

    // window and spacing
    double kmax = 0.0, structure = 1e300;
    for (const auto& c : e.channels()) {
        if (c.bath.is_zero()) continue;
        kmax = std::max(kmax, std::abs(response_continued(c.bath, cplx(Om))));
        structure = std::min(structure, c.bath.structure_scale());
    }
    const double W = 20.0 * std::max({Dl, kmax, largest_kbt(e.channels()), gamma_tail});
    double lo = Om - W, hi = Om + W;
    for (const auto& c : e.channels()) {
        if (c.bath.is_zero()) continue;
        if (c.bath.support_hi() - c.bath.support_lo() < 1e3) {
            lo = std::min(lo, c.bath.support_lo() - 1.0);
            hi = std::max(hi, c.bath.support_hi() + 1.0);
        }
    }
    double h = std::min({kPi / (4.0 * std::max(t_max, 1e-12)), 0.25 * structure, W / 200.0});
    const std::size_t nz = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    if (nz > 5'000'000)
        throw DomainError("propagator: real-axis grid would need " + std::to_string(nz) + " points; t_max too large");
    h = (hi - lo) / double(nz - 1);
    ex.lo = lo;
    ex.h = h;
    ex.nz = nz;
    ex.rem.resize(nz);
    for (std::size_t k = 0; k < nz; ++k) {
        const cplx z = ex.zeta(k);
        auto f = e.f_all(z);
        for (std::size_t p = 0; p < ex.poles.size(); ++p)
            for (std::size_t n = 0; n < f.size(); ++n) f[n] -= ex.residue[p][n] / (z - ex.poles[p]);
        ex.rem[k] = std::move(f);
    }
    return ex;
}

// D^(n)_i(m·dt) for m = 0..n-1
std::vector<std::array<std::vector<cplx>, 2>> d_grid(const Engine& e, const Expansion& ex, double dt, std::size_t nt)
{
    const std::size_t nc = e.nch();
    std::vector<std::array<std::vector<cplx>, 2>> D(nc);
    for (auto& d : D) d = {std::vector<cplx>(nt, 0.0), std::vector<cplx>(nt, 0.0)};

    // remainder: (1/2π) Σ_k w_k r_k e^{-iζ_k t}
    std::vector<cplx> ph(ex.nz), step(ex.nz);
    for (std::size_t k = 0; k < ex.nz; ++k) step[k] = std::polar(1.0, -ex.zeta(k).real() * dt);
    for (std::size_t m = 0; m < nt; ++m) {
        if (m % 512 == 0)
            for (std::size_t k = 0; k < ex.nz; ++k) ph[k] = std::polar(ex.weight(k) / (2.0 * kPi), -ex.zeta(k).real() * dt * double(m));
        for (std::size_t n = 0; n < nc; ++n) {
            cplx sa = 0.0, sb = 0.0;
            for (std::size_t k = 0; k < ex.nz; ++k) {
                sa += ex.rem[k][n](0) * ph[k];
                sb += ex.rem[k][n](1) * ph[k];
            }
            D[n][0][m] = sa;
            D[n][1][m] = sb;
        }
        for (std::size_t k = 0; k < ex.nz; ++k) ph[k] *= step[k];
    }
    // pole terms: -i ρ e^{-iζ_p t}
    for (std::size_t p = 0; p < ex.poles.size(); ++p) {
        for (std::size_t m = 0; m < nt; ++m) {
            const cplx ph_p = -kI * std::exp(-kI * ex.poles[p] * (dt * double(m)));
            for (std::size_t n = 0; n < nc; ++n) {
                D[n][0][m] += ex.residue[p][n](0) * ph_p;
                D[n][1][m] += ex.residue[p][n](1) * ph_p;
            }
        }
    }
    return D;
}

double check_uniform_grid(std::span<const double> times)
{
    if (times.empty()) throw DomainError("exact_moments: empty time grid");
    if (std::abs(times[0]) > 0.0) throw DomainError("exact_moments: time grid must start at t = 0");
    if (times.size() == 1) return 0.0;
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw DomainError("exact_moments: time grid must be strictly increasing");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - dt * double(k)) > 1e-9 * dt * double(k))
            throw DomainError("exact_moments: time grid must be uniform");
    return dt;
}

// Largest |ν - Ω| over which J·n carries weight, bounding the resolvable dt.
double correlation_band(const BathSpec& bath, double Om)
{
    const double lo = bath.support_lo(), hi = bath.support_hi();
    const int ns = 4000;
    double gmax = 0.0;
    std::vector<double> g(ns + 1);
    for (int k = 0; k <= ns; ++k) {
        const double nu = lo + (hi - lo) * k / ns;
        g[k] = nu > 0.0 || !bath.is_thermal() ? bath.weighted(nu, Weight::Up) : 0.0;
        gmax = std::max(gmax, g[k]);
    }
    double band = 0.0;
    for (int k = 0; k <= ns; ++k)
        if (g[k] > 1e-10 * gmax) band = std::max(band, std::abs(lo + (hi - lo) * k / ns - Om));
    return gmax > 0.0 ? band : 0.0;
}

}  // namespace

// ---- MultiBathSpec / PoleSet ----

MultiBathSpec::MultiBathSpec(std::vector<Channel> channels) : channels_(std::move(channels))
{
    if (channels_.empty()) throw DomainError("MultiBathSpec: at least one bath required");
    for (const auto& c : channels_)
        if (!std::isfinite(c.phi_a) || !std::isfinite(c.phi_b))
            throw DomainError("MultiBathSpec: non-finite coupling");
}

MultiBathSpec MultiBathSpec::single(const SystemSpec& sys, const BathSpec& bath)
{
    return MultiBathSpec({Channel{bath, sys.phi_a(), sys.phi_b()}});
}

bool MultiBathSpec::parallel_couplings() const
{
    const Channel* ref = nullptr;
    for (const auto& c : channels_) {
        if (c.phi_a == 0.0 && c.phi_b == 0.0) continue;
        if (!ref) {
            ref = &c;
            continue;
        }
        const double cross = ref->phi_a * c.phi_b - ref->phi_b * c.phi_a;
        const double norm = std::hypot(ref->phi_a, ref->phi_b) * std::hypot(c.phi_a, c.phi_b);
        if (std::abs(cross) > 1e-12 * norm) return false;
    }
    return true;
}

bool PoleSet::has_violation() const
{
    return std::any_of(roots.begin(), roots.end(), [](const Pole& p) { return p.violation; });
}

const Pole& PoleSet::slowest() const
{
    if (roots.empty()) throw DomainError("PoleSet::slowest: no roots");
    return *std::max_element(roots.begin(), roots.end(),
                             [](const Pole& a, const Pole& b) { return a.zeta.imag() < b.zeta.imag(); });
}

// ---- Denominator, Green's matrix, poles ----

cplx denominator_d(const SystemSpec& sys, const BathSpec& bath, cplx zeta)
{
    const cplx wa = sys.omega_a() - zeta, wb = sys.omega_b() - zeta;
    const double pa2 = sys.phi_a() * sys.phi_a(), pb2 = sys.phi_b() * sys.phi_b();
    const cplx k = (pa2 == 0.0 && pb2 == 0.0) ? cplx(0.0) : response_continued(bath, zeta);
    return -wa * wb + kI * k * (pa2 * wb + pb2 * wa);
}

Eigen::Matrix2cd green_inverse(const MultiBathSpec& multi, const SystemSpec& sys, cplx zeta)
{
    return Engine(multi, sys).ginv(zeta);
}

Eigen::Matrix2cd green_matrix(const MultiBathSpec& multi, const SystemSpec& sys, cplx zeta)
{
    const auto G = green_inverse(multi, sys, zeta);
    const cplx d = Engine::det(G);
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    if (std::abs(d) < 1e-14 * scale * scale)
        throw DomainError("green_matrix: inverse Green's matrix is singular (zeta is a pole)");
    Eigen::Matrix2cd out;
    out << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
    return out / d;
}

PoleSet find_poles(const MultiBathSpec& multi, const SystemSpec& sys)
{
    return poles_of(Engine(multi, sys));
}

PoleSet find_poles(const SystemSpec& sys, const BathSpec& bath)
{
    return find_poles(MultiBathSpec::single(sys, bath), sys);
}

double perturbative_pole_rate(const SystemSpec& sys, const BathSpec& bath)
{
    const double pa2 = sys.phi_a() * sys.phi_a(), pb2 = sys.phi_b() * sys.phi_b();
    const double D = sys.delta();
    if (D == 0.0 || pa2 * pb2 == 0.0) return 0.0;
    const cplx K = response(bath, sys.center()).K;
    if (std::abs(K) == 0.0) throw DomainError("perturbative_pole_rate: K(Omega) = 0");
    const double s = pa2 + pb2;
    return 4.0 * D * D * pa2 * pb2 * K.real() / (s * s * s * std::norm(K));
}

// ---- Propagators ----

std::vector<std::array<std::vector<cplx>, 2>> propagator_grid(const MultiBathSpec& multi, const SystemSpec& sys,
                                                              double dt, std::size_t n)
{
    if (n == 0) return {};
    if (n > 1 && !(dt > 0.0)) throw DomainError("propagator_grid: dt must be > 0");
    const Engine e(multi, sys);
    const Expansion ex = expand(e, dt * double(n - 1));
    return d_grid(e, ex, dt, n);
}

cplx propagator_D(const SystemSpec& sys, const BathSpec& bath, int mode, double t)
{
    if (!(t >= 0.0)) throw DomainError("propagator_D: t must be >= 0");
    if (mode != 0 && mode != 1) throw DomainError("propagator_D: mode must be 0 (a) or 1 (b)");
    if (sys.phi(mode) == 0.0) return 0.0;
    const auto D = propagator_grid(MultiBathSpec::single(sys, bath), sys, t > 0.0 ? t : 1.0, 2);
    return D[0][mode][t > 0.0 ? 1 : 0];
}

// ---- Moments: convolution form ----

std::vector<SecondMoments> exact_moments_multibath(const MultiBathSpec& multi, const SystemSpec& sys,
                                                   std::span<const double> times)
{
    const double dt = check_uniform_grid(times);
    const std::size_t nt = times.size();
    std::vector<SecondMoments> out(nt);
    if (nt == 1) return out;

    for (const auto& c : multi.channels()) {
        if (c.bath.is_zero() || (c.phi_a == 0.0 && c.phi_b == 0.0)) continue;
        const double band = correlation_band(c.bath, sys.center()) + std::abs(sys.delta());
        if (dt * band > 0.5 * kPi)
            throw DomainError("exact_moments: dt = " + std::to_string(dt) +
                              " is too coarse for the bath correlation time (need dt <= " +
                              std::to_string(0.5 * kPi / band) + ")");
    }

    const auto D = propagator_grid(multi, sys, dt, nt);
    std::vector<Eigen::Matrix2cd> G(nt, Eigen::Matrix2cd::Zero());  // running sums per time

    for (std::size_t ch = 0; ch < multi.channels().size(); ++ch) {
        const auto& c = multi.channels()[ch];
        if (c.bath.is_zero() || (c.phi_a == 0.0 && c.phi_b == 0.0)) continue;
        const std::vector<cplx> al = alpha_grid(c.bath, dt, nt);
        const auto& Da = D[ch][0];
        const auto& Db = D[ch][1];

        // S_j(n) = Σ_{l<n} c_l D_j(u_l) α((n-l)dt), c_0 = 1/2
        Eigen::Matrix2cd acc = 0.25 * al[0] * (Eigen::Matrix2cd() << std::norm(Da[0]), std::conj(Da[0]) * Db[0],
                                               std::conj(Db[0]) * Da[0], std::norm(Db[0]))
                                                  .finished();
        for (std::size_t n = 1; n < nt; ++n) {
            cplx Sa = 0.5 * Da[0] * al[n], Sb = 0.5 * Db[0] * al[n];
            for (std::size_t l = 1; l < n; ++l) {
                Sa += Da[l] * al[n - l];
                Sb += Db[l] * al[n - l];
            }
            const cplx Dv[2] = {Da[n], Db[n]};
            const cplx S[2] = {Sa, Sb};
            Eigen::Matrix2cd Fn;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const cplx R = std::conj(Dv[i]) * S[j];
                    const cplx C = Dv[j] * std::conj(S[i]);
                    const cplx A = std::conj(Dv[i]) * Dv[j] * al[0];
                    acc(i, j) += R + C + A;
                    Fn(i, j) = acc(i, j) - 0.5 * (R + A) - 0.5 * (C + A) + 0.25 * A;
                }
            }
            G[n] += dt * dt * Fn;
        }
    }
    for (std::size_t n = 1; n < nt; ++n) out[n] = from_matrix(G[n]);
    return out;
}

std::vector<SecondMoments> exact_moments(const SystemSpec& sys, const BathSpec& bath, std::span<const double> times)
{
    return exact_moments_multibath(MultiBathSpec::single(sys, bath), sys, times);
}

// ---- Moments: spectral form ----

SecondMoments exact_moments_spectral(const MultiBathSpec& multi, const SystemSpec& sys, double t)
{
    if (!(t >= 0.0)) throw DomainError("exact_moments_spectral: t must be >= 0");
    if (t == 0.0) return {};
    const Engine e(multi, sys);
    const Expansion ex = expand(e, t);

    std::vector<double> centers, widths;
    for (std::size_t p = 0; p + 1 < ex.poles.size(); ++p) {
        centers.push_back(ex.poles[p].real());
        widths.push_back(std::max(0.5 * std::abs(ex.poles[p].imag()), 1e-10));
    }

    Eigen::Matrix2cd F = Eigen::Matrix2cd::Zero();
    for (std::size_t n = 0; n < e.nch(); ++n) {
        const auto& c = e.channels()[n];
        if (c.bath.is_zero() || (c.phi_a == 0.0 && c.phi_b == 0.0)) continue;
        const double hmax = std::min(0.25 * c.bath.structure_scale(), 1.5 / t);
        const auto br = quad::graded_breaks(c.bath.support_lo(), c.bath.support_hi(), centers, widths, hmax,
                                            c.bath.breakpoints());
        if (br.size() > 400'000) throw DomainError("exact_moments_spectral: frequency grid too large");
        const auto rule = quad::gauss_legendre(br);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const double nu = rule.x[q];
            const double wJn = rule.w[q] * c.bath.weighted(nu, Weight::Up);
            if (wJn == 0.0) continue;
            const cplx carrier = std::polar(1.0, -nu * t);
            Vec2 W = Vec2::Zero();
            for (std::size_t p = 0; p < ex.poles.size(); ++p)
                W += ex.residue[p][n] * (-kI * carrier * t * expm1_ratio((nu - ex.poles[p]) * t));
            Vec2 Wr = Vec2::Zero();
            for (std::size_t k = 0; k < ex.nz; ++k)
                Wr += ex.rem[k][n] * (ex.weight(k) * expm1_ratio((nu - ex.zeta(k).real()) * t));
            W += Wr * (carrier * t / (2.0 * kPi));
            F += wJn * W.conjugate() * W.transpose();
        }
    }
    return from_matrix(F);
}

SecondMoments exact_moments_spectral(const SystemSpec& sys, const BathSpec& bath, double t)
{
    return exact_moments_spectral(MultiBathSpec::single(sys, bath), sys, t);
}

// ---- Steady state ----

SecondMoments exact_steady_state(const MultiBathSpec& multi, const SystemSpec& sys)
{
    if (sys.omega_a() == sys.omega_b() && multi.parallel_couplings()) {
        bool both = false;
        for (const auto& c : multi.channels()) both = both || (c.phi_a != 0.0 && c.phi_b != 0.0);
        if (both)
            throw NoSteadyState("exact_steady_state: degenerate modes with parallel couplings leave an undamped "
                                "collective mode (Delta = 0)");
    }
    const Engine e(multi, sys);
    const PoleSet ps = poles_of(e);

    std::vector<double> centers, widths;
    for (const auto& p : ps.roots) {
        const double gam = -p.zeta.imag();
        if (gam <= 1e-12 * std::max(1.0, std::abs(p.zeta))) {
            // undamped pole: harmless only if it carries no weight in any f^(n)
            const auto G = e.ginv(p.zeta);
            const cplx dd = e.ddet(p.zeta);
            for (const auto& c : e.channels())
                if ((e.numerator(G, c) / dd).norm() > 1e-10 * std::hypot(c.phi_a, c.phi_b) + 1e-300)
                    throw NoSteadyState("exact_steady_state: undamped pole with nonzero weight");
            continue;
        }
        centers.push_back(p.zeta.real());
        widths.push_back(0.5 * gam);
    }

    Eigen::Matrix2cd F = Eigen::Matrix2cd::Zero();
    for (const auto& c : e.channels()) {
        if (c.bath.is_zero() || (c.phi_a == 0.0 && c.phi_b == 0.0)) continue;
        const auto br = quad::graded_breaks(c.bath.support_lo(), c.bath.support_hi(), centers, widths,
                                            0.25 * c.bath.structure_scale(), c.bath.breakpoints());
        const auto rule = quad::gauss_legendre(br);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const double wJn = rule.w[q] * c.bath.weighted(rule.x[q], Weight::Up);
            if (wJn == 0.0) continue;
            const auto G = e.ginv(rule.x[q]);
            const Vec2 f = e.numerator(G, c) / Engine::det(G);
            F += wJn * f.conjugate() * f.transpose();
        }
    }
    return from_matrix(F);
}

SecondMoments exact_steady_state(const SystemSpec& sys, const BathSpec& bath)
{
    return exact_steady_state(MultiBathSpec::single(sys, bath), sys);
}

}  // namespace bathcoh
