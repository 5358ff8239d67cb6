// meq.cpp — BR/SpBR/secular/Lindblad moment generators, evolution and spectra

#include "bathcoh/meq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

namespace bathcoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// M restricted to the bath-dependent entries (the free rotation is added separately).
Eigen::Matrix4d bath_block(double pa, double pb, cplx Ka, cplx Kb, bool spbr)
{
    const double pab = pa * pb, pa2 = pa * pa, pb2 = pb * pb;
    const double Kar = Ka.real(), Kai = Ka.imag(), Kbr = Kb.real(), Kbi = Kb.imag();
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    M(0, 0) = 2.0 * pa2 * Kar;
    M(1, 1) = 2.0 * pb2 * Kbr;
    M(2, 0) = 2.0 * pab * Kar;
    M(2, 1) = 2.0 * pab * Kbr;
    M(3, 0) = -2.0 * pab * Kai;
    M(3, 1) = 2.0 * pab * Kbi;
    double gamma = 0.0, energy = 0.0;  // Γ0 and the bath part of E0
    if (!spbr) {
        M(0, 2) = pab * Kbr;
        M(0, 3) = pab * Kbi;
        M(1, 2) = pab * Kar;
        M(1, 3) = -pab * Kai;
        gamma = pa2 * Kar + pb2 * Kbr;
        energy = pa2 * Kai - pb2 * Kbi;
    } else {
        // columns 3-4 sample the bath at the other mode's frequency
        M(0, 2) = pab * Kar;
        M(0, 3) = pab * Kai;
        M(1, 2) = pab * Kbr;
        M(1, 3) = -pab * Kbi;
        gamma = pa2 * Kbr + pb2 * Kar;
        energy = pa2 * Kbi - pb2 * Kai;
    }
    M(2, 2) = gamma;
    M(3, 3) = gamma;
    M(2, 3) = -energy;
    M(3, 2) = energy;
    return M;
}

Eigen::Matrix4d free_block(double wa, double wb)
{
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    M(2, 3) = -(wb - wa);
    M(3, 2) = wb - wa;
    return M;
}

Eigen::Vector4d inhomogeneity(double pa, double pb, cplx KaUp, cplx KbUp)
{
    const double bar_re = 0.5 * (KaUp.real() + KbUp.real());
    const double delta_im = 0.5 * (KaUp.imag() - KbUp.imag());
    return 2.0 * Eigen::Vector4d(pa * pa * KaUp.real(), pb * pb * KbUp.real(), 2.0 * pa * pb * bar_re,
                                 -2.0 * pa * pb * delta_im);
}

Generator bloch_redfield(const MultiBathSpec& multi, const SystemSpec& sys, bool spbr)
{
    Generator g;
    g.kind = spbr ? GeneratorKind::SpBR : GeneratorKind::BR;
    g.M = free_block(sys.omega_a(), sys.omega_b());
    for (const auto& c : multi.channels()) {
        const BathResponse ra = response(c.bath, sys.omega_a());
        const BathResponse rb = response(c.bath, sys.omega_b());
        g.M += bath_block(c.phi_a, c.phi_b, ra.K, rb.K, spbr);
        g.f0 += inhomogeneity(c.phi_a, c.phi_b, ra.Kup, rb.Kup);
    }
    return g;
}

// Ḟ for the quadratic equation in matrix form.
Eigen::Matrix2cd moment_rhs(const Eigen::Matrix2cd& H1, const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B,
                            const Eigen::Matrix2cd& F)
{
    const Eigen::Matrix2cd H1t = H1.transpose(), At = A.transpose();
    return kI * (H1t * F - F * H1t) - (At * F + F * At) + (B * F + F * B) + 2.0 * B;
}

cplx sqrt_c(double x) { return std::sqrt(cplx(x)); }

void sort_spectrum(std::array<cplx, 4>& v)
{
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// μ = Re S ± √(Re Q ± |Q|) with S the summed K̃ and Q from the off-diagonal product.
std::array<cplx, 4> eigen_closed_form(cplx Kta, cplx Ktb, cplx offdiag_product, double wa, double wb)
{
    const cplx diff = Kta - Ktb - kI * (wa - wb);
    const cplx Q = 2.0 * offdiag_product + 0.5 * diff * diff;
    const double re = (Kta + Ktb).real();
    const cplx r1 = sqrt_c(Q.real() + std::abs(Q)), r2 = sqrt_c(Q.real() - std::abs(Q));
    std::array<cplx, 4> mu{re + r1, re - r1, re + r2, re - r2};
    sort_spectrum(mu);
    return mu;
}

}  // namespace

const char* to_string(GeneratorKind k)
{
    switch (k) {
        case GeneratorKind::BR: return "br";
        case GeneratorKind::SpBR: return "spbr";
        case GeneratorKind::Secular: return "secular";
        case GeneratorKind::CollectiveLindblad: return "collective";
        case GeneratorKind::IndividualLindblad: return "individual";
    }
    return "unknown";
}

// ---- Generators ----

Generator br_generator(const SystemSpec& sys, const BathSpec& bath)
{
    return bloch_redfield(MultiBathSpec::single(sys, bath), sys, false);
}

Generator spbr_generator(const SystemSpec& sys, const BathSpec& bath)
{
    return bloch_redfield(MultiBathSpec::single(sys, bath), sys, true);
}

Generator multibath_generator(const MultiBathSpec& multi, const SystemSpec& sys, GeneratorKind kind)
{
    if (kind != GeneratorKind::BR && kind != GeneratorKind::SpBR)
        throw DomainError("multibath_generator: kind must be BR or SpBR");
    return bloch_redfield(multi, sys, kind == GeneratorKind::SpBR);
}

Generator secularize(const Generator& g)
{
    if (g.kind != GeneratorKind::BR && g.kind != GeneratorKind::SpBR && g.kind != GeneratorKind::Secular)
        throw DomainError(std::string("secularize: cannot secularize a ") + to_string(g.kind) + " generator");
    Generator s = g;
    s.kind = GeneratorKind::Secular;
    s.M.block<2, 2>(0, 2).setZero();
    s.M.block<2, 2>(2, 0).setZero();
    s.f0[2] = 0.0;
    s.f0[3] = 0.0;
    return s;
}

Generator quadratic_generator(const Eigen::Matrix2cd& H1, const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B,
                              GeneratorKind kind)
{
    Generator g;
    g.kind = kind;
    g.f0 = to_moment_vector(from_matrix(moment_rhs(H1, A, B, Eigen::Matrix2cd::Zero())));
    for (int k = 0; k < 4; ++k) {
        MomentVector e = MomentVector::Zero();
        e[k] = 1.0;
        const Eigen::Matrix2cd F = from_moment_vector(e).matrix();
        const MomentVector d = to_moment_vector(from_matrix(moment_rhs(H1, A, B, F)));
        g.M.col(k) = -(d - g.f0);
    }
    return g;
}

Generator collective_generator(const SystemSpec& sys, const BathSpec& bath)
{
    const double Om = sys.center();
    const double down = kPi * bath.weighted(Om, Weight::Down);
    const double up = kPi * bath.weighted(Om, Weight::Up);
    const Eigen::Vector2cd phi(sys.phi_a(), sys.phi_b());
    const Eigen::Matrix2cd P = phi * phi.transpose();
    Eigen::Matrix2cd H1 = Eigen::Matrix2cd::Zero();
    H1(0, 0) = sys.omega_a();
    H1(1, 1) = sys.omega_b();
    return quadratic_generator(H1, down * P, up * P, GeneratorKind::CollectiveLindblad);
}

Generator individual_generator(const SystemSpec& sys, const BathSpec& bath)
{
    Eigen::Matrix2cd H1 = Eigen::Matrix2cd::Zero(), A = Eigen::Matrix2cd::Zero(), B = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) {
        const double w = sys.omega(i), p2 = sys.phi(i) * sys.phi(i);
        H1(i, i) = w;
        A(i, i) = p2 * kPi * bath.weighted(w, Weight::Down);
        B(i, i) = p2 * kPi * bath.weighted(w, Weight::Up);
    }
    return quadratic_generator(H1, A, B, GeneratorKind::IndividualLindblad);
}

KossakowskiPair kossakowski(const SystemSpec& sys, const BathSpec& bath)
{
    const BathResponse ra = response(bath, sys.omega_a());
    const BathResponse rb = response(bath, sys.omega_b());
    auto mat = [](cplx Ka, cplx Kb, double sign) {
        const cplx bar = 0.5 * (Ka + Kb), del = 0.5 * (Ka - Kb);
        Eigen::Matrix2cd L;
        L << Ka.real(), bar.real() + sign * kI * del.imag(), bar.real() - sign * kI * del.imag(), Kb.real();
        return L;
    };
    KossakowskiPair kp;
    kp.Ldown = mat(ra.Kdown, rb.Kdown, +1.0);
    kp.Lup = mat(ra.Kup, rb.Kup, -1.0);
    const cplx bar = 0.5 * (ra.K + rb.K), del = 0.5 * (ra.K - rb.K);
    kp.h << ra.K.imag(), bar.imag() - kI * del.real(), bar.imag() + kI * del.real(), rb.K.imag();
    return kp;
}

QuadraticCoefficients br_coefficients(const SystemSpec& sys, const BathSpec& bath)
{
    const KossakowskiPair kp = kossakowski(sys, bath);
    Eigen::Matrix2cd P;
    P << sys.phi_a() * sys.phi_a(), sys.phi_a() * sys.phi_b(), sys.phi_a() * sys.phi_b(), sys.phi_b() * sys.phi_b();
    QuadraticCoefficients q;
    q.H1 = -kp.h.cwiseProduct(P);
    q.H1(0, 0) += sys.omega_a();
    q.H1(1, 1) += sys.omega_b();
    q.A = kp.Ldown.cwiseProduct(P);
    q.B = kp.Lup.cwiseProduct(P);
    return q;
}

LindbladRates lindblad_rates(const KossakowskiPair& kp)
{
    LindbladRates r;
    r.down = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(kp.Ldown, Eigen::EigenvaluesOnly).eigenvalues();
    r.up = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(kp.Lup, Eigen::EigenvaluesOnly).eigenvalues();
    return r;
}

LindbladRates lindblad_rates_closed_form(const SystemSpec& sys, const BathSpec& bath)
{
    const BathResponse ra = response(bath, sys.omega_a());
    const BathResponse rb = response(bath, sys.omega_b());
    auto rates = [](cplx Ka, cplx Kb) {
        const double bar = 0.5 * (Ka.real() + Kb.real());
        const double S = std::sqrt(bar * bar + std::norm(0.5 * (Ka - Kb)));
        return Eigen::Vector2d(bar - S, bar + S);
    };
    return LindbladRates{rates(ra.Kdown, rb.Kdown), rates(ra.Kup, rb.Kup)};
}

// ---- Evolution ----

Trajectory evolve_integrator(const Generator& g, const MomentVector& f_init, std::span<const double> times, double tol)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 4>;
    Trajectory tr;
    tr.used_integrator = true;
    tr.times.assign(times.begin(), times.end());
    if (times.empty()) return tr;
    if (times.front() < 0.0) throw DomainError("evolve: times must be >= 0");

    std::vector<double> grid;
    const bool prepend = times.front() > 0.0;
    if (prepend) grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw DomainError("evolve: times must be strictly increasing");

    auto rhs = [&](const State& x, State& dx, double) {
        Eigen::Map<const Eigen::Vector4d> xv(x.data());
        Eigen::Map<Eigen::Vector4d> dv(dx.data());
        dv = -g.M * xv + g.f0;
    };
    State x{f_init[0], f_init[1], f_init[2], f_init[3]};
    std::vector<MomentVector> out;
    auto observe = [&](const State& s, double) { out.emplace_back(s[0], s[1], s[2], s[3]); };
    const double span = grid.back() - grid.front();
    const double dt0 = grid.size() > 1 ? std::min(1e-3, 0.1 * span) : 1e-3;
    if (grid.size() == 1) {
        out.push_back(f_init);
    } else {
        ode::integrate_times(ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>()), rhs, x,
                             grid.begin(), grid.end(), dt0, observe);
    }
    if (prepend) out.erase(out.begin());
    tr.f = std::move(out);
    return tr;
}

Trajectory evolve(const Generator& g, const MomentVector& f_init, std::span<const double> times)
{
    Eigen::EigenSolver<Eigen::Matrix4d> es(g.M);
    if (es.info() != Eigen::Success) return evolve_integrator(g, f_init, times);
    const Eigen::Matrix4cd V = es.eigenvectors();
    const Eigen::Vector4cd lam = es.eigenvalues();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(V);
    const auto sv = svd.singularValues();
    if (!(sv(3) > 0.0) || sv(0) / sv(3) > 1e8) return evolve_integrator(g, f_init, times);

    const Eigen::Matrix4cd Vinv = V.inverse();
    const Eigen::Vector4cd c0 = Vinv * f_init.cast<cplx>();
    const Eigen::Vector4cd d0 = Vinv * g.f0.cast<cplx>();
    Trajectory tr;
    tr.times.assign(times.begin(), times.end());
    tr.f.reserve(times.size());
    for (double t : times) {
        if (t < 0.0) throw DomainError("evolve: times must be >= 0");
        Eigen::Vector4cd y;
        for (int k = 0; k < 4; ++k) {
            const cplx mt = lam(k) * t;
            const cplx decay = std::exp(-mt);
            // (1 - e^{-μt})/μ, with its small-μt limit
            const cplx phi = std::abs(mt) < 1e-8 ? t * (1.0 - 0.5 * mt) : (1.0 - decay) / lam(k);
            y(k) = decay * c0(k) + phi * d0(k);
        }
        tr.f.push_back((V * y).real());
    }
    return tr;
}

double condition_number(const Eigen::Matrix4d& M)
{
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
    const auto sv = svd.singularValues();
    return sv(3) > 0.0 ? sv(0) / sv(3) : INFINITY;
}

MomentVector steady_state(const Generator& g)
{
    const double cond = condition_number(g.M);
    if (!(cond <= 1e12))
        throw NoSteadyState(std::string("steady_state: ") + to_string(g.kind) + " matrix is singular (condition number " +
                            to_sci(cond) + ")");
    return g.M.colPivHouseholderQr().solve(g.f0);
}

// ---- Spectra and rates ----

std::array<cplx, 4> numeric_eigenvalues(const Eigen::Matrix4d& M)
{
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(M, false).eigenvalues();
    std::array<cplx, 4> mu{ev(0), ev(1), ev(2), ev(3)};
    sort_spectrum(mu);
    return mu;
}

std::array<cplx, 4> closed_form_eigenvalues(const MultiBathSpec& multi, const SystemSpec& sys)
{
    cplx Kta = 0.0, Ktb = 0.0, Pa = 0.0, Pb = 0.0;
    for (const auto& c : multi.channels()) {
        const cplx Ka = response(c.bath, sys.omega_a()).K, Kb = response(c.bath, sys.omega_b()).K;
        Kta += c.phi_a * c.phi_a * Ka;
        Ktb += c.phi_b * c.phi_b * Kb;
        Pa += c.phi_a * c.phi_b * Ka;
        Pb += c.phi_a * c.phi_b * Kb;
    }
    return eigen_closed_form(Kta, Ktb, Pa * Pb, sys.omega_a(), sys.omega_b());
}

std::array<cplx, 4> closed_form_eigenvalues(const SystemSpec& sys, const BathSpec& bath)
{
    return closed_form_eigenvalues(MultiBathSpec::single(sys, bath), sys);
}

double stability_margin(const SystemSpec& sys, const BathSpec& bath)
{
    const cplx Kta = sys.phi_a() * sys.phi_a() * response(bath, sys.omega_a()).K;
    const cplx Ktb = sys.phi_b() * sys.phi_b() * response(bath, sys.omega_b()).K;
    const double D = sys.delta();
    return 2.0 * D * D * Kta.real() * Ktb.real() +
           D * (Kta.real() + Ktb.real()) * (Kta.real() * Ktb.imag() - Ktb.real() * Kta.imag());
}

double markov_scale(const SystemSpec& sys, const BathSpec& bath)
{
    const double Om = sys.center();
    const double h = 1e-4 * std::max(1.0, std::abs(Om));
    const cplx dK = (response(bath, Om + h).K - response(bath, Om - h).K) / (2.0 * h);
    return std::abs(dK) * std::abs(response(bath, Om).K);
}

namespace {

struct PerturbativeTerms {
    double leading;     // 8φa²φb²Δ²K̄'/(s³|K̄|²)
    double correction;  // 8φa²φb²Δ(K̄'δK'' - δK'K̄'')/(s²|K̄|²)
};

PerturbativeTerms perturbative_terms(const SystemSpec& sys, const BathSpec& bath)
{
    const double pa2 = sys.phi_a() * sys.phi_a(), pb2 = sys.phi_b() * sys.phi_b(), D = sys.delta();
    if (D == 0.0 || pa2 * pb2 == 0.0) return {0.0, 0.0};
    const cplx Ka = response(bath, sys.omega_a()).K, Kb = response(bath, sys.omega_b()).K;
    const cplx bar = 0.5 * (Ka + Kb), del = 0.5 * (Ka - Kb);
    if (std::abs(bar) == 0.0) throw DomainError("perturbative rate: mean response K̄ = 0");
    const double s = pa2 + pb2, n2 = std::norm(bar);
    return {8.0 * pa2 * pb2 * D * D * bar.real() / (s * s * s * n2),
            8.0 * pa2 * pb2 * D * (bar.real() * del.imag() - del.real() * bar.imag()) / (s * s * n2)};
}

}  // namespace

double br_perturbative_rate(const SystemSpec& sys, const BathSpec& bath)
{
    const auto t = perturbative_terms(sys, bath);
    return t.leading - t.correction;
}

double spbr_perturbative_rate(const SystemSpec& sys, const BathSpec& bath)
{
    return perturbative_terms(sys, bath).leading;
}

}  // namespace bathcoh
