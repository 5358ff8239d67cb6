// diag.cpp — positivity and sum-rule diagnostics, discretized-bath and truncated-Fock oracles

#include "bathcoh/diag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "bathcoh/errors.hpp"

namespace bathcoh {

namespace {

const cplx kI{0.0, 1.0};

void check_times(std::span<const double> times, const char* who)
{
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0)) throw DomainError(std::string(who) + ": times must be >= 0");
        if (k > 0 && !(times[k] > times[k - 1]))
            throw DomainError(std::string(who) + ": times must be strictly increasing");
    }
}

double max_time(std::span<const double> times) { return times.empty() ? 0.0 : times.back(); }

}  // namespace

// ---- Diagnostics ----

SecondMoments MinimumUncertaintyState::covariance() const
{
    if (n_a < 0.0 || n_b < 0.0) throw DomainError("MinimumUncertaintyState: occupations must be >= 0");
    return SecondMoments{n_a, n_b, std::sqrt(n_a * n_b) * std::exp(kI * theta)};
}

Eigen::Vector2cd MinimumUncertaintyState::null_vector() const
{
    return Eigen::Vector2cd(std::sqrt(n_b), -std::sqrt(n_a) * std::exp(-kI * theta));
}

double min_eigen_F(const SecondMoments& m)
{
    const double mean = 0.5 * (m.aa + m.bb), half = 0.5 * (m.aa - m.bb);
    return mean - std::hypot(half, std::abs(m.ab));
}

Eigen::RowVector4d sum_rule_residual(const Generator& g, const SystemSpec& sys)
{
    const double pa = sys.phi_a(), pb = sys.phi_b();
    const Eigen::RowVector4d ell(pb * pb, pa * pa, -pa * pb, 0.0);
    Eigen::RowVector4d r = ell * g.M;
    r[3] += (sys.omega_a() - sys.omega_b()) * pa * pb;
    return r;
}

double gaussian_positivity_violation(const SystemSpec& sys, const BathSpec& bath, const MinimumUncertaintyState& s)
{
    const cplx Ka = response(bath, sys.omega_a()).Kup, Kb = response(bath, sys.omega_b()).Kup;
    const double pa = sys.phi_a(), pb = sys.phi_b();
    const double bar_re = 0.5 * (Ka.real() + Kb.real()), delta_im = 0.5 * (Ka.imag() - Kb.imag());
    return pa * pa * Ka.real() * s.n_b + pb * pb * Kb.real() * s.n_a -
           2.0 * pa * pb * std::sqrt(s.n_a * s.n_b) * (bar_re * std::cos(s.theta) - delta_im * std::sin(s.theta));
}

// ---- Discretized-bath oracle ----

namespace {

struct Grid {
    double lo, dnu;
    std::size_t N;
};

Grid oracle_grid(const BathSpec& bath, const OracleConfig& cfg, double t_max)
{
    const double lo = bath.support_lo();
    const double hi = cfg.nu_max > 0.0 ? cfg.nu_max : bath.support_hi();
    if (!(hi > lo)) throw DomainError("discretized_bath_oracle: nu_max must exceed the support lower edge");
    std::size_t N = cfg.N;
    if (N == 0) {
        // smallest grid whose recurrence time 2π/δν reaches 2·t_max
        N = static_cast<std::size_t>(std::ceil((hi - lo) * t_max / std::numbers::pi));
        N = std::max<std::size_t>(N, 64);
    }
    if (N < 2) throw DomainError("discretized_bath_oracle: N must be >= 2");
    return Grid{lo, (hi - lo) / static_cast<double>(N), N};
}

}  // namespace

double oracle_recurrence_time(const BathSpec& bath, const OracleConfig& cfg, double t_max)
{
    return 2.0 * std::numbers::pi / oracle_grid(bath, cfg, t_max).dnu;
}

std::vector<SecondMoments> discretized_bath_oracle(const MultiBathSpec& multi, const SystemSpec& sys,
                                                   const OracleConfig& cfg, std::span<const double> times)
{
    check_times(times, "discretized_bath_oracle");
    const double t_max = max_time(times);

    std::vector<Grid> grids;
    std::size_t total = 2;
    for (const auto& c : multi.channels()) {
        grids.push_back(oracle_grid(c.bath, cfg, t_max));
        const double rec = 2.0 * std::numbers::pi / grids.back().dnu;
        if (t_max >= rec)
            throw DomainError("discretized_bath_oracle: t = " + to_sci(t_max) + " reaches the recurrence time " +
                              to_sci(rec));
        total += grids.back().N;
    }

    // one-particle Hamiltonian and initial occupations
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(total, total);
    Eigen::VectorXd n = Eigen::VectorXd::Zero(total);
    H(0, 0) = sys.omega_a();
    H(1, 1) = sys.omega_b();
    std::size_t off = 2;
    for (std::size_t c = 0; c < grids.size(); ++c) {
        const Channel& ch = multi.channels()[c];
        const Grid& gr = grids[c];
        for (std::size_t k = 0; k < gr.N; ++k) {
            const double nu = gr.lo + (static_cast<double>(k) + 0.5) * gr.dnu;
            const double g = std::sqrt(ch.bath.j(nu) * gr.dnu);
            const std::size_t m = off + k;
            H(m, m) = nu;
            H(0, m) = H(m, 0) = ch.phi_a * g;
            H(1, m) = H(m, 1) = ch.phi_b * g;
            n(m) = g == 0.0 ? 0.0 : occupation(ch.bath, nu);
        }
        off += gr.N;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw ConvergenceError("discretized_bath_oracle: eigendecomposition failed");
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::VectorXd& E = es.eigenvalues();
    // ψ_s(t) = Σ_m U_sm c_m, U = V e^{-iEt} Vᵀ; F_ij = Σ_m n_m conj(U_im) U_jm
    const Eigen::MatrixXd Vsys = V.topRows(2);
    Eigen::MatrixXd Vn = V.transpose();
    for (Eigen::Index m = 0; m < Vn.cols(); ++m) Vn.col(m) *= std::sqrt(n(m));  // Vᵀ diag(√n)

    std::vector<SecondMoments> out;
    out.reserve(times.size());
    Eigen::MatrixXcd rows(2, total);
    for (double t : times) {
        Eigen::RowVectorXcd phase(total);
        for (std::size_t k = 0; k < total; ++k) phase(k) = std::exp(-kI * (E(k) * t));
        rows = (Vsys.cast<cplx>().array().rowwise() * phase.array()).matrix() * Vn.cast<cplx>();
        const Eigen::Matrix2cd F = rows.conjugate() * rows.transpose();
        out.push_back(from_matrix(F));
    }
    return out;
}

std::vector<SecondMoments> discretized_bath_oracle(const SystemSpec& sys, const BathSpec& bath,
                                                   const OracleConfig& cfg, std::span<const double> times)
{
    return discretized_bath_oracle(MultiBathSpec::single(sys, bath), sys, cfg, times);
}

// ---- Truncated-Fock oracle ----

FockModel::FockModel(const QuadraticCoefficients& q, int n_max) : n_max_(n_max), dim_((n_max + 1) * (n_max + 1))
{
    if (n_max < 1) throw DomainError("FockModel: n_max must be >= 1");
    for (auto& a : a_) a = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int na = 0; na <= n_max; ++na)
        for (int nb = 0; nb <= n_max; ++nb) {
            if (na > 0) a_[0](index(na - 1, nb), index(na, nb)) = std::sqrt(static_cast<double>(na));
            if (nb > 0) a_[1](index(na, nb - 1), index(na, nb)) = std::sqrt(static_cast<double>(nb));
        }

    // ρ̇ = Gρ + ρG' + Σ 2A_ij ψ_j ρ ψ_i† + Σ 2B_ij ψ_j† ρ ψ_i
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim_, dim_), D = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Eigen::MatrixXcd up_dn = a_[i].adjoint() * a_[j];
            H += q.H1(i, j) * up_dn;
            D += q.A(i, j) * up_dn + q.B(i, j) * (a_[i] * a_[j].adjoint());
        }
    const Eigen::MatrixXcd G = -kI * H - D, Gr = kI * H - D;

    auto sparse = [](const Eigen::MatrixXcd& m) { return Eigen::SparseMatrix<cplx>(m.sparseView()); };
    Eigen::SparseMatrix<cplx> I(dim_, dim_);
    I.setIdentity();
    // vec(XρY) = (Yᵀ ⊗ X) vec(ρ)
    liouvillian_ = Eigen::kroneckerProduct(I, sparse(G)).eval();
    liouvillian_ += Eigen::kroneckerProduct(sparse(Gr.transpose()), I).eval();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (q.A(i, j) != 0.0)
                liouvillian_ += (2.0 * q.A(i, j)) *
                                Eigen::kroneckerProduct(sparse(a_[i].conjugate()), sparse(a_[j])).eval();
            if (q.B(i, j) != 0.0)
                liouvillian_ += (2.0 * q.B(i, j)) *
                                Eigen::kroneckerProduct(sparse(a_[i].transpose()), sparse(a_[j].adjoint())).eval();
        }
    liouvillian_.makeCompressed();
}

FockModel::FockModel(const SystemSpec& sys, const BathSpec& bath, int n_max)
    : FockModel(br_coefficients(sys, bath), n_max)
{
}

Eigen::MatrixXcd FockModel::vacuum() const
{
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_, dim_);
    rho(0, 0) = 1.0;
    return rho;
}

Eigen::MatrixXcd FockModel::pure_state(const Eigen::VectorXcd& psi) const
{
    if (psi.size() != dim_) throw DomainError("FockModel::pure_state: state has the wrong dimension");
    const Eigen::VectorXcd u = psi.normalized();
    return u * u.adjoint();
}

Eigen::MatrixXcd FockModel::derivative(const Eigen::MatrixXcd& rho) const
{
    const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
    const Eigen::VectorXcd d = liouvillian_ * v;
    return Eigen::Map<const Eigen::MatrixXcd>(d.data(), dim_, dim_);
}

SecondMoments FockModel::moments(const Eigen::MatrixXcd& rho) const
{
    Eigen::Matrix2cd F;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) F(i, j) = (rho * a_[i].adjoint() * a_[j]).trace();
    return from_matrix(F);
}

double FockModel::boundary_population(const Eigen::MatrixXcd& rho) const
{
    double p = 0.0;
    for (int na = 0; na <= n_max_; ++na)
        for (int nb = 0; nb <= n_max_; ++nb)
            if (na == n_max_ || nb == n_max_) p += rho(index(na, nb), index(na, nb)).real();
    return p;
}

std::vector<Eigen::MatrixXcd> FockModel::propagate(const Eigen::MatrixXcd& rho0, std::span<const double> times,
                                                   double tol, double guard) const
{
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    check_times(times, "FockModel::propagate");
    if (rho0.rows() != dim_ || rho0.cols() != dim_)
        throw DomainError("FockModel::propagate: initial state has the wrong dimension");

    const std::size_t n = static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_);
    State x(2 * n);
    Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<cplx*>(x.data()), n) =
        Eigen::Map<const Eigen::VectorXcd>(rho0.data(), n);
    auto rhs = [&](const State& s, State& ds, double) {
        const Eigen::Map<const Eigen::VectorXcd> v(reinterpret_cast<const cplx*>(s.data()), n);
        Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<cplx*>(ds.data()), n) = liouvillian_ * v;
    };

    std::vector<double> grid;
    const bool prepend = !times.empty() && times.front() > 0.0;
    if (prepend) grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());

    std::vector<Eigen::MatrixXcd> out;
    auto observe = [&](const State& s, double t) {
        Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const cplx*>(s.data()), dim_, dim_);
        const double p = boundary_population(rho);
        if (p > guard)
            throw TruncationError("fock_oracle: boundary population " + to_sci(p) + " at t = " + to_sci(t) +
                                  " exceeds " + to_sci(guard) + " (raise n_max)");
        out.push_back(std::move(rho));
    };
    if (grid.size() == 1) {
        observe(x, grid.front());
    } else if (grid.size() > 1) {
        const double dt0 = std::min(1e-3, 0.1 * (grid[1] - grid[0]));
        ode::integrate_times(ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>()), rhs, x, grid.begin(),
                             grid.end(), dt0, observe);
    }
    if (prepend) out.erase(out.begin());
    return out;
}

std::vector<SecondMoments> fock_oracle(const SystemSpec& sys, const BathSpec& bath, const OracleConfig& cfg,
                                       std::span<const double> times)
{
    const FockModel model(sys, bath, cfg.n_max);
    const auto states = model.propagate(model.vacuum(), times);
    std::vector<SecondMoments> out;
    out.reserve(states.size());
    for (const auto& rho : states) out.push_back(model.moments(rho));
    return out;
}

}  // namespace bathcoh
