// test_diag.cpp — positivity diagnostics, sum rule, discretized-bath and truncated-Fock oracles
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "bathcoh/diag.hpp"

using namespace bathcoh;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

BathSpec reference_bath(double kBT = 0.52) { return BathSpec(SuperOhmic{0.001, 0.9, 3.0}, Thermal{kBT}); }
SystemSpec reference_system() { return SystemSpec(1.0, 0.9, kInvSqrt2, kInvSqrt2); }

std::vector<double> grid(double step, double stop)
{
    std::vector<double> t;
    for (int i = 0; i * step <= stop + 1e-12; ++i) t.push_back(i * step);
    return t;
}

}  // namespace

TEST_CASE("smaller eigenvalue of F matches a numerical eigensolver")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const SecondMoments m{std::abs(u(rng)), std::abs(u(rng)), cplx(u(rng), u(rng))};
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m.matrix());
        CHECK(min_eigen_F(m) == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
    }
}

TEST_CASE("minimum-uncertainty covariance sits on the physical boundary")
{
    const MinimumUncertaintyState s{0.2, 0.15, 1.3};
    const SecondMoments F = s.covariance();
    CHECK(std::abs(min_eigen_F(F)) < 1e-15);
    CHECK((F.matrix() * s.null_vector()).norm() < 1e-15);
    CHECK(std::abs(F.ab) == doctest::Approx(std::sqrt(0.2 * 0.15)));
}

TEST_CASE("positivity violation equals the first-order shift of the zero eigenvalue under BR")
{
    const auto sys = reference_system();
    const auto bath = reference_bath();
    const Generator g = br_generator(sys, bath);
    for (double theta : {0.0, 1.0, 2.5, 4.0}) {
        const MinimumUncertaintyState s{0.2, 0.15, theta};
        const MomentVector f = to_moment_vector(s.covariance());
        const double dt = 1e-4;
        // oracle: step along the moment equation, diagonalize, and remove the O(dt²) term
        // by Richardson extrapolation, 2 s(dt) - s(2dt)/2 = (dλ/dt)·dt + O(dt³)
        const MomentVector fdot = -g.M * f + g.f0;
        const double s1 = min_eigen_F(from_moment_vector(f + dt * fdot));
        const double s2 = min_eigen_F(from_moment_vector(f + 2.0 * dt * fdot));
        const double shift = 2.0 * s1 - 0.5 * s2;
        const double predicted = 2.0 * gaussian_positivity_violation(sys, bath, s) * dt / (s.n_a + s.n_b);
        CHECK(std::abs(shift - predicted) < 1e-4 * std::abs(predicted) + 1e-14);
    }
    // the BR map pushes some boundary states out of the physical set
    double worst = INFINITY;
    for (int k = 0; k < 64; ++k)
        worst = std::min(worst, gaussian_positivity_violation(sys, bath, MinimumUncertaintyState{0.01, 0.01, k * M_PI / 32}));
    CHECK(worst < 0.0);
}

TEST_CASE("sum rule: SpBR conserves the dark combination, BR with this matrix does too")
{
    const auto sys = reference_system();
    CHECK(sum_rule_residual(spbr_generator(sys, reference_bath()), sys).cwiseAbs().maxCoeff() < 1e-17);
    const Generator br = br_generator(sys, reference_bath());
    CHECK(sum_rule_residual(br, sys).cwiseAbs().maxCoeff() < 1e-17);
}

TEST_CASE("discretized oracle: convergence in N and recurrence guard")
{
    const auto sys = reference_system();
    const auto bath = reference_bath();
    const auto times = grid(0.05, 20.0);
    const auto ex = exact_moments(sys, bath, times);
    auto err = [&](std::size_t N) {
        const auto o = discretized_bath_oracle(sys, bath, OracleConfig{N, 0.0, 6}, times);
        double e = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            e = std::max(e, (to_moment_vector(o[i]) - to_moment_vector(ex[i])).cwiseAbs().maxCoeff());
        return e;
    };
    // N = 60 keeps the recurrence time just above t_max; N = 800 reaches the exact solver's own accuracy
    const double e1 = err(60), e2 = err(800);
    CHECK(e2 < e1);
    CHECK(e2 < 1e-5);
    const double trec = oracle_recurrence_time(bath, OracleConfig{200, 0.0, 6}, 20.0);
    CHECK(trec == doctest::Approx(2.0 * M_PI * 200.0 / (bath.support_hi() - bath.support_lo())));
    const std::vector<double> late{0.0, trec};
    CHECK_THROWS_AS(discretized_bath_oracle(sys, bath, OracleConfig{200, 0.0, 6}, late), DomainError);
}

TEST_CASE("Fock model: vacuum derivative is the inhomogeneity, trace and hermiticity are preserved")
{
    const auto sys = reference_system();
    const auto bath = reference_bath(0.2);
    const Generator g = br_generator(sys, bath);
    const FockModel fm(sys, bath, 5);
    CHECK(fm.dimension() == 36);
    const Eigen::MatrixXcd d0 = fm.derivative(fm.vacuum());
    CHECK((to_moment_vector(fm.moments(d0)) - g.f0).cwiseAbs().maxCoeff() < 1e-17);
    CHECK(std::abs(d0.trace()) < 1e-17);
    CHECK((d0 - d0.adjoint()).cwiseAbs().maxCoeff() < 1e-17);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fm.dimension());
    psi(fm.index(1, 1)) = 1.0;
    psi(fm.index(2, 0)) = cplx(0.3, 0.4);
    const Eigen::MatrixXcd rho = fm.pure_state(psi);
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    const MomentVector f = to_moment_vector(fm.moments(rho));
    const MomentVector d = to_moment_vector(fm.moments(fm.derivative(rho)));
    CHECK((d - (-g.M * f + g.f0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Fock oracle follows BR and reports truncation failure")
{
    const auto sys = reference_system();
    const auto cold = reference_bath(0.2);
    const auto times = grid(0.5, 10.0);
    const auto fo = fock_oracle(sys, cold, OracleConfig{0, 0.0, 6}, times);
    const auto br = evolve(br_generator(sys, cold), MomentVector::Zero(), times);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK((to_moment_vector(fo[i]) - br.f[i]).cwiseAbs().maxCoeff() < 1e-9);
    const BathSpec hot(SuperOhmic{0.05, 0.9, 3.0}, Thermal{3.0});
    CHECK_THROWS_AS(fock_oracle(sys, hot, OracleConfig{0, 0.0, 2}, grid(0.5, 40.0)), TruncationError);
}
