// test_meq.cpp — master-equation generators, spectra, evolution and steady states
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "bathcoh/diag.hpp"
#include "bathcoh/meq.hpp"

using namespace bathcoh;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

BathSpec reference_bath() { return BathSpec(SuperOhmic{0.001, 0.9, 3.0}, Thermal{0.52}); }
SystemSpec reference_system() { return SystemSpec(1.0, 0.9, kInvSqrt2, kInvSqrt2); }

double max_abs(const Eigen::Matrix4d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("BR moment matrix matches the moment equations of its Lindblad-form coefficients")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const BathSpec bath(SuperOhmic{1e-3 + 2e-3 * u(rng), 0.7 + 0.5 * u(rng), 2.0 + 3.0 * u(rng)},
                            Thermal{0.2 + 0.6 * u(rng)});
        const double a = 0.2 + 1.1 * u(rng);
        const SystemSpec sys = SystemSpec::from_detuning(0.9 + 0.2 * u(rng), 0.1 * (u(rng) - 0.5), std::cos(a), std::sin(a));
        const Generator g = br_generator(sys, bath);
        const auto q = br_coefficients(sys, bath);
        const Generator h = quadratic_generator(q.H1, q.A, q.B, GeneratorKind::BR);
        const double scale = max_abs(g.M);
        CHECK(max_abs(g.M - h.M) < 1e-12 * scale);
        CHECK((g.f0 - h.f0).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("SpBR differs from BR only in the bath block's cross terms")
{
    const Generator br = br_generator(reference_system(), reference_bath());
    const Generator sp = spbr_generator(reference_system(), reference_bath());
    CHECK(max_abs(br.M - sp.M) > 0.0);
    CHECK(br.M.topLeftCorner<2, 2>() == sp.M.topLeftCorner<2, 2>());
    CHECK(br.f0 == sp.f0);
}

TEST_CASE("closed-form eigenvalues match numerical diagonalization")
{
    for (double D : {0.0, 0.005, 0.05}) {
        const SystemSpec sys(1.0, 1.0 - 2.0 * D, 0.8, 0.6);
        const auto a = closed_form_eigenvalues(sys, reference_bath());
        const auto b = numeric_eigenvalues(br_generator(sys, reference_bath()).M);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
}

TEST_CASE("multi-bath closed-form eigenvalues match diagonalization")
{
    const BathSpec b2(SuperOhmic{0.002, 1.1, 4.0}, Thermal{0.3});
    const SystemSpec sys(1.0, 0.95, kInvSqrt2, kInvSqrt2);
    const MultiBathSpec multi({Channel{reference_bath(), 0.8, 0.6}, Channel{b2, 0.3, -0.9}});
    const auto a = closed_form_eigenvalues(multi, sys);
    const auto b = numeric_eigenvalues(multibath_generator(multi, sys, GeneratorKind::BR).M);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
}

TEST_CASE("evolution: eigen-decomposition, integrator and matrix exponential agree")
{
    const Generator g = br_generator(reference_system(), reference_bath());
    const std::vector<double> times{0.0, 1.0, 10.0, 100.0, 300.0};
    const MomentVector f_init(0.1, 0.05, 0.02, -0.01);
    const auto a = evolve(g, f_init, times);
    const auto b = evolve_integrator(g, f_init, times, 1e-12);
    const MomentVector fss = g.M.colPivHouseholderQr().solve(g.f0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        // independent oracle: f(t) = e^{-Mt}(f_init - f_ss) + f_ss
        const Eigen::Matrix4d E = (-g.M * times[i]).exp();
        const MomentVector ref = E * (f_init - fss) + fss;
        CHECK((a.f[i] - ref).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((b.f[i] - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("steady state is the fixed point and is refused at degeneracy")
{
    const Generator g = br_generator(reference_system(), reference_bath());
    const MomentVector f = steady_state(g);
    CHECK((-g.M * f + g.f0).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(steady_state(br_generator(SystemSpec(1.0, 1.0, kInvSqrt2, kInvSqrt2), reference_bath())),
                    NoSteadyState);
}

TEST_CASE("secular approximation drops all coherence and relaxes to Bose-Einstein occupations")
{
    const auto bath = reference_bath();
    const Generator g = secularize(br_generator(reference_system(), bath));
    const auto tr = evolve(g, MomentVector::Zero(), std::vector<double>{0.0, 5.0, 50.0, 500.0});
    for (const auto& f : tr.f) {
        CHECK(f[2] == 0.0);
        CHECK(f[3] == 0.0);
    }
    const MomentVector fss = steady_state(g);
    CHECK(fss[0] == doctest::Approx(occupation(bath, 1.0)).epsilon(1e-12));
    CHECK(fss[1] == doctest::Approx(occupation(bath, 0.9)).epsilon(1e-12));
    CHECK_THROWS_AS(secularize(collective_generator(reference_system(), bath)), DomainError);
}

TEST_CASE("phenomenological generators")
{
    const auto bath = reference_bath();
    const auto sys = reference_system();
    const auto ind = evolve(individual_generator(sys, bath), MomentVector::Zero(), std::vector<double>{0.0, 10.0, 100.0});
    for (const auto& f : ind.f) CHECK(std::abs(f[2]) + std::abs(f[3]) == 0.0);
    const MomentVector fi = steady_state(individual_generator(sys, bath));
    CHECK(fi[0] == doctest::Approx(occupation(bath, 1.0)).epsilon(1e-12));
    const MomentVector fc = steady_state(collective_generator(sys, bath));
    CHECK(fc[0] == doctest::Approx(fc[1]).epsilon(1e-12));
    CHECK(fc[0] == doctest::Approx(occupation(bath, sys.center())).epsilon(1e-9));
}

TEST_CASE("Kossakowski spectra: closed form, and one negative rate away from degeneracy")
{
    const auto bath = reference_bath();
    for (double D : {0.0, 0.05}) {
        const SystemSpec sys(1.0, 1.0 - 2.0 * D, kInvSqrt2, kInvSqrt2);
        const auto num = lindblad_rates(kossakowski(sys, bath));
        const auto cf = lindblad_rates_closed_form(sys, bath);
        CHECK((num.down - cf.down).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((num.up - cf.up).cwiseAbs().maxCoeff() < 1e-14);
        if (D == 0.0) {
            CHECK(num.down[0] >= -1e-12);
            CHECK(num.up[0] >= -1e-12);
        } else {
            CHECK(num.down[0] < 0.0);
            CHECK(num.up[0] < 0.0);
            CHECK(num.down[1] > 0.0);
        }
    }
}

TEST_CASE("perturbative slow eigenvalues")
{
    const BathSpec bath(SuperOhmic{0.02, 0.9, 3.0}, Thermal{0.52});
    double prev_br = INFINITY, prev_sp = INFINITY;
    for (double D : {0.02, 0.01, 0.005}) {
        const SystemSpec sys(1.0, 1.0 - 2.0 * D, kInvSqrt2, kInvSqrt2);
        const double br = numeric_eigenvalues(br_generator(sys, bath).M)[0].real();
        const double sp = numeric_eigenvalues(spbr_generator(sys, bath).M)[0].real();
        const double ebr = std::abs(br - br_perturbative_rate(sys, bath)) / br;
        const double esp = std::abs(sp - spbr_perturbative_rate(sys, bath)) / sp;
        CHECK(ebr < prev_br);
        CHECK(esp < prev_sp);
        prev_br = ebr;
        prev_sp = esp;
    }
    CHECK(prev_br < 1e-2);
    CHECK(prev_sp < 1e-2);
    CHECK(br_perturbative_rate(SystemSpec(1.0, 1.0, kInvSqrt2, kInvSqrt2), bath) == 0.0);
}

TEST_CASE("stability margin and Markov scale")
{
    CHECK(stability_margin(reference_system(), reference_bath()) > 0.0);
    CHECK_FALSE(markov_flag(reference_system(), reference_bath()));
    const BathSpec two(MultiPeak{{SuperOhmic{0.1, 0.9, 400.0}, SuperOhmic{0.1, 1.1, 400.0}}}, Thermal{0.2});
    const auto sys = SystemSpec::from_detuning(1.0, 0.02, kInvSqrt2, kInvSqrt2);
    CHECK(stability_margin(sys, two) < 0.0);
    CHECK(markov_flag(sys, two));
    CHECK(numeric_eigenvalues(br_generator(sys, two).M)[0].real() < 0.0);
}

TEST_CASE("generator names")
{
    CHECK(std::string(to_string(GeneratorKind::BR)) == "br");
    CHECK(std::string(to_string(GeneratorKind::SpBR)) == "spbr");
    CHECK(std::string(to_string(GeneratorKind::IndividualLindblad)) == "individual");
}
