// moments.hpp — second-moment matrix F_ij = <ψ_i† ψ_j> and its real 4-vector form
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bathcoh {

// f = (F_aa, F_bb, 2 Re F_ab, 2 Im F_ab)
using MomentVector = Eigen::Vector4d;

struct SecondMoments {
    double aa{0.0};
    double bb{0.0};
    std::complex<double> ab{0.0};

    // Hermitian by construction: F_ba = conj(F_ab).
    Eigen::Matrix2cd matrix() const
    {
        Eigen::Matrix2cd m;
        m << aa, ab, std::conj(ab), bb;
        return m;
    }
};

inline MomentVector to_moment_vector(const SecondMoments& m)
{
    return MomentVector(m.aa, m.bb, 2.0 * m.ab.real(), 2.0 * m.ab.imag());
}

inline SecondMoments from_moment_vector(const MomentVector& f)
{
    return SecondMoments{f[0], f[1], {0.5 * f[2], 0.5 * f[3]}};
}

// Hermitian part of a 2x2 matrix, read into SecondMoments.
inline SecondMoments from_matrix(const Eigen::Matrix2cd& F)
{
    return SecondMoments{F(0, 0).real(), F(1, 1).real(), 0.5 * (F(0, 1) + std::conj(F(1, 0)))};
}

}  // namespace bathcoh
