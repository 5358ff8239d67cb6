// quadrature.hpp — adaptive Gauss-Kronrod wrappers and composite Gauss-Legendre grids
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bathcoh/errors.hpp"

namespace bathcoh::quad {

// Sum of adaptive GK31 integrals over consecutive intervals of `pts`.
// A non-adaptive pass estimates the global L1 norm; each panel then gets the
// tolerance tol·max(L1_panel, L1/n_panels), so small panels are not refined
// below what matters for the sum. Throws QuadratureError when the summed error
// estimate exceeds 1e4·tol relative to the L1 norm (floored by `abs_floor`).
template <class F>
auto integrate(F&& f, const std::vector<double>& pts, double tol, double abs_floor, const char* who)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    using T = decltype(f(0.0));
    const std::size_t n = pts.size() < 2 ? 0 : pts.size() - 1;
    std::vector<double> l1_first(n, 0.0);
    double l1_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(pts[k + 1] > pts[k])) continue;
        double err = 0.0;
        GK::integrate(f, pts[k], pts[k + 1], 0, tol, &err, &l1_first[k]);
        l1_total += l1_first[k];
    }
    const double share = std::max(l1_total, abs_floor) / static_cast<double>(std::max<std::size_t>(n, 1));

    T total{};
    double err_sum = 0.0, l1_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = pts[k], b = pts[k + 1];
        if (!(b > a)) continue;
        const double rel = l1_first[k] > 0.0 ? std::min(1e-3, tol * std::max(1.0, share / l1_first[k])) : 1e-3;
        double err = 0.0, l1 = 0.0;
        total += GK::integrate(f, a, b, 15, rel, &err, &l1);
        err_sum += err;
        l1_sum += l1;
    }
    if (!std::isfinite(std::abs(total)))
        throw QuadratureError(std::string(who) + ": non-finite integral", err_sum);
    if (err_sum > 1e4 * tol * std::max(l1_sum, abs_floor))
        throw QuadratureError(std::string(who) + ": adaptive quadrature did not converge (L1 " + std::to_string(l1_sum) + ")", err_sum);
    return total;
}

// Nodes and weights of a composite 8-point Gauss-Legendre rule.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

Rule gauss_legendre(const std::vector<double>& breaks);

// Breakpoints on [lo, hi] with panel width ≤ hmax, graded geometrically
// towards each center c_k down to widths[k]: the panel at x has width
// min(hmax, min_k max(widths[k], ratio·|x - c_k|)). Centers and `fixed`
// points inside [lo, hi] become breakpoints.
std::vector<double> graded_breaks(double lo, double hi, const std::vector<double>& centers,
                                  const std::vector<double>& widths, double hmax,
                                  const std::vector<double>& fixed = {}, double ratio = 0.25);

// Sorted, de-duplicated copy of `pts` clipped to [lo, hi], with lo and hi included.
std::vector<double> clip_points(double lo, double hi, std::vector<double> pts);

}  // namespace bathcoh::quad
