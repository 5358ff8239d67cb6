// quadrature.cpp — composite Gauss-Legendre rules and graded breakpoint sets

#include "bathcoh/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace bathcoh::quad {

Rule gauss_legendre(const std::vector<double>& breaks)
{
    using GL = boost::math::quadrature::gauss<double, 8>;
    const auto& xa = GL::abscissa();  // nonnegative half of the symmetric rule
    const auto& wa = GL::weights();
    Rule r;
    if (breaks.size() < 2) return r;
    r.x.reserve(8 * (breaks.size() - 1));
    r.w.reserve(8 * (breaks.size() - 1));
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t j = 0; j < xa.size(); ++j) {
            // 8 points: no node at 0, four symmetric pairs
            r.x.push_back(c - h * xa[j]);
            r.w.push_back(h * wa[j]);
            r.x.push_back(c + h * xa[j]);
            r.w.push_back(h * wa[j]);
        }
    }
    return r;
}

std::vector<double> clip_points(double lo, double hi, std::vector<double> pts)
{
    pts.push_back(lo);
    pts.push_back(hi);
    std::vector<double> out;
    std::sort(pts.begin(), pts.end());
    for (double p : pts) {
        if (p < lo || p > hi) continue;
        if (!out.empty() && p - out.back() <= 1e-14 * std::max(1.0, std::abs(p))) continue;
        out.push_back(p);
    }
    if (out.back() != hi) out.back() = hi;
    return out;
}

std::vector<double> graded_breaks(double lo, double hi, const std::vector<double>& centers,
                                  const std::vector<double>& widths, double hmax,
                                  const std::vector<double>& fixed, double ratio)
{
    std::vector<double> stops = centers;
    stops.insert(stops.end(), fixed.begin(), fixed.end());
    stops = clip_points(lo, hi, stops);

    auto step = [&](double x) {
        double s = hmax;
        for (std::size_t k = 0; k < centers.size(); ++k)
            s = std::min(s, std::max(widths[k], ratio * std::abs(x - centers[k])));
        return s;
    };

    std::vector<double> out{lo};
    std::size_t next_stop = 1;
    double x = lo;
    while (x < hi) {
        double nx = x + step(x);
        // shrink so the panel does not overshoot a region that needs finer steps
        while (nx - x > step(nx) / (1.0 - ratio) && nx - x > 1e-300) nx = x + 0.5 * (nx - x);
        while (next_stop < stops.size() && stops[next_stop] <= x) ++next_stop;
        if (next_stop < stops.size() && nx >= stops[next_stop]) nx = stops[next_stop];
        if (nx >= hi) nx = hi;
        out.push_back(nx);
        x = nx;
    }
    return out;
}

}  // namespace bathcoh::quad
