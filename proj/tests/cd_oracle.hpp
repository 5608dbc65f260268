#pragma once
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace testing_support {

// Brute-force minimizer of a convex energy over R^n: cyclic coordinate descent
// with golden-section line searches, plus moves of every level group (cells
// sharing a value) so that flat plateaus cannot stall the descent. Stops when a
// full sweep gains less than tol.
inline std::vector<double> coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double lo, double hi, double tol = 1e-14,
                                              int max_sweeps = 20000, bool smooth = false) {
    const double gr = (std::sqrt(5.0) - 1) / 2;
    auto line = [&](const std::function<void(std::vector<double>&, double)>& move, double a, double b) {
        std::vector<double> y = x;
        auto at = [&](double t) {
            std::vector<double> z = y;
            move(z, t);
            return f(z);
        };
        double t;
        if (smooth) {
            t = boost::math::tools::brent_find_minima(at, a, b, 40).first;
        } else {
            double c = b - gr * (b - a), d = a + gr * (b - a), fc = at(c), fd = at(d);
            while (b - a > 1e-13) {
                if (fc < fd) {
                    b = d, d = c, fd = fc;
                    c = b - gr * (b - a), fc = at(c);
                } else {
                    a = c, c = d, fc = fd;
                    d = a + gr * (b - a), fd = at(d);
                }
            }
            t = 0.5 * (a + b);
        }
        std::vector<double> z = y;
        move(z, t);
        if (f(z) < f(x)) x = z;
    };
    double e = f(x);
    for (int s = 0; s < max_sweeps; ++s) {
        for (std::size_t i = 0; i < x.size(); ++i)
            line([i](std::vector<double>& z, double t) { z[i] = t; }, lo, hi);
        // level groups: cells whose values agree to 1e-9 move together
        std::vector<double> vals = x;
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end(), [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                   vals.end());
        for (double v : vals) {
            std::vector<std::size_t> group;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (std::fabs(x[i] - v) < 1e-9) group.push_back(i);
            if (group.size() < 2) continue;
            line([group, v](std::vector<double>& z, double t) {
                for (auto i : group) z[i] = v + t;
            }, lo - v, hi - v);
        }
        double en = f(x);
        if (e - en < tol) break;
        e = en;
    }
    return x;
}

// Continuation on a smoothed family fe(eps, x) -> f(x) as eps -> 0: plain
// coordinate descent stalls at kinks that are not aligned with the axes, the
// smoothed energies have none. Finishes with a run on f itself.
inline std::vector<double> smoothed_coordinate_descent(
    const std::function<double(double, const std::vector<double>&)>& fe,
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, double lo, double hi,
    double eps_min = 1e-7) {
    for (double eps = 1e-1; eps >= eps_min * 0.999; eps *= 0.1)
        x = coordinate_descent([&](const std::vector<double>& y) { return fe(eps, y); }, x, lo, hi, 1e-15, 5000, true);
    return coordinate_descent(f, x, lo, hi);
}

}  // namespace testing_support
