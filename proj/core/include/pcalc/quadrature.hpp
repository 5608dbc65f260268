#pragma once

#include <functional>
#include <vector>

namespace pcalc {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_regions = 200000;
    bool throw_on_failure = true;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    int regions = 0;
    bool converged = true;
};

using Fn1D = std::function<double(double)>;
using FnND = std::function<double(const std::vector<double>&)>;

// Globally adaptive Gauss-Kronrod (7/15) on [a, b], with optional interior
// cut points where the integrand is known to be non-smooth.
QuadResult integrate_1d(const Fn1D& f, double a, double b, const QuadOptions& opt = {},
                        const std::vector<double>& cuts = {});

// Double-exponential rule for integrable endpoint singularities.
QuadResult integrate_tanh_sinh(const Fn1D& f, double a, double b, const QuadOptions& opt = {});

// Adaptive cubature over the box [lo, hi]. Axes with lo == hi are held fixed,
// so faces and segments embedded in R^N go through the same entry point.
// Effective dimension 1 and 2 use tensor Gauss-Kronrod, 3 and up Genz-Malik.
// cuts[k] lists coordinates along axis k where the integrand may jump or kink.
QuadResult integrate_box(const FnND& f, const std::vector<double>& lo, const std::vector<double>& hi,
                         const QuadOptions& opt = {},
                         const std::vector<std::vector<double>>& cuts = {});

}  // namespace pcalc
