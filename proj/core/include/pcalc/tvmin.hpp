#pragma once

#include "pcalc/bv1d.hpp"
#include "pcalc/fields.hpp"
#include "pcalc/test_function.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace pcalc {

// Cell values on a uniform grid, last axis fastest.
struct GridFunction {
    std::vector<int> shape;
    double h = 1.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(std::vector<int> shape, double h, double fill = 0.0);
    int dim() const { return static_cast<int>(shape.size()); }
    std::size_t size() const { return values.size(); }
    // Index of the neighbour one step up along axis, or -1 at the last layer.
    long forward(std::size_t cell, int axis) const;
    std::vector<double> cell_center(std::size_t cell, const std::vector<double>& origin) const;
};

struct EnergyParams {
    double p = 2.0;                       // 1 <= p <= inf
    std::vector<std::vector<double>> A;   // field sample per cell
    GridFunction g;
    int max_iter = 20000;
    double tau = 0.0, sigma = 0.0;        // 0 picks tau = sigma = 0.99 / ||K||
    double tol = 1e-10;                   // relative stagnation of the best energy
    double residual_tol = 1e-7;           // and max-norm primal-dual step residual
    int window = 500;                     // iterations over which stagnation is measured
    bool throw_on_budget = false;
};

// Samples a catalog field at the cell centres of a grid starting at origin.
std::vector<std::vector<double>> sample_field(const FieldND& field, const GridFunction& g,
                                              const std::vector<double>& origin);

// Forward-difference TV term sum |A . grad_h u| h^N; zero difference on the last layer.
double tv_term(const GridFunction& u, const std::vector<std::vector<double>>& A);
// (sum |u - g|^p |A| h^N)^(1/p); max over cells with |A| > 0 for p = inf.
double fidelity_term(const GridFunction& u, const EnergyParams& params);
// ShapeMismatch when grids or samples disagree.
double energy(const GridFunction& u, const EnergyParams& params);

struct MinimizeResult {
    GridFunction u;
    std::vector<double> trace;  // best energy so far, per iteration
    int iterations = 0;
    bool converged = false;
};

// Primal-dual (Chambolle-Pock) iteration with best-iterate tracking. Cells
// with |A| = 0 are frozen at g. BudgetExceeded only with throw_on_budget.
MinimizeResult minimize(const EnergyParams& params);

// Lower semicontinuity along a 1D sequence u_k -> u.
struct LscReport {
    std::vector<int> k;
    std::vector<double> masses;      // |(A, Du_k)_lam|(Omega)
    double limit_mass = 0.0;         // |(A, Du)_lam|(Omega)
    double liminf_estimate = 0.0;    // min over the last half of the sequence
    double rep_distance = 0.0;       // ||u_k^lam - u^lam||_{L1(|DA|)} at the last k
    bool representatives_converge = false;
    bool holds = false;              // limit_mass <= liminf_estimate + tol
};
LscReport lsc_harness(const PiecewiseFunction1D& A, const std::function<PiecewiseFunction1D(int)>& sequence,
                      const PiecewiseFunction1D& limit, const LambdaSelector& lam, const std::vector<int>& ks,
                      double tol = 1e-9);

// u_k = a arctan(kx) for x >= 0, b arctan(kx) for x < 0 on (-1, 1); A = chi_(0,1).
PiecewiseFunction1D arctan_sequence(const Rational& a, const Rational& b, int k);
PiecewiseFunction1D arctan_limit(const Rational& a, const Rational& b);

struct CompactnessReport {
    int dim = 2;
    std::vector<int> k;
    std::vector<double> masses;        // ||u_k||_{L1(|A|)}
    std::vector<bool> pairing_zero;    // (A, Du_k) is the zero measure
    std::vector<double> seminorms;
    double limit = 0.0;                // 2^{N-1} |f(0)|
    bool failure_confirmed = false;    // masses stay away from 0
};
// u_k = k chi_{(-1,1)^{N-1} x (0, 1/k)} against A = (f(x_N), 0, ..., 0).
CompactnessReport compactness_failure_demo(int dim, const Profile1D& f, const std::vector<int>& ks);

}  // namespace pcalc
