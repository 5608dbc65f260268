#pragma once

#include "pcalc/fields.hpp"
#include "pcalc/geometry.hpp"
#include "pcalc/lambda.hpp"
#include "pcalc/measure_nd.hpp"
#include "pcalc/test_function.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pcalc {

// C^1 scalar given by value and gradient callables.
struct SmoothScalar {
    PointFn value;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
};

// chi_E on the field's domain, on a grid that already carries every
// coordinate the pairing needs (field cuts, lambda regions, divergence parts).
StepFunctionND set_function(const FieldND& field, const BoxSet& e, const LambdaSelector& lam,
                            const std::vector<std::vector<double>>& extra = {});
StepFunctionND prepare(const FieldND& field, const StepFunctionND& u, const LambdaSelector& lam);

// <(A, Du)_lam, phi> = -int u^lam phi d divA - int u^lam grad phi . dA
double pairing_apply(const FieldND& field, const StepFunctionND& u, const LambdaSelector& lam,
                     const TestFunction& phi, const QuadOptions& opt = {});
double pairing_apply(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const TestFunction& phi,
                     const QuadOptions& opt = {});
double pairing_apply(const FieldND& field, const SmoothScalar& u, const TestFunction& phi,
                     const QuadOptions& opt = {});
// int phi A . grad u dx (plus the segment parts of A).
double sobolev_pairing(const FieldND& field, const SmoothScalar& u, const TestFunction& phi,
                       const QuadOptions& opt = {});

// div(u^lam A) - u^lam div A as an explicit measure. NoClosedForm when A is
// singular on a jump face of u with a non-vanishing normal component.
MeasureND pairing_measure(const FieldND& field, const StepFunctionND& u, const LambdaSelector& lam);
MeasureND pairing_measure_box(const FieldND& field, const BoxSet& e, const LambdaSelector& lam);

struct PerimeterResult {
    double value = 0.0;
    bool lower_bound = false;  // sup over a finite test-function dictionary
};
PerimeterResult perimeter(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const Box& window);

// div A restricted to E^1, and lam div A restricted to the reduced boundary.
double divergence_interior(const FieldND& field, const StepFunctionND& u, const QuadOptions& opt = {});
MeasureND divergence_on_reduced_boundary(const FieldND& field, const StepFunctionND& u,
                                         const LambdaSelector& weight = LambdaSelector::constant(1.0));

enum class GaussGreenMode { General, Interior, Closure };  // lam as given, lam = 0, lam = 1

struct GaussGreenReport {
    double interior = 0.0;       // div A(E^1)
    double boundary = 0.0;       // int over the reduced boundary of lam d div A
    double pairing_mass = 0.0;   // (A, D chi_E)_lam of the topological boundary
    double residual = 0.0;
};
GaussGreenReport gauss_green_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam,
                                   GaussGreenMode mode = GaussGreenMode::General);

MeasureND boundary_divergence(const FieldND& field, const BoxSet& e);
MeasureND additivity_defect(const FieldND& field, const BoxSet& e, const BoxSet& f, const LambdaSelector& lam);

// Total variations of the measure-level defects.
double complement_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam);
double convex_combination_check(const FieldND& field, const BoxSet& e, double t);
double lambda_difference_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam1,
                               const LambdaSelector& lam2);
double boundary_divergence_check(const FieldND& field, const BoxSet& e);

double absolute_continuity_constant(int n);  // c_N

struct AcBound {
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
};
AcBound ac_bound_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const Box& window);

struct ProbeReport {
    std::vector<int> k;
    std::vector<double> values;
    double slope_log = 0.0;   // least-squares slope of |value| against log k
    double slope_lin = 0.0;   // against k
    bool monotone = false;
    bool not_measure = false;
    std::string verdict;      // "NotMeasure" or "Measure"
};

ProbeReport probe_report(std::vector<int> ks, std::vector<double> values, double threshold = 0.25);
ProbeReport not_measure_probe(const FieldND& field, const StepFunctionND& u,
                              const std::function<LambdaSelector(int)>& lam_k,
                              const std::function<TestFunction(int)>& phi_k, const std::vector<int>& ks);
// Odd ramps of width 1/k across x_1 = 0 (vortex field, E = (-1,1) x (-1,0)).
ProbeReport vortex_probe(int kmin, int kmax);
// lambda = chi_F(x_1) with F a union of k intervals, cosine-train test functions.
ProbeReport segment_probe(int kmin, int kmax, int dim = 2);
LambdaSelector interval_train_lambda(int k, int dim);

struct StaircaseReport {
    int depth = 0;
    double lhs = 0.0;           // int_F f g' over the reference-depth set
    double pairing_mass = 0.0;  // (A, D chi_{F_K}) total mass
    double residual = 0.0;
    double tail_bound = 0.0;
};
StaircaseReport staircase_gauss_green(const FieldND& field, int depth, int reference_depth = 40);

}  // namespace pcalc
