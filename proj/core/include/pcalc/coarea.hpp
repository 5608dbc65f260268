#pragma once

#include "pcalc/bv1d.hpp"
#include "pcalc/fields.hpp"
#include "pcalc/geometry.hpp"
#include "pcalc/test_function.hpp"

#include <vector>

namespace pcalc {

// Superlevel set {u > t} as an indicator on the same domain.
PiecewiseFunction1D superlevel_indicator(const PiecewiseFunction1D& u, const Rational& t);

// Exceptional set N_t = {u^- <= t < u^+} minus the half-density points of {u > t}.
std::vector<Rational> exceptional_set(const PiecewiseFunction1D& u, const Rational& t);

struct LevelSetSlice {
    Rational t;
    BorelSet1D superlevel;
    std::vector<Rational> exceptional;
};
LevelSetSlice level_set_slice(const PiecewiseFunction1D& u, const Rational& t);

// chi_{u>t}^lam(x) = (1 - lam) chi_{u^- > t} + lam chi_{u^+ > t}. ExceptionalPoint on N_t.
double level_set_representative(const PiecewiseFunction1D& u, const Rational& t, const LambdaSelector& lam,
                                const Rational& x);

// Levels where the combinatorics of {u > t} change: one-sided limits at
// breakpoints and interior extrema, sorted and deduplicated.
std::vector<Rational> critical_levels(const PiecewiseFunction1D& u);

struct HypothesisViolation {
    Rational t;
    Rational x;
    double mass = 0.0;  // |A|(N_t) + |DA|(N_t)
};
// Levels t with |A|(N_t) + |DA|(N_t) > 0. In 1D these are isolated levels.
std::vector<HypothesisViolation> coarea_hypotheses(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u);

struct CoareaReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    std::vector<Rational> bands;  // t-integration split points
};

struct CoareaOptions {
    double t_tol = 1e-10;
    bool check_hypotheses = true;
    std::vector<Rational> extra_levels;  // further band splits
};

// lhs = int phi d(A, Du)_lam, rhs = int_R <(A, D chi_{u>t})_lam, phi> dt.
// HypothesisFailed when a level with positive |A| + |DA| mass on N_t is found.
CoareaReport coarea_check(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u, const LambdaSelector& lam,
                          const PiecewiseFunction1D& phi, const CoareaOptions& opt = {});

struct CoareaWindow {
    Rational lo, hi;
    double lhs = 0.0;  // |(A, Du)_lam|(W)
    double rhs = 0.0;  // int |(A, D chi_{u>t})_lam|(W) dt
    bool holds = true;
    bool strict = false;
};
// Inequality mode on open windows W.
std::vector<CoareaWindow> coarea_inequality(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u,
                                            const LambdaSelector& lam, const std::vector<Interval1D>& windows,
                                            const CoareaOptions& opt = {});

// Step-function variant in N dimensions. Levels are the cell values; the t-integral is a finite sum.
struct CoareaReportND {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    std::vector<double> levels;
};
CoareaReportND coarea_check_nd(const FieldND& field, const StepFunctionND& u, const LambdaSelector& lam,
                               const TestFunction& phi, bool check_hypotheses = true);

}  // namespace pcalc
