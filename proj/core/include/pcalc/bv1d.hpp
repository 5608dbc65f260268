#pragma once

#include "pcalc/function1d.hpp"
#include "pcalc/lambda.hpp"
#include "pcalc/measure1d.hpp"

#include <string>
#include <utility>

namespace pcalc {

// (u^-, u^+) from the one-sided limits.
std::pair<ExtReal, ExtReal> approx_limits(const PiecewiseFunction1D& u, const Rational& x);

// (1 - lam) u^- + lam u^+ off Z_u; +inf / 0 / -inf on Z_u by lam >, =, < 1/2.
ExtReal lambda_representative(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Rational& x);

// Distributional derivative. NotBV for infinite limits or non-integrable slopes.
Measure1D derivative(const PiecewiseFunction1D& u);

struct ClassXCertificate {
    bool member = false;
    double l1_A = 0.0;     // integral of |u^lam| |A|
    double l1_divA = 0.0;  // integral of |u^lam| d|DA|
    std::string reason;    // divergent term when not a member
};

ClassXCertificate in_class_X(const PiecewiseFunction1D& u, const PiecewiseFunction1D& A, const LambdaSelector& lam);

struct PairingResult1D {
    Measure1D pairing;
    Measure1D uA_derivative;
    Measure1D u_lambda_divA;
};

// (A, Du)_lam = D(uA) - u^lam DA. NotInBVA when uA is not BV or u is not in X.
PairingResult1D pairing_1d(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u, const LambdaSelector& lam);

// u^lam mu: representative values at the atoms, u times the density.
Measure1D lambda_times(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Measure1D& mu);

// Integral of u^lam against mu.
Real integrate_lambda(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Measure1D& mu);

// ||u||_{L1(|A|)} + ||u^lam||_{L1(|DA|)} + |D(uA)|(domain).
double seminorm_bva(const PiecewiseFunction1D& u, const PiecewiseFunction1D& A,
                    const LambdaSelector& lam = LambdaSelector::constant(0.5));

// Points in (lo, hi) where p crosses c; exact when p is affine.
std::vector<Rational> piece_crossings(const Piece& p, const Rational& c, const Rational& lo, const Rational& hi);

// Clamp to [-k, k] with breakpoints at the crossings.
PiecewiseFunction1D truncate(const PiecewiseFunction1D& u, const Rational& k);

}  // namespace pcalc
