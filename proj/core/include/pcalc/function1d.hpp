#pragma once

#include "pcalc/measure1d.hpp"
#include "pcalc/piece.hpp"
#include "pcalc/sets1d.hpp"

#include <map>
#include <vector>

namespace pcalc {

// Scalar function on an open interval: breakpoints b_1 < ... < b_m inside the
// domain, one analytic piece per open cell, optional values at breakpoints.
// Power and log kernels are read as |x - a|^alpha and log|x - a|; their
// orientation is fixed per cell on construction.
class PiecewiseFunction1D {
public:
    PiecewiseFunction1D() = default;
    PiecewiseFunction1D(Interval1D domain, std::vector<Rational> breakpoints, std::vector<Piece> pieces,
                        std::map<Rational, Real> point_values = {});

    static PiecewiseFunction1D constant(const Interval1D& domain, const Rational& c);
    static PiecewiseFunction1D single(const Interval1D& domain, Piece p);
    // c on (lo, hi), 0 elsewhere in the domain.
    static PiecewiseFunction1D indicator(const Interval1D& domain, const Rational& lo, const Rational& hi,
                                         const Rational& c = 1);

    const Interval1D& domain() const { return domain_; }
    const std::vector<Rational>& breakpoints() const { return bp_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::map<Rational, Real>& point_values() const { return point_values_; }
    std::size_t cells() const { return pieces_.size(); }
    const Rational& cell_lo(std::size_t i) const { return i == 0 ? domain_.lo : bp_[i - 1]; }
    const Rational& cell_hi(std::size_t i) const { return i == bp_.size() ? domain_.hi : bp_[i]; }
    bool is_breakpoint(const Rational& x) const;
    // Cell whose open interval contains x; x must not be a breakpoint.
    std::size_t cell_of(const Rational& x) const;

    ExtReal left_limit(const Rational& x) const;
    ExtReal right_limit(const Rational& x) const;
    double eval(double x) const;  // inside a cell
    // Point value if supplied, else the common one-sided limit.
    // UndefinedAtAtom at a genuine jump without a point value.
    Real value_at(const Rational& x) const;

    // Same function on a finer partition.
    PiecewiseFunction1D refined(const std::vector<Rational>& extra) const;
    // Drops breakpoints across which nothing changes.
    PiecewiseFunction1D simplified() const;

    friend PiecewiseFunction1D operator*(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v);
    friend PiecewiseFunction1D operator+(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v);
    friend PiecewiseFunction1D operator-(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v);
    friend PiecewiseFunction1D operator*(const Rational& s, const PiecewiseFunction1D& u);
    friend bool operator==(const PiecewiseFunction1D& a, const PiecewiseFunction1D& b);

private:
    template <class Op>
    static PiecewiseFunction1D combine(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v, Op op);

    Interval1D domain_;
    std::vector<Rational> bp_;
    std::vector<Piece> pieces_;
    std::map<Rational, Real> point_values_;
};

// Re-reads every power/log kernel of p with the orientation of the cell (lo, hi).
Piece orient_for_cell(const Piece& p, const Rational& lo, const Rational& hi);

// Sum over atoms of f(x_i) w_i plus the integral of f times the density.
Real integrate(const PiecewiseFunction1D& f, const Measure1D& mu);

}  // namespace pcalc
