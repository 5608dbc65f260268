#pragma once

#include "pcalc/poly.hpp"
#include "pcalc/real.hpp"

#include <string>
#include <vector>

namespace pcalc {

// Closed-form building blocks beyond polynomials. Each term is
// mult(x) * g(x) with an exact polynomial multiplier and
//   Power : g = (sigma (x - a))^alpha      (sigma chosen so the base is > 0)
//   Log   : g = log(sigma (x - a))         (= log|x - a|)
//   Arctan: g = atan(k (x - a))
//   Cauchy: g = k / (1 + k^2 (x - a)^2)
enum class TermKind { Power = 0, Log = 1, Arctan = 2, Cauchy = 3 };

struct Term {
    TermKind kind = TermKind::Power;
    Poly mult;
    Rational a{0};
    int sigma = 1;
    double alpha = 0.0;
    double k = 1.0;

    double kernel(double x) const;
    // Same kind and parameters, multipliers may differ.
    bool same_shape(const Term& o) const;
    bool shape_less(const Term& o) const;
};

// Analytic function on an open sub-interval: polynomial plus closed-form terms.
// Kept in a canonical form (terms sorted and merged, zero terms dropped) so
// that equality is structural.
class Piece {
public:
    Piece() = default;
    explicit Piece(Poly p) : poly_(std::move(p)) {}
    Piece(Poly p, std::vector<Term> terms);

    static Piece constant(const Rational& c) { return Piece(Poly::constant(c)); }
    static Piece power(const Rational& c, const Rational& a, double alpha, int sigma);
    static Piece recip(const Rational& c, const Rational& a, int sigma);  // c / (x - a)
    static Piece log_abs(const Rational& c, const Rational& a, int sigma);
    static Piece arctan(const Rational& c, double k, const Rational& a = 0);
    static Piece cauchy(const Rational& c, double k, const Rational& a = 0);

    const Poly& poly() const { return poly_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return poly_.is_zero() && terms_.empty(); }
    bool is_polynomial() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() && poly_.is_constant(); }

    double eval(double x) const;
    Real eval(const Rational& x) const;  // exact polynomial part, floating terms
    // One-sided limit at an endpoint e of the sub-interval the piece lives on;
    // side = +1 means x -> e from above.
    ExtReal limit(const Rational& e, int side) const;
    // True when the piece is unbounded as x -> e from the given side.
    bool singular_at(const Rational& e, int side) const;
    // Leading exponent of |piece| as x -> e (0 for a finite nonzero limit, a
    // positive vanishing order, negative for blow-up; log counts as 0).
    double growth_exponent(const Rational& e, int side) const;

    Piece derivative() const;  // UnsupportedForm for Cauchy terms
    // Exact (rational) for polynomials, closed form for the whitelisted
    // kernels, adaptive quadrature otherwise. NonIntegrablePiece on divergence.
    Real integrate(const Rational& lo, const Rational& hi) const;
    bool integrable_on(const Rational& lo, const Rational& hi) const;
    // Sign-change points inside (lo, hi).
    std::vector<double> sign_changes(double lo, double hi) const;
    // Integral of |piece| on (lo, hi).
    double abs_integral(const Rational& lo, const Rational& hi) const;
    // Points in (lo, hi) where the piece crosses the level c.
    std::vector<double> level_crossings(const Rational& c, double lo, double hi) const;

    Piece operator-() const;
    Piece& operator+=(const Piece& o);
    Piece& operator-=(const Piece& o);
    friend Piece operator+(Piece a, const Piece& b) { return a += b; }
    friend Piece operator-(Piece a, const Piece& b) { return a -= b; }
    friend Piece operator*(const Piece& a, const Piece& b);  // UnsupportedForm if not closed
    friend Piece operator*(const Piece& a, const Rational& s);
    friend bool operator==(const Piece& a, const Piece& b);
    friend bool operator!=(const Piece& a, const Piece& b) { return !(a == b); }

    std::string describe() const;

private:
    void normalize();
    Poly poly_;
    std::vector<Term> terms_;
};

int orientation(const Rational& a, const Rational& lo, const Rational& hi);

}  // namespace pcalc
