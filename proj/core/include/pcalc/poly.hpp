#pragma once

#include "pcalc/real.hpp"

#include <utility>
#include <vector>

namespace pcalc {

// Dense polynomial in x with exact rational coefficients, c[i] * x^i.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    static Poly monomial(const Rational& c, int degree);
    static Poly identity();  // x

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    Rational coeff(int i) const;
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& x) const;
    double eval(double x) const;

    Poly derivative() const;
    Poly antiderivative() const;  // vanishing at 0
    Rational integrate(const Rational& a, const Rational& b) const;
    Poly compose_affine(const Rational& shift, const Rational& scale) const;  // p(shift + scale*x)
    // p = q * (x - a) + r
    std::pair<Poly, Rational> divide_linear(const Rational& a) const;
    int root_multiplicity(const Rational& a) const;
    // Points in the open interval (lo, hi) where p changes sign, ascending.
    std::vector<double> sign_changes(double lo, double hi) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& s);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b);

private:
    void trim();
    std::vector<Rational> c_;
};

// Bisection on a bracketing interval [a, b] with sign(f(a)) != sign(f(b)),
// run until the bracket stops shrinking in double precision.
template <class F>
double bisect_root(F&& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace pcalc
