#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pcalc {

using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);
double to_double(const Rational& q);
std::string to_string(const Rational& q);

// A real number held as an exact rational part plus a finite formal sum of
// floating-point summands. Summands are never folded together, so x - y + y
// gives back x bit-for-bit and equal transcendental terms cancel exactly.
class Real {
public:
    Real() = default;
    Real(const Rational& q) : q_(q) {}  // NOLINT(google-explicit-constructor)
    Real(int v) : q_(v) {}              // NOLINT(google-explicit-constructor)
    static Real from_double(double v);  // exact, goes into the rational part
    static Real floating(double v);     // kept as an inexact summand

    const Rational& exact_part() const { return q_; }
    const std::vector<double>& float_part() const { return f_; }
    bool is_exact() const { return f_.empty(); }
    bool is_zero() const { return q_ == 0 && f_.empty(); }
    double value() const;

    Real operator-() const;
    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(const Real& a, const Real& b);
    friend bool operator==(const Real& a, const Real& b);
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

    // Sign of value(), decided exactly when the float part is empty.
    int sign() const;

private:
    void normalize();
    Rational q_{0};
    std::vector<double> f_;
};

std::ostream& operator<<(std::ostream& os, const Real& r);

// Extended real with the convention 0 * (+-inf) = 0.
class ExtReal {
public:
    enum class Kind { Finite, PosInf, NegInf };

    ExtReal() = default;
    ExtReal(const Real& r) : v_(r) {}  // NOLINT(google-explicit-constructor)
    static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
    static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }
    static ExtReal infinity(int sign) { return sign > 0 ? pos_inf() : neg_inf(); }

    Kind kind() const { return k_; }
    bool is_finite() const { return k_ == Kind::Finite; }
    bool is_pos_inf() const { return k_ == Kind::PosInf; }
    bool is_neg_inf() const { return k_ == Kind::NegInf; }
    const Real& finite() const;  // throws unless finite
    double value() const;        // +-inf as IEEE infinities

    friend bool operator==(const ExtReal& a, const ExtReal& b);
    friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
    // Ordering by value; exact when both are exact or infinite.
    friend bool less(const ExtReal& a, const ExtReal& b);

private:
    explicit ExtReal(Kind k) : k_(k) {}
    Kind k_ = Kind::Finite;
    Real v_;
};

ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);
// c * x for a nonnegative exact coefficient, honouring 0 * inf = 0.
ExtReal scale(const Rational& c, const ExtReal& x);
std::ostream& operator<<(std::ostream& os, const ExtReal& r);

}  // namespace pcalc
