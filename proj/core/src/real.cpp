#include "pcalc/real.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace pcalc {

namespace mp = boost::multiprecision;

Rational to_rational(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("cannot convert non-finite double to rational");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
    // 53 bits of mantissa fit exactly in an int64.
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    mp::cpp_int num(mant);
    mp::cpp_int den(1);
    if (exp >= 0) {
        num <<= exp;
    } else {
        den <<= -exp;
    }
    return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

Real Real::from_double(double v) { return Real(to_rational(v)); }

Real Real::floating(double v) {
    if (!std::isfinite(v)) throw InvalidArgument("Real::floating needs a finite value");
    Real r;
    if (v != 0.0) r.f_.push_back(v);
    return r;
}

double Real::value() const {
    double s = to_double(q_);
    for (double v : f_) s += v;
    return s;
}

void Real::normalize() {
    f_.erase(std::remove(f_.begin(), f_.end(), 0.0), f_.end());
    std::sort(f_.begin(), f_.end(), [](double a, double b) {
        double fa = std::fabs(a), fb = std::fabs(b);
        return fa != fb ? fa < fb : a < b;
    });
    // Opposite pairs sit next to each other after the sort: (-v, v).
    std::vector<double> out;
    out.reserve(f_.size());
    for (double v : f_) {
        if (!out.empty() && out.back() == -v) {
            out.pop_back();
        } else {
            out.push_back(v);
        }
    }
    f_ = std::move(out);
}

Real Real::operator-() const {
    Real r;
    r.q_ = -q_;
    r.f_.reserve(f_.size());
    for (double v : f_) r.f_.push_back(-v);
    r.normalize();
    return r;
}

Real& Real::operator+=(const Real& o) {
    q_ += o.q_;
    if (!o.f_.empty()) {
        f_.insert(f_.end(), o.f_.begin(), o.f_.end());
        normalize();
    }
    return *this;
}

Real& Real::operator-=(const Real& o) { return *this += -o; }

Real operator*(const Real& a, const Real& b) {
    Real r;
    r.q_ = a.q_ * b.q_;
    if (!b.f_.empty() && a.q_ != 0) {
        double qa = to_double(a.q_);
        for (double v : b.f_) r.f_.push_back(qa * v);
    }
    if (!a.f_.empty() && b.q_ != 0) {
        double qb = to_double(b.q_);
        for (double v : a.f_) r.f_.push_back(v * qb);
    }
    for (double x : a.f_)
        for (double y : b.f_) r.f_.push_back(x * y);
    r.normalize();
    return r;
}

bool operator==(const Real& a, const Real& b) { return a.q_ == b.q_ && a.f_ == b.f_; }

int Real::sign() const {
    if (f_.empty()) return q_ > 0 ? 1 : (q_ < 0 ? -1 : 0);
    double v = value();
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

std::ostream& operator<<(std::ostream& os, const Real& r) {
    if (r.is_exact()) return os << r.exact_part();
    return os << r.value();
}

const Real& ExtReal::finite() const {
    if (k_ != Kind::Finite) throw InvalidArgument("extended real is infinite");
    return v_;
}

double ExtReal::value() const {
    switch (k_) {
        case Kind::PosInf: return std::numeric_limits<double>::infinity();
        case Kind::NegInf: return -std::numeric_limits<double>::infinity();
        default: return v_.value();
    }
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.k_ != b.k_) return false;
    return a.k_ != ExtReal::Kind::Finite || a.v_ == b.v_;
}

bool less(const ExtReal& a, const ExtReal& b) {
    if (a.is_neg_inf()) return !b.is_neg_inf();
    if (b.is_pos_inf()) return !a.is_pos_inf();
    if (a.is_pos_inf() || b.is_neg_inf()) return false;
    return (b.finite() - a.finite()).sign() > 0;
}

ExtReal min(const ExtReal& a, const ExtReal& b) { return less(b, a) ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return less(a, b) ? b : a; }

ExtReal scale(const Rational& c, const ExtReal& x) {
    if (c == 0) return Real(0);
    if (!x.is_finite()) return c > 0 ? x : ExtReal::infinity(x.is_pos_inf() ? -1 : 1);
    return Real(c) * x.finite();
}

std::ostream& operator<<(std::ostream& os, const ExtReal& r) {
    if (r.is_pos_inf()) return os << "+inf";
    if (r.is_neg_inf()) return os << "-inf";
    return os << r.finite();
}

}  // namespace pcalc
