#include "pcalc/poly.hpp"

#include <algorithm>

namespace pcalc {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::monomial(const Rational& c, int degree) {
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
    v.back() = c;
    return Poly(std::move(v));
}

Poly Poly::identity() { return monomial(1, 1); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(i)];
}

Rational Poly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Poly::eval(double x) const {
    long double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->convert_to<long double>();
    return static_cast<double>(acc);
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<int>(i);
    return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
    if (c_.empty()) return {};
    std::vector<Rational> a(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<int>(i + 1);
    return Poly(std::move(a));
}

Rational Poly::integrate(const Rational& a, const Rational& b) const {
    Poly P = antiderivative();
    return P.eval(b) - P.eval(a);
}

Poly Poly::compose_affine(const Rational& shift, const Rational& scale) const {
    // Horner with polynomial arithmetic on (shift + scale*x).
    Poly lin({shift, scale});
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly::constant(*it);
    return acc;
}

std::pair<Poly, Rational> Poly::divide_linear(const Rational& a) const {
    if (c_.empty()) return {Poly(), Rational(0)};
    // Synthetic division.
    std::vector<Rational> q(c_.size() - 1, Rational(0));
    Rational carry(0);
    for (std::size_t i = c_.size(); i-- > 0;) {
        carry = carry * a + c_[i];
        if (i > 0) q[i - 1] = carry;
    }
    return {Poly(std::move(q)), carry};
}

int Poly::root_multiplicity(const Rational& a) const {
    if (c_.empty()) return 1 << 20;
    int m = 0;
    Poly p = *this;
    while (!p.is_zero()) {
        auto [q, r] = p.divide_linear(a);
        if (r != 0) break;
        ++m;
        p = q;
    }
    return m;
}

std::vector<double> Poly::sign_changes(double lo, double hi) const {
    std::vector<double> out;
    if (degree() < 1 || !(lo < hi)) return out;
    // Monotone sub-intervals come from the sign changes of p'.
    std::vector<double> cuts{lo};
    for (double r : derivative().sign_changes(lo, hi)) cuts.push_back(r);
    cuts.push_back(hi);
    auto exact_sign = [this](double x) {
        Rational v = eval(to_rational(x));
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    auto f = [&](double x) { return static_cast<double>(exact_sign(x)); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        int sa = exact_sign(a), sb = exact_sign(b);
        if (sa == 0 && a > lo) {
            if (out.empty() || out.back() != a) out.push_back(a);
            continue;
        }
        if (sa * sb < 0) out.push_back(bisect_root(f, a, b));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove_if(out.begin(), out.end(), [&](double r) { return r <= lo || r >= hi; }), out.end());
    return out;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& c : p.c_) c = -c;
    return p;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

bool operator<(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    for (std::size_t i = a.c_.size(); i-- > 0;)
        if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
}

}  // namespace pcalc
