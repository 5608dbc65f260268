#include "pcalc/piece.hpp"

#include "pcalc/errors.hpp"
#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace pcalc {

namespace {

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Taylor coefficients of p at a: p(x) = sum e_j (x - a)^j.
std::vector<Rational> taylor_at(const Poly& p, const Rational& a) {
    Poly shifted = p.compose_affine(a, 1);
    std::vector<Rational> e = shifted.coeffs();
    return e;
}

Rational sigma_pow(int sigma, int j) { return (sigma < 0 && (j % 2 != 0)) ? Rational(-1) : Rational(1); }

// (sigma (x - a))^n as a polynomial in x for n >= 0.
Poly oriented_power_poly(const Rational& a, int sigma, int n) {
    Poly base({-a * sigma, Rational(sigma)});
    Poly acc = Poly::constant(1);
    for (int i = 0; i < n; ++i) acc = acc * base;
    return acc;
}

}  // namespace

double Term::kernel(double x) const {
    const double d = x - to_double(a);
    switch (kind) {
        case TermKind::Power: return std::pow(sigma * d, alpha);
        case TermKind::Log: return std::log(sigma * d);
        case TermKind::Arctan: return std::atan(k * d);
        case TermKind::Cauchy: return k / (1.0 + (k * d) * (k * d));
    }
    return 0.0;
}

bool Term::same_shape(const Term& o) const {
    return kind == o.kind && a == o.a && sigma == o.sigma && alpha == o.alpha && k == o.k;
}

bool Term::shape_less(const Term& o) const {
    if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
    if (a != o.a) return a < o.a;
    if (sigma != o.sigma) return sigma < o.sigma;
    if (alpha != o.alpha) return alpha < o.alpha;
    return k < o.k;
}

int orientation(const Rational& a, const Rational& lo, const Rational& hi) {
    if (a <= lo) return 1;
    if (a >= hi) return -1;
    throw InvalidArgument("singular point " + to_string(a) + " lies inside (" + to_string(lo) + ", " +
                          to_string(hi) + ")");
}

Piece::Piece(Poly p, std::vector<Term> terms) : poly_(std::move(p)), terms_(std::move(terms)) { normalize(); }

Piece Piece::power(const Rational& c, const Rational& a, double alpha, int sigma) {
    Term t{TermKind::Power, Poly::constant(c), a, sigma >= 0 ? 1 : -1, alpha, 1.0};
    return Piece(Poly(), {t});
}

Piece Piece::recip(const Rational& c, const Rational& a, int sigma) {
    // c / (x - a) = c * sigma * (sigma (x - a))^-1
    return power(c * sigma, a, -1.0, sigma);
}

Piece Piece::log_abs(const Rational& c, const Rational& a, int sigma) {
    Term t{TermKind::Log, Poly::constant(c), a, sigma >= 0 ? 1 : -1, 0.0, 1.0};
    return Piece(Poly(), {t});
}

Piece Piece::arctan(const Rational& c, double k, const Rational& a) {
    Term t{TermKind::Arctan, Poly::constant(c), a, 1, 0.0, k};
    return Piece(Poly(), {t});
}

Piece Piece::cauchy(const Rational& c, double k, const Rational& a) {
    Term t{TermKind::Cauchy, Poly::constant(c), a, 1, 0.0, k};
    return Piece(Poly(), {t});
}

void Piece::normalize() {
    std::vector<Term> expanded;
    for (auto& t : terms_) {
        if (t.mult.is_zero()) continue;
        if (t.kind == TermKind::Power) {
            // Powers carry constant multipliers: expand mult around a.
            auto e = taylor_at(t.mult, t.a);
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (e[j] == 0) continue;
                Rational c = e[j] * sigma_pow(t.sigma, static_cast<int>(j));
                double ex = t.alpha + static_cast<double>(j);
                if (ex == 0.0) {
                    poly_ += Poly::constant(c);
                } else if (ex > 0 && is_integer(ex) && ex < 64) {
                    poly_ += oriented_power_poly(t.a, t.sigma, static_cast<int>(ex)) * c;
                } else {
                    expanded.push_back(Term{TermKind::Power, Poly::constant(c), t.a, t.sigma, ex, 1.0});
                }
            }
        } else {
            if (t.kind != TermKind::Power) t.alpha = 0.0;
            if (t.kind == TermKind::Arctan || t.kind == TermKind::Cauchy) t.sigma = 1;
            if (t.kind == TermKind::Log) t.k = 1.0;
            if ((t.kind == TermKind::Arctan || t.kind == TermKind::Cauchy) && t.k == 0.0) {
                if (t.kind == TermKind::Cauchy) continue;  // k / (1 + 0) = 0
                continue;                                   // atan(0) = 0
            }
            expanded.push_back(std::move(t));
        }
    }
    std::sort(expanded.begin(), expanded.end(), [](const Term& x, const Term& y) { return x.shape_less(y); });
    terms_.clear();
    for (auto& t : expanded) {
        if (!terms_.empty() && terms_.back().same_shape(t)) {
            terms_.back().mult += t.mult;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.mult.is_zero(); }),
                 terms_.end());
}

double Piece::eval(double x) const {
    double v = poly_.eval(x);
    for (const auto& t : terms_) v += t.mult.eval(x) * t.kernel(x);
    return v;
}

Real Piece::eval(const Rational& x) const {
    Real v(poly_.eval(x));
    for (const auto& t : terms_) {
        Rational m = t.mult.eval(x);
        if (m == 0) continue;
        double d = to_double(x - t.a);
        double g = 0;
        switch (t.kind) {
            case TermKind::Power: g = std::pow(t.sigma * d, t.alpha); break;
            case TermKind::Log: g = std::log(t.sigma * d); break;
            case TermKind::Arctan: g = std::atan(t.k * d); break;
            case TermKind::Cauchy: g = t.k / (1.0 + (t.k * d) * (t.k * d)); break;
        }
        v += Real(m) * Real::floating(g);
    }
    return v;
}

namespace {

struct Blowup {
    double exponent;  // < 0 for powers, 0 marks a logarithm
    double coeff;     // sign carrier
};

}  // namespace

static std::vector<Blowup> blowups(const Piece& p, const Rational& e, int side, Real& finite_part) {
    finite_part = Real(p.poly().eval(e));
    std::vector<Blowup> out;
    for (const auto& t : p.terms()) {
        bool at_e = t.a == e && (t.kind == TermKind::Power || t.kind == TermKind::Log);
        if (!at_e) {
            Rational m = t.mult.eval(e);
            if (m == 0) continue;
            double d = to_double(e - t.a);
            double g = t.kind == TermKind::Power ? std::pow(t.sigma * d, t.alpha)
                       : t.kind == TermKind::Log ? std::log(t.sigma * d)
                       : t.kind == TermKind::Arctan ? std::atan(t.k * d)
                                                     : t.k / (1.0 + (t.k * d) * (t.k * d));
            finite_part += Real(m) * Real::floating(g);
            continue;
        }
        int m = t.mult.root_multiplicity(e);
        Poly q = t.mult;
        for (int i = 0; i < m; ++i) q = q.divide_linear(e).first;
        Rational lc = q.eval(e) * sigma_pow(side, m);
        if (t.kind == TermKind::Power) {
            double beta = t.alpha + m;
            if (beta < 0) {
                out.push_back({beta, to_double(lc)});
            } else if (beta == 0) {
                finite_part += Real(lc);
            }
        } else if (m == 0) {
            out.push_back({0.0, -to_double(lc)});  // log -> -inf
        }
    }
    return out;
}

ExtReal Piece::limit(const Rational& e, int side) const {
    Real fin;
    auto b = blowups(*this, e, side, fin);
    if (b.empty()) return fin;
    auto dom = std::min_element(b.begin(), b.end(), [](const Blowup& x, const Blowup& y) { return x.exponent < y.exponent; });
    return ExtReal::infinity(dom->coeff > 0 ? 1 : -1);
}

bool Piece::singular_at(const Rational& e, int side) const { return !limit(e, side).is_finite(); }

double Piece::growth_exponent(const Rational& e, int side) const {
    Real fin;
    auto b = blowups(*this, e, side, fin);
    if (!b.empty()) {
        double m = 0;
        for (const auto& x : b) m = std::min(m, x.exponent);
        return m;
    }
    if (!fin.is_zero()) return 0.0;
    if (is_polynomial()) return static_cast<double>(poly_.root_multiplicity(e));
    return 1.0;
}

Piece Piece::derivative() const {
    Poly p = poly_.derivative();
    std::vector<Term> out;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case TermKind::Power: {
                if (!t.mult.is_constant()) {
                    Term d1 = t;
                    d1.mult = t.mult.derivative();
                    out.push_back(d1);
                }
                Term d2 = t;
                d2.mult = t.mult * to_rational(t.alpha * t.sigma);
                d2.alpha = t.alpha - 1.0;
                out.push_back(d2);
                break;
            }
            case TermKind::Log: {
                Term d1 = t;
                d1.mult = t.mult.derivative();
                out.push_back(d1);
                Term d2{TermKind::Power, t.mult * Rational(t.sigma), t.a, t.sigma, -1.0, 1.0};
                out.push_back(d2);
                break;
            }
            case TermKind::Arctan: {
                Term d1 = t;
                d1.mult = t.mult.derivative();
                out.push_back(d1);
                Term d2{TermKind::Cauchy, t.mult, t.a, 1, 0.0, t.k};
                out.push_back(d2);
                break;
            }
            case TermKind::Cauchy:
                throw UnsupportedForm("derivative of the Cauchy kernel is outside the closed-form whitelist");
        }
    }
    return Piece(std::move(p), std::move(out));
}

namespace {

double oriented(const Term& t, const Rational& x) { return to_double((x - t.a) * t.sigma); }

// Exact-form integral of one term over [lo, hi]; the result is a list of
// floating summands (upper minus lower) so that cancellations stay exact.
Real integrate_term(const Term& t, const Rational& lo, const Rational& hi) {
    auto endpoint_zero = [&](const Rational& x) { return x == t.a; };
    switch (t.kind) {
        case TermKind::Power: {
            const double c = to_double(t.mult.coeff(0));
            const double ex = t.alpha + 1.0;
            auto F = [&](const Rational& x) -> Real {
                if (endpoint_zero(x)) {
                    if (ex > 0) return Real(0);
                    throw NonIntegrablePiece("power term with exponent " + std::to_string(t.alpha) +
                                             " at " + to_string(t.a));
                }
                double s = oriented(t, x);
                double v = ex == 0.0 ? t.sigma * std::log(s) : t.sigma * std::pow(s, ex) / ex;
                return Real(t.mult.coeff(0)) * Real::floating(v);
            };
            (void)c;
            return F(hi) - F(lo);
        }
        case TermKind::Log: {
            auto e = taylor_at(t.mult, t.a);
            auto F = [&](const Rational& x) -> Real {
                if (endpoint_zero(x)) return Real(0);
                double s = oriented(t, x);
                double ls = std::log(s);
                Real acc;
                for (std::size_t j = 0; j < e.size(); ++j) {
                    if (e[j] == 0) continue;
                    double jj = static_cast<double>(j) + 1.0;
                    double g = std::pow(s, jj) * (ls / jj - 1.0 / (jj * jj));
                    // dx = sigma ds and (x-a)^j = sigma^j s^j
                    acc += Real(e[j] * sigma_pow(t.sigma, static_cast<int>(j)) * t.sigma) * Real::floating(g);
                }
                return acc;
            };
            return F(hi) - F(lo);
        }
        case TermKind::Arctan:
        case TermKind::Cauchy: {
            if (t.mult.is_constant()) {
                auto F = [&](const Rational& x) -> Real {
                    double d = to_double(x - t.a);
                    double v = t.kind == TermKind::Cauchy
                                   ? std::atan(t.k * d)
                                   : d * std::atan(t.k * d) - std::log1p((t.k * d) * (t.k * d)) / (2.0 * t.k);
                    return Real(t.mult.coeff(0)) * Real::floating(v);
                };
                return F(hi) - F(lo);
            }
            Fn1D f = [&](double x) { return t.mult.eval(x) * t.kernel(x); };
            QuadResult r = integrate_1d(f, to_double(lo), to_double(hi));
            return Real::floating(r.value);
        }
    }
    return Real(0);
}

}  // namespace

bool Piece::integrable_on(const Rational& lo, const Rational& hi) const {
    return growth_exponent(lo, +1) > -1.0 && growth_exponent(hi, -1) > -1.0;
}

Real Piece::integrate(const Rational& lo, const Rational& hi) const {
    if (lo == hi) return Real(0);
    if (!integrable_on(lo, hi))
        throw NonIntegrablePiece(describe() + " is not integrable on (" + to_string(lo) + ", " + to_string(hi) + ")");
    Real acc(poly_.integrate(lo, hi));
    for (const auto& t : terms_) acc += integrate_term(t, lo, hi);
    return acc;
}

std::vector<double> Piece::sign_changes(double lo, double hi) const {
    if (is_polynomial()) return poly_.sign_changes(lo, hi);
    std::vector<double> out;
    const int M = 512;
    auto at = [&](int i) {
        // Points clustered towards both ends, where the kernels vary fastest.
        double u = static_cast<double>(i) / M;
        double w = 0.5 - 0.5 * std::cos(u * 3.14159265358979323846);
        return lo + (hi - lo) * w;
    };
    double xp = at(1), fp = eval(xp);
    for (int i = 2; i < M; ++i) {
        double x = at(i), fx = eval(x);
        if (fx == 0.0) {
            out.push_back(x);
        } else if (fp != 0.0 && (fx < 0) != (fp < 0)) {
            out.push_back(bisect_root([this](double s) { return eval(s); }, xp, x));
        }
        xp = x;
        fp = fx;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double Piece::abs_integral(const Rational& lo, const Rational& hi) const {
    if (lo >= hi) return 0.0;
    std::vector<Rational> cuts{lo};
    for (double r : sign_changes(to_double(lo), to_double(hi))) {
        Rational q = to_rational(r);
        if (q > cuts.back() && q < hi) cuts.push_back(q);
    }
    cuts.push_back(hi);
    double s = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += std::fabs(integrate(cuts[i], cuts[i + 1]).value());
    return s;
}

std::vector<double> Piece::level_crossings(const Rational& c, double lo, double hi) const {
    // Closed forms for a constant plus a single constant-multiplier kernel.
    if (terms_.size() == 1 && poly_.is_constant() && terms_[0].mult.is_constant()) {
        const Term& t = terms_[0];
        double m = to_double(t.mult.coeff(0));
        double r = to_double(c - poly_.coeff(0)) / m;
        double a = to_double(t.a);
        double x = std::numeric_limits<double>::quiet_NaN();
        if (t.kind == TermKind::Power && r > 0) x = a + t.sigma * std::pow(r, 1.0 / t.alpha);
        if (t.kind == TermKind::Log) x = a + t.sigma * std::exp(r);
        if (t.kind == TermKind::Arctan && std::fabs(r) < 2.0 * std::atan(1.0)) x = a + std::tan(r) / t.k;
        if (t.kind != TermKind::Cauchy) {
            if (x > lo && x < hi) return {x};
            return {};
        }
    }
    Piece shifted = *this - Piece::constant(c);
    return shifted.sign_changes(lo, hi);
}

Piece Piece::operator-() const { return *this * Rational(-1); }

Piece& Piece::operator+=(const Piece& o) {
    poly_ += o.poly_;
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
}

Piece& Piece::operator-=(const Piece& o) { return *this += -o; }

Piece operator*(const Piece& a, const Rational& s) {
    Piece r = a;
    r.poly_ *= s;
    for (auto& t : r.terms_) t.mult *= s;
    r.normalize();
    return r;
}

Piece operator*(const Piece& a, const Piece& b) {
    Poly p = a.poly_ * b.poly_;
    std::vector<Term> terms;
    for (const auto& t : b.terms_) {
        if (a.poly_.is_zero()) break;
        Term u = t;
        u.mult = t.mult * a.poly_;
        terms.push_back(u);
    }
    for (const auto& t : a.terms_) {
        if (b.poly_.is_zero()) break;
        Term u = t;
        u.mult = t.mult * b.poly_;
        terms.push_back(u);
    }
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            if (s.kind == TermKind::Power && t.kind == TermKind::Power && s.a == t.a && s.sigma == t.sigma) {
                terms.push_back(Term{TermKind::Power, s.mult * t.mult, s.a, s.sigma, s.alpha + t.alpha, 1.0});
            } else {
                throw UnsupportedForm("product " + a.describe() + " * " + b.describe() +
                                      " leaves the closed-form whitelist");
            }
        }
    }
    return Piece(std::move(p), std::move(terms));
}

bool operator==(const Piece& a, const Piece& b) {
    if (a.poly_ != b.poly_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!a.terms_[i].same_shape(b.terms_[i]) || a.terms_[i].mult != b.terms_[i].mult) return false;
    return true;
}

namespace {

std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Rational c = p.coeff(i);
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

}  // namespace

std::string Piece::describe() const {
    std::ostringstream os;
    os << poly_str(poly_);
    for (const auto& t : terms_) {
        os << " + [" << poly_str(t.mult) << "]*";
        double a = to_double(t.a);
        switch (t.kind) {
            case TermKind::Power: os << "|x-" << a << "|^" << t.alpha; break;
            case TermKind::Log: os << "log|x-" << a << "|"; break;
            case TermKind::Arctan: os << "atan(" << t.k << "(x-" << a << "))"; break;
            case TermKind::Cauchy: os << "cauchy(" << t.k << ", x-" << a << ")"; break;
        }
    }
    return os.str();
}

}  // namespace pcalc
