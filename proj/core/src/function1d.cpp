#include "pcalc/function1d.hpp"

#include "pcalc/errors.hpp"
#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace pcalc {

Piece orient_for_cell(const Piece& p, const Rational& lo, const Rational& hi) {
    bool changed = false;
    std::vector<Term> terms = p.terms();
    for (auto& t : terms) {
        if (t.kind != TermKind::Power && t.kind != TermKind::Log) continue;
        int s = orientation(t.a, lo, hi);
        if (s != t.sigma) {
            if (t.kind == TermKind::Power && !t.mult.is_constant())
                throw InvalidArgument("cannot reorient a power term with a polynomial multiplier");
            t.sigma = s;
            changed = true;
        }
    }
    if (!changed) return p;
    return Piece(p.poly(), std::move(terms));
}

PiecewiseFunction1D::PiecewiseFunction1D(Interval1D domain, std::vector<Rational> breakpoints,
                                         std::vector<Piece> pieces, std::map<Rational, Real> point_values)
    : domain_(std::move(domain)), bp_(std::move(breakpoints)), pieces_(std::move(pieces)),
      point_values_(std::move(point_values)) {
    if (pieces_.size() != bp_.size() + 1) throw InvalidArgument("need exactly one piece per cell");
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        if (!domain_.contains(bp_[i])) throw InvalidArgument("breakpoint outside the domain");
        if (i > 0 && !(bp_[i - 1] < bp_[i])) throw InvalidArgument("breakpoints must increase strictly");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) pieces_[i] = orient_for_cell(pieces_[i], cell_lo(i), cell_hi(i));
    for (const auto& [x, v] : point_values_) {
        (void)v;
        if (!is_breakpoint(x)) throw InvalidArgument("point values are only allowed at breakpoints");
    }
}

PiecewiseFunction1D PiecewiseFunction1D::constant(const Interval1D& domain, const Rational& c) {
    return PiecewiseFunction1D(domain, {}, {Piece::constant(c)});
}

PiecewiseFunction1D PiecewiseFunction1D::single(const Interval1D& domain, Piece p) {
    return PiecewiseFunction1D(domain, {}, {std::move(p)});
}

PiecewiseFunction1D PiecewiseFunction1D::indicator(const Interval1D& domain, const Rational& lo, const Rational& hi,
                                                   const Rational& c) {
    std::vector<Rational> bp;
    std::vector<Piece> pieces;
    if (domain.contains(lo)) {
        bp.push_back(lo);
        pieces.push_back(Piece());
    }
    if (domain.contains(hi)) {
        bp.push_back(hi);
        pieces.push_back(Piece::constant(c));
        pieces.push_back(Piece());
    } else {
        pieces.push_back(Piece::constant(c));
    }
    return PiecewiseFunction1D(domain, std::move(bp), std::move(pieces));
}

bool PiecewiseFunction1D::is_breakpoint(const Rational& x) const {
    return std::binary_search(bp_.begin(), bp_.end(), x);
}

std::size_t PiecewiseFunction1D::cell_of(const Rational& x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    return static_cast<std::size_t>(it - bp_.begin());
}

ExtReal PiecewiseFunction1D::left_limit(const Rational& x) const {
    if (!(x > domain_.lo && x <= domain_.hi)) throw InvalidArgument("left limit outside the domain");
    auto it = std::lower_bound(bp_.begin(), bp_.end(), x);  // first bp >= x
    std::size_t cell = static_cast<std::size_t>(it - bp_.begin());
    return pieces_[cell].limit(x, -1);
}

ExtReal PiecewiseFunction1D::right_limit(const Rational& x) const {
    if (!(x >= domain_.lo && x < domain_.hi)) throw InvalidArgument("right limit outside the domain");
    return pieces_[cell_of(x)].limit(x, +1);
}

double PiecewiseFunction1D::eval(double x) const {
    Rational q = to_rational(x);
    return pieces_[cell_of(q)].eval(x);
}

Real PiecewiseFunction1D::value_at(const Rational& x) const {
    auto pv = point_values_.find(x);
    if (pv != point_values_.end()) return pv->second;
    ExtReal l = left_limit(x), r = right_limit(x);
    if (l.is_finite() && r.is_finite() && l.finite() == r.finite()) return l.finite();
    if (l.is_finite() && r.is_finite() && std::fabs(l.finite().value() - r.finite().value()) == 0.0) return l.finite();
    throw UndefinedAtAtom("no value at " + to_string(x) + ": one-sided limits differ and no point value given");
}

PiecewiseFunction1D PiecewiseFunction1D::refined(const std::vector<Rational>& extra) const {
    std::vector<Rational> bp = bp_;
    for (const auto& x : extra)
        if (domain_.contains(x)) bp.push_back(x);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i <= bp.size(); ++i) {
        const Rational& lo = i == 0 ? domain_.lo : bp[i - 1];
        // The cell of the midpoint decides which original piece applies.
        const Rational& hi = i == bp.size() ? domain_.hi : bp[i];
        Rational mid = (lo + hi) / 2;
        pieces.push_back(pieces_[cell_of(mid)]);
    }
    return PiecewiseFunction1D(domain_, std::move(bp), std::move(pieces), point_values_);
}

PiecewiseFunction1D PiecewiseFunction1D::simplified() const {
    std::vector<Rational> bp;
    std::vector<Piece> pieces{pieces_[0]};
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        if (pieces_[i + 1] == pieces.back() && !point_values_.count(bp_[i])) continue;
        bp.push_back(bp_[i]);
        pieces.push_back(pieces_[i + 1]);
    }
    return PiecewiseFunction1D(domain_, std::move(bp), std::move(pieces), point_values_);
}

template <class Op>
PiecewiseFunction1D PiecewiseFunction1D::combine(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v, Op op) {
    if (!(u.domain_ == v.domain_)) throw InvalidArgument("functions live on different domains");
    PiecewiseFunction1D ru = u.refined(v.bp_), rv = v.refined(u.bp_);
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < ru.pieces_.size(); ++i) pieces.push_back(op(ru.pieces_[i], rv.pieces_[i]));
    return PiecewiseFunction1D(u.domain_, ru.bp_, std::move(pieces));
}

PiecewiseFunction1D operator*(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v) {
    return PiecewiseFunction1D::combine(u, v, [](const Piece& a, const Piece& b) { return a * b; });
}

PiecewiseFunction1D operator+(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v) {
    return PiecewiseFunction1D::combine(u, v, [](const Piece& a, const Piece& b) { return a + b; });
}

PiecewiseFunction1D operator-(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v) {
    return PiecewiseFunction1D::combine(u, v, [](const Piece& a, const Piece& b) { return a - b; });
}

PiecewiseFunction1D operator*(const Rational& s, const PiecewiseFunction1D& u) {
    PiecewiseFunction1D r = u;
    for (auto& p : r.pieces_) p = p * s;
    for (auto& [x, v] : r.point_values_) v = Real(s) * v;
    return r;
}

bool operator==(const PiecewiseFunction1D& a, const PiecewiseFunction1D& b) {
    return a.domain_ == b.domain_ && a.bp_ == b.bp_ && a.pieces_ == b.pieces_ && a.point_values_ == b.point_values_;
}

namespace {

Real integrate_product(const Piece& f, const Piece& rho, const Rational& lo, const Rational& hi) {
    try {
        Piece prod = f * rho;
        return prod.integrate(lo, hi);
    } catch (const UnsupportedForm&) {
        // Product leaves the closed-form family: numerical fallback.
    }
    Fn1D g = [&](double x) { return f.eval(x) * rho.eval(x); };
    double a = to_double(lo), b = to_double(hi);
    QuadOptions opt;
    bool singular = f.singular_at(lo, +1) || f.singular_at(hi, -1) || rho.singular_at(lo, +1) || rho.singular_at(hi, -1);
    QuadResult r = singular ? integrate_tanh_sinh(g, a, b, opt) : integrate_1d(g, a, b, opt);
    return Real::floating(r.value);
}

}  // namespace

Real integrate(const PiecewiseFunction1D& f, const Measure1D& mu) {
    if (!(f.domain() == mu.domain())) throw InvalidArgument("function and measure live on different domains");
    Real acc;
    for (const auto& a : mu.atoms()) acc += f.value_at(a.x) * a.w;
    for (const auto& d : mu.density()) {
        std::vector<Rational> cuts{d.lo};
        for (const auto& b : f.breakpoints())
            if (b > d.lo && b < d.hi) cuts.push_back(b);
        cuts.push_back(d.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational mid = (cuts[i] + cuts[i + 1]) / 2;
            const Piece& fp = f.pieces()[f.cell_of(mid)];
            acc += integrate_product(fp, d.piece, cuts[i], cuts[i + 1]);
        }
    }
    return acc;
}

}  // namespace pcalc
