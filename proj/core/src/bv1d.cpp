#include "pcalc/bv1d.hpp"

#include "pcalc/errors.hpp"
#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcalc {

std::pair<ExtReal, ExtReal> approx_limits(const PiecewiseFunction1D& u, const Rational& x) {
    if (!u.domain().contains(x)) throw InvalidArgument("point " + to_string(x) + " outside the domain");
    ExtReal l = u.left_limit(x), r = u.right_limit(x);
    return {min(l, r), max(l, r)};
}

ExtReal lambda_representative(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Rational& x) {
    auto [lo, hi] = approx_limits(u, x);
    if (lo == hi) return lo;
    Rational t = lam.exact_at(x);
    if (lo.is_neg_inf() && hi.is_pos_inf()) {
        if (2 * t > 1) return ExtReal::pos_inf();
        if (2 * t < 1) return ExtReal::neg_inf();
        return Real(0);
    }
    ExtReal a = scale(1 - t, lo), b = scale(t, hi);
    if (!a.is_finite() && !b.is_finite()) {
        if (a == b) return a;
        throw IndeterminateForm("u^lambda at " + to_string(x) + " is inf - inf");
    }
    if (!a.is_finite()) return a;
    if (!b.is_finite()) return b;
    return a.finite() + b.finite();
}

Measure1D derivative(const PiecewiseFunction1D& u) {
    std::vector<DensityPart> dens;
    for (std::size_t i = 0; i < u.cells(); ++i) {
        const Piece& p = u.pieces()[i];
        if (p.is_constant()) continue;
        Piece d = p.derivative();
        const Rational &lo = u.cell_lo(i), &hi = u.cell_hi(i);
        if (!d.integrable_on(lo, hi))
            throw NotBV("derivative " + d.describe() + " not integrable on (" + to_string(lo) + ", " + to_string(hi) +
                        ")");
        dens.push_back({lo, hi, std::move(d)});
    }
    std::vector<Atom1D> atoms;
    for (const auto& b : u.breakpoints()) {
        ExtReal l = u.left_limit(b), r = u.right_limit(b);
        if (!l.is_finite() || !r.is_finite()) throw NotBV("infinite one-sided limit at " + to_string(b));
        atoms.push_back({b, r.finite() - l.finite()});
    }
    return Measure1D(u.domain(), std::move(atoms), std::move(dens));
}

namespace {

double abs_product_integral(const Piece& f, const Piece& g, const Rational& lo, const Rational& hi) {
    try {
        return (f * g).abs_integral(lo, hi);
    } catch (const UnsupportedForm&) {
    }
    Fn1D h = [&](double x) { return std::fabs(f.eval(x) * g.eval(x)); };
    QuadOptions opt;
    return integrate_tanh_sinh(h, to_double(lo), to_double(hi), opt).value;
}

// Integrability of |f g| near the endpoints of (lo, hi) from the growth exponents.
bool product_integrable(const Piece& f, const Piece& g, const Rational& lo, const Rational& hi, std::string& why) {
    if (f.is_zero() || g.is_zero()) return true;
    for (int side : {+1, -1}) {
        const Rational& e = side > 0 ? lo : hi;
        double ex = f.growth_exponent(e, side) + g.growth_exponent(e, side);
        if (ex <= -1.0) {
            why = "|u||A| not integrable near " + to_string(e);
            return false;
        }
    }
    return true;
}

std::vector<Rational> merged_breakpoints(const PiecewiseFunction1D& u, const PiecewiseFunction1D& v) {
    std::vector<Rational> bp = u.breakpoints();
    bp.insert(bp.end(), v.breakpoints().begin(), v.breakpoints().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

}  // namespace

ClassXCertificate in_class_X(const PiecewiseFunction1D& u, const PiecewiseFunction1D& A, const LambdaSelector& lam) {
    ClassXCertificate c;
    Measure1D dA = derivative(A);
    std::vector<Rational> bp = merged_breakpoints(u, A);
    PiecewiseFunction1D ru = u.refined(bp), rA = A.refined(bp);
    for (std::size_t i = 0; i < ru.cells(); ++i) {
        const Piece &pu = ru.pieces()[i], &pa = rA.pieces()[i];
        if (!product_integrable(pu, pa, ru.cell_lo(i), ru.cell_hi(i), c.reason)) {
            c.l1_A = std::numeric_limits<double>::infinity();
            return c;
        }
        if (!pu.is_zero() && !pa.is_zero()) c.l1_A += abs_product_integral(pu, pa, ru.cell_lo(i), ru.cell_hi(i));
    }
    for (const auto& a : dA.atoms()) {
        ExtReal v = lambda_representative(u, lam, a.x);
        if (!v.is_finite()) {
            c.l1_divA = std::numeric_limits<double>::infinity();
            c.reason = "u^lambda is infinite at the atom " + to_string(a.x) + " of DA";
            return c;
        }
        c.l1_divA += std::fabs(v.finite().value()) * std::fabs(a.w.value());
    }
    for (const auto& d : dA.density()) {
        std::vector<Rational> cuts{d.lo};
        for (const auto& b : u.breakpoints())
            if (b > d.lo && b < d.hi) cuts.push_back(b);
        cuts.push_back(d.hi);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const Piece& pu = u.pieces()[u.cell_of((cuts[j] + cuts[j + 1]) / 2)];
            if (!product_integrable(pu, d.piece, cuts[j], cuts[j + 1], c.reason)) {
                c.reason = "u not integrable against |DA| near (" + to_string(cuts[j]) + ", " + to_string(cuts[j + 1]) +
                           ")";
                c.l1_divA = std::numeric_limits<double>::infinity();
                return c;
            }
            c.l1_divA += abs_product_integral(pu, d.piece, cuts[j], cuts[j + 1]);
        }
    }
    c.member = std::isfinite(c.l1_A) && std::isfinite(c.l1_divA);
    return c;
}

Measure1D lambda_times(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Measure1D& mu) {
    std::vector<Atom1D> atoms;
    for (const auto& a : mu.atoms()) {
        ExtReal v = lambda_representative(u, lam, a.x);
        if (!v.is_finite()) throw NotInBVA("u^lambda is infinite at " + to_string(a.x));
        atoms.push_back({a.x, v.finite() * a.w});
    }
    std::vector<DensityPart> dens;
    for (const auto& d : mu.density()) {
        std::vector<Rational> cuts{d.lo};
        for (const auto& b : u.breakpoints())
            if (b > d.lo && b < d.hi) cuts.push_back(b);
        cuts.push_back(d.hi);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            Piece pu = orient_for_cell(u.pieces()[u.cell_of((cuts[j] + cuts[j + 1]) / 2)], cuts[j], cuts[j + 1]);
            dens.push_back({cuts[j], cuts[j + 1], pu * d.piece});
        }
    }
    return Measure1D(mu.domain(), std::move(atoms), std::move(dens));
}

Real integrate_lambda(const PiecewiseFunction1D& u, const LambdaSelector& lam, const Measure1D& mu) {
    Real acc;
    for (const auto& a : mu.atoms()) {
        ExtReal v = lambda_representative(u, lam, a.x);
        if (!v.is_finite()) throw NotIntegrable("u^lambda is infinite at " + to_string(a.x));
        acc += v.finite() * a.w;
    }
    Measure1D dens(mu.domain(), {}, mu.density());
    return acc + integrate(u, dens);
}

PairingResult1D pairing_1d(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u, const LambdaSelector& lam) {
    Measure1D dA = derivative(A);
    ClassXCertificate cert = in_class_X(u, A, lam);
    if (!cert.member) throw NotInBVA("u is not in X^{A,lambda}: " + cert.reason);
    PiecewiseFunction1D uA = u * A;
    Measure1D d_uA;
    try {
        d_uA = derivative(uA);
    } catch (const NotBV& e) {
        throw NotInBVA(std::string("uA is not BV: ") + e.what());
    }
    Measure1D ulam = lambda_times(u, lam, dA);
    Measure1D pairing = d_uA - ulam;
    return {std::move(pairing), std::move(d_uA), std::move(ulam)};
}

double seminorm_bva(const PiecewiseFunction1D& u, const PiecewiseFunction1D& A, const LambdaSelector& lam) {
    ClassXCertificate cert = in_class_X(u, A, lam);
    if (!cert.member) throw NotInBVA("u is not in X^{A,lambda}: " + cert.reason);
    PiecewiseFunction1D uA = u * A;
    Measure1D d_uA;
    try {
        d_uA = derivative(uA);
    } catch (const NotBV& e) {
        throw NotInBVA(std::string("uA is not BV: ") + e.what());
    }
    return cert.l1_A + cert.l1_divA + d_uA.total_variation();
}

// Exact rational root when the piece is affine, double root otherwise.
std::vector<Rational> piece_crossings(const Piece& p, const Rational& c, const Rational& lo, const Rational& hi) {
    std::vector<Rational> out;
    if (p.is_polynomial() && p.poly().degree() == 1) {
        Rational r = (c - p.poly().coeff(0)) / p.poly().coeff(1);
        if (r > lo && r < hi) out.push_back(r);
        return out;
    }
    for (double x : p.level_crossings(c, to_double(lo), to_double(hi))) {
        Rational q = to_rational(x);
        if (q > lo && q < hi) out.push_back(q);
    }
    return out;
}

PiecewiseFunction1D truncate(const PiecewiseFunction1D& u, const Rational& k) {
    if (k <= 0) throw InvalidArgument("truncation level must be positive");
    std::vector<Rational> bp;
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < u.cells(); ++i) {
        const Piece& p = u.pieces()[i];
        const Rational &lo = u.cell_lo(i), &hi = u.cell_hi(i);
        std::vector<Rational> cuts{lo};
        for (const Rational& c : {k, Rational(-k)})
            for (auto& q : piece_crossings(p, c, lo, hi)) cuts.push_back(q);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            Rational mid = (cuts[j] + cuts[j + 1]) / 2;
            double v = p.eval(to_double(mid));
            Piece q = v > to_double(k) ? Piece::constant(k) : v < -to_double(k) ? Piece::constant(-k) : p;
            if (j > 0 || i > 0) bp.push_back(cuts[j]);
            pieces.push_back(std::move(q));
        }
    }
    std::map<Rational, Real> pv;
    for (const auto& [x, v] : u.point_values()) {
        double d = v.value();
        pv[x] = d > to_double(k) ? Real(k) : d < -to_double(k) ? Real(-k) : v;
    }
    return PiecewiseFunction1D(u.domain(), std::move(bp), std::move(pieces), std::move(pv));
}

}  // namespace pcalc
