#include "pcalc/coarea.hpp"

#include "pcalc/errors.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pcalc {

namespace {

int compare(const ExtReal& a, const Rational& t) {
    if (a.is_pos_inf()) return 1;
    if (a.is_neg_inf()) return -1;
    return (a.finite() - Real(t)).sign();
}

const Piece& side_piece(const PiecewiseFunction1D& u, const Rational& x, int side) {
    if (!u.is_breakpoint(x)) return u.pieces()[u.cell_of(x)];
    auto it = std::lower_bound(u.breakpoints().begin(), u.breakpoints().end(), x);
    std::size_t cell = static_cast<std::size_t>(it - u.breakpoints().begin());
    return u.pieces()[side > 0 ? cell + 1 : cell];
}

// Whether {u > t} fills a one-sided neighbourhood of x.
bool side_in_superlevel(const PiecewiseFunction1D& u, const Rational& x, int side, const Rational& t) {
    ExtReal lim = side > 0 ? u.right_limit(x) : u.left_limit(x);
    int c = compare(lim, t);
    if (c != 0) return c > 0;
    const Piece& p = side_piece(u, x, side);
    if (p.is_constant()) return false;
    try {
        ExtReal d = p.derivative().limit(x, side);
        int s = d.is_finite() ? d.finite().sign() : (d.is_pos_inf() ? 1 : -1);
        if (s != 0) return side > 0 ? s > 0 : s < 0;
    } catch (const UnsupportedForm&) {
    }
    // Higher-order contact: sample just inside the cell.
    std::size_t cell = u.is_breakpoint(x) ? static_cast<std::size_t>(std::lower_bound(u.breakpoints().begin(),
                                                                                          u.breakpoints().end(), x) -
                                                                         u.breakpoints().begin()) +
                                                (side > 0 ? 1 : 0)
                                          : u.cell_of(x);
    const Rational& far = side > 0 ? u.cell_hi(cell) : u.cell_lo(cell);
    Rational y = x + (far - x) / Rational(1000000);
    return (p.eval(y) - Real(t)).sign() > 0;
}

Measure1D slice_pairing(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u, const LambdaSelector& lam,
                        const Rational& t) {
    return pairing_1d(A, superlevel_indicator(u, t), lam).pairing;
}

void require_bounded(const PiecewiseFunction1D& u) {
    for (std::size_t i = 0; i < u.cells(); ++i) {
        const Piece& p = u.pieces()[i];
        if (p.singular_at(u.cell_lo(i), +1) || p.singular_at(u.cell_hi(i), -1))
            throw InvalidArgument("coarea check needs a bounded scalar");
    }
}

std::vector<Rational> bands_for(const PiecewiseFunction1D& u, const CoareaOptions& opt) {
    std::vector<Rational> b = critical_levels(u);
    for (const auto& t : opt.extra_levels)
        if (!b.empty() && t > b.front() && t < b.back()) b.push_back(t);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

}  // namespace

PiecewiseFunction1D superlevel_indicator(const PiecewiseFunction1D& u, const Rational& t) {
    struct Run {
        Rational lo, hi;
        bool in;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < u.cells(); ++i) {
        const Piece& p = u.pieces()[i];
        const Rational &lo = u.cell_lo(i), &hi = u.cell_hi(i);
        std::vector<Rational> cuts{lo};
        for (auto& q : piece_crossings(p, t, lo, hi)) cuts.push_back(q);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            Rational mid = (cuts[j] + cuts[j + 1]) / 2;
            bool in = (p.eval(mid) - Real(t)).sign() > 0;
            if (!runs.empty() && runs.back().in == in)
                runs.back().hi = cuts[j + 1];
            else
                runs.push_back({cuts[j], cuts[j + 1], in});
        }
    }
    std::vector<Rational> bp;
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i > 0) bp.push_back(runs[i].lo);
        pieces.push_back(Piece::constant(runs[i].in ? 1 : 0));
    }
    return PiecewiseFunction1D(u.domain(), bp, pieces);
}

std::vector<Rational> exceptional_set(const PiecewiseFunction1D& u, const Rational& t) {
    std::vector<Rational> out;
    for (const Rational& x : u.breakpoints()) {
        auto [lo, hi] = approx_limits(u, x);
        if (!(compare(lo, t) <= 0 && compare(hi, t) > 0)) continue;
        bool l = side_in_superlevel(u, x, -1, t), r = side_in_superlevel(u, x, +1, t);
        if (l == r) out.push_back(x);  // density 0 or 1, not 1/2
    }
    return out;
}

LevelSetSlice level_set_slice(const PiecewiseFunction1D& u, const Rational& t) {
    LevelSetSlice s;
    s.t = t;
    PiecewiseFunction1D chi = superlevel_indicator(u, t);
    std::vector<Interval1D> iv;
    for (std::size_t i = 0; i < chi.cells(); ++i)
        if (!chi.pieces()[i].is_zero()) iv.push_back({chi.cell_lo(i), chi.cell_hi(i)});
    s.superlevel = BorelSet1D(iv, {});
    s.exceptional = exceptional_set(u, t);
    return s;
}

double level_set_representative(const PiecewiseFunction1D& u, const Rational& t, const LambdaSelector& lam,
                                const Rational& x) {
    if (!u.domain().contains(x)) throw InvalidArgument("point outside the domain");
    auto ex = exceptional_set(u, t);
    if (std::find(ex.begin(), ex.end(), x) != ex.end())
        throw ExceptionalPoint("x = " + to_string(x) + " lies in N_t for t = " + to_string(t));
    auto [lo, hi] = approx_limits(u, x);
    double l = lam.at(x);
    return (1.0 - l) * (compare(lo, t) > 0 ? 1.0 : 0.0) + l * (compare(hi, t) > 0 ? 1.0 : 0.0);
}

std::vector<Rational> critical_levels(const PiecewiseFunction1D& u) {
    std::set<Rational> s;
    auto add = [&](const ExtReal& v) {
        if (v.is_finite()) s.insert(v.finite().is_exact() ? v.finite().exact_part() : to_rational(v.value()));
    };
    for (std::size_t i = 0; i < u.cells(); ++i) {
        const Piece& p = u.pieces()[i];
        const Rational &lo = u.cell_lo(i), &hi = u.cell_hi(i);
        add(p.limit(lo, +1));
        add(p.limit(hi, -1));
        if (p.is_constant()) continue;
        try {
            for (double x : p.derivative().sign_changes(to_double(lo), to_double(hi))) add(p.eval(to_rational(x)));
        } catch (const UnsupportedForm&) {
        }
    }
    for (const auto& [x, v] : u.point_values()) add(v);
    return {s.begin(), s.end()};
}

std::vector<HypothesisViolation> coarea_hypotheses(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u) {
    Measure1D da = derivative(A);
    std::vector<HypothesisViolation> out;
    for (const Rational& x : u.breakpoints()) {
        auto [lo, hi] = approx_limits(u, x);
        if (!lo.is_finite() || compare(hi, lo.is_finite() ? lo.finite().exact_part() : Rational(0)) <= 0) continue;
        // Only t = u^-(x) can put x in N_t; strictly between the limits both sides are decided.
        Rational t = lo.finite().is_exact() ? lo.finite().exact_part() : to_rational(lo.value());
        auto ex = exceptional_set(u, t);
        if (std::find(ex.begin(), ex.end(), x) == ex.end()) continue;
        double mass = 0;
        for (const auto& a : da.atoms())
            if (a.x == x) mass += std::fabs(a.w.value());
        if (mass > 0) out.push_back({t, x, mass});
    }
    return out;
}

CoareaReport coarea_check(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u, const LambdaSelector& lam,
                          const PiecewiseFunction1D& phi, const CoareaOptions& opt) {
    require_bounded(u);
    if (opt.check_hypotheses) {
        auto bad = coarea_hypotheses(A, u);
        if (!bad.empty())
            throw HypothesisFailed("|A|(N_t) + |div A|(N_t) = " + std::to_string(bad.front().mass) + " at t = " +
                                   to_string(bad.front().t) + " (x = " + to_string(bad.front().x) + ")");
    }
    CoareaReport r;
    r.lhs = integrate(phi, pairing_1d(A, u, lam).pairing).value();
    r.bands = bands_for(u, opt);
    QuadOptions q;
    q.rel_tol = opt.t_tol;
    q.abs_tol = 1e-15;
    for (std::size_t i = 0; i + 1 < r.bands.size(); ++i) {
        auto f = [&](double t) { return integrate(phi, slice_pairing(A, u, lam, to_rational(t))).value(); };
        r.rhs += integrate_1d(f, to_double(r.bands[i]), to_double(r.bands[i + 1]), q).value;
    }
    r.residual = std::fabs(r.lhs - r.rhs);
    return r;
}

std::vector<CoareaWindow> coarea_inequality(const PiecewiseFunction1D& A, const PiecewiseFunction1D& u,
                                            const LambdaSelector& lam, const std::vector<Interval1D>& windows,
                                            const CoareaOptions& opt) {
    require_bounded(u);
    Measure1D mu = pairing_1d(A, u, lam).pairing;
    auto bands = bands_for(u, opt);
    QuadOptions q;
    q.rel_tol = opt.t_tol;
    q.abs_tol = 1e-15;
    std::vector<CoareaWindow> out;
    for (const auto& w : windows) {
        CoareaWindow cw{w.lo, w.hi};
        BorelSet1D set = BorelSet1D::interval(w.lo, w.hi);
        cw.lhs = mu.restrict(set).total_variation();
        for (std::size_t i = 0; i + 1 < bands.size(); ++i) {
            auto f = [&](double t) { return slice_pairing(A, u, lam, to_rational(t)).restrict(set).total_variation(); };
            cw.rhs += integrate_1d(f, to_double(bands[i]), to_double(bands[i + 1]), q).value;
        }
        double slack = 1e-9 * std::max(1.0, cw.rhs);
        cw.holds = cw.lhs <= cw.rhs + slack;
        cw.strict = cw.lhs < cw.rhs - slack;
        out.push_back(cw);
    }
    return out;
}

CoareaReportND coarea_check_nd(const FieldND& field, const StepFunctionND& u0, const LambdaSelector& lam,
                               const TestFunction& phi, bool check_hypotheses) {
    StepFunctionND u = prepare(field, u0, lam);
    const Grid& g = u.grid();
    std::set<double> vals;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        if (u.cell_in_domain(g.unflat(i))) vals.insert(u.values()[i]);
    CoareaReportND r;
    r.levels.assign(vals.begin(), vals.end());
    if (check_hypotheses) {
        // Atoms of div A where the superlevel density differs from 1/2 on a band of levels.
        for (const auto& a : field.div.atoms()) {
            if (!field.domain.contains(a.x) || a.w.is_zero()) continue;
            auto ov = u.orthant_values(a.x);
            for (std::size_t i = 0; i + 1 < r.levels.size(); ++i) {
                double t = r.levels[i];
                double lo = *std::min_element(ov.begin(), ov.end()), hi = *std::max_element(ov.begin(), ov.end());
                if (!(lo <= t && t < hi)) continue;
                std::size_t above = std::count_if(ov.begin(), ov.end(), [&](double v) { return v > t; });
                if (2 * above != ov.size())
                    throw HypothesisFailed("|div A|(N_t) = " + std::to_string(std::fabs(a.w.value())) +
                                           " for t in [" + std::to_string(t) + ", " +
                                           std::to_string(r.levels[i + 1]) + ")");
            }
        }
    }
    r.lhs = pairing_apply(field, u, lam, phi);
    for (std::size_t i = 0; i + 1 < r.levels.size(); ++i) {
        std::vector<double> chi(u.values().size());
        for (std::size_t c = 0; c < chi.size(); ++c) chi[c] = u.values()[c] > r.levels[i] ? 1.0 : 0.0;
        StepFunctionND s(g, u.domain(), chi);
        r.rhs += (r.levels[i + 1] - r.levels[i]) * pairing_apply(field, s, lam, phi);
    }
    // Below the smallest value the slice is the whole domain, whose pairing vanishes.
    r.residual = std::fabs(r.lhs - r.rhs);
    return r;
}

}  // namespace pcalc
