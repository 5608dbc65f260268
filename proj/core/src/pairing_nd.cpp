#include "pcalc/pairing_nd.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace pcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sub-boxes of box cut along its free axes by the grid coordinates.
std::vector<Box> split_by_grid(const Box& box, const Grid& g) {
    const int n = box.dim();
    std::vector<std::vector<double>> pts(n);
    for (int k = 0; k < n; ++k) {
        if (box.lo[k] == box.hi[k]) {
            pts[k] = {box.lo[k], box.hi[k]};
            continue;
        }
        pts[k].push_back(box.lo[k]);
        for (double c : g.coords(k))
            if (c > box.lo[k] && c < box.hi[k]) pts[k].push_back(c);
        pts[k].push_back(box.hi[k]);
    }
    std::vector<Box> out;
    std::vector<std::size_t> sel(n, 0);
    while (true) {
        Box b = box;
        for (int k = 0; k < n; ++k) {
            b.lo[k] = pts[k][sel[k]];
            b.hi[k] = pts[k][sel[k] + 1];
        }
        out.push_back(std::move(b));
        int k = n - 1;
        while (k >= 0 && ++sel[k] + 1 == pts[k].size()) {
            sel[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

// Values of u on the two sides of the hyperplane x_axis = x[axis] at x.
std::pair<double, double> face_neighbors(const StepFunctionND& u, int axis, const std::vector<double>& x) {
    const Grid& g = u.grid();
    std::vector<std::size_t> a(u.dim());
    std::size_t coord = 0;
    bool on_plane = false;
    for (int k = 0; k < u.dim(); ++k) {
        long i = g.locate(k, x[k], &coord);
        if (k == axis && i < 0) {
            on_plane = true;
            a[k] = coord;
        } else if (i < 0) {
            throw InvalidArgument("face centre lies on a grid hyperplane");
        } else {
            a[k] = static_cast<std::size_t>(i);
        }
    }
    if (!on_plane) {
        double v = u.cell_value(a);
        return {v, v};
    }
    std::vector<std::size_t> b = a;
    b[axis] += 1;
    return {u.cell_value(a), u.cell_value(b)};
}

Box clip(const Box& b, const Box& w) {
    Box r = b;
    for (int k = 0; k < b.dim(); ++k) {
        if (b.lo[k] == b.hi[k]) {
            if (!(w.lo[k] < b.lo[k] && b.lo[k] < w.hi[k])) {
                return Box(std::vector<double>(b.dim(), 0.0), std::vector<double>(b.dim(), 0.0));
            }
            continue;
        }
        r.lo[k] = std::max(b.lo[k], w.lo[k]);
        r.hi[k] = std::min(b.hi[k], w.hi[k]);
        if (r.hi[k] <= r.lo[k]) return Box(std::vector<double>(b.dim(), 0.0), std::vector<double>(b.dim(), 0.0));
    }
    return r;
}

bool degenerate_empty(const Box& b, int free_axes) {
    int n = 0;
    for (int k = 0; k < b.dim(); ++k)
        if (b.lo[k] < b.hi[k]) ++n;
    return n < free_axes;
}

int free_axis_count(const Box& b) {
    int n = 0;
    for (int k = 0; k < b.dim(); ++k)
        if (b.lo[k] != b.hi[k]) ++n;
    return n;
}

// Density of the divergence faces on the plane x_axis = c around x.
PartDensity plane_density(const MeasureND& div, int axis, double c, const std::vector<double>& x) {
    PartDensity d;
    for (const auto& p : div.parts()) {
        if (p.box.lo[axis] != c || p.box.hi[axis] != c) continue;
        if (free_axis_count(p.box) != div.dim() - 1) continue;
        bool in = true;
        for (int k = 0; k < div.dim() && in; ++k)
            if (k != axis) in = p.box.lo[k] <= x[k] && x[k] <= p.box.hi[k];
        if (in) d += p.density;
    }
    return d;
}

double lambda_on_face(const LambdaSelector& lam, const std::vector<double>& x) { return lam.region_value(x); }

void check_segments(const FieldND& field) {
    for (const auto& s : field.segments)
        if (s.lo > field.domain.lo[s.axis] || s.hi < field.domain.hi[s.axis])
            throw NoClosedForm("segment parts must cross the whole domain");
}

// Piecewise constant u^lam along a segment: (points t_0 < ... < t_m, values on the m intervals).
std::pair<std::vector<double>, std::vector<Rational>> segment_profile(const SegmentField& s, const StepFunctionND& u,
                                                                      const LambdaSelector& lam) {
    std::vector<double> t{s.lo};
    for (double c : u.grid().coords(s.axis))
        if (c > s.lo && c < s.hi) t.push_back(c);
    t.push_back(s.hi);
    std::vector<Rational> v;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        std::vector<double> x = s.base;
        x[s.axis] = 0.5 * (t[i] + t[i + 1]);
        v.push_back(s.weight * u.lambda_value(x, lam.region_value(x)));
    }
    return {t, v};
}

double grad_dot_field(const FieldND& field, const TestFunction& phi, const std::vector<double>& x) {
    auto a = field.density(x);
    double s = 0;
    for (int k = 0; k < field.dim; ++k)
        if (a[k] != 0.0) s += phi.partial(k, x) * a[k];
    return s;
}

std::vector<std::vector<double>> lambda_coordinates(const LambdaSelector& lam, int n) {
    std::vector<std::vector<double>> c(n);
    for (const auto& r : lam.regions()) {
        if (static_cast<int>(r.lo.size()) != n) continue;
        for (int k = 0; k < n; ++k) {
            c[k].push_back(r.lo[k]);
            c[k].push_back(r.hi[k]);
        }
    }
    return c;
}

}  // namespace

StepFunctionND prepare(const FieldND& field, const StepFunctionND& u, const LambdaSelector& lam) {
    if (u.dim() != field.dim) throw InvalidArgument("scalar and field dimensions differ");
    if (!(u.domain() == field.domain)) throw InvalidArgument("scalar must live on the field's domain");
    const int n = field.dim;
    auto extra = merge_coordinates(field.cuts, lambda_coordinates(lam, n));
    extra.resize(n);
    for (const auto& s : field.singular_points)
        for (int k = 0; k < n; ++k) extra[k].push_back(s[k]);
    for (const auto& p : field.div.parts())
        for (int k = 0; k < n; ++k) {
            extra[k].push_back(p.box.lo[k]);
            extra[k].push_back(p.box.hi[k]);
        }
    for (const auto& a : field.div.atoms())
        for (int k = 0; k < n; ++k) extra[k].push_back(a.x[k]);
    for (auto& c : extra)
        c.erase(std::remove_if(c.begin(), c.end(), [](double v) { return !std::isfinite(v); }), c.end());
    return u.refined(extra);
}

StepFunctionND set_function(const FieldND& field, const BoxSet& e, const LambdaSelector& lam,
                            const std::vector<std::vector<double>>& extra) {
    if (e.dim() != field.dim) throw InvalidArgument("set and field dimensions differ");
    return prepare(field, StepFunctionND::indicator(e, field.domain, extra), lam);
}

MeasureND pairing_measure(const FieldND& field, const StepFunctionND& u0, const LambdaSelector& lam) {
    check_segments(field);
    StepFunctionND u = prepare(field, u0, lam);
    const Grid& g = u.grid();
    const int n = field.dim;
    MeasureND m(n);
    MeasureND div = field.div.normalized();
    auto traces = field.trace_fns;
    if (static_cast<int>(traces.size()) != n) {
        FieldND copy = field;
        copy.bind_traces();
        traces = copy.trace_fns;
    }

    for (std::size_t f = 0; f < g.cell_count(); ++f) {
        auto ia = g.unflat(f);
        if (!u.cell_in_domain(ia)) continue;
        for (int j = 0; j < n; ++j) {
            if (ia[j] + 1 >= g.intervals(j)) continue;
            auto ib = ia;
            ib[j] += 1;
            if (!u.cell_in_domain(ib)) continue;
            const double ua = u.cell_value(ia), ub = u.cell_value(ib);
            if (ua == ub) continue;
            const double c = g.coords(j)[ia[j]];
            Box face = g.cell_box(ia);
            face.lo[j] = face.hi[j] = c;
            std::vector<double> centre = face.center();
            PartDensity rho = plane_density(div, j, c, centre);
            bool vanishes = field.normal_vanishes && field.normal_vanishes(j, c);
            for (const auto& s : field.singular_points) {
                if (!face.contains_closure(s)) continue;
                if (!vanishes)
                    throw NoClosedForm(field.name + " is singular on a jump face of the scalar; use pairing_apply");
            }
            if (vanishes && rho.is_zero()) continue;
            const double lamv = lambda_on_face(lam, centre);
            const Rational ul = u.lambda_value(centre, lamv);
            if (field.piecewise_constant && rho.is_constant()) {
                Rational tp = to_rational(field.trace(j, centre, +1)), tm = to_rational(field.trace(j, centre, -1));
                Rational d = to_rational(ub) * tp - to_rational(ua) * tm - ul * rho.constant_part();
                if (d != 0) m.add_face(j, c, face, PartDensity::constant(d));
                continue;
            }
            PartDensity d = PartDensity::shared(traces[j][1], ub);
            d += PartDensity::shared(traces[j][0], -ua);
            d += rho.scaled(-ul);
            if (!d.is_zero()) m.add_face(j, c, face, std::move(d));
        }
    }

    for (const auto& a : div.atoms()) {
        if (!field.domain.contains(a.x)) continue;
        Rational theta = u.density(a.x);
        Rational ul = u.lambda_value(a.x, lam(a.x));
        if (theta == ul) continue;
        if (!field.isotropic_atoms)
            throw NoClosedForm(field.name + ": atom of div A on a jump of the scalar without isotropic flux");
        m.add_atom(a.x, Real(theta - ul) * a.w);
    }

    for (const auto& s : field.segments) {
        auto [t, v] = segment_profile(s, u, lam);
        for (std::size_t i = 1; i < v.size(); ++i) {
            Rational jump = v[i] - v[i - 1];
            if (jump == 0) continue;
            std::vector<double> x = s.base;
            x[s.axis] = t[i];
            m.add_atom(x, Real(jump));
        }
    }
    return m.normalized();
}

MeasureND pairing_measure_box(const FieldND& field, const BoxSet& e, const LambdaSelector& lam) {
    return pairing_measure(field, set_function(field, e, lam), lam);
}

double pairing_apply(const FieldND& field, const StepFunctionND& u0, const LambdaSelector& lam,
                     const TestFunction& phi, const QuadOptions& opt) {
    if (phi.dim() != field.dim) throw InvalidArgument("test function dimension mismatch");
    StepFunctionND u = prepare(field, u0, lam);
    const Grid& g = u.grid();
    const Box supp = phi.support();
    const auto cuts = phi.breakpoints();
    MeasureND div = field.div.normalized();

    double against_div = 0;
    for (const auto& a : div.atoms()) {
        if (!field.domain.contains(a.x)) continue;
        double p = phi.value(a.x);
        if (p == 0.0) continue;
        against_div += to_double(u.lambda_value(a.x, lam(a.x))) * p * a.w.value();
    }
    for (const auto& part : div.parts()) {
        int fa = free_axis_count(part.box);
        Box pb = clip(part.box, supp);
        if (degenerate_empty(pb, fa)) continue;
        pb = clip(pb, field.domain);
        if (degenerate_empty(pb, fa)) continue;
        for (const Box& sb : split_by_grid(pb, g)) {
            std::vector<double> c = sb.center();
            double uv;
            if (fa == field.dim) {
                uv = u.value_at(c);
            } else if (fa == field.dim - 1) {
                int axis = 0;
                while (sb.lo[axis] != sb.hi[axis]) ++axis;
                auto [lo, hi] = face_neighbors(u, axis, c);
                double lamv = lambda_on_face(lam, c);
                uv = lo == hi ? lo : (1 - lamv) * std::min(lo, hi) + lamv * std::max(lo, hi);
            } else {
                uv = to_double(u.lambda_value(c, lam.region_value(c)));
            }
            if (uv == 0.0) continue;
            const PartDensity& d = part.density;
            against_div += uv * integrate_part({sb, d}, [&](const std::vector<double>& x) { return phi.value(x) * d.eval(x); },
                                               opt, cuts);
        }
    }

    double against_a = 0;
    if (field.density) {
        for (std::size_t f = 0; f < g.cell_count(); ++f) {
            auto idx = g.unflat(f);
            if (!u.cell_in_domain(idx)) continue;
            double uv = u.cell_value(idx);
            if (uv == 0.0) continue;
            Box b = g.cell_box(idx).intersect(supp).intersect(field.domain);
            if (b.empty()) continue;
            against_a += uv * integrate_field_box(field, [&](const std::vector<double>& x) { return grad_dot_field(field, phi, x); },
                                                  b, cuts, opt);
        }
    }
    check_segments(field);
    for (const auto& s : field.segments) {
        auto [t, v] = segment_profile(s, u, lam);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            double lo = std::max(t[i], supp.lo[s.axis]), hi = std::min(t[i + 1], supp.hi[s.axis]);
            if (!(lo < hi)) continue;
            Box b(s.base, s.base);
            b.lo[s.axis] = lo;
            b.hi[s.axis] = hi;
            int ax = s.axis;
            against_a += to_double(v[i]) *
                         integrate_part({b, PartDensity::constant(1)}, [&](const std::vector<double>& x) { return phi.partial(ax, x); },
                                        opt, cuts);
        }
    }
    return -against_div - against_a;
}

double pairing_apply(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const TestFunction& phi,
                     const QuadOptions& opt) {
    return pairing_apply(field, set_function(field, e, lam), lam, phi, opt);
}

double pairing_apply(const FieldND& field, const SmoothScalar& u, const TestFunction& phi, const QuadOptions& opt) {
    const Box supp = phi.support();
    const auto cuts = phi.breakpoints();
    double against_div = 0;
    MeasureND div = field.div.normalized();
    for (const auto& a : div.atoms())
        if (field.domain.contains(a.x)) against_div += u.value(a.x) * phi.value(a.x) * a.w.value();
    for (const auto& part : div.parts()) {
        int fa = free_axis_count(part.box);
        Box pb = clip(clip(part.box, supp), field.domain);
        if (degenerate_empty(pb, fa)) continue;
        const PartDensity& d = part.density;
        against_div += integrate_part({pb, d}, [&](const std::vector<double>& x) { return u.value(x) * phi.value(x) * d.eval(x); },
                                      opt, cuts);
    }
    double against_a = 0;
    if (field.density) {
        Box b = supp.intersect(field.domain);
        if (!b.empty())
            against_a += integrate_field_box(
                field, [&](const std::vector<double>& x) { return u.value(x) * grad_dot_field(field, phi, x); }, b, cuts, opt);
    }
    for (const auto& s : field.segments) {
        Box b(s.base, s.base);
        b.lo[s.axis] = std::max(s.lo, supp.lo[s.axis]);
        b.hi[s.axis] = std::min(s.hi, supp.hi[s.axis]);
        if (!(b.lo[s.axis] < b.hi[s.axis])) continue;
        double w = to_double(s.weight);
        int ax = s.axis;
        against_a += integrate_part({b, PartDensity::constant(1)},
                                    [&](const std::vector<double>& x) { return w * u.value(x) * phi.partial(ax, x); }, opt, cuts);
    }
    return -against_div - against_a;
}

double sobolev_pairing(const FieldND& field, const SmoothScalar& u, const TestFunction& phi, const QuadOptions& opt) {
    const Box supp = phi.support();
    const auto cuts = phi.breakpoints();
    double s = 0;
    if (field.density) {
        Box b = supp.intersect(field.domain);
        if (!b.empty())
            s += integrate_field_box(
                field,
                [&](const std::vector<double>& x) {
                    auto a = field.density(x);
                    auto gu = u.gradient(x);
                    double d = 0;
                    for (int k = 0; k < field.dim; ++k) d += a[k] * gu[k];
                    return phi.value(x) * d;
                },
                b, cuts, opt);
    }
    for (const auto& seg : field.segments) {
        Box b(seg.base, seg.base);
        b.lo[seg.axis] = std::max(seg.lo, supp.lo[seg.axis]);
        b.hi[seg.axis] = std::min(seg.hi, supp.hi[seg.axis]);
        if (!(b.lo[seg.axis] < b.hi[seg.axis])) continue;
        double w = to_double(seg.weight);
        int ax = seg.axis;
        s += integrate_part({b, PartDensity::constant(1)},
                            [&](const std::vector<double>& x) { return w * phi.value(x) * u.gradient(x)[ax]; }, opt, cuts);
    }
    return s;
}

namespace {

// Dictionary of test functions for fields without closed-form traces.
std::vector<TestFunction> probe_dictionary(const FieldND& field, const StepFunctionND& u, const Box& window) {
    std::vector<TestFunction> out;
    const int n = field.dim;
    Box w = window.intersect(field.domain);
    for (const auto& s : field.singular_points) {
        if (!w.contains(s)) continue;
        double room = kInf;
        for (int k = 0; k < n; ++k) room = std::min({room, s[k] - w.lo[k], w.hi[k] - s[k]});
        for (int axis = 0; axis < n; ++axis)
            for (int k = 2; k <= 64; k *= 2) {
                std::vector<Profile1D> p;
                for (int i = 0; i < n; ++i) {
                    double r = 0.9 * room;
                    if (i == axis)
                        p.push_back(Profile1D::odd_ramp(s[i], r / (2.0 * k), s[i] - r / 2, s[i] + r / 2, r / 3));
                    else
                        p.push_back(Profile1D::bump(s[i], r));
                }
                out.emplace_back(std::move(p));
            }
    }
    (void)u;
    std::vector<double> c = w.center();
    double r = kInf;
    for (int k = 0; k < n; ++k) r = std::min(r, 0.5 * (w.hi[k] - w.lo[k]));
    if (std::isfinite(r)) out.push_back(TestFunction::bump(c, r));
    return out;
}

}  // namespace

PerimeterResult perimeter(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const Box& window) {
    StepFunctionND u = set_function(field, e, lam);
    try {
        MeasureND m = pairing_measure(field, u, lam);
        return {m.total_variation(window), false};
    } catch (const NoClosedForm&) {
    }
    PerimeterResult r{0.0, true};
    for (const auto& phi : probe_dictionary(field, u, window)) {
        double v = std::fabs(pairing_apply(field, u, lam, phi)) / phi.sup_norm();
        r.value = std::max(r.value, v);
    }
    return r;
}

double divergence_interior(const FieldND& field, const StepFunctionND& u0, const QuadOptions& opt) {
    StepFunctionND u = prepare(field, u0, LambdaSelector::constant(0.0));
    if (!u.is_indicator()) throw InvalidArgument("divergence_interior needs an indicator");
    MeasureND div = field.div.normalized();
    double s = 0;
    for (const auto& a : div.atoms())
        if (field.domain.contains(a.x) && u.density(a.x) == 1) s += a.w.value();
    for (const auto& part : div.parts()) {
        int fa = free_axis_count(part.box);
        Box pb = clip(part.box, field.domain);
        if (degenerate_empty(pb, fa)) continue;
        for (const Box& sb : split_by_grid(pb, u.grid())) {
            std::vector<double> c = sb.center();
            bool inside;
            if (fa == field.dim) {
                inside = u.value_at(c) == 1.0;
            } else if (fa == field.dim - 1) {
                int axis = 0;
                while (sb.lo[axis] != sb.hi[axis]) ++axis;
                auto [lo, hi] = face_neighbors(u, axis, c);
                inside = lo == 1.0 && hi == 1.0;
            } else {
                inside = u.density(c) == 1;
            }
            if (!inside) continue;
            if (part.density.is_constant()) {
                double meas = 1;
                for (int k = 0; k < field.dim; ++k)
                    if (sb.lo[k] != sb.hi[k]) meas *= sb.hi[k] - sb.lo[k];
                s += to_double(part.density.constant_part()) * meas;
                continue;
            }
            const PartDensity& d = part.density;
            s += integrate_part({sb, d}, [&](const std::vector<double>& x) { return d.eval(x); }, opt);
        }
    }
    return s;
}

MeasureND divergence_on_reduced_boundary(const FieldND& field, const StepFunctionND& u0, const LambdaSelector& weight) {
    StepFunctionND u = prepare(field, u0, weight);
    if (!u.is_indicator()) throw InvalidArgument("reduced boundary needs an indicator");
    MeasureND div = field.div.normalized();
    MeasureND m(field.dim);
    for (const auto& a : div.atoms()) {
        if (!field.domain.contains(a.x)) continue;
        Rational th = u.density(a.x);
        if (th == 0 || th == 1) continue;
        m.add_atom(a.x, Real(to_rational(weight(a.x))) * a.w);
    }
    for (const auto& part : div.parts()) {
        int fa = free_axis_count(part.box);
        if (fa != field.dim - 1) continue;
        Box pb = clip(part.box, field.domain);
        if (degenerate_empty(pb, fa)) continue;
        for (const Box& sb : split_by_grid(pb, u.grid())) {
            std::vector<double> c = sb.center();
            int axis = 0;
            while (sb.lo[axis] != sb.hi[axis]) ++axis;
            auto [lo, hi] = face_neighbors(u, axis, c);
            if (lo == hi) continue;
            Rational w = to_rational(weight.region_value(c));
            if (w == 0) continue;
            m.add_part({sb, part.density.scaled(w)});
        }
    }
    return m.normalized();
}

GaussGreenReport gauss_green_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam0,
                                   GaussGreenMode mode) {
    LambdaSelector lam = mode == GaussGreenMode::Interior  ? LambdaSelector::constant(0.0)
                         : mode == GaussGreenMode::Closure ? LambdaSelector::constant(1.0)
                                                           : lam0;
    for (const auto& b : e.boxes()) {
        if (!b.is_bounded()) throw InvalidArgument("Gauss-Green check needs a bounded set");
        for (int k = 0; k < b.dim(); ++k)
            if (!(field.domain.lo[k] < b.lo[k] && b.hi[k] < field.domain.hi[k]))
                throw InvalidArgument("the closure of E must lie inside the domain");
    }
    StepFunctionND u = set_function(field, e, lam);
    GaussGreenReport r;
    r.interior = divergence_interior(field, u);
    r.boundary = divergence_on_reduced_boundary(field, u, lam).total_mass();
    r.pairing_mass = pairing_measure(field, u, lam).total_mass();
    r.residual = std::fabs(r.interior + r.boundary + r.pairing_mass);
    return r;
}

MeasureND boundary_divergence(const FieldND& field, const BoxSet& e) {
    LambdaSelector l0 = LambdaSelector::constant(0.0), l1 = LambdaSelector::constant(1.0);
    StepFunctionND u = set_function(field, e, l0);
    return pairing_measure(field, u, l0) - pairing_measure(field, u, l1);
}

double boundary_divergence_check(const FieldND& field, const BoxSet& e) {
    if (!field.summable()) throw InvalidArgument("the boundary-divergence identity needs a summable field");
    StepFunctionND u = set_function(field, e, LambdaSelector::constant(0.0));
    return MeasureND::distance(boundary_divergence(field, e), divergence_on_reduced_boundary(field, u));
}

MeasureND additivity_defect(const FieldND& field, const BoxSet& e, const BoxSet& f, const LambdaSelector& lam) {
    auto ce = e.coordinates(), cf = f.coordinates();
    StepFunctionND ue = set_function(field, e, lam, cf);
    StepFunctionND uf = set_function(field, f, lam, ce);
    for (std::size_t i = 0; i < ue.values().size(); ++i) {
        auto idx = ue.grid().unflat(i);
        if (ue.values()[i] == 1.0 && uf.value_at(ue.grid().cell_mid(idx)) == 1.0)
            throw InvalidArgument("E and F overlap in a set of positive measure");
    }
    StepFunctionND uef = StepFunctionND::pointwise_max(ue, uf);
    return pairing_measure(field, uef, lam) - pairing_measure(field, ue, lam) - pairing_measure(field, uf, lam);
}

double complement_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam) {
    StepFunctionND u = set_function(field, e, lam);
    return (pairing_measure(field, u, lam) + pairing_measure(field, u.complement(), lam.complement())).total_variation();
}

double convex_combination_check(const FieldND& field, const BoxSet& e, double t) {
    LambdaSelector lt = LambdaSelector::constant(t);
    StepFunctionND u = set_function(field, e, lt);
    Rational tr = to_rational(t);
    MeasureND p0 = pairing_measure(field, u, LambdaSelector::constant(0.0));
    MeasureND p1 = pairing_measure(field, u, LambdaSelector::constant(1.0));
    MeasureND pt = pairing_measure(field, u, lt);
    return (pt - (Rational(1) - tr) * p0 - tr * p1).total_variation();
}

double lambda_difference_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam1,
                               const LambdaSelector& lam2) {
    if (!field.summable()) throw InvalidArgument("the lambda-difference identity needs a summable field");
    StepFunctionND u = prepare(field, set_function(field, e, lam1), lam2);
    MeasureND d = pairing_measure(field, u, lam1) - pairing_measure(field, u, lam2);
    MeasureND expect = divergence_on_reduced_boundary(field, u, lam2) - divergence_on_reduced_boundary(field, u, lam1);
    return MeasureND::distance(d, expect);
}

double absolute_continuity_constant(int n) {
    return n * std::pow(2.0 * n / (n + 1.0), 0.5 * (n - 1)) * unit_ball_volume(n) / unit_ball_volume(n - 1);
}

AcBound ac_bound_check(const FieldND& field, const BoxSet& e, const LambdaSelector& lam, const Box& window) {
    if (!field.bounded()) throw UnboundedField(field.name + " is not essentially bounded");
    StepFunctionND u = set_function(field, e, lam);
    AcBound r;
    r.lhs = pairing_measure(field, u, lam).total_variation(window);
    // H^{N-1} of the topological boundary inside the window.
    const Grid& g = u.grid();
    double area = 0;
    for (std::size_t f = 0; f < g.cell_count(); ++f) {
        auto ia = g.unflat(f);
        if (!u.cell_in_domain(ia)) continue;
        for (int j = 0; j < field.dim; ++j) {
            if (ia[j] + 1 >= g.intervals(j)) continue;
            auto ib = ia;
            ib[j] += 1;
            if (!u.cell_in_domain(ib) || u.cell_value(ia) == u.cell_value(ib)) continue;
            Box face = g.cell_box(ia);
            face.lo[j] = face.hi[j] = g.coords(j)[ia[j]];
            Box c = clip(face, window);
            if (degenerate_empty(c, field.dim - 1)) continue;
            double a = 1;
            for (int k = 0; k < field.dim; ++k)
                if (k != j) a *= c.hi[k] - c.lo[k];
            area += a;
        }
    }
    r.rhs = 2.0 * absolute_continuity_constant(field.dim) * field.sup_norm(window) * area;
    r.holds = r.lhs <= r.rhs * (1 + 1e-12) + 1e-12;
    return r;
}

ProbeReport probe_report(std::vector<int> ks, std::vector<double> values, double threshold) {
    ProbeReport r;
    r.k = std::move(ks);
    r.values = std::move(values);
    const std::size_t m = r.k.size();
    auto slope = [&](auto xf) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double x = xf(r.k[i]), y = std::fabs(r.values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double den = m * sxx - sx * sx;
        return den == 0 ? 0.0 : (m * sxy - sx * sy) / den;
    };
    if (m >= 2) {
        r.slope_log = slope([](int k) { return std::log(static_cast<double>(k)); });
        r.slope_lin = slope([](int k) { return static_cast<double>(k); });
    }
    r.monotone = true;
    for (std::size_t i = 1; i < m; ++i)
        if (std::fabs(r.values[i]) < std::fabs(r.values[i - 1]) - 1e-9) r.monotone = false;
    r.not_measure = m >= 3 && r.monotone && r.slope_log > threshold;
    r.verdict = r.not_measure ? "NotMeasure" : "Measure";
    return r;
}

ProbeReport not_measure_probe(const FieldND& field, const StepFunctionND& u,
                              const std::function<LambdaSelector(int)>& lam_k,
                              const std::function<TestFunction(int)>& phi_k, const std::vector<int>& ks) {
    std::vector<double> v;
    for (int k : ks) {
        TestFunction phi = phi_k(k);
        if (std::fabs(phi.sup_norm()) > 1.0 + 1e-12) throw InvalidArgument("probe test functions need sup norm <= 1");
        v.push_back(pairing_apply(field, u, lam_k(k), phi));
    }
    return probe_report(ks, std::move(v));
}

ProbeReport vortex_probe(int kmin, int kmax) {
    FieldND field = catalog("vortex");
    BoxSet e = BoxSet::single(Box({-1.0, -1.0}, {1.0, 0.0}));
    LambdaSelector lam = LambdaSelector::constant(0.5);
    StepFunctionND u = set_function(field, e, lam);
    std::vector<int> ks;
    for (int k = kmin; k <= kmax; ++k) ks.push_back(k);
    return not_measure_probe(
        field, u, [&](int) { return lam; },
        [](int k) {
            return TestFunction({Profile1D::odd_ramp(0.0, 1.0 / k, -0.5, 0.5, 0.25), Profile1D::bump(0.0, 0.5)});
        },
        ks);
}

LambdaSelector interval_train_lambda(int k, int dim) {
    const double h = 2.0 / (2 * k + 1);
    LambdaSelector lam(0.0);
    for (int i = 0; i < k; ++i) {
        std::vector<double> lo(dim, -1.0), hi(dim, 1.0);
        lo[0] = -1.0 + (2 * i + 1) * h;
        hi[0] = -1.0 + (2 * i + 2) * h;
        lam.add_region(lo, hi, 1.0);
    }
    return lam;
}

ProbeReport segment_probe(int kmin, int kmax, int dim) {
    nlohmann::json p = {{"N", dim}};
    FieldND field = catalog("segment", p);
    std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
    lo[0] = -1.0;
    BoxSet e = BoxSet::single(Box(lo, hi));
    std::vector<int> ks;
    std::vector<double> v;
    for (int k = kmin; k <= kmax; ++k) {
        ks.push_back(k);
        const double h = 2.0 / (2 * k + 1);
        LambdaSelector lam = interval_train_lambda(k, dim);
        std::vector<Profile1D> prof{Profile1D::cosine_train(-1.0, h, -1.0 + h / 2, 1.0 - h / 2, h / 4)};
        for (int i = 1; i < dim; ++i) prof.push_back(Profile1D::bump(0.0, 0.5));
        v.push_back(pairing_apply(field, set_function(field, e, lam), lam, TestFunction(prof)));
    }
    return probe_report(ks, std::move(v));
}

StaircaseReport staircase_gauss_green(const FieldND& field, int depth, int reference_depth) {
    if (field.name != "staircase") throw BadParams("staircase check needs the staircase field");
    if (depth < 1 || reference_depth < depth) throw BadParams("need 1 <= depth <= reference depth");
    const int n = field.dim;
    StaircaseReport r;
    r.depth = depth;
    LambdaSelector lam = LambdaSelector::constant(0.5);
    r.lhs = divergence_interior(field, set_function(field, staircase_set(n, reference_depth), lam));
    r.pairing_mass = pairing_measure_box(field, staircase_set(n, depth), lam).total_mass();
    r.residual = std::fabs(r.lhs + r.pairing_mass);
    std::vector<double> fc = field.params.value("f", std::vector<double>{1.0, 0.5});
    double fs = 0;
    for (double c : fc) fs += std::fabs(c);
    Profile1D g = field.params.contains("g") ? profile_from_json(field.params["g"]) : Profile1D::bump(1.0, 2.0);
    r.tail_bound = std::ldexp(1.0, -depth) * fs * g.sup_norm();
    return r;
}

}  // namespace pcalc
