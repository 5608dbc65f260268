#include "pcalc/fields.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int get_dim(const nlohmann::json& p, int def) {
    int n = p.value("N", def);
    if (n < 1 || n > 6) throw BadParams("dimension N must be between 1 and 6");
    return n;
}

Box get_domain(const nlohmann::json& p, int n, const Box& def) {
    if (!p.contains("domain")) return def;
    const auto& d = p["domain"];
    try {
        if (d.is_string() && d.get<std::string>() == "whole") return Box::whole(n);
        if (d.is_array() && d.size() == 2 && d[0].is_number()) return Box::cube(n, d[0].get<double>(), d[1].get<double>());
        Box b(d.at("lo").get<std::vector<double>>(), d.at("hi").get<std::vector<double>>());
        if (b.dim() != n) throw BadParams("domain dimension does not match N");
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw BadParams(std::string("bad domain: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw BadParams(e.what());
    }
}

double norm(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

FieldND make_radial(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim < 2) throw BadParams("radial field needs N >= 2");
    f.domain = get_domain(p, f.dim, Box::whole(f.dim));
    const int n = f.dim;
    const double c = 1.0 / (n * unit_ball_volume(n));
    f.density = [n, c](const std::vector<double>& x) {
        double r = norm(x);
        std::vector<double> a(n);
        double s = c / std::pow(r, n);
        for (int k = 0; k < n; ++k) a[k] = x[k] * s;
        return a;
    };
    f.trace = [n, c](int axis, const std::vector<double>& x, int) {
        if (x[axis] == 0.0) return 0.0;
        return c * x[axis] / std::pow(norm(x), n);
    };
    f.div = MeasureND(n);
    std::vector<double> origin(n, 0.0);
    if (f.domain.contains(origin)) f.div.add_atom(origin, Real(1));
    f.singular_points = {origin};
    f.normal_vanishes = [](int, double offset) { return offset == 0.0; };
    f.cuts.assign(n, {0.0});
    f.isotropic_atoms = true;
    return f;
}

FieldND make_constant(const nlohmann::json& p) {
    FieldND f;
    std::vector<double> v;
    if (p.contains("v")) {
        v = p["v"].get<std::vector<double>>();
        f.dim = static_cast<int>(v.size());
        if (p.contains("N") && get_dim(p, f.dim) != f.dim) throw BadParams("v does not have N components");
    } else {
        f.dim = get_dim(p, 2);
        v.assign(f.dim, 0.0);
        v[0] = 1.0;
    }
    if (f.dim < 1) throw BadParams("constant field needs a nonempty v");
    f.domain = get_domain(p, f.dim, Box::whole(f.dim));
    f.density = [v](const std::vector<double>&) { return v; };
    f.trace = [v](int axis, const std::vector<double>&, int) { return v[axis]; };
    f.div = MeasureND(f.dim);
    double s = norm(v);
    f.essential_sup = s;
    f.sup_on = [s](const Box&) { return s; };
    f.cuts.assign(f.dim, {});
    f.piecewise_constant = true;
    return f;
}

FieldND make_heaviside(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    f.domain = get_domain(p, f.dim, Box::whole(f.dim));
    const int n = f.dim;
    f.density = [n](const std::vector<double>& x) {
        std::vector<double> a(n, 0.0);
        a[0] = x[0] > 0 ? 1.0 : 0.0;
        return a;
    };
    f.trace = [](int axis, const std::vector<double>& x, int side) {
        if (axis != 0) return 0.0;
        return (x[0] > 0 || (x[0] == 0 && side > 0)) ? 1.0 : 0.0;
    };
    f.div = MeasureND(n);
    if (f.domain.lo[0] < 0 && 0 < f.domain.hi[0]) f.div.add_face(0, 0.0, f.domain, PartDensity::constant(1));
    f.essential_sup = 1.0;
    f.sup_on = [](const Box&) { return 1.0; };
    f.cuts.assign(n, {});
    f.cuts[0] = {0.0};
    f.piecewise_constant = true;
    return f;
}

FieldND make_transversal(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim < 2) throw BadParams("transversal field needs N >= 2");
    f.domain = get_domain(p, f.dim, Box::cube(f.dim, -1, 1));
    Profile1D prof = p.contains("f") ? profile_from_json(p["f"]) : Profile1D::constant(1.0);
    const int n = f.dim;
    f.density = [n, prof](const std::vector<double>& x) {
        std::vector<double> a(n, 0.0);
        a[0] = prof.value(x[n - 1]);
        return a;
    };
    f.trace = [n, prof](int axis, const std::vector<double>& x, int) { return axis == 0 ? prof.value(x[n - 1]) : 0.0; };
    f.normal_vanishes = [](int axis, double) { return axis != 0; };
    f.div = MeasureND(n);
    double s = prof.sup_norm();
    f.essential_sup = s;
    f.sup_on = [s](const Box&) { return s; };
    f.cuts.assign(n, {});
    f.cuts[n - 1] = prof.breakpoints();
    return f;
}

FieldND make_vortex(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim != 2) throw BadParams("vortex field is planar");
    f.domain = get_domain(p, 2, Box::cube(2, -1, 1));
    f.density = [](const std::vector<double>& x) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        return std::vector<double>{-x[1] / r2, x[0] / r2};
    };
    f.trace = [](int axis, const std::vector<double>& x, int) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        return axis == 0 ? -x[1] / r2 : x[0] / r2;
    };
    f.div = MeasureND(2);
    f.singular_points = {{0.0, 0.0}};
    f.normal_vanishes = [](int, double) { return false; };
    f.cuts = {{0.0}, {0.0}};
    return f;
}

FieldND make_segment(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim < 2) throw BadParams("segment field needs N >= 2");
    f.domain = get_domain(p, f.dim, Box::cube(f.dim, -1, 1));
    std::vector<double> base(f.dim, 0.0);
    if (!f.domain.contains(std::vector<double>(f.dim, 0.0)))
        throw BadParams("the segment through the origin must lie in the domain");
    f.trace = [](int, const std::vector<double>&, int) { return 0.0; };
    f.segments.push_back({0, base, f.domain.lo[0], f.domain.hi[0], Rational(1)});
    f.div = MeasureND(f.dim);
    f.cuts.assign(f.dim, {0.0});
    f.cuts[0].clear();
    f.piecewise_constant = true;
    return f;
}

FieldND make_staircase(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim < 2) throw BadParams("staircase field needs N >= 2");
    f.domain = get_domain(p, f.dim, Box::whole(f.dim));
    std::vector<double> fc = p.value("f", std::vector<double>{1.0, 0.5});
    if (fc.empty() || fc.size() > static_cast<std::size_t>(f.dim)) throw BadParams("f takes 1 to N coefficients");
    fc.resize(f.dim, 0.0);
    Profile1D g = p.contains("g") ? profile_from_json(p["g"]) : Profile1D::bump(1.0, 2.0);
    if (g.kind() == Profile1D::Kind::Constant) throw BadParams("g must be compactly supported");
    const int n = f.dim;
    auto fhat = [fc, n](const std::vector<double>& x) {
        double s = fc[0];
        for (int k = 1; k < n; ++k) s += fc[k] * x[k];
        return s;
    };
    f.density = [n, fhat, g](const std::vector<double>& x) {
        std::vector<double> a(n, 0.0);
        a[0] = fhat(x) * g.value(x[0]);
        return a;
    };
    f.trace = [fhat, g](int axis, const std::vector<double>& x, int) { return axis == 0 ? fhat(x) * g.value(x[0]) : 0.0; };
    f.div = MeasureND(n);
    Box vb = f.domain;
    vb.lo[0] = std::max(vb.lo[0], g.support_lo());
    vb.hi[0] = std::min(vb.hi[0], g.support_hi());
    f.div.add_volume(vb, PartDensity::function([fhat, g](const std::vector<double>& x) { return fhat(x) * g.derivative(x[0]); }));
    f.sup_on = [fc, n, g](const Box& w) {
        double s = std::fabs(fc[0]);
        for (int k = 1; k < n; ++k) {
            if (fc[k] == 0) continue;
            double m = std::max(std::fabs(w.lo[k]), std::fabs(w.hi[k]));
            s += std::fabs(fc[k]) * m;
        }
        return s * g.sup_norm();
    };
    f.cuts.assign(n, {});
    f.cuts[0] = g.breakpoints();
    return f;
}

FieldND make_measure_components(const nlohmann::json& p) {
    FieldND f;
    f.dim = get_dim(p, 2);
    if (f.dim < 2) throw BadParams("measure-components field needs N >= 2");
    const int n = f.dim;
    f.domain = get_domain(p, n, Box::cube(n, -1, 1));
    std::vector<double> y = p.value("y", std::vector<double>(n, 0.0));
    if (static_cast<int>(y.size()) != n || !f.domain.contains(y)) throw BadParams("y must be a point of the domain");
    for (int j = 0; j + 1 < n; ++j) f.segments.push_back({j, y, f.domain.lo[j], f.domain.hi[j], Rational(1)});
    const double yn = y[n - 1];
    f.density = [n, yn](const std::vector<double>& x) {
        std::vector<double> a(n, 0.0);
        a[n - 1] = x[n - 1] > yn ? 1.0 : 0.0;
        return a;
    };
    f.trace = [n, yn](int axis, const std::vector<double>& x, int side) {
        if (axis != n - 1) return 0.0;
        return (x[axis] > yn || (x[axis] == yn && side > 0)) ? 1.0 : 0.0;
    };
    f.div = MeasureND(n);
    f.div.add_face(n - 1, yn, f.domain, PartDensity::constant(1));
    f.cuts.resize(n);
    for (int k = 0; k < n; ++k) f.cuts[k] = {y[k]};
    f.piecewise_constant = true;
    return f;
}

}  // namespace

void FieldND::bind_traces() {
    trace_fns.clear();
    if (!trace) return;
    for (int j = 0; j < dim; ++j) {
        TraceFn t = trace;
        trace_fns.push_back({std::make_shared<const PointFn>([t, j](const std::vector<double>& x) { return t(j, x, -1); }),
                             std::make_shared<const PointFn>([t, j](const std::vector<double>& x) { return t(j, x, +1); })});
    }
}

double FieldND::sup_norm(const Box& window) const {
    if (!bounded()) throw UnboundedField(name + " is not essentially bounded");
    return sup_on(window);
}

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

Profile1D profile_from_json(const nlohmann::json& j) {
    try {
        if (j.is_number()) return Profile1D::constant(j.get<double>());
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "constant") return Profile1D::constant(j.value("c", 1.0));
        if (kind == "bump") return Profile1D::bump(j.value("center", 0.0), j.value("radius", 1.0));
        if (kind == "plateau") return Profile1D::plateau(j.at("a").get<double>(), j.at("b").get<double>(), j.value("w", 0.25));
        throw BadParams("unknown profile kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw BadParams(std::string("bad profile: ") + e.what());
    }
}

std::vector<std::string> catalog_names() {
    return {"radial", "constant", "heaviside", "transversal", "vortex", "segment", "staircase", "measure-components"};
}

FieldND catalog(const std::string& name, const nlohmann::json& params) {
    if (!params.is_object() && !params.is_null()) throw BadParams("field parameters must be an object");
    const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
    FieldND f;
    try {
        if (name == "radial") f = make_radial(p);
        else if (name == "constant") f = make_constant(p);
        else if (name == "heaviside") f = make_heaviside(p);
        else if (name == "transversal") f = make_transversal(p);
        else if (name == "vortex") f = make_vortex(p);
        else if (name == "segment") f = make_segment(p);
        else if (name == "staircase") f = make_staircase(p);
        else if (name == "measure-components") f = make_measure_components(p);
        else throw UnknownEntry("no catalog field named '" + name + "'");
    } catch (const nlohmann::json::exception& e) {
        throw BadParams(std::string("bad parameters for ") + name + ": " + e.what());
    }
    f.name = name;
    f.params = p;
    f.bind_traces();
    return f;
}

namespace {

std::vector<std::vector<double>> all_cuts(const FieldND& field, const std::vector<std::vector<double>>& cuts) {
    return merge_coordinates(field.cuts, cuts);
}

bool strictly_inside(const Box& b, const std::vector<double>& s) { return b.contains(s); }

}  // namespace

double integrate_field_box(const FieldND& field, const PointFn& f, const Box& box,
                           const std::vector<std::vector<double>>& cuts, const QuadOptions& opt) {
    if (!box.is_bounded()) throw InvalidArgument("integration box must be bounded");
    if (box.empty()) return 0.0;
    auto cs = all_cuts(field, cuts);
    const std::vector<double>* inner = nullptr;
    for (const auto& s : field.singular_points)
        if (strictly_inside(box, s)) inner = &s;
    if (!inner) return integrate_box(f, box.lo, box.hi, opt, cs).value;

    const auto& s = *inner;
    const int n = box.dim();
    double gap = kInf;
    for (int k = 0; k < n; ++k) gap = std::min({gap, s[k] - box.lo[k], box.hi[k] - s[k]});
    // Stay clear of cut planes other than those through s.
    for (int k = 0; k < n; ++k)
        for (double c : cs[k])
            if (c != s[k] && std::fabs(c - s[k]) < gap) gap = std::fabs(c - s[k]);
    const double g = 0.5 * gap;
    double total = 0;
    std::vector<int> sel(n, 0);
    while (true) {
        bool centre = true;
        std::vector<double> lo(n), hi(n);
        for (int k = 0; k < n; ++k) {
            double a[4] = {box.lo[k], s[k] - g, s[k] + g, box.hi[k]};
            lo[k] = a[sel[k]];
            hi[k] = a[sel[k] + 1];
            centre = centre && sel[k] == 1;
        }
        if (!centre) total += integrate_box(f, lo, hi, opt, cs).value;
        int k = n - 1;
        while (k >= 0 && ++sel[k] == 3) {
            sel[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    // Core cube: each orthant is split into n pyramids with apex s and mapped
    // to the unit cube (Duffy), which absorbs the r^(1-N) blow-up.
    const std::vector<double> zero(n, 0.0), one(n, 1.0);
    const double jac = std::pow(g, n);
    for (unsigned m = 0; m < (1u << n); ++m)
        for (int face = 0; face < n; ++face) {
            FnND h = [&](const std::vector<double>& v) {
                // v[face] is the radial parameter t, the others sweep the far face
                const double t = v[face];
                std::vector<double> x(n);
                for (int k = 0; k < n; ++k) {
                    double sg = ((m >> k) & 1u) ? 1.0 : -1.0;
                    x[k] = s[k] + sg * g * t * (k == face ? 1.0 : v[k]);
                }
                if (t == 0.0) return 0.0;
                return f(x) * jac * std::pow(t, n - 1);
            };
            total += integrate_box(h, zero, one, opt).value;
        }
    return total;
}

double divergence_selftest(const FieldND& field, const TestFunction& phi, const QuadOptions& opt) {
    if (phi.dim() != field.dim) throw InvalidArgument("test function dimension mismatch");
    Box supp = phi.support();
    for (int k = 0; k < field.dim; ++k)
        if (!(field.domain.lo[k] <= supp.lo[k] && supp.hi[k] <= field.domain.hi[k]))
            throw InvalidArgument("test function support leaves the domain");
    double lhs = field.div.integrate(phi, opt);
    double rhs = 0;
    if (field.density) {
        const int n = field.dim;
        PointFn g = [&](const std::vector<double>& x) {
            auto a = field.density(x);
            double s = 0;
            for (int k = 0; k < n; ++k)
                if (a[k] != 0.0) s += phi.partial(k, x) * a[k];
            return s;
        };
        rhs += integrate_field_box(field, g, supp, phi.breakpoints(), opt);
    }
    for (const auto& seg : field.segments) {
        MeasurePart part{Box(seg.base, seg.base), PartDensity::constant(seg.weight)};
        part.box.lo[seg.axis] = std::max(seg.lo, supp.lo[seg.axis]);
        part.box.hi[seg.axis] = std::min(seg.hi, supp.hi[seg.axis]);
        if (!(part.box.lo[seg.axis] < part.box.hi[seg.axis])) continue;
        double w = to_double(seg.weight);
        rhs += integrate_part(part, [&](const std::vector<double>& x) { return w * phi.partial(seg.axis, x); }, opt,
                              phi.breakpoints());
    }
    return std::fabs(lhs + rhs);
}

double staircase_width(int n) {
    double s = 1.0;
    for (int k = 1; k <= n; ++k) s += (k % 2 == 1 ? 1.0 : -1.0) / k;
    return s;
}

BoxSet staircase_set(int dim, int depth) {
    if (dim < 2) throw BadParams("staircase set needs N >= 2");
    if (depth < 0 || depth > 48) throw BadParams("staircase depth must lie in [0, 48]");
    std::vector<Box> boxes;
    auto make = [dim](double w, double y0, double y1) {
        std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
        hi[0] = w;
        lo[1] = y0;
        hi[1] = y1;
        return Box(lo, hi);
    };
    boxes.push_back(make(1.0, 0.0, 0.5));
    for (int n = 1; n <= depth; ++n) boxes.push_back(make(staircase_width(n), 1.0 - std::ldexp(1.0, -n), 1.0 - std::ldexp(1.0, -n - 1)));
    return BoxSet(dim, std::move(boxes));
}

}  // namespace pcalc
