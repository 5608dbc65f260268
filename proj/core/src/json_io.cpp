#include "pcalc/json_io.hpp"

#include "pcalc/errors.hpp"

#include <cmath>

namespace pcalc {

using nlohmann::json;

namespace {

double num(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

std::vector<double> vec(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError(std::string(what) + " must hold numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

Interval1D domain_of(const json& j) {
    if (!j.contains("domain")) return Interval1D(-1, 1);
    const auto& d = j["domain"];
    if (!d.is_array() || d.size() != 2) throw ConfigError("domain must be [lo, hi]");
    try {
        return Interval1D(rational_from_json(d[0]), rational_from_json(d[1]));
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) {
        double v = j.get<double>();
        if (!std::isfinite(v)) throw ConfigError("non-finite number");
        return to_rational(v);
    }
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        try {
            auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
            return Rational(boost::multiprecision::cpp_int(s.substr(0, slash)),
                            boost::multiprecision::cpp_int(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad rational '" + s + "'");
        }
    }
    throw ConfigError("expected a number or a \"p/q\" string");
}

json rational_to_json(const Rational& q) {
    if (denominator(q) == 1 || to_rational(to_double(q)) == q) return to_double(q);
    return to_string(q);
}

Piece piece_from_json(const json& j) {
    if (j.is_number() || j.is_string()) return Piece::constant(rational_from_json(j));
    if (!j.is_object()) throw ConfigError("piece must be an object");
    std::vector<Rational> coeffs;
    if (j.contains("poly"))
        for (const auto& c : j["poly"]) coeffs.push_back(rational_from_json(c));
    Piece p{Poly(coeffs)};
    if (!j.contains("terms")) return p;
    for (const auto& t : j["terms"]) {
        std::string kind = t.value("kind", "");
        Rational c = t.contains("c") ? rational_from_json(t["c"]) : Rational(1);
        Rational a = t.contains("a") ? rational_from_json(t["a"]) : Rational(0);
        int sigma = t.value("sigma", 1);
        if (t.contains("mult")) {
            std::vector<Rational> mc;
            for (const auto& c2 : t["mult"]) mc.push_back(rational_from_json(c2));
            Piece unit = kind == "power"    ? Piece::power(1, a, num(t, "alpha", 1.0), sigma)
                         : kind == "log"    ? Piece::log_abs(1, a, sigma)
                         : kind == "arctan" ? Piece::arctan(1, num(t, "k", 1.0), a)
                         : kind == "cauchy" ? Piece::cauchy(1, num(t, "k", 1.0), a)
                                            : throw ConfigError("unknown term kind '" + kind + "'");
            p += unit * Piece(Poly(mc));
            continue;
        }
        if (kind == "power")
            p += Piece::power(c, a, num(t, "alpha", 1.0), sigma);
        else if (kind == "recip")
            p += Piece::recip(c, a, sigma);
        else if (kind == "log")
            p += Piece::log_abs(c, a, sigma);
        else if (kind == "arctan")
            p += Piece::arctan(c, num(t, "k", 1.0), a);
        else if (kind == "cauchy")
            p += Piece::cauchy(c, num(t, "k", 1.0), a);
        else
            throw ConfigError("unknown term kind '" + kind + "'");
    }
    return p;
}

PiecewiseFunction1D function1d_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("function must be an object");
    Interval1D dom = domain_of(j);
    try {
        if (j.contains("constant")) return PiecewiseFunction1D::constant(dom, rational_from_json(j["constant"]));
        if (j.contains("indicator")) {
            const auto& iv = j["indicator"];
            Rational c = j.contains("value") ? rational_from_json(j["value"]) : Rational(1);
            return PiecewiseFunction1D::indicator(dom, rational_from_json(iv.at(0)), rational_from_json(iv.at(1)), c);
        }
        if (!j.contains("pieces")) return PiecewiseFunction1D::single(dom, piece_from_json(j));
        std::vector<Rational> bp;
        for (const auto& b : j.value("breakpoints", json::array())) bp.push_back(rational_from_json(b));
        std::vector<Piece> pieces;
        for (const auto& p : j["pieces"]) pieces.push_back(piece_from_json(p));
        std::map<Rational, Real> values;
        for (const auto& v : j.value("values", json::array())) values[rational_from_json(v.at(0))] = rational_from_json(v.at(1));
        return PiecewiseFunction1D(dom, bp, pieces, values);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

LambdaSelector lambda_from_json(const json& j) {
    try {
        if (j.is_number()) return LambdaSelector::constant(j.get<double>());
        if (!j.is_object()) throw ConfigError("lambda must be a number or an object");
        LambdaSelector lam(num(j, "default", 0.5));
        for (const auto& r : j.value("regions", json::array())) {
            if (r["lo"].is_number())
                lam.add_region(r["lo"].get<double>(), r["hi"].get<double>(), r.at("value").get<double>());
            else
                lam.add_region(vec(r["lo"], "region lo"), vec(r["hi"], "region hi"), r.at("value").get<double>());
        }
        for (const auto& o : j.value("overrides", json::array())) {
            if (o["point"].is_number())
                lam.add_override(o["point"].get<double>(), o.at("value").get<double>());
            else
                lam.add_override(vec(o["point"], "override point"), o.at("value").get<double>());
        }
        return lam;
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

Box box_from_json(const json& j) {
    if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) throw ConfigError("box needs lo and hi");
    auto lo = vec(j["lo"], "box lo"), hi = vec(j["hi"], "box hi");
    if (lo.size() != hi.size()) throw ConfigError("box bounds differ in length");
    return Box(lo, hi);
}

BoxSet boxset_from_json(const json& j, int dim) {
    std::vector<Box> boxes;
    if (j.is_object())
        boxes.push_back(box_from_json(j));
    else if (j.is_array())
        for (const auto& b : j) boxes.push_back(box_from_json(b));
    else
        throw ConfigError("set must be a box or a list of boxes");
    for (const auto& b : boxes)
        if (b.dim() != dim) throw ConfigError("box dimension does not match the field");
    return BoxSet(dim, boxes);
}

FieldND field_from_json(const json& j) {
    std::string name;
    json params = json::object();
    if (j.is_string()) {
        name = j.get<std::string>();
    } else if (j.is_object() && j.contains("name")) {
        name = j["name"].get<std::string>();
        params = j.value("params", json::object());
    } else {
        throw ConfigError("field must be a name or {\"name\", \"params\"}");
    }
    try {
        return catalog(name, params);
    } catch (const UnknownEntry& e) {
        throw ConfigError(e.what());
    } catch (const BadParams& e) {
        throw ConfigError(e.what());
    }
}

TestFunction test_function_from_json(const json& j, int dim) {
    try {
        if (j.is_object() && j.contains("bump")) {
            const auto& b = j["bump"];
            auto c = vec(b.at("center"), "bump center");
            if (static_cast<int>(c.size()) != dim) throw ConfigError("bump center has the wrong dimension");
            return TestFunction::bump(c, b.at("radius").get<double>());
        }
        if (!j.is_array() || static_cast<int>(j.size()) != dim) throw ConfigError("test function needs one profile per axis");
        std::vector<Profile1D> p;
        for (const auto& e : j) p.push_back(profile_from_json(e));
        return TestFunction(p);
    } catch (const BadParams& e) {
        throw ConfigError(e.what());
    }
}

namespace {

json poly_to_json(const Poly& p) {
    json c = json::array();
    for (const auto& q : p.coeffs()) c.push_back(rational_to_json(q));
    return c;
}

json real_to_json(const Real& r) { return r.is_exact() ? rational_to_json(r.exact_part()) : json(r.value()); }

}  // namespace

json piece_to_json(const Piece& p) {
    json terms = json::array();
    for (const auto& t : p.terms()) {
        static const char* names[] = {"power", "log", "arctan", "cauchy"};
        json o = {{"kind", names[static_cast<int>(t.kind)]}, {"a", rational_to_json(t.a)}};
        if (t.mult.is_constant()) o["c"] = rational_to_json(t.mult.coeff(0));
        else o["mult"] = poly_to_json(t.mult);
        if (t.kind == TermKind::Power) o["alpha"] = t.alpha;
        if (t.kind == TermKind::Power || t.kind == TermKind::Log) o["sigma"] = t.sigma;
        if (t.kind == TermKind::Arctan || t.kind == TermKind::Cauchy) o["k"] = t.k;
        terms.push_back(std::move(o));
    }
    return {{"poly", poly_to_json(p.poly())}, {"terms", terms}};
}

json measure_to_json(const Measure1D& m) {
    json atoms = json::array(), dens = json::array();
    for (const auto& a : m.atoms()) atoms.push_back({rational_to_json(a.x), real_to_json(a.w)});
    for (const auto& d : m.density())
        dens.push_back({{"lo", rational_to_json(d.lo)}, {"hi", rational_to_json(d.hi)}, {"piece", piece_to_json(d.piece)}});
    json domain = {rational_to_json(m.domain().lo), rational_to_json(m.domain().hi)};
    return {{"domain", domain}, {"atoms", atoms}, {"density", dens}, {"total_variation", m.total_variation()}};
}

json measure_to_json(const MeasureND& m) {
    json atoms = json::array(), parts = json::array();
    for (const auto& a : m.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w.value()}});
    for (const auto& p : m.parts()) {
        json d = p.density.is_constant() ? json(to_double(p.density.constant_part())) : json("function");
        parts.push_back({{"lo", p.box.lo}, {"hi", p.box.hi}, {"dim", p.free_axes()}, {"density", d}});
    }
    return {{"atoms", atoms}, {"parts", parts}};
}

}  // namespace pcalc
