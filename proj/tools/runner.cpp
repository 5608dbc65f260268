#include "runner.hpp"

#include "pcalc/bv1d.hpp"
#include "pcalc/coarea.hpp"
#include "pcalc/errors.hpp"
#include "pcalc/json_io.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/quadrature.hpp"
#include "pcalc/tvmin.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>

namespace pcalc::cli {

using nlohmann::json;

IdentityIntegral identity_integral(int n) {
    if (n < 1 || n > 4) throw BadParams("identity integral is tabulated for 1 <= n <= 4");
    QuadOptions q;
    q.rel_tol = n <= 2 ? 1e-13 : 1e-11;
    q.abs_tol = 0;
    q.max_regions = 400000;
    q.throw_on_failure = false;
    auto f = [n](const std::vector<double>& y) {
        double r2 = 0;
        for (double v : y) r2 += v * v;
        return std::pow(1.0 + r2, -0.5 * (n + 1));
    };
    IdentityIntegral r;
    r.n = n;
    r.value = integrate_box(f, std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), q).value;
    r.target = unit_ball_volume(n + 1) / std::ldexp(1.0, n + 1);
    r.residual = std::fabs(r.value - r.target) / r.target;
    return r;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    if (const char* s = std::getenv("PAIRING_CALC_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw ConfigError("PAIRING_CALC_SEED must be an unsigned integer");
        }
    }
    return fallback;
}

CoareaInstance random_coarea_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> small(-8, 8), cells(2, 5);
    auto q = [&](int den) { return Rational(small(rng), den); };
    const Interval1D dom(-1, 1);
    int m = cells(rng);
    std::vector<Rational> bp;
    for (int i = 1; i < m; ++i) bp.push_back(Rational(-1) + Rational(2 * i, m) + Rational(small(rng), 20 * m));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<Piece> pu;
    for (std::size_t i = 0; i <= bp.size(); ++i) pu.push_back(Piece(Poly({q(4), q(3)})));
    CoareaInstance c;
    c.u = PiecewiseFunction1D(dom, bp, pu);
    // A = 2 + s x on (-1, k), continuous kink at k.
    Rational s1 = q(8), s2 = q(8), k = q(10);
    Rational at_k = 2 + s1 * k;
    c.A = PiecewiseFunction1D(dom, {k}, {Piece(Poly({Rational(2), s1})), Piece(Poly({at_k - s2 * k, s2}))});
    // phi = (1 - x^2)^2 (1 + x / 2).
    Poly one_minus = Poly({Rational(1), Rational(0), Rational(-1)});
    c.phi = PiecewiseFunction1D::single(dom, Piece(one_minus * one_minus * Poly({Rational(1), Rational(1, 2)})));
    return c;
}

namespace {

struct Ctx {
    const json& sc;
    const RunOptions& opt;
};

double tolerance_for(const json& sc, const std::string& check, double dflt, const RunOptions& opt) {
    double t = dflt;
    if (sc.contains("tolerances") && sc["tolerances"].contains(check))
        t = sc["tolerances"][check].get<double>();
    else if (sc.contains("tolerance"))
        t = sc["tolerance"].get<double>();
    if (!(t > 0)) throw ConfigError("tolerances must be positive");
    return t * opt.tol_scale;
}

const json& need(const json& sc, const char* key) {
    if (!sc.contains(key)) throw ConfigError(std::string("scenario lacks '") + key + "'");
    return sc[key];
}

LambdaSelector lambda_of(const json& sc, const char* key = "lambda") {
    return sc.contains(key) ? lambda_from_json(sc[key]) : LambdaSelector::constant(0.5);
}

MeasureND measure_nd_from_json(const json& j, int dim) {
    MeasureND m(dim);
    for (const auto& a : j.value("atoms", json::array())) {
        auto x = a.at("x").get<std::vector<double>>();
        if (static_cast<int>(x.size()) != dim) throw ConfigError("atom position has the wrong dimension");
        m.add_atom(x, Real(rational_from_json(a.at("w"))));
    }
    for (const auto& f : j.value("faces", json::array())) {
        Box b(f.at("lo").get<std::vector<double>>(), f.at("hi").get<std::vector<double>>());
        m.add_face(f.at("axis").get<int>(), f.at("offset").get<double>(), b,
                   PartDensity::constant(rational_from_json(f.at("density"))));
    }
    return m.normalized();
}

Measure1D measure_1d_from_json(const json& j, const Interval1D& dom) {
    std::vector<Atom1D> atoms;
    for (const auto& a : j.value("atoms", json::array()))
        atoms.push_back({rational_from_json(a.at(0)), Real(rational_from_json(a.at(1)))});
    std::vector<DensityPart> dens;
    for (const auto& d : j.value("density", json::array()))
        dens.push_back({rational_from_json(d.at("lo")), rational_from_json(d.at("hi")), piece_from_json(d.at("piece"))});
    return Measure1D(dom, atoms, dens);
}

ReportRow row(const std::string& check, double lhs, double rhs, double residual, double tol) {
    ReportRow r;
    r.check = check;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = residual;
    r.tolerance = tol;
    r.verdict = residual <= tol ? "pass" : "fail";
    return r;
}

struct NdInput {
    FieldND field;
    BoxSet set;
    LambdaSelector lam;
};

NdInput nd_input(const json& sc) {
    NdInput in{field_from_json(need(sc, "field")), {}, lambda_of(sc)};
    in.set = boxset_from_json(need(sc, "set"), in.field.dim);
    return in;
}

using Check = std::function<ReportRow(const Ctx&, const std::string&)>;

const std::map<std::string, Check>& checks() {
    static const std::map<std::string, Check> table = {
        {"gauss-green",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             std::string mode = c.sc.value("mode", "general");
             GaussGreenMode m = mode == "interior"  ? GaussGreenMode::Interior
                                : mode == "closure" ? GaussGreenMode::Closure
                                : mode == "general" ? GaussGreenMode::General
                                                    : throw ConfigError("unknown Gauss-Green mode '" + mode + "'");
             auto g = gauss_green_check(in.field, in.set, in.lam, m);
             return row(name, g.interior + g.boundary, -g.pairing_mass, g.residual,
                        tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"complement",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             double r = complement_check(in.field, in.set, in.lam);
             return row(name, r, 0.0, r, tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"convex",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             double r = convex_combination_check(in.field, in.set, c.sc.value("t", 0.5));
             return row(name, r, 0.0, r, tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"lambda-difference",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             double r = lambda_difference_check(in.field, in.set, in.lam, lambda_of(c.sc, "lambda2"));
             return row(name, r, 0.0, r, tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"boundary-divergence",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             double r = boundary_divergence_check(in.field, in.set);
             return row(name, r, 0.0, r, tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"additivity",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             BoxSet f = boxset_from_json(need(c.sc, "set2"), in.field.dim);
             MeasureND d = additivity_defect(in.field, in.set, f, in.lam);
             MeasureND expect = measure_nd_from_json(need(c.sc, "expect"), in.field.dim);
             double r = MeasureND::distance(d, expect);
             return row(name, d.total_variation(), expect.total_variation(), r, tolerance_for(c.sc, name, 1e-12, c.opt));
         }},
        {"atom",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             auto x = need(c.sc, "point").get<std::vector<double>>();
             double w = pairing_measure_box(in.field, in.set, in.lam).atom_weight(x).value();
             double e = to_double(rational_from_json(need(c.sc, "expect")));
             return row(name, w, e, std::fabs(w - e), tolerance_for(c.sc, name, 1e-15, c.opt));
         }},
        {"ac-bound",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             Box w = c.sc.contains("window") ? box_from_json(c.sc["window"]) : in.field.domain;
             if (!w.is_bounded()) w = w.intersect(Box::cube(in.field.dim, -2, 2));
             auto b = ac_bound_check(in.field, in.set, in.lam, w);
             double tol = tolerance_for(c.sc, name, 1e-12, c.opt);
             return row(name, b.lhs, b.rhs, std::max(0.0, b.lhs - b.rhs), tol);
         }},
        {"perimeter",
         [](const Ctx& c, const std::string& name) {
             auto in = nd_input(c.sc);
             Box w = c.sc.contains("window") ? box_from_json(c.sc["window"]) : in.field.domain;
             if (!w.is_bounded()) w = w.intersect(Box::cube(in.field.dim, -2, 2));
             auto p = perimeter(in.field, in.set, in.lam, w);
             double tol = tolerance_for(c.sc, name, 1e-8, c.opt);
             double e = c.sc.contains("expect") ? to_double(rational_from_json(c.sc["expect"])) : p.value;
             ReportRow r = row(name, p.value, e, std::fabs(p.value - e), tol);
             if (p.lower_bound) {
                 r.verdict = "flagged";
                 r.note = "lower bound from test functions";
             }
             return r;
         }},
        {"coarea",
         [](const Ctx& c, const std::string& name) {
             auto A = function1d_from_json(need(c.sc, "A"));
             auto u = function1d_from_json(need(c.sc, "u"));
             auto phi = function1d_from_json(need(c.sc, "phi"));
             double tol = tolerance_for(c.sc, name, 1e-8, c.opt);
             bool expect_fail = c.sc.value("expect_hypothesis_failure", false);
             try {
                 auto r = coarea_check(A, u, lambda_of(c.sc), phi);
                 ReportRow out = row(name, r.lhs, r.rhs, r.residual, tol);
                 if (expect_fail) {
                     out.verdict = "fail";
                     out.note = "hypothesis violation not detected";
                 }
                 return out;
             } catch (const HypothesisFailed& e) {
                 ReportRow out = row(name, 0, 0, expect_fail ? 0.0 : 1.0, tol);
                 out.note = e.what();
                 return out;
             }
         }},
        {"coarea-random",
         [](const Ctx& c, const std::string& name) {
             std::mt19937_64 rng(c.sc.value("seed", c.opt.seed));
             int count = c.sc.value("count", 20);
             double worst = 0, lhs = 0, rhs = 0;
             for (int i = 0; i < count; ++i) {
                 auto inst = random_coarea_instance(rng);
                 std::uniform_real_distribution<double> ul(0, 1);
                 auto r = coarea_check(inst.A, inst.u, LambdaSelector::constant(ul(rng)), inst.phi);
                 if (r.residual >= worst) {
                     worst = r.residual;
                     lhs = r.lhs;
                     rhs = r.rhs;
                 }
             }
             return row(name, lhs, rhs, worst, tolerance_for(c.sc, name, 1e-8, c.opt));
         }},
        {"pair1d",
         [](const Ctx& c, const std::string& name) {
             auto A = function1d_from_json(need(c.sc, "A"));
             auto u = function1d_from_json(need(c.sc, "u"));
             Measure1D p = pairing_1d(A, u, lambda_of(c.sc)).pairing;
             Measure1D e = measure_1d_from_json(need(c.sc, "expect"), u.domain());
             return row(name, p.total_variation(), e.total_variation(), Measure1D::distance(p, e),
                        tolerance_for(c.sc, name, 1e-12, c.opt));
         }},
        {"identity-integral",
         [](const Ctx& c, const std::string& name) {
             int n = need(c.sc, "n").get<int>();
             auto r = identity_integral(n);
             double dflt = n == 1 ? 1e-10 : n == 2 ? 1e-8 : 1e-7;
             return row(name, r.value, r.target, r.residual, tolerance_for(c.sc, name, dflt, c.opt));
         }},
        {"staircase",
         [](const Ctx& c, const std::string& name) {
             FieldND f = field_from_json(c.sc.value("field", json("staircase")));
             auto r = staircase_gauss_green(f, need(c.sc, "depth").get<int>(), c.sc.value("reference_depth", 40));
             double tol = c.sc.contains("tolerance") || c.sc.contains("tolerances")
                              ? tolerance_for(c.sc, name, 1.0, c.opt)
                              : r.tail_bound * c.opt.tol_scale;
             return row(name, r.lhs, -r.pairing_mass, r.residual, tol);
         }},
        {"probe",
         [](const Ctx& c, const std::string& name) {
             std::string kind = need(c.sc, "kind").get<std::string>();
             int kmin = c.sc.value("kmin", 2), kmax = c.sc.value("kmax", 10);
             ProbeReport p = kind == "vortex"    ? vortex_probe(kmin, kmax)
                             : kind == "segment" ? segment_probe(kmin, kmax, c.sc.value("N", 2))
                                                 : throw ConfigError("unknown probe '" + kind + "'");
             ReportRow r = row(name, p.slope_log, 0.25, p.not_measure ? 0.0 : 1.0, 0.5);
             r.note = p.verdict;
             return r;
         }},
        {"compactness",
         [](const Ctx& c, const std::string& name) {
             int n = c.sc.value("N", 2);
             Profile1D f = c.sc.contains("f") ? profile_from_json(c.sc["f"]) : Profile1D::constant(1.0);
             int k = c.sc.value("k", 100000);
             auto r = compactness_failure_demo(n, f, {k});
             ReportRow out = row(name, r.masses[0], r.limit, std::fabs(r.masses[0] - r.limit),
                                 tolerance_for(c.sc, name, 1e-6, c.opt));
             if (!r.pairing_zero[0]) {
                 out.verdict = "fail";
                 out.note = "pairing not identically zero";
             }
             return out;
         }},
        {"denoise",
         [](const Ctx& c, const std::string& name) {
             auto shape = need(c.sc, "shape").get<std::vector<int>>();
             GridFunction g(shape, c.sc.value("h", 1.0));
             auto vals = need(c.sc, "g").get<std::vector<double>>();
             if (vals.size() != g.size()) throw ConfigError("g has the wrong number of cells");
             g.values = vals;
             FieldND f = field_from_json(c.sc.value("field", json({{"name", "constant"}, {"params", {{"N", g.dim()}}}})));
             std::vector<double> origin = c.sc.value("origin", std::vector<double>(g.dim(), 0.0));
             EnergyParams p;
             p.p = c.sc.value("p", 2.0);
             p.g = g;
             p.A = sample_field(f, g, origin);
             auto r = minimize(p);
             bool mono = std::is_sorted(r.trace.rbegin(), r.trace.rend());
             double e = energy(r.u, p), eg = energy(g, p);
             ReportRow out = row(name, e, eg, std::max(0.0, e - eg), tolerance_for(c.sc, name, 1e-12, c.opt));
             if (!mono) {
                 out.verdict = "fail";
                 out.note = "energy trace not monotone";
             }
             return out;
         }},
    };
    return table;
}

}  // namespace

std::vector<ReportRow> run_scenario(const json& sc, const RunOptions& opt) {
    if (!sc.is_object()) throw ConfigError("scenario must be an object");
    std::string id = need(sc, "id").get<std::string>();
    std::vector<std::string> list;
    if (sc.contains("checks"))
        list = sc["checks"].get<std::vector<std::string>>();
    else
        list.push_back(need(sc, "check").get<std::string>());
    // Unknown names and malformed inputs are configuration errors, raised before any work.
    for (const auto& name : list)
        if (!checks().count(name)) throw ConfigError("unknown check '" + name + "' in scenario " + id);
    if (sc.contains("field")) field_from_json(sc["field"]);

    std::vector<ReportRow> rows;
    Ctx ctx{sc, opt};
    for (const auto& name : list) {
        auto t0 = std::chrono::steady_clock::now();
        ReportRow r;
        try {
            r = checks().at(name)(ctx, name);
        } catch (const ConfigError&) {
            throw;
        } catch (const json::exception& e) {
            throw ConfigError(id + ": " + e.what());
        } catch (const Error& e) {
            r.check = name;
            r.residual = std::nan("");
            r.tolerance = tolerance_for(sc, name, 1e-8, opt);
            r.verdict = "fail";
            r.note = e.what();
        }
        r.scenario = id;
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(r));
        if (opt.fail_fast && rows.back().verdict == "fail") break;
    }
    return rows;
}

std::vector<ReportRow> run_scenarios(const json& config, const RunOptions& opt) {
    if (!config.is_object() || !config.contains("scenarios") || !config["scenarios"].is_array())
        throw ConfigError("config needs a \"scenarios\" array");
    const auto& list = config["scenarios"];
    std::vector<std::pair<std::string, std::size_t>> order;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_object() || !list[i].contains("id") || !list[i]["id"].is_string())
            throw ConfigError("every scenario needs a string id");
        order.emplace_back(list[i]["id"].get<std::string>(), i);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i].first == order[i - 1].first) throw ConfigError("duplicate scenario id " + order[i].first);

    std::vector<std::vector<ReportRow>> results(order.size());
    const std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
    std::atomic<bool> stop{false};
    std::size_t next = 0;
    while (next < order.size()) {
        std::vector<std::future<void>> batch;
        for (std::size_t j = 0; j < jobs && next < order.size(); ++j, ++next) {
            std::size_t slot = next;
            batch.push_back(std::async(std::launch::async, [&, slot] {
                if (stop) return;
                results[slot] = run_scenario(list[order[slot].second], opt);
                if (opt.fail_fast && !all_pass(results[slot])) stop = true;
            }));
        }
        for (auto& f : batch) f.get();
        if (stop) break;
    }
    std::vector<ReportRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const std::vector<ReportRow>& rows, bool timing) {
    std::ostringstream os;
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    os << "scenario,check,lhs,rhs,residual,tolerance,verdict" << (timing ? ",wall_ms" : "") << ",note\n";
    for (const auto& r : rows) {
        os << quote(r.scenario) << ',' << quote(r.check) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs)
           << ',' << format_number(r.residual) << ',' << format_number(r.tolerance) << ',' << r.verdict;
        if (timing) os << ',' << format_number(r.wall_ms);
        os << ',' << quote(r.note) << '\n';
    }
    return os.str();
}

bool all_pass(const std::vector<ReportRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.verdict != "fail"; });
}

json load_json(const std::string& s) {
    try {
        auto first = s.find_first_not_of(" \t\n");
        if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return json::parse(s);
        if (first != std::string::npos && (std::isdigit(static_cast<unsigned char>(s[first])) || s[first] == '-' || s[first] == '.'))
            return json::parse(s);
        std::ifstream in(s);
        if (!in) throw ConfigError("cannot open " + s);
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace pcalc::cli
