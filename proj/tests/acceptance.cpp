// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.
#include "cd_oracle.hpp"
#include "runner.hpp"
#include "support.hpp"

#include "pcalc/bv1d.hpp"
#include "pcalc/coarea.hpp"
#include "pcalc/errors.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/tvmin.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace pcalc;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
    void require(bool c, const std::string& why) {
        if (!c) {
            ok = false;
            detail << " FAILED(" << why << ")";
        }
    }
};

const Interval1D kUnit(-1, 1);

BoxSet box(std::vector<double> lo, std::vector<double> hi) { return BoxSet::single(Box(std::move(lo), std::move(hi))); }

Outcome identity_suite() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const double tol[] = {1e-10, 1e-8, 1e-7};
    for (int n = 1; n <= 3; ++n) {
        auto r = cli::identity_integral(n);
        o.detail << " n=" << n << " rel=" << r.residual;
        o.require(r.residual <= tol[n - 1], "n=" + std::to_string(n));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail << " time=" << secs << "s";
    o.require(secs < 30, "runtime");
    return o;
}

Outcome radial_atom() {
    Outcome o;
    double worst = 0;
    for (int n : {2, 3}) {
        FieldND f = catalog("radial", {{"N", n}});
        BoxSet e = BoxSet::single(Box::cube(n, 0, 1));
        for (double l : {0.0, 0.25, 0.5, 1.0}) {
            MeasureND m = pairing_measure_box(f, e, LambdaSelector(l));
            Real w = m.atom_weight(std::vector<double>(n, 0.0));
            o.require(w == Real(Rational(1, 1 << n) - to_rational(l)), "atom N=" + std::to_string(n));
            worst = std::max(worst, gauss_green_check(f, e, LambdaSelector(l)).residual);
        }
    }
    o.detail << " atoms exact, worst Gauss-Green residual=" << worst;
    o.require(worst <= 1e-8, "Gauss-Green");
    return o;
}

Poly random_poly(std::mt19937_64& g) {
    std::uniform_int_distribution<int> deg(0, 3), num(-9, 9), den(1, 4);
    std::vector<Rational> c(deg(g) + 1);
    for (auto& v : c) v = Rational(num(g), den(g));
    return Poly(c);
}

Outcome exact_engine() {
    Outcome o;
    PiecewiseFunction1D u(kUnit, {0}, {Piece::log_abs(1, 0, -1), Piece::log_abs(1, 0, 1)});
    auto a = PiecewiseFunction1D::indicator(kUnit, Rational(1, 2), 1);
    Measure1D expect = Measure1D::with_density(kUnit, Rational(1, 2), 1, Piece::recip(1, 0, 1));
    for (double l : {0.0, 0.5, 1.0}) {
        auto r = pairing_1d(a, u, LambdaSelector(l));
        o.require(r.pairing == expect && r.pairing.atoms().empty(), "log example");
    }
    auto g = testing_support::rng(3);
    std::uniform_int_distribution<int> cut(1, 15);
    int exact = 0;
    for (int i = 0; i < 20; ++i) {
        std::vector<Rational> abp;
        for (int k = -7; k <= 7; ++k)
            if (cut(g) % 4 == 0) abp.emplace_back(k, 8);
        std::vector<Piece> ap;
        for (std::size_t k = 0; k <= abp.size(); ++k) ap.emplace_back(random_poly(g));
        PiecewiseFunction1D A(kUnit, abp, ap);
        std::vector<Rational> ubp{Rational(-3, 4), Rational(-3, 4) + Rational(cut(g), 16), Rational(5, 8)};
        PiecewiseFunction1D w(kUnit, ubp, {Piece(), Piece(random_poly(g)), Piece(random_poly(g)), Piece()});
        LambdaSelector lam(std::uniform_real_distribution<double>(0, 1)(g));
        if (integrate_lambda(w, lam, derivative(A)) == -pairing_1d(A, w, lam).pairing.total_mass()) ++exact;
    }
    o.detail << " log example exact, compact-support identity exact on " << exact << "/20";
    o.require(exact == 20, "compact support");
    return o;
}

Outcome arctan_remark() {
    Outcome o;
    auto A = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    const Rational a(1, 2), b(3, 2);
    double worst = 0;
    for (int k : {1, 10, 1000, 1000000}) {
        auto p = pairing_1d(A, arctan_sequence(a, b, k), LambdaSelector(0.5)).pairing;
        o.require(p.atoms().empty() && p.density().size() == 1, "density form");
        double m = p.total_mass().value();
        worst = std::max(worst, std::fabs(m - 0.5 * std::atan(static_cast<double>(k))));
        if (k == 1000000) {
            o.detail << " |mass(1e6) - a pi/2|=" << std::fabs(m - 0.5 * M_PI / 2);
            o.require(std::fabs(m - 0.5 * M_PI / 2) <= 1e-6, "convergence");
        }
    }
    o.require(worst <= 1e-14, "a atan(k)");
    double catom = 0;
    for (double l : {0.0, 0.25, 0.5, 1.0}) {
        auto p = pairing_1d(A, arctan_limit(a, b), LambdaSelector(l)).pairing;
        double atom = p.measure_of(BorelSet1D::point(0)).value();
        catom = std::max(catom, std::fabs(atom - (1 - l) * 2.0 * M_PI / 2));
    }
    o.detail << " mass error=" << worst << " limit atom error=" << catom;
    o.require(catom <= 1e-12, "limit atom");
    return o;
}

struct BatteryCase {
    std::string field;
    nlohmann::json params;
    BoxSet set;
    LambdaSelector lam;
};

std::vector<BatteryCase> battery() {
    std::vector<BatteryCase> out;
    std::vector<std::pair<std::string, nlohmann::json>> fields{
        {"constant", {{"v", {0.6, -0.8}}}},
        {"heaviside", {{"N", 2}}},
        {"transversal", {{"N", 2}, {"f", {{"kind", "bump"}, {"center", 0.1}, {"radius", 1.5}}}}},
        {"staircase", {{"N", 2}}},
        {"measure-components", {{"N", 2}, {"y", {0.25, 0.5}}}}};
    std::vector<BoxSet> sets{box({-0.5, -0.5}, {0.5, 0.5}), box({0, 0}, {1, 1}), box({-0.75, 0.25}, {0.25, 0.75}),
                             BoxSet(2, {Box({-0.5, -0.5}, {0, 0}), Box({0, 0}, {0.5, 0.5})})};
    LambdaSelector regions(0.5);
    regions.add_region({-1, -1}, {0, 1}, 0.2);
    for (const auto& [name, params] : fields)
        for (const auto& s : sets)
            for (const auto& lam : {LambdaSelector(0.3), regions}) out.push_back({name, params, s, lam});
    out.push_back({"radial", {{"N", 2}}, box({0, 0}, {1, 1}), LambdaSelector(0.4)});
    out.push_back({"radial", {{"N", 3}}, BoxSet::single(Box::cube(3, 0, 1)), LambdaSelector(0.7)});
    return out;
}

Outcome identity_battery() {
    Outcome o;
    double worst = 0;
    int count = 0;
    for (const auto& c : battery()) {
        FieldND f = catalog(c.field, c.params);
        worst = std::max(worst, complement_check(f, c.set, c.lam));
        worst = std::max(worst, convex_combination_check(f, c.set, 0.35));
        if (f.summable()) {
            worst = std::max(worst, lambda_difference_check(f, c.set, c.lam, LambdaSelector(0.9)));
            worst = std::max(worst, boundary_divergence_check(f, c.set));
        }
        ++count;
    }
    o.detail << " scenarios=" << count << " worst residual=" << worst;
    o.require(count >= 40 && worst <= 1e-8, "battery");
    return o;
}

Outcome additivity() {
    Outcome o;
    for (int n : {2, 3}) {
        std::vector<double> lo(n, 0.0), hi(n, 1.0);
        lo[0] = -1;
        hi[0] = 0;
        FieldND h = catalog("heaviside", {{"N", n}}), r = catalog("radial", {{"N", n}});
        for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            Rational q = to_rational(l);
            MeasureND d = additivity_defect(h, box(lo, hi), BoxSet::single(Box::cube(n, 0, 1)), LambdaSelector(l));
            MeasureND expect(n);
            std::vector<double> flo(n, 0.0), fhi(n, 1.0);
            fhi[0] = 0;
            expect.add_face(0, 0.0, Box(flo, fhi), PartDensity::constant(-(1 - 2 * q)));
            o.require(MeasureND::distance(d, expect.normalized()) == 0.0, "heaviside");
            MeasureND c = additivity_defect(r, BoxSet::single(Box::cube(n, 0, 1)), BoxSet::single(Box::cube(n, -1, 0)),
                                            LambdaSelector(l));
            o.require(c.parts().empty() && c.atom_weight(std::vector<double>(n, 0.0)) == Real(q) &&
                          c.atoms().size() == (l == 0 ? 0u : 1u),
                      "radial");
        }
    }
    o.detail << " heaviside face and radial corner atom exact for N=2,3";
    return o;
}

Outcome coarea() {
    Outcome o;
    std::mt19937_64 g(testing_support::seed());
    std::uniform_real_distribution<double> ul(0, 1);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        auto inst = cli::random_coarea_instance(g);
        worst = std::max(worst, coarea_check(inst.A, inst.u, LambdaSelector(ul(g)), inst.phi).residual);
    }
    o.detail << " worst residual=" << worst;
    o.require(worst <= 1e-8, "equality");
    auto A = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    PiecewiseFunction1D u(kUnit, {0}, {Piece(Poly({0, -1})), Piece::constant(1)});
    auto phi = PiecewiseFunction1D::single(kUnit, Piece(Poly({1, 0, -1})));
    bool detected = false;
    try {
        coarea_check(A, u, LambdaSelector(0.5), phi);
    } catch (const HypothesisFailed&) {
        detected = true;
    }
    o.detail << " violation " << (detected ? "detected" : "missed");
    o.require(detected, "violation");
    return o;
}

Outcome staircase() {
    Outcome o;
    FieldND f = catalog("staircase", {{"N", 2}});
    double prev = INFINITY;
    for (int k : {5, 10, 20}) {
        auto r = staircase_gauss_green(f, k);
        o.detail << " K=" << k << ":" << r.residual << "<=" << r.tail_bound;
        o.require(r.residual <= r.tail_bound && r.residual < prev, "K=" + std::to_string(k));
        prev = r.residual;
    }
    return o;
}

Outcome ac_bound() {
    Outcome o;
    int count = 0;
    double slack = INFINITY;
    for (const auto& c : battery()) {
        FieldND f = catalog(c.field, c.params);
        if (!f.bounded()) continue;
        for (const Box& w : {Box::cube(2, -1, 1), Box::cube(2, -2, 2)}) {
            auto r = ac_bound_check(f, c.set, c.lam, w);
            o.require(r.holds, c.field);
            if (r.rhs > 0) slack = std::min(slack, r.rhs / std::max(r.lhs, 1e-300));
            ++count;
        }
    }
    o.detail << " bounded scenarios=" << count << " min rhs/lhs=" << slack;
    return o;
}

Outcome probes() {
    Outcome o;
    auto v = vortex_probe(2, 10);
    o.detail << " vortex slope=" << v.slope_log << " " << v.verdict;
    o.require(v.slope_log > 0 && v.not_measure, "vortex");
    auto s = segment_probe(1, 8);
    double deficit = 0;
    for (std::size_t i = 0; i < s.k.size(); ++i) deficit = std::max(deficit, 2.0 * s.k[i] - std::fabs(s.values[i]));
    o.detail << "; segment max(2k - value)=" << deficit << " " << s.verdict;
    o.require(deficit <= 1.0 && s.not_measure, "segment");
    return o;
}

Outcome compactness() {
    Outcome o;
    const int k = 100000;
    for (auto [n, f, f0] : {std::tuple<int, Profile1D, double>{2, Profile1D::constant(1.0), 1.0},
                            {3, Profile1D::bump(0.0, 1.0), 1.0}, {2, Profile1D::bump(0.2, 0.5), 0.592704}}) {
        auto r = compactness_failure_demo(n, f, {1, 10, k});
        double scale = std::ldexp(1.0, n - 1);
        for (std::size_t i = 0; i < r.k.size(); ++i) {
            int kk = r.k[i];
            std::vector<double> nodes{0.0};
            for (double b : f.breakpoints())
                if (b > 0 && b < 1.0 / kk) nodes.push_back(b);
            nodes.push_back(1.0 / kk);
            double expect = 0;
            for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
                expect += testing_support::gauss_legendre([&](double x) { return std::fabs(f.value(x)); }, nodes[j],
                                                          nodes[j + 1], 16);
            expect *= scale * kk;
            o.require(std::fabs(r.masses[i] - expect) <= 1e-12 * std::max(1.0, expect), "mass");
            o.require(r.pairing_zero[i], "pairing zero");
        }
        double lim = scale * f0;
        double gap = r.masses.back() - lim;
        o.detail << " N=" << n << " |mass(1e5) - limit|=" << std::fabs(gap);
        o.require(std::fabs(r.limit - lim) <= 1e-15, "limit");
        const double h = 1e-6, slope = (f.value(h) - f.value(-h)) / (2 * h);
        if (slope == 0.0) {
            o.require(std::fabs(gap) <= 1e-6, "limit");
        } else {
            // k int_0^{1/k} f = f(0) + f'(0)/(2k) + O(k^-2)
            double first = scale * slope / (2.0 * k);
            o.detail << " (first order " << first << ")";
            o.require(std::fabs(gap - first) <= 1e-3 * std::fabs(first), "rate");
        }
    }
    return o;
}

Outcome tvmin() {
    Outcome o;
    auto g = testing_support::rng(12);
    std::uniform_real_distribution<double> u(0, 1), ang(0, 2 * M_PI);
    double worst = 0;
    int cases = 0, convex_checks = 0;
    auto run = [&](std::vector<int> shape, std::vector<std::vector<double>> a) {
        EnergyParams p;
        p.p = 2;
        p.g = GridFunction(shape, 1.0 / shape[0]);
        for (auto& v : p.g.values) v = u(g);
        p.A = std::move(a);
        auto r = minimize(p);
        o.require(std::is_sorted(r.trace.rbegin(), r.trace.rend()), "trace monotone");
        auto f = [&](const std::vector<double>& x) {
            GridFunction w = p.g;
            w.values = x;
            return energy(w, p);
        };
        // smoothed E_2 written from the definition: forward differences, |A|-weighted L^2 fidelity
        const int dim = static_cast<int>(shape.size());
        const double h = p.g.h, hn1 = std::pow(h, dim - 1), hn = hn1 * h;
        auto fe = [&](double eps, const std::vector<double>& x) {
            double tv = 0, fid = 0;
            for (std::size_t c = 0; c < x.size(); ++c) {
                std::vector<int> idx(dim);
                std::size_t rest = c;
                for (int k = dim - 1; k >= 0; --k) idx[k] = static_cast<int>(rest % shape[k]), rest /= shape[k];
                double s = 0, stride = 1, wn = 0;
                for (int k = dim - 1; k >= 0; --k) {
                    if (idx[k] + 1 < shape[k]) s += p.A[c][k] * (x[c + static_cast<std::size_t>(stride)] - x[c]);
                    stride *= shape[k];
                }
                for (double a : p.A[c]) wn += a * a;
                tv += std::sqrt(hn1 * hn1 * s * s + eps * eps) - eps;
                fid += (x[c] - p.g.values[c]) * (x[c] - p.g.values[c]) * std::sqrt(wn) * hn;
            }
            return tv + std::sqrt(fid + eps * eps) - eps;
        };
        o.require(std::fabs(fe(0.0, r.u.values) - f(r.u.values)) <= 1e-12, "energy definition");
        double e_cd = f(testing_support::smoothed_coordinate_descent(fe, f, p.g.values, -0.5, 1.5));
        worst = std::max(worst, std::fabs(r.trace.back() - e_cd));
        for (int i = 0; i < 10; ++i) {
            std::vector<double> x(p.g.size()), y(p.g.size()), m(p.g.size());
            for (std::size_t c = 0; c < x.size(); ++c) x[c] = 2 * u(g) - 0.5, y[c] = 2 * u(g) - 0.5, m[c] = 0.5 * (x[c] + y[c]);
            o.require(f(m) <= 0.5 * (f(x) + f(y)) + 1e-12, "convexity");
            ++convex_checks;
        }
        ++cases;
    };
    for (int i = 0; i < 12; ++i) {
        std::vector<std::vector<double>> a(3);
        for (auto& v : a) v = {i < 4 ? 1.0 : 2 * u(g) - 1};
        run({3}, a);
    }
    for (int i = 0; i < 12; ++i) {
        std::vector<std::vector<double>> a(9);
        double t = ang(g);
        for (auto& v : a) {
            if (i >= 6) t = ang(g);
            v = {std::cos(t), std::sin(t)};
        }
        run({3, 3}, a);
    }
    o.detail << " instances=" << cases << " max |E - E_cd|=" << worst << " convexity checks=" << convex_checks;
    o.require(worst <= 1e-4, "oracle");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity integrals n=1,2,3", identity_suite},
        {"radial pairing atom and Gauss-Green", radial_atom},
        {"exact 1D engine", exact_engine},
        {"arctan sequence and glued limit", arctan_remark},
        {"identity battery over catalog x boxes", identity_battery},
        {"additivity defects", additivity},
        {"coarea equality and hypothesis detection", coarea},
        {"staircase Gauss-Green", staircase},
        {"absolute-continuity bound", ac_bound},
        {"non-measure probes", probes},
        {"compactness failure", compactness},
        {"tvmin against coordinate descent", tvmin},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << " exception: " << e.what();
        }
        std::printf("[%s] %zu %s:%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
