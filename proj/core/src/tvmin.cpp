#include "pcalc/tvmin.hpp"

#include "pcalc/errors.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(const std::vector<double>& a) {
    double s = 0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double weight_norm(const std::vector<double>& a) { return norm2(a); }

void check_shapes(const GridFunction& u, const EnergyParams& params) {
    if (u.shape != params.g.shape) throw ShapeMismatch("u and g live on different grids");
    if (params.A.size() != u.size()) throw ShapeMismatch("one field sample per cell is required");
    for (const auto& a : params.A)
        if (static_cast<int>(a.size()) != u.dim()) throw ShapeMismatch("field samples have the wrong dimension");
    if (!(params.p >= 1.0)) throw BadParams("p must lie in [1, inf]");
}

// y = K u, the per-cell discrete pairing density times h^N.
void apply_k(const GridFunction& u, const std::vector<std::vector<double>>& A, std::vector<double>& y) {
    const double hn1 = std::pow(u.h, u.dim() - 1);
    y.assign(u.size(), 0.0);
    for (std::size_t c = 0; c < u.size(); ++c) {
        double s = 0;
        for (int k = 0; k < u.dim(); ++k) {
            long n = u.forward(c, k);
            if (n >= 0 && A[c][k] != 0.0) s += A[c][k] * (u.values[n] - u.values[c]);
        }
        y[c] = hn1 * s;
    }
}

void apply_kt(const GridFunction& shape, const std::vector<std::vector<double>>& A, const std::vector<double>& y,
              std::vector<double>& out) {
    const double hn1 = std::pow(shape.h, shape.dim() - 1);
    out.assign(shape.size(), 0.0);
    for (std::size_t c = 0; c < shape.size(); ++c)
        for (int k = 0; k < shape.dim(); ++k) {
            long n = shape.forward(c, k);
            if (n < 0 || A[c][k] == 0.0) continue;
            double v = hn1 * A[c][k] * y[c];
            out[n] += v;
            out[c] -= v;
        }
}

// Euclidean projection onto the unit ball of the q-norm, q = p / (p - 1).
void project_dual_ball(std::vector<double>& z, double p) {
    if (p == 1.0) {
        for (double& v : z) v = std::clamp(v, -1.0, 1.0);
        return;
    }
    if (p == 2.0) {
        double n = norm2(z);
        if (n > 1.0)
            for (double& v : z) v /= n;
        return;
    }
    if (std::isinf(p)) {  // l1 ball
        double s = 0;
        for (double v : z) s += std::fabs(v);
        if (s <= 1.0) return;
        std::vector<double> a(z.size());
        std::transform(z.begin(), z.end(), a.begin(), [](double v) { return std::fabs(v); });
        std::sort(a.begin(), a.end(), std::greater<>());
        double cum = 0, theta = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            cum += a[i];
            double t = (cum - 1.0) / static_cast<double>(i + 1);
            if (i + 1 == a.size() || a[i + 1] <= t) {
                theta = t;
                break;
            }
        }
        for (double& v : z) v = std::copysign(std::max(std::fabs(v) - theta, 0.0), v);
        return;
    }
    const double q = p / (p - 1.0);
    auto qnorm = [&](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += std::pow(std::fabs(v), q);
        return std::pow(s, 1.0 / q);
    };
    if (qnorm(z) <= 1.0) return;
    // x_i = sign(y_i) t_i with t_i + mu q t_i^(q-1) = |y_i|; bisection on mu.
    auto solve = [&](double mu) {
        std::vector<double> x(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            double y = std::fabs(z[i]), lo = 0, hi = y;
            for (int it = 0; it < 100; ++it) {
                double t = 0.5 * (lo + hi);
                (t + mu * q * std::pow(t, q - 1.0) > y ? hi : lo) = t;
            }
            x[i] = std::copysign(0.5 * (lo + hi), z[i]);
        }
        return x;
    };
    double lo = 0, hi = 1;
    while (qnorm(solve(hi)) > 1.0) hi *= 2;
    for (int it = 0; it < 100; ++it) {
        double mu = 0.5 * (lo + hi);
        (qnorm(solve(mu)) > 1.0 ? lo : hi) = mu;
    }
    z = solve(hi);
}

std::vector<double> fidelity_weights(const EnergyParams& params) {
    const int n = params.g.dim();
    const double hn = std::pow(params.g.h, n);
    std::vector<double> w(params.A.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
        double a = weight_norm(params.A[c]);
        w[c] = a == 0.0 ? 0.0 : std::isinf(params.p) ? 1.0 : std::pow(a * hn, 1.0 / params.p);
    }
    return w;
}

}  // namespace

GridFunction::GridFunction(std::vector<int> s, double hh, double fill) : shape(std::move(s)), h(hh) {
    std::size_t n = 1;
    for (int v : shape) {
        if (v <= 0) throw BadParams("grid shape must be positive");
        n *= static_cast<std::size_t>(v);
    }
    if (!(h > 0)) throw BadParams("grid spacing must be positive");
    values.assign(n, fill);
}

long GridFunction::forward(std::size_t cell, int axis) const {
    std::size_t stride = 1;
    for (int k = dim() - 1; k > axis; --k) stride *= static_cast<std::size_t>(shape[k]);
    std::size_t i = (cell / stride) % static_cast<std::size_t>(shape[axis]);
    if (i + 1 >= static_cast<std::size_t>(shape[axis])) return -1;
    return static_cast<long>(cell + stride);
}

std::vector<double> GridFunction::cell_center(std::size_t cell, const std::vector<double>& origin) const {
    std::vector<double> x(dim());
    for (int k = dim() - 1; k >= 0; --k) {
        std::size_t i = cell % static_cast<std::size_t>(shape[k]);
        cell /= static_cast<std::size_t>(shape[k]);
        x[k] = origin[k] + (static_cast<double>(i) + 0.5) * h;
    }
    return x;
}

std::vector<std::vector<double>> sample_field(const FieldND& field, const GridFunction& g,
                                              const std::vector<double>& origin) {
    if (field.dim != g.dim()) throw ShapeMismatch("field and grid dimensions differ");
    if (!field.density) throw BadParams(field.name + " has no density part to sample");
    std::vector<std::vector<double>> a(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) a[c] = field.density(g.cell_center(c, origin));
    return a;
}

double tv_term(const GridFunction& u, const std::vector<std::vector<double>>& A) {
    std::vector<double> y;
    apply_k(u, A, y);
    double s = 0;
    for (double v : y) s += std::fabs(v);
    return s;
}

double fidelity_term(const GridFunction& u, const EnergyParams& params) {
    const double hn = std::pow(u.h, u.dim());
    if (std::isinf(params.p)) {
        double m = 0;
        for (std::size_t c = 0; c < u.size(); ++c)
            if (weight_norm(params.A[c]) > 0) m = std::max(m, std::fabs(u.values[c] - params.g.values[c]));
        return m;
    }
    double s = 0;
    for (std::size_t c = 0; c < u.size(); ++c)
        s += std::pow(std::fabs(u.values[c] - params.g.values[c]), params.p) * weight_norm(params.A[c]) * hn;
    return std::pow(s, 1.0 / params.p);
}

double energy(const GridFunction& u, const EnergyParams& params) {
    check_shapes(u, params);
    return tv_term(u, params.A) + fidelity_term(u, params);
}

MinimizeResult minimize(const EnergyParams& params) {
    check_shapes(params.g, params);
    const std::size_t n = params.g.size();
    const std::vector<double> w = fidelity_weights(params);
    std::vector<bool> frozen(n);
    for (std::size_t c = 0; c < n; ++c) frozen[c] = weight_norm(params.A[c]) == 0.0;

    // K = [K_1; diag(w)], with K_1 from apply_k.
    auto op = [&](const GridFunction& u, std::vector<double>& y, std::vector<double>& z) {
        apply_k(u, params.A, y);
        z.resize(n);
        for (std::size_t c = 0; c < n; ++c) z[c] = w[c] * u.values[c];
    };
    auto op_t = [&](const std::vector<double>& y, const std::vector<double>& z, std::vector<double>& out) {
        apply_kt(params.g, params.A, y, out);
        for (std::size_t c = 0; c < n; ++c) out[c] += w[c] * z[c];
    };

    double tau = params.tau, sigma = params.sigma;
    if (tau <= 0 || sigma <= 0) {
        GridFunction v = params.g;
        for (std::size_t c = 0; c < n; ++c) v.values[c] = 1.0 + 0.37 * std::sin(1.0 + 3.1 * c);
        double lam = 1.0;
        std::vector<double> y, z, back;
        for (int it = 0; it < 100; ++it) {
            op(v, y, z);
            op_t(y, z, back);
            lam = norm2(back);
            if (lam == 0) break;
            for (std::size_t c = 0; c < n; ++c) v.values[c] = back[c] / lam;
        }
        double L = std::sqrt(std::max(lam, 1e-300)) * 1.01;
        tau = sigma = 0.99 / L;
    }

    std::vector<double> b(n);
    for (std::size_t c = 0; c < n; ++c) b[c] = w[c] * params.g.values[c];

    MinimizeResult r;
    GridFunction u = params.g, ubar = params.g, best = params.g;
    double best_e = energy(u, params);
    std::vector<double> y(n, 0.0), z(n, 0.0), ky, kz, kt;
    r.trace.reserve(params.max_iter + 1);
    r.trace.push_back(best_e);
    std::vector<double> y_prev, z_prev;
    for (int it = 1; it <= params.max_iter; ++it) {
        y_prev = y;
        z_prev = z;
        op(ubar, ky, kz);
        for (std::size_t c = 0; c < n; ++c) y[c] = std::clamp(y[c] + sigma * ky[c], -1.0, 1.0);
        for (std::size_t c = 0; c < n; ++c) z[c] += sigma * (kz[c] - b[c]);
        project_dual_ball(z, params.p);
        op_t(y, z, kt);
        // fixed-point residual of the primal-dual step
        double res = 0;
        for (std::size_t c = 0; c < n; ++c) {
            double prev = u.values[c];
            double next = frozen[c] ? params.g.values[c] : prev - tau * kt[c];
            u.values[c] = next;
            ubar.values[c] = 2 * next - prev;
            res = std::max({res, std::fabs(next - prev) / tau, std::fabs(y[c] - y_prev[c]) / sigma,
                            std::fabs(z[c] - z_prev[c]) / sigma});
        }
        double e = energy(u, params);
        if (e < best_e) {
            best_e = e;
            best = u;
        }
        r.trace.push_back(best_e);
        r.iterations = it;
        if (it >= params.window) {
            double old = r.trace[it - params.window];
            if (old - best_e <= params.tol * std::max(1.0, std::fabs(best_e)) && res <= params.residual_tol) {
                r.converged = true;
                break;
            }
        }
    }
    // Never worse than the trivial candidates.
    double mean = std::accumulate(params.g.values.begin(), params.g.values.end(), 0.0) / static_cast<double>(n);
    for (double fill : {0.0, mean}) {
        GridFunction c = params.g;
        for (std::size_t i = 0; i < n; ++i)
            if (!frozen[i]) c.values[i] = fill;
        double e = energy(c, params);
        if (e < best_e) {
            best_e = e;
            best = c;
        }
    }
    r.trace.push_back(best_e);
    r.u = best;
    if (!r.converged && params.throw_on_budget)
        throw BudgetExceeded("no stagnation after " + std::to_string(params.max_iter) +
                             " iterations, best energy " + std::to_string(best_e));
    return r;
}

LscReport lsc_harness(const PiecewiseFunction1D& A, const std::function<PiecewiseFunction1D(int)>& sequence,
                      const PiecewiseFunction1D& limit, const LambdaSelector& lam, const std::vector<int>& ks,
                      double tol) {
    if (ks.empty()) throw BadParams("empty sequence");
    LscReport r;
    r.k = ks;
    Measure1D da = derivative(A);
    PiecewiseFunction1D last;
    for (int k : ks) {
        last = sequence(k);
        r.masses.push_back(pairing_1d(A, last, lam).pairing.total_variation());
    }
    r.limit_mass = pairing_1d(A, limit, lam).pairing.total_variation();
    r.liminf_estimate = *std::min_element(r.masses.begin() + static_cast<long>(r.masses.size() / 2), r.masses.end());
    double d = 0;
    for (const auto& a : da.atoms()) {
        ExtReal lk = lambda_representative(last, lam, a.x), lu = lambda_representative(limit, lam, a.x);
        d += std::fabs(lk.value() - lu.value()) * std::fabs(a.w.value());
    }
    for (const auto& part : da.density()) {
        auto f = [&](double x) { return std::fabs(last.eval(x) - limit.eval(x)) * std::fabs(part.piece.eval(x)); };
        d += integrate_1d(f, to_double(part.lo), to_double(part.hi)).value;
    }
    r.rep_distance = d;
    r.representatives_converge = d <= 1e-6;
    r.holds = r.limit_mass <= r.liminf_estimate + tol;
    return r;
}

PiecewiseFunction1D arctan_sequence(const Rational& a, const Rational& b, int k) {
    return PiecewiseFunction1D(Interval1D(-1, 1), {Rational(0)},
                               {Piece::arctan(b, static_cast<double>(k)), Piece::arctan(a, static_cast<double>(k))});
}

PiecewiseFunction1D arctan_limit(const Rational& a, const Rational& b) {
    Rational half_pi = to_rational(M_PI / 2);
    return PiecewiseFunction1D(Interval1D(-1, 1), {Rational(0)},
                               {Piece::constant(-b * half_pi), Piece::constant(a * half_pi)}, {{Rational(0), Real(0)}});
}

CompactnessReport compactness_failure_demo(int dim, const Profile1D& f, const std::vector<int>& ks) {
    if (dim < 2) throw BadParams("the compactness counterexample needs N >= 2");
    FieldND field = catalog("transversal", {{"N", dim}});
    // Same field with the requested profile; the catalog form keeps the traces.
    field.density = [dim, f](const std::vector<double>& x) {
        std::vector<double> a(dim, 0.0);
        a[0] = f.value(x[dim - 1]);
        return a;
    };
    field.trace = [dim, f](int axis, const std::vector<double>& x, int) { return axis == 0 ? f.value(x[dim - 1]) : 0.0; };
    field.cuts.assign(dim, {});
    field.cuts[dim - 1] = f.breakpoints();
    double s = f.sup_norm();
    field.essential_sup = s;
    field.sup_on = [s](const Box&) { return s; };
    field.bind_traces();

    CompactnessReport r;
    r.dim = dim;
    r.limit = std::pow(2.0, dim - 1) * std::fabs(f.value(0.0));
    LambdaSelector half = LambdaSelector::constant(0.5);
    for (int k : ks) {
        if (k < 1) throw BadParams("k >= 1 required");
        std::vector<double> lo(dim, -1.0), hi(dim, 1.0);
        lo[dim - 1] = 0.0;
        hi[dim - 1] = 1.0 / k;
        BoxSet e = BoxSet::single(Box(lo, hi));
        StepFunctionND chi = set_function(field, e, half);
        std::vector<double> vals = chi.values();
        for (double& v : vals) v *= k;
        StepFunctionND u(chi.grid(), chi.domain(), vals);
        MeasureND pm = pairing_measure(field, u, half);
        QuadOptions q;
        q.rel_tol = 1e-13;
        double mass = k * integrate_box([&](const std::vector<double>& x) { return std::fabs(f.value(x[dim - 1])); },
                                        lo, hi, q, field.cuts)
                              .value;
        r.k.push_back(k);
        r.masses.push_back(mass);
        r.pairing_zero.push_back(pm.is_zero());
        r.seminorms.push_back(mass + pm.total_variation());
    }
    double tail = r.masses.empty() ? 0.0 : *std::min_element(r.masses.begin(), r.masses.end());
    r.failure_confirmed = r.limit > 0 && tail > 0.5 * r.limit;
    return r;
}

}  // namespace pcalc
