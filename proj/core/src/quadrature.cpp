#include "pcalc/quadrature.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace pcalc {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// The 15 Kronrod abscissae on [-1, 1] with both weight sets (Gauss weight 0
// where the node is Kronrod-only).
struct Rule15 {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
    Rule15() {
        for (int i = 0; i < 7; ++i) {
            x[i] = -kXgk[i];
            x[14 - i] = kXgk[i];
            wk[i] = wk[14 - i] = kWgk[i];
            double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
            wg[i] = wg[14 - i] = g;
        }
        x[7] = 0.0;
        wk[7] = kWgk[7];
        wg[7] = kWg[3];
    }
};

const Rule15& rule15() {
    static const Rule15 r;
    return r;
}

struct Region {
    std::vector<double> lo, hi;  // effective coordinates only
    double value = 0.0;
    double error = 0.0;
    int split_axis = 0;
};

struct ByError {
    bool operator()(const Region& a, const Region& b) const { return a.error < b.error; }
};

class BoxIntegrator {
public:
    BoxIntegrator(const FnND& f, const std::vector<double>& lo, const std::vector<double>& hi)
        : f_(f), point_(lo) {
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (hi[k] > lo[k]) free_.push_back(k);
    }

    std::size_t dim() const { return free_.size(); }
    const std::vector<std::size_t>& free_axes() const { return free_; }
    long evals() const { return evals_; }

    double eval_at(const std::vector<double>& y) {
        for (std::size_t i = 0; i < free_.size(); ++i) point_[free_[i]] = y[i];
        ++evals_;
        double v = f_(point_);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrand not finite at (";
            for (std::size_t i = 0; i < point_.size(); ++i) os << (i ? "," : "") << point_[i];
            os << ")";
            throw QuadratureFailure(os.str());
        }
        return v;
    }

    void apply(Region& r) {
        switch (dim()) {
            case 1: rule_1d(r); break;
            case 2: rule_2d(r); break;
            default: rule_genz_malik(r); break;
        }
    }

private:
    void rule_1d(Region& r) {
        const auto& R = rule15();
        double c = 0.5 * (r.lo[0] + r.hi[0]), h = 0.5 * (r.hi[0] - r.lo[0]);
        double k = 0, g = 0;
        std::vector<double> y(1);
        for (int i = 0; i < 15; ++i) {
            y[0] = c + h * R.x[i];
            double v = eval_at(y);
            k += R.wk[i] * v;
            g += R.wg[i] * v;
        }
        r.value = k * h;
        r.error = std::fabs(k - g) * h;
        r.split_axis = 0;
    }

    void rule_2d(Region& r) {
        const auto& R = rule15();
        double c0 = 0.5 * (r.lo[0] + r.hi[0]), h0 = 0.5 * (r.hi[0] - r.lo[0]);
        double c1 = 0.5 * (r.lo[1] + r.hi[1]), h1 = 0.5 * (r.hi[1] - r.lo[1]);
        double kk = 0, gk = 0, kg = 0, gg = 0;
        std::vector<double> y(2);
        for (int i = 0; i < 15; ++i) {
            y[0] = c0 + h0 * R.x[i];
            double rk = 0, rg = 0;
            for (int j = 0; j < 15; ++j) {
                y[1] = c1 + h1 * R.x[j];
                double v = eval_at(y);
                rk += R.wk[j] * v;
                rg += R.wg[j] * v;
            }
            kk += R.wk[i] * rk;
            gk += R.wg[i] * rk;
            kg += R.wk[i] * rg;
            gg += R.wg[i] * rg;
        }
        double area = h0 * h1;
        r.value = kk * area;
        double e0 = std::fabs(kk - gk) * area;  // resolution along axis 0
        double e1 = std::fabs(kk - kg) * area;
        r.error = std::max(std::fabs(kk - gg) * area, std::max(e0, e1));
        r.split_axis = e0 >= e1 ? 0 : 1;
        (void)gg;
    }

    void rule_genz_malik(Region& r) {
        const std::size_t d = dim();
        const double dd = static_cast<double>(d);
        const double l2 = std::sqrt(9.0 / 70.0), l4 = std::sqrt(9.0 / 10.0), l5 = std::sqrt(9.0 / 19.0);
        const double w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
        const double w2 = 980.0 / 6561.0;
        const double w3 = (1820.0 - 400.0 * dd) / 19683.0;
        const double w4 = 200.0 / 19683.0;
        const double w5 = 6859.0 / 19683.0 / std::ldexp(1.0, static_cast<int>(d));
        const double v1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
        const double v2 = 245.0 / 486.0;
        const double v3 = (265.0 - 100.0 * dd) / 1458.0;
        const double v4 = 25.0 / 729.0;

        std::vector<double> c(d), h(d), y(d);
        double vol = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = 0.5 * (r.lo[i] + r.hi[i]);
            h[i] = 0.5 * (r.hi[i] - r.lo[i]);
            vol *= h[i];
        }
        y = c;
        const double f0 = eval_at(y);
        double s2 = 0, s3 = 0, s4 = 0, s5 = 0;
        double best = -1;
        std::size_t axis = 0;
        for (std::size_t i = 0; i < d; ++i) {
            y = c;
            y[i] = c[i] + l2 * h[i];
            double a = eval_at(y);
            y[i] = c[i] - l2 * h[i];
            double b = eval_at(y);
            y[i] = c[i] + l4 * h[i];
            double a4 = eval_at(y);
            y[i] = c[i] - l4 * h[i];
            double b4 = eval_at(y);
            s2 += a + b;
            s3 += a4 + b4;
            double diff = std::fabs(a + b - 2 * f0 - (a4 + b4 - 2 * f0) / 7.0);
            if (diff > best + 1e-14 * std::fabs(best)) {
                best = diff;
                axis = i;
            }
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                for (int si = -1; si <= 1; si += 2)
                    for (int sj = -1; sj <= 1; sj += 2) {
                        y = c;
                        y[i] = c[i] + si * l4 * h[i];
                        y[j] = c[j] + sj * l4 * h[j];
                        s4 += eval_at(y);
                    }
        const std::size_t corners = std::size_t{1} << d;
        for (std::size_t m = 0; m < corners; ++m) {
            for (std::size_t i = 0; i < d; ++i) y[i] = c[i] + (((m >> i) & 1u) ? l5 : -l5) * h[i];
            s5 += eval_at(y);
        }
        double i7 = w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5;
        double i5 = v1 * f0 + v2 * s2 + v3 * s3 + v4 * s4;
        double scale = vol * std::ldexp(1.0, static_cast<int>(d));
        r.value = i7 * scale;
        r.error = std::fabs(i7 - i5) * scale;
        r.split_axis = static_cast<int>(axis);
    }

    const FnND& f_;
    std::vector<double> point_;
    std::vector<std::size_t> free_;
    long evals_ = 0;
};

std::vector<double> axis_nodes(double lo, double hi, const std::vector<double>* cuts) {
    std::vector<double> nodes{lo};
    if (cuts)
        for (double c : *cuts)
            if (c > lo && c < hi) nodes.push_back(c);
    nodes.push_back(hi);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace

QuadResult integrate_box(const FnND& f, const std::vector<double>& lo, const std::vector<double>& hi,
                         const QuadOptions& opt, const std::vector<std::vector<double>>& cuts) {
    if (lo.size() != hi.size()) throw InvalidArgument("integrate_box: lo/hi size mismatch");
    QuadResult res;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (!(hi[k] >= lo[k])) return res;  // empty box
        if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
            throw InvalidArgument("integrate_box: box must be bounded");
    }
    BoxIntegrator bi(f, lo, hi);
    const auto& free = bi.free_axes();
    const std::size_t d = free.size();
    if (d == 0) {
        res.value = bi.eval_at({});
        res.evals = 1;
        return res;
    }

    // Initial partition from the cut lists.
    std::vector<std::vector<double>> nodes(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t k = free[i];
        nodes[i] = axis_nodes(lo[k], hi[k], k < cuts.size() ? &cuts[k] : nullptr);
    }
    std::priority_queue<Region, std::vector<Region>, ByError> heap;
    std::vector<std::size_t> idx(d, 0);
    double total = 0, err = 0;
    int regions = 0;
    while (true) {
        Region r;
        r.lo.resize(d);
        r.hi.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            r.lo[i] = nodes[i][idx[i]];
            r.hi[i] = nodes[i][idx[i] + 1];
        }
        bi.apply(r);
        total += r.value;
        err += r.error;
        heap.push(std::move(r));
        ++regions;
        std::size_t i = 0;
        while (i < d && ++idx[i] + 1 >= nodes[i].size()) idx[i++] = 0;
        if (i == d) break;
    }

    std::vector<Region> frozen;  // too small to split further
    while (!heap.empty()) {
        double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
        if (err <= tol || regions >= opt.max_regions) break;
        Region r = heap.top();
        heap.pop();
        int ax = r.split_axis;
        double mid = 0.5 * (r.lo[ax] + r.hi[ax]);
        if (!(mid > r.lo[ax] && mid < r.hi[ax])) {
            frozen.push_back(std::move(r));
            continue;
        }
        Region a = r, b = r;
        a.hi[ax] = mid;
        b.lo[ax] = mid;
        bi.apply(a);
        bi.apply(b);
        total += a.value + b.value - r.value;
        err += a.error + b.error - r.error;
        heap.push(std::move(a));
        heap.push(std::move(b));
        regions += 1;
    }

    // Re-sum to avoid drift from the incremental updates.
    total = 0;
    err = 0;
    std::vector<Region> all;
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    for (auto& r : frozen) all.push_back(std::move(r));
    std::sort(all.begin(), all.end(), [](const Region& a, const Region& b) {
        return std::fabs(a.value) < std::fabs(b.value);
    });
    for (const auto& r : all) {
        total += r.value;
        err += r.error;
    }
    res.value = total;
    res.error = err;
    res.evals = bi.evals();
    res.regions = regions;
    double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    res.converged = err <= tol;
    if (!res.converged && opt.throw_on_failure) {
        std::ostringstream os;
        os << "adaptive cubature did not reach tolerance: estimate " << total << ", error " << err
           << ", tol " << tol << ", regions " << regions;
        throw QuadratureFailure(os.str());
    }
    return res;
}

QuadResult integrate_1d(const Fn1D& f, double a, double b, const QuadOptions& opt, const std::vector<double>& cuts) {
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate_1d(f, b, a, opt, cuts);
        r.value = -r.value;
        return r;
    }
    FnND g = [&f](const std::vector<double>& x) { return f(x[0]); };
    return integrate_box(g, {a}, {b}, opt, {cuts});
}

QuadResult integrate_tanh_sinh(const Fn1D& f, double a, double b, const QuadOptions& opt) {
    QuadResult res;
    if (a == b) return res;
    const double c = 0.5 * (a + b), h2 = 0.5 * (b - a);
    const double pi2 = 2.0 * std::atan(1.0);
    auto node = [&](double t, double& x, double& w, bool& left_ok, bool& right_ok) {
        double u = pi2 * std::sinh(t);
        double ch = std::cosh(u);
        w = h2 * pi2 * std::cosh(t) / (ch * ch);
        // Distance to the nearer endpoint computed without cancellation.
        double comp = 2.0 / (1.0 + std::exp(2.0 * std::fabs(u)));
        double dist = h2 * comp;
        x = t >= 0 ? b - dist : a + dist;
        left_ok = x > a;
        right_ok = x < b;
    };
    auto sum_level = [&](double step, bool odd_only) {
        double s = 0;
        for (int side = -1; side <= 1; side += 2) {
            for (int k = odd_only ? 1 : (side < 0 ? 1 : 0); k < 100000; k += odd_only ? 2 : 1) {
                double t = side * k * step;
                double x, w;
                bool lo_ok, hi_ok;
                node(t, x, w, lo_ok, hi_ok);
                if (!lo_ok || !hi_ok || w < 1e-300) break;
                double v = f(x);
                ++res.evals;
                if (!std::isfinite(v)) throw QuadratureFailure("tanh-sinh integrand not finite");
                double term = w * v;
                s += term;
                if (k > 4 && std::fabs(term) < 1e-20 * std::fabs(s)) break;
            }
        }
        return s;
    };
    double step = 0.5;
    double s = sum_level(step, false);
    double est = s * step, prev = est;
    (void)c;
    for (int level = 0; level < 12; ++level) {
        s += sum_level(step / 2, true);
        step /= 2;
        est = s * step;
        double diff = std::fabs(est - prev);
        if (level >= 2 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(est))) {
            res.value = est;
            res.error = diff;
            return res;
        }
        prev = est;
    }
    res.value = est;
    res.error = std::fabs(est - prev);
    res.converged = false;
    if (opt.throw_on_failure) throw QuadratureFailure("tanh-sinh did not converge");
    return res;
}

}  // namespace pcalc
