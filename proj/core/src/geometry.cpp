#include "pcalc/geometry.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcalc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Box::Box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw InvalidArgument("box bounds have different dimensions");
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (std::isnan(lo[k]) || std::isnan(hi[k]) || !(lo[k] <= hi[k]))
            throw InvalidArgument("box needs lo <= hi on every axis");
}

Box Box::cube(int n, double l, double h) {
    return Box(std::vector<double>(n, l), std::vector<double>(n, h));
}

Box Box::whole(int n) { return cube(n, -kInf, kInf); }

Box Box::half_space(int n, int axis, double offset, int sign) {
    Box b = whole(n);
    if (sign > 0) {
        b.lo[axis] = offset;
    } else {
        b.hi[axis] = offset;
    }
    return b;
}

bool Box::contains(const std::vector<double>& x) const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < x[k] && x[k] < hi[k])) return false;
    return true;
}

bool Box::contains_closure(const std::vector<double>& x) const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] <= x[k] && x[k] <= hi[k])) return false;
    return true;
}

bool Box::is_bounded() const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!std::isfinite(lo[k]) || !std::isfinite(hi[k])) return false;
    return true;
}

bool Box::empty() const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < hi[k])) return true;
    return false;
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
}

Box Box::intersect(const Box& o) const {
    Box r = *this;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        r.lo[k] = std::max(lo[k], o.lo[k]);
        r.hi[k] = std::min(hi[k], o.hi[k]);
        if (r.hi[k] < r.lo[k]) r.hi[k] = r.lo[k];
    }
    return r;
}

std::vector<double> Box::center() const {
    std::vector<double> c(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        bool fl = std::isfinite(lo[k]), fh = std::isfinite(hi[k]);
        if (fl && fh) {
            c[k] = 0.5 * (lo[k] + hi[k]);
        } else if (fl) {
            c[k] = lo[k] + 1.0;
        } else if (fh) {
            c[k] = hi[k] - 1.0;
        } else {
            c[k] = 0.0;
        }
    }
    return c;
}

BoxSet::BoxSet(int dim, std::vector<Box> boxes) : dim_(dim) {
    for (auto& b : boxes) {
        if (b.dim() != dim) throw InvalidArgument("box dimension does not match the set");
        if (!b.empty()) boxes_.push_back(std::move(b));
    }
}

bool BoxSet::contains(const std::vector<double>& x) const {
    for (const auto& b : boxes_)
        if (b.contains(x)) return true;
    return false;
}

BoxSet BoxSet::unite(const BoxSet& o) const {
    std::vector<Box> all = boxes_;
    all.insert(all.end(), o.boxes_.begin(), o.boxes_.end());
    return BoxSet(dim_, std::move(all));
}

std::vector<std::vector<double>> BoxSet::coordinates() const {
    std::vector<std::vector<double>> c(dim_);
    for (const auto& b : boxes_)
        for (int k = 0; k < dim_; ++k) {
            if (std::isfinite(b.lo[k])) c[k].push_back(b.lo[k]);
            if (std::isfinite(b.hi[k])) c[k].push_back(b.hi[k]);
        }
    return c;
}

std::vector<std::vector<double>> merge_coordinates(const std::vector<std::vector<double>>& a,
                                                   const std::vector<std::vector<double>>& b) {
    std::size_t n = std::max(a.size(), b.size());
    std::vector<std::vector<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < a.size()) out[k].insert(out[k].end(), a[k].begin(), a[k].end());
        if (k < b.size()) out[k].insert(out[k].end(), b[k].begin(), b[k].end());
    }
    return out;
}

Grid::Grid(std::vector<std::vector<double>> coords) : coords_(std::move(coords)) {
    for (auto& c : coords_) {
        c.erase(std::remove_if(c.begin(), c.end(), [](double v) { return !std::isfinite(v); }), c.end());
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
}

double Grid::interval_lo(int axis, std::size_t i) const { return i == 0 ? -kInf : coords_[axis][i - 1]; }

double Grid::interval_hi(int axis, std::size_t i) const {
    return i == coords_[axis].size() ? kInf : coords_[axis][i];
}

double Grid::interval_mid(int axis, std::size_t i) const {
    double l = interval_lo(axis, i), h = interval_hi(axis, i);
    if (std::isfinite(l) && std::isfinite(h)) return 0.5 * (l + h);
    if (std::isfinite(l)) return l + 1.0;
    if (std::isfinite(h)) return h - 1.0;
    return 0.0;
}

long Grid::locate(int axis, double x, std::size_t* coord) const {
    const auto& c = coords_[axis];
    auto it = std::lower_bound(c.begin(), c.end(), x);
    std::size_t k = static_cast<std::size_t>(it - c.begin());
    if (it != c.end() && *it == x) {
        if (coord) *coord = k;
        return -1;
    }
    return static_cast<long>(k);
}

std::size_t Grid::cell_count() const {
    std::size_t n = 1;
    for (int k = 0; k < dim(); ++k) n *= intervals(k);
    return n;
}

std::size_t Grid::flat(const std::vector<std::size_t>& idx) const {
    std::size_t f = 0;
    for (int k = 0; k < dim(); ++k) f = f * intervals(k) + idx[k];
    return f;
}

std::vector<std::size_t> Grid::unflat(std::size_t f) const {
    std::vector<std::size_t> idx(dim());
    for (int k = dim() - 1; k >= 0; --k) {
        idx[k] = f % intervals(k);
        f /= intervals(k);
    }
    return idx;
}

Box Grid::cell_box(const std::vector<std::size_t>& idx) const {
    std::vector<double> lo(dim()), hi(dim());
    for (int k = 0; k < dim(); ++k) {
        lo[k] = interval_lo(k, idx[k]);
        hi[k] = interval_hi(k, idx[k]);
    }
    return Box(lo, hi);
}

std::vector<double> Grid::cell_mid(const std::vector<std::size_t>& idx) const {
    std::vector<double> m(dim());
    for (int k = 0; k < dim(); ++k) m[k] = interval_mid(k, idx[k]);
    return m;
}

StepFunctionND::StepFunctionND(Grid grid, Box domain, std::vector<double> values)
    : grid_(std::move(grid)), domain_(std::move(domain)), values_(std::move(values)) {
    if (domain_.dim() != grid_.dim()) throw InvalidArgument("domain and grid dimensions differ");
    if (values_.size() != grid_.cell_count()) throw InvalidArgument("one value per grid cell is required");
    for (int k = 0; k < grid_.dim(); ++k)
        for (double b : {domain_.lo[k], domain_.hi[k]})
            if (std::isfinite(b) && grid_.locate(k, b) != -1)
                throw InvalidArgument("domain bounds must be grid coordinates");
    for (std::size_t f = 0; f < values_.size(); ++f) {
        if (!std::isfinite(values_[f])) throw InvalidArgument("step function values must be finite");
        if (!cell_in_domain(grid_.unflat(f))) values_[f] = 0.0;
    }
}

StepFunctionND StepFunctionND::indicator(const BoxSet& e, const Box& domain,
                                         const std::vector<std::vector<double>>& extra) {
    std::vector<std::vector<double>> c = merge_coordinates(e.coordinates(), extra);
    c.resize(domain.dim());
    for (int k = 0; k < domain.dim(); ++k) {
        c[k].push_back(domain.lo[k]);
        c[k].push_back(domain.hi[k]);
    }
    Grid g(c);
    std::vector<double> v(g.cell_count());
    for (std::size_t f = 0; f < v.size(); ++f) v[f] = e.contains(g.cell_mid(g.unflat(f))) ? 1.0 : 0.0;
    return StepFunctionND(g, domain, std::move(v));
}

bool StepFunctionND::cell_in_domain(const std::vector<std::size_t>& idx) const {
    return domain_.contains(grid_.cell_mid(idx));
}

std::vector<double> StepFunctionND::orthant_values(const std::vector<double>& x) const {
    const int n = dim();
    std::vector<std::vector<std::size_t>> choices(n);
    for (int k = 0; k < n; ++k) {
        std::size_t c = 0;
        long i = grid_.locate(k, x[k], &c);
        if (i >= 0) {
            choices[k] = {static_cast<std::size_t>(i)};
        } else {
            choices[k] = {c, c + 1};
        }
    }
    std::vector<double> out;
    std::vector<std::size_t> idx(n), pos(n, 0);
    while (true) {
        for (int k = 0; k < n; ++k) idx[k] = choices[k][pos[k]];
        out.push_back(cell_value(idx));
        int k = n - 1;
        while (k >= 0 && ++pos[k] == choices[k].size()) {
            pos[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

Rational StepFunctionND::density(const std::vector<double>& x) const {
    auto v = orthant_values(x);
    Rational s = 0;
    for (double d : v) s += to_rational(d);
    return s / static_cast<long>(v.size());
}

std::pair<double, double> StepFunctionND::approx_limits(const std::vector<double>& x) const {
    auto v = orthant_values(x);
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return {*mn, *mx};
}

Rational StepFunctionND::lambda_value(const std::vector<double>& x, double lam) const {
    auto [lo, hi] = approx_limits(x);
    if (lo == hi) return to_rational(lo);
    Rational t = to_rational(lam);
    return (1 - t) * to_rational(lo) + t * to_rational(hi);
}

double StepFunctionND::value_at(const std::vector<double>& x) const {
    std::vector<std::size_t> idx(dim());
    for (int k = 0; k < dim(); ++k) {
        long i = grid_.locate(k, x[k]);
        if (i < 0) throw InvalidArgument("point lies on a grid hyperplane");
        idx[k] = static_cast<std::size_t>(i);
    }
    return cell_value(idx);
}

StepFunctionND StepFunctionND::refined(const std::vector<std::vector<double>>& extra) const {
    std::vector<std::vector<double>> c(dim());
    for (int k = 0; k < dim(); ++k) c[k] = grid_.coords(k);
    Grid g(merge_coordinates(c, extra));
    std::vector<double> v(g.cell_count());
    for (std::size_t f = 0; f < v.size(); ++f) v[f] = value_at(g.cell_mid(g.unflat(f)));
    return StepFunctionND(g, domain_, std::move(v));
}

StepFunctionND StepFunctionND::complement() const {
    std::vector<double> v(values_.size());
    for (std::size_t f = 0; f < v.size(); ++f) v[f] = 1.0 - values_[f];
    return StepFunctionND(grid_, domain_, std::move(v));
}

bool StepFunctionND::is_indicator() const {
    for (double v : values_)
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

StepFunctionND StepFunctionND::pointwise_max(const StepFunctionND& a, const StepFunctionND& b) {
    if (!(a.domain_ == b.domain_)) throw InvalidArgument("step functions on different domains");
    std::vector<std::vector<double>> cb(b.dim());
    for (int k = 0; k < b.dim(); ++k) cb[k] = b.grid_.coords(k);
    StepFunctionND ra = a.refined(cb);
    std::vector<double> v(ra.values_.size());
    for (std::size_t f = 0; f < v.size(); ++f)
        v[f] = std::max(ra.values_[f], b.value_at(ra.grid_.cell_mid(ra.grid_.unflat(f))));
    return StepFunctionND(ra.grid_, ra.domain_, std::move(v));
}

}  // namespace pcalc
