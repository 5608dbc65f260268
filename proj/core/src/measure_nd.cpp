#include "pcalc/measure_nd.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace pcalc {

PartDensity PartDensity::constant(const Rational& c) {
    PartDensity d;
    d.c_ = c;
    return d;
}

PartDensity PartDensity::function(PointFn f, double coeff) {
    PartDensity d;
    if (coeff != 0.0) d.fns_.push_back({coeff, std::make_shared<const PointFn>(std::move(f))});
    return d;
}

PartDensity PartDensity::shared(std::shared_ptr<const PointFn> f, double coeff) {
    PartDensity d;
    if (coeff != 0.0) d.fns_.push_back({coeff, std::move(f)});
    return d;
}

double PartDensity::eval(const std::vector<double>& x) const {
    if (fns_.empty()) return to_double(c_);
    Real s(c_);
    for (const auto& [w, f] : fns_) s += Real::floating(w * (*f)(x));
    return s.value();
}

PartDensity& PartDensity::operator+=(const PartDensity& o) {
    c_ += o.c_;
    for (const auto& [w, f] : o.fns_) {
        auto it = std::find_if(fns_.begin(), fns_.end(), [&](const auto& e) { return e.second == f; });
        if (it == fns_.end()) {
            fns_.push_back({w, f});
        } else {
            it->first += w;
            if (it->first == 0.0) fns_.erase(it);
        }
    }
    return *this;
}

PartDensity PartDensity::scaled(const Rational& s) const {
    PartDensity d;
    if (s == 0) return d;
    d.c_ = c_ * s;
    double sd = to_double(s);
    for (const auto& [w, f] : fns_) d.fns_.push_back({w * sd, f});
    return d;
}

int MeasurePart::free_axes() const {
    int n = 0;
    for (int k = 0; k < box.dim(); ++k)
        if (box.lo[k] != box.hi[k]) ++n;
    return n;
}

void MeasureND::add_atom(std::vector<double> x, const Real& w) {
    if (static_cast<int>(x.size()) != dim_) throw InvalidArgument("atom dimension mismatch");
    if (!w.is_zero()) atoms_.push_back({std::move(x), w});
}

void MeasureND::add_part(MeasurePart p) {
    if (p.box.dim() != dim_) throw InvalidArgument("measure part dimension mismatch");
    if (p.density.is_zero()) return;
    for (int k = 0; k < dim_; ++k)
        if (p.box.lo[k] > p.box.hi[k]) return;
    parts_.push_back(std::move(p));
}

void MeasureND::add_face(int axis, double offset, Box box, PartDensity d) {
    box.lo[axis] = box.hi[axis] = offset;
    for (int k = 0; k < dim_; ++k)
        if (k != axis && !(box.lo[k] < box.hi[k])) return;
    add_part({std::move(box), std::move(d)});
}

void MeasureND::add_segment(int axis, std::vector<double> base, double lo, double hi, PartDensity d) {
    if (!(lo < hi)) return;
    Box b(base, base);
    b.lo[axis] = lo;
    b.hi[axis] = hi;
    add_part({std::move(b), std::move(d)});
}

void MeasureND::add_volume(Box box, PartDensity d) {
    if (box.empty()) return;
    add_part({std::move(box), std::move(d)});
}

std::vector<MeasurePart> MeasureND::parts_of(int k) const {
    std::vector<MeasurePart> out;
    for (const auto& p : parts_)
        if (p.free_axes() == k) out.push_back(p);
    return out;
}

MeasureND MeasureND::normalized() const {
    MeasureND out(dim_);
    std::map<std::vector<double>, Real> am;
    for (const auto& a : atoms_) am[a.x] += a.w;
    for (auto& [x, w] : am)
        if (!w.is_zero()) out.atoms_.push_back({x, w});

    // Group by the fixed coordinates: key = (free mask, fixed values).
    std::map<std::pair<std::vector<bool>, std::vector<double>>, std::vector<const MeasurePart*>> groups;
    for (const auto& p : parts_) {
        std::vector<bool> mask(dim_);
        std::vector<double> fixed;
        for (int k = 0; k < dim_; ++k) {
            mask[k] = p.box.lo[k] != p.box.hi[k];
            if (!mask[k]) fixed.push_back(p.box.lo[k]);
        }
        groups[{mask, fixed}].push_back(&p);
    }
    for (const auto& [key, ps] : groups) {
        const auto& mask = key.first;
        std::vector<int> free;
        for (int k = 0; k < dim_; ++k)
            if (mask[k]) free.push_back(k);
        std::vector<std::vector<double>> cs(free.size());
        for (const auto* p : ps)
            for (std::size_t i = 0; i < free.size(); ++i) {
                cs[i].push_back(p->box.lo[free[i]]);
                cs[i].push_back(p->box.hi[free[i]]);
            }
        std::vector<std::size_t> shape(free.size());
        std::size_t total = 1;
        for (std::size_t i = 0; i < free.size(); ++i) {
            std::sort(cs[i].begin(), cs[i].end());
            cs[i].erase(std::unique(cs[i].begin(), cs[i].end()), cs[i].end());
            shape[i] = cs[i].size() - 1;
            total *= shape[i];
        }
        std::vector<PartDensity> acc(total);
        std::vector<bool> used(total, false);
        for (const auto* p : ps) {
            std::vector<std::size_t> from(free.size()), to(free.size());
            for (std::size_t i = 0; i < free.size(); ++i) {
                from[i] = static_cast<std::size_t>(
                    std::lower_bound(cs[i].begin(), cs[i].end(), p->box.lo[free[i]]) - cs[i].begin());
                to[i] = static_cast<std::size_t>(
                    std::lower_bound(cs[i].begin(), cs[i].end(), p->box.hi[free[i]]) - cs[i].begin());
            }
            std::vector<std::size_t> idx = from;
            while (true) {
                std::size_t f = 0;
                for (std::size_t i = 0; i < free.size(); ++i) f = f * shape[i] + idx[i];
                acc[f] += p->density;
                used[f] = true;
                std::size_t i = free.size();
                while (i > 0) {
                    --i;
                    if (++idx[i] < to[i]) break;
                    idx[i] = from[i];
                    if (i == 0) goto done;
                }
                if (free.empty()) break;
            }
        done:;
        }
        for (std::size_t f = 0; f < total; ++f) {
            if (!used[f] || acc[f].is_zero()) continue;
            Box b = ps.front()->box;
            std::size_t r = f;
            for (std::size_t i = free.size(); i > 0; --i) {
                std::size_t j = r % shape[i - 1];
                r /= shape[i - 1];
                b.lo[free[i - 1]] = cs[i - 1][j];
                b.hi[free[i - 1]] = cs[i - 1][j + 1];
            }
            out.parts_.push_back({std::move(b), std::move(acc[f])});
        }
    }
    return out;
}

MeasureND MeasureND::restricted(const Box& window) const {
    MeasureND out(dim_);
    for (const auto& a : atoms_)
        if (window.contains(a.x)) out.atoms_.push_back(a);
    for (const auto& p : parts_) {
        Box b = p.box;
        bool keep = true;
        for (int k = 0; k < dim_ && keep; ++k) {
            if (b.lo[k] == b.hi[k]) {
                keep = window.lo[k] < b.lo[k] && b.lo[k] < window.hi[k];
            } else {
                b.lo[k] = std::max(b.lo[k], window.lo[k]);
                b.hi[k] = std::min(b.hi[k], window.hi[k]);
                keep = b.lo[k] < b.hi[k];
            }
        }
        if (keep) out.parts_.push_back({std::move(b), p.density});
    }
    return out;
}

double integrate_part(const MeasurePart& p, const PointFn& f, const QuadOptions& opt,
                      const std::vector<std::vector<double>>& cuts) {
    if (!p.box.is_bounded()) throw InvalidArgument("cannot integrate over an unbounded measure part");
    return integrate_box(f, p.box.lo, p.box.hi, opt, cuts).value;
}

namespace {

double part_measure(const Box& b) {
    double m = 1.0;
    for (int k = 0; k < b.dim(); ++k)
        if (b.lo[k] != b.hi[k]) m *= b.hi[k] - b.lo[k];
    return m;
}

}  // namespace

double MeasureND::total_variation(const QuadOptions& opt) const {
    MeasureND m = normalized();
    double s = 0;
    for (const auto& a : m.atoms_) s += std::fabs(a.w.value());
    for (const auto& p : m.parts_) {
        if (p.density.is_constant()) {
            s += std::fabs(to_double(p.density.constant_part())) * part_measure(p.box);
            continue;
        }
        const PartDensity& d = p.density;
        s += integrate_part(p, [&](const std::vector<double>& x) { return std::fabs(d.eval(x)); }, opt);
    }
    return s;
}

double MeasureND::total_variation(const Box& window, const QuadOptions& opt) const {
    return restricted(window).total_variation(opt);
}

double MeasureND::total_mass(const QuadOptions& opt) const {
    double s = 0;
    for (const auto& a : atoms_) s += a.w.value();
    for (const auto& p : parts_) {
        if (p.density.is_constant()) {
            if (p.density.constant_part() != 0) s += to_double(p.density.constant_part()) * part_measure(p.box);
            continue;
        }
        const PartDensity& d = p.density;
        s += integrate_part(p, [&](const std::vector<double>& x) { return d.eval(x); }, opt);
    }
    return s;
}

double MeasureND::integrate(const TestFunction& phi, const QuadOptions& opt) const {
    double s = 0;
    for (const auto& a : atoms_) s += phi.value(a.x) * a.w.value();
    Box supp = phi.support();
    auto cuts = phi.breakpoints();
    for (const auto& p : parts_) {
        MeasurePart q = p;
        bool keep = true;
        for (int k = 0; k < dim_ && keep; ++k) {
            if (q.box.lo[k] == q.box.hi[k]) {
                keep = supp.lo[k] < q.box.lo[k] && q.box.lo[k] < supp.hi[k];
            } else {
                q.box.lo[k] = std::max(q.box.lo[k], supp.lo[k]);
                q.box.hi[k] = std::min(q.box.hi[k], supp.hi[k]);
                keep = q.box.lo[k] < q.box.hi[k];
            }
        }
        if (!keep) continue;
        const PartDensity& d = q.density;
        s += integrate_part(q, [&](const std::vector<double>& x) { return phi.value(x) * d.eval(x); }, opt, cuts);
    }
    return s;
}

Real MeasureND::atom_weight(const std::vector<double>& x) const {
    Real w;
    for (const auto& a : atoms_)
        if (a.x == x) w += a.w;
    return w;
}

MeasureND MeasureND::operator-() const { return Rational(-1) * *this; }

MeasureND operator+(const MeasureND& a, const MeasureND& b) {
    if (a.dim_ != b.dim_ && !a.is_zero() && !b.is_zero()) throw InvalidArgument("measure dimension mismatch");
    MeasureND r(std::max(a.dim_, b.dim_));
    r.atoms_ = a.atoms_;
    r.atoms_.insert(r.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
    r.parts_ = a.parts_;
    r.parts_.insert(r.parts_.end(), b.parts_.begin(), b.parts_.end());
    return r.normalized();
}

MeasureND operator*(const Rational& s, const MeasureND& m) {
    MeasureND r(m.dim_);
    if (s == 0) return r;
    for (const auto& a : m.atoms_) r.atoms_.push_back({a.x, Real(s) * a.w});
    for (const auto& p : m.parts_) r.parts_.push_back({p.box, p.density.scaled(s)});
    return r;
}

double MeasureND::distance(const MeasureND& a, const MeasureND& b, const QuadOptions& opt) {
    return (a - b).total_variation(opt);
}

}  // namespace pcalc
