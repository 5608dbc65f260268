#include "pcalc/sets1d.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>

namespace pcalc {

Interval1D::Interval1D(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) throw InvalidArgument("interval needs lo < hi");
}

BorelSet1D::BorelSet1D(std::vector<Interval1D> intervals, std::vector<Rational> points)
    : iv_(std::move(intervals)), pts_(std::move(points)) {
    normalize();
}

BorelSet1D BorelSet1D::closed(const Rational& lo, const Rational& hi, const Interval1D& domain) {
    Rational a = std::max(lo, domain.lo), b = std::min(hi, domain.hi);
    std::vector<Interval1D> iv;
    std::vector<Rational> pts;
    if (a < b) iv.push_back({a, b});
    if (domain.contains(lo) && lo <= hi) pts.push_back(lo);
    if (domain.contains(hi) && lo <= hi) pts.push_back(hi);
    return BorelSet1D(std::move(iv), std::move(pts));
}

void BorelSet1D::normalize() {
    std::sort(iv_.begin(), iv_.end(), [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    auto has_point = [this](const Rational& x) { return std::binary_search(pts_.begin(), pts_.end(), x); };
    std::vector<Interval1D> merged;
    for (const auto& iv : iv_) {
        if (!merged.empty() && (iv.lo < merged.back().hi || (iv.lo == merged.back().hi && has_point(iv.lo)))) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    iv_ = std::move(merged);
    pts_.erase(std::remove_if(pts_.begin(), pts_.end(),
                              [this](const Rational& x) {
                                  for (const auto& iv : iv_)
                                      if (iv.contains(x)) return true;
                                  return false;
                              }),
               pts_.end());
}

bool BorelSet1D::contains(const Rational& x) const {
    for (const auto& iv : iv_)
        if (iv.contains(x)) return true;
    return std::binary_search(pts_.begin(), pts_.end(), x);
}

Rational BorelSet1D::lebesgue_measure() const {
    Rational s(0);
    for (const auto& iv : iv_) s += iv.length();
    return s;
}

BorelSet1D BorelSet1D::unite(const BorelSet1D& o) const {
    auto iv = iv_;
    iv.insert(iv.end(), o.iv_.begin(), o.iv_.end());
    auto pts = pts_;
    pts.insert(pts.end(), o.pts_.begin(), o.pts_.end());
    return BorelSet1D(std::move(iv), std::move(pts));
}

BorelSet1D BorelSet1D::intersect(const BorelSet1D& o) const {
    std::vector<Interval1D> iv;
    for (const auto& a : iv_)
        for (const auto& b : o.iv_) {
            Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
            if (lo < hi) iv.push_back({lo, hi});
        }
    std::vector<Rational> pts;
    for (const auto& p : pts_)
        if (o.contains(p)) pts.push_back(p);
    for (const auto& p : o.pts_)
        if (contains(p)) pts.push_back(p);
    return BorelSet1D(std::move(iv), std::move(pts));
}

}  // namespace pcalc
