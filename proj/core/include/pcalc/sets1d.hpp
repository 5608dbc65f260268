#pragma once

#include "pcalc/real.hpp"

#include <vector>

namespace pcalc {

// Open interval (lo, hi) with finite exact endpoints.
struct Interval1D {
    Rational lo{0}, hi{1};

    Interval1D() = default;
    Interval1D(Rational l, Rational h);
    static Interval1D from_double(double l, double h) { return {to_rational(l), to_rational(h)}; }
    bool contains(const Rational& x) const { return lo < x && x < hi; }
    bool contains_closure(const Rational& x) const { return lo <= x && x <= hi; }
    Rational length() const { return hi - lo; }
    friend bool operator==(const Interval1D& a, const Interval1D& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// Finite union of open intervals and points, normalized on construction:
// overlapping intervals merge, points inside an interval are absorbed, and a
// point joining two abutting intervals fuses them.
class BorelSet1D {
public:
    BorelSet1D() = default;
    BorelSet1D(std::vector<Interval1D> intervals, std::vector<Rational> points);
    static BorelSet1D interval(const Rational& lo, const Rational& hi) { return BorelSet1D({{lo, hi}}, {}); }
    static BorelSet1D point(const Rational& x) { return BorelSet1D({}, {x}); }
    // Closed interval [lo, hi] intersected with an open domain.
    static BorelSet1D closed(const Rational& lo, const Rational& hi, const Interval1D& domain);

    const std::vector<Interval1D>& intervals() const { return iv_; }
    const std::vector<Rational>& points() const { return pts_; }
    bool empty() const { return iv_.empty() && pts_.empty(); }
    bool contains(const Rational& x) const;
    Rational lebesgue_measure() const;

    BorelSet1D unite(const BorelSet1D& o) const;
    BorelSet1D intersect(const BorelSet1D& o) const;
    friend bool operator==(const BorelSet1D& a, const BorelSet1D& b) { return a.iv_ == b.iv_ && a.pts_ == b.pts_; }

private:
    void normalize();
    std::vector<Interval1D> iv_;
    std::vector<Rational> pts_;
};

}  // namespace pcalc
