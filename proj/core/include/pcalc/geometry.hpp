#pragma once

#include "pcalc/real.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pcalc {

// Open axis-aligned box; bounds may be infinite (half-spaces, R^N).
struct Box {
    std::vector<double> lo, hi;

    Box() = default;
    Box(std::vector<double> l, std::vector<double> h);
    static Box cube(int n, double lo, double hi);
    static Box whole(int n);
    // {x : sign * (x_axis - offset) > 0}
    static Box half_space(int n, int axis, double offset, int sign);

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const std::vector<double>& x) const;
    bool contains_closure(const std::vector<double>& x) const;
    bool is_bounded() const;
    bool empty() const;
    double volume() const;
    Box intersect(const Box& o) const;
    std::vector<double> center() const;  // finite stand-in on unbounded axes
    friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// Finite union of open boxes. E^1 is the interior of the closure of the union;
// the reduced and topological boundaries are read off the cell complex.
class BoxSet {
public:
    BoxSet() = default;
    BoxSet(int dim, std::vector<Box> boxes);
    static BoxSet single(const Box& b) { return BoxSet(b.dim(), {b}); }

    int dim() const { return dim_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    bool contains(const std::vector<double>& x) const;
    BoxSet unite(const BoxSet& o) const;
    std::vector<std::vector<double>> coordinates() const;  // per axis, finite bounds only

private:
    int dim_ = 0;
    std::vector<Box> boxes_;
};

// Product grid: per-axis sorted finite coordinates c_0 < ... < c_{m-1} split
// each axis into m + 1 open intervals, the outer two unbounded.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<std::vector<double>> coords);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<double>& coords(int axis) const { return coords_[axis]; }
    std::size_t intervals(int axis) const { return coords_[axis].size() + 1; }
    double interval_lo(int axis, std::size_t i) const;
    double interval_hi(int axis, std::size_t i) const;
    // Representative interior point of interval i.
    double interval_mid(int axis, std::size_t i) const;
    // Interval containing x, or -1 when x is a grid coordinate (then *coord gets its index).
    long locate(int axis, double x, std::size_t* coord = nullptr) const;

    std::size_t cell_count() const;
    std::size_t flat(const std::vector<std::size_t>& idx) const;
    std::vector<std::size_t> unflat(std::size_t k) const;
    Box cell_box(const std::vector<std::size_t>& idx) const;
    std::vector<double> cell_mid(const std::vector<std::size_t>& idx) const;

private:
    std::vector<std::vector<double>> coords_;
};

// Piecewise constant scalar on the cells of a grid restricted to a domain box.
// Cells outside the domain are inert.
class StepFunctionND {
public:
    StepFunctionND() = default;
    StepFunctionND(Grid grid, Box domain, std::vector<double> values);

    // chi_E on a grid holding E's, the domain's and the extra coordinates.
    static StepFunctionND indicator(const BoxSet& e, const Box& domain,
                                    const std::vector<std::vector<double>>& extra = {});

    int dim() const { return grid_.dim(); }
    const Grid& grid() const { return grid_; }
    const Box& domain() const { return domain_; }
    const std::vector<double>& values() const { return values_; }
    double cell_value(const std::vector<std::size_t>& idx) const { return values_[grid_.flat(idx)]; }
    bool cell_in_domain(const std::vector<std::size_t>& idx) const;

    // Values of the 2^N orthant cells around x (fewer when x is not on grid coordinates).
    std::vector<double> orthant_values(const std::vector<double>& x) const;
    // Lebesgue density of the function at x: mean of the orthant values.
    Rational density(const std::vector<double>& x) const;
    // Approximate lim inf / lim sup at x.
    std::pair<double, double> approx_limits(const std::vector<double>& x) const;
    // (1 - lam) u^- + lam u^+ for a given lam value, exact.
    Rational lambda_value(const std::vector<double>& x, double lam) const;

    // Same function on a grid refined by extra coordinates.
    StepFunctionND refined(const std::vector<std::vector<double>>& extra) const;
    StepFunctionND complement() const;  // 1 - u
    bool is_indicator() const;
    static StepFunctionND pointwise_max(const StepFunctionND& a, const StepFunctionND& b);
    double value_at(const std::vector<double>& x) const;  // x inside a cell

private:
    Grid grid_;
    Box domain_;
    std::vector<double> values_;
};

std::vector<std::vector<double>> merge_coordinates(const std::vector<std::vector<double>>& a,
                                                   const std::vector<std::vector<double>>& b);

}  // namespace pcalc
