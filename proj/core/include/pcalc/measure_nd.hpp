#pragma once

#include "pcalc/geometry.hpp"
#include "pcalc/quadrature.hpp"
#include "pcalc/real.hpp"
#include "pcalc/test_function.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace pcalc {

using PointFn = std::function<double(const std::vector<double>&)>;

// Density of a measure part: exact constant plus weighted callables. Point
// values are summed through Real, so equal callables with opposite weights
// cancel exactly.
class PartDensity {
public:
    PartDensity() = default;
    static PartDensity constant(const Rational& c);
    static PartDensity function(PointFn f, double coeff = 1.0);
    // Callables shared by pointer merge and cancel across measures.
    static PartDensity shared(std::shared_ptr<const PointFn> f, double coeff = 1.0);

    bool is_zero() const { return c_ == 0 && fns_.empty(); }
    bool is_constant() const { return fns_.empty(); }
    const Rational& constant_part() const { return c_; }
    double eval(const std::vector<double>& x) const;

    PartDensity& operator+=(const PartDensity& o);
    PartDensity scaled(const Rational& s) const;

private:
    Rational c_{0};
    std::vector<std::pair<double, std::shared_ptr<const PointFn>>> fns_;
};

struct AtomND {
    std::vector<double> x;
    Real w;
};

// Density times H^k on a degenerate box: faces fix one axis (H^{N-1}),
// segments fix all but one (H^1), volume parts fix none (L^N).
struct MeasurePart {
    Box box;
    PartDensity density;
    int free_axes() const;
};

class MeasureND {
public:
    MeasureND() = default;
    explicit MeasureND(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    const std::vector<AtomND>& atoms() const { return atoms_; }
    const std::vector<MeasurePart>& parts() const { return parts_; }
    std::vector<MeasurePart> faces() const { return parts_of(dim_ - 1); }
    std::vector<MeasurePart> segments() const { return parts_of(1); }
    std::vector<MeasurePart> volumes() const { return parts_of(dim_); }
    bool is_zero() const { return atoms_.empty() && parts_.empty(); }

    void add_atom(std::vector<double> x, const Real& w);
    // Face {x_axis = offset} over the box (bounds on axis are ignored).
    void add_face(int axis, double offset, Box box, PartDensity d);
    void add_segment(int axis, std::vector<double> base, double lo, double hi, PartDensity d);
    void add_volume(Box box, PartDensity d);
    void add_part(MeasurePart p);

    // Merged atoms and a common refinement of parts sharing an affine subspace.
    MeasureND normalized() const;
    MeasureND restricted(const Box& window) const;  // open window
    double total_variation(const QuadOptions& opt = {}) const;
    double total_variation(const Box& window, const QuadOptions& opt = {}) const;
    double total_mass(const QuadOptions& opt = {}) const;
    double integrate(const TestFunction& phi, const QuadOptions& opt = {}) const;
    Real atom_weight(const std::vector<double>& x) const;

    MeasureND operator-() const;
    friend MeasureND operator+(const MeasureND& a, const MeasureND& b);
    friend MeasureND operator-(const MeasureND& a, const MeasureND& b) { return a + (-b); }
    friend MeasureND operator*(const Rational& s, const MeasureND& m);
    static double distance(const MeasureND& a, const MeasureND& b, const QuadOptions& opt = {});

private:
    std::vector<MeasurePart> parts_of(int k) const;

    int dim_ = 0;
    std::vector<AtomND> atoms_;
    std::vector<MeasurePart> parts_;
};

// Integral of f over a part with respect to its Hausdorff measure.
double integrate_part(const MeasurePart& p, const PointFn& f, const QuadOptions& opt = {},
                      const std::vector<std::vector<double>>& cuts = {});

}  // namespace pcalc
