#pragma once

#include "pcalc/geometry.hpp"
#include "pcalc/measure_nd.hpp"
#include "pcalc/test_function.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pcalc {

using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;
// lim_{s -> 0, side * s > 0} A(x + s e_axis) . e_axis
using TraceFn = std::function<double(int axis, const std::vector<double>& x, int side)>;

// Component `axis` of A carrying c H^1 on a segment parallel to e_axis.
struct SegmentField {
    int axis = 0;
    std::vector<double> base;
    double lo = -1.0, hi = 1.0;
    Rational weight{1};
};

struct FieldND {
    std::string name;
    nlohmann::json params;
    int dim = 2;
    Box domain;

    VectorFn density;  // absolutely continuous part of A; empty when absent
    TraceFn trace;
    std::vector<SegmentField> segments;
    MeasureND div;

    std::optional<double> essential_sup;
    std::function<double(const Box&)> sup_on;  // local sup of |A|; empty when unbounded
    std::vector<std::vector<double>> singular_points;
    std::function<bool(int axis, double offset)> normal_vanishes;
    std::vector<std::vector<double>> cuts;  // per axis: planes where A is not smooth
    bool piecewise_constant = false;        // traces constant on every grid face
    bool isotropic_atoms = false;           // flux of A spreads uniformly over directions at div atoms

    // trace(axis, ., side) as shared callables, [axis][side > 0]; rebuilt by bind_traces().
    std::vector<std::array<std::shared_ptr<const PointFn>, 2>> trace_fns;
    void bind_traces();

    bool summable() const { return segments.empty(); }
    bool bounded() const { return singular_points.empty() && static_cast<bool>(sup_on); }
    double sup_norm(const Box& window) const;
};

// Names: radial, constant, heaviside, transversal, vortex, segment, staircase,
// measure-components. UnknownEntry / BadParams on bad input.
FieldND catalog(const std::string& name, const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> catalog_names();

Profile1D profile_from_json(const nlohmann::json& j);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Integral of f over the box, excluding a cube around every singular point in
// the interior and extrapolating the cube size to zero.
double integrate_field_box(const FieldND& field, const PointFn& f, const Box& box,
                           const std::vector<std::vector<double>>& cuts, const QuadOptions& opt = {});

// |int phi d divA + int grad phi . dA|
double divergence_selftest(const FieldND& field, const TestFunction& phi, const QuadOptions& opt = {});

// Truncated set of the staircase field: B_0 = (0,1) x (0,1/2) and
// B_n = (0, s_n) x (1 - 2^-n, 1 - 2^-(n+1)), s_n = 1 + sum_{k<=n} (-1)^(k-1)/k,
// times (0,1)^(N-2).
BoxSet staircase_set(int dim, int depth);
double staircase_width(int n);

}  // namespace pcalc
