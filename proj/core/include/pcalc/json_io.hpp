#pragma once

#include "pcalc/fields.hpp"
#include "pcalc/function1d.hpp"
#include "pcalc/geometry.hpp"
#include "pcalc/lambda.hpp"
#include "pcalc/measure1d.hpp"
#include "pcalc/measure_nd.hpp"
#include "pcalc/test_function.hpp"

#include <nlohmann/json.hpp>

namespace pcalc {

// Numbers are read exactly; strings may hold "p/q".
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);

// {"poly": [c0, c1, ...]} plus optional "terms":
// [{"kind": "power"|"log"|"arctan"|"cauchy", "c", "a", "alpha", "sigma", "k"}].
Piece piece_from_json(const nlohmann::json& j);

// {"domain": [lo, hi], "breakpoints": [...], "pieces": [...], "values": [[x, v], ...]}
// Shorthands: {"constant": c}, {"indicator": [lo, hi], "value": c}, {"poly": [...]}.
PiecewiseFunction1D function1d_from_json(const nlohmann::json& j);

// number, or {"default": d, "regions": [{"lo", "hi", "value"}], "overrides": [{"point", "value"}]}.
LambdaSelector lambda_from_json(const nlohmann::json& j);

Box box_from_json(const nlohmann::json& j);
// [{"lo": [...], "hi": [...]}, ...] or a single box object.
BoxSet boxset_from_json(const nlohmann::json& j, int dim);

// {"name": ..., "params": {...}}
FieldND field_from_json(const nlohmann::json& j);

// [profile per axis] or {"bump": {"center": [...], "radius": r}}.
TestFunction test_function_from_json(const nlohmann::json& j, int dim);

nlohmann::json piece_to_json(const Piece& p);
nlohmann::json measure_to_json(const Measure1D& m);
nlohmann::json measure_to_json(const MeasureND& m);

}  // namespace pcalc
