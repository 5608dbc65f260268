#include "pcalc/lambda.hpp"

#include "pcalc/errors.hpp"

#include <cmath>

namespace pcalc {

void LambdaSelector::check(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("lambda values must lie in [0, 1]");
}

LambdaSelector::LambdaSelector(double default_value) : default_(default_value) { check(default_value); }

LambdaSelector::LambdaSelector(std::vector<Region> regions, std::vector<Override> overrides, double default_value)
    : regions_(std::move(regions)), overrides_(std::move(overrides)), default_(default_value) {
    check(default_);
    for (const auto& r : regions_) {
        check(r.value);
        if (r.lo.size() != r.hi.size()) throw InvalidArgument("lambda region lo/hi size mismatch");
    }
    for (const auto& o : overrides_) check(o.value);
}

LambdaSelector& LambdaSelector::add_region(double lo, double hi, double value) {
    return add_region(std::vector<double>{lo}, std::vector<double>{hi}, value);
}

LambdaSelector& LambdaSelector::add_override(double x, double value) {
    return add_override(std::vector<double>{x}, value);
}

LambdaSelector& LambdaSelector::add_region(std::vector<double> lo, std::vector<double> hi, double value) {
    check(value);
    if (lo.size() != hi.size()) throw InvalidArgument("lambda region lo/hi size mismatch");
    regions_.push_back({std::move(lo), std::move(hi), value});
    return *this;
}

LambdaSelector& LambdaSelector::add_override(std::vector<double> x, double value) {
    check(value);
    overrides_.push_back({std::move(x), value});
    return *this;
}

double LambdaSelector::region_value(const std::vector<double>& x) const {
    for (const auto& r : regions_) {
        if (r.lo.size() != x.size()) continue;
        bool in = true;
        for (std::size_t k = 0; k < x.size() && in; ++k) in = r.lo[k] <= x[k] && x[k] <= r.hi[k];
        if (in) return r.value;
    }
    return default_;
}

double LambdaSelector::operator()(const std::vector<double>& x) const {
    for (const auto& o : overrides_)
        if (o.point == x) return o.value;
    return region_value(x);
}

LambdaSelector LambdaSelector::complement() const {
    LambdaSelector c;
    c.default_ = 1.0 - default_;
    for (auto r : regions_) {
        r.value = 1.0 - r.value;
        c.regions_.push_back(r);
    }
    for (auto o : overrides_) {
        o.value = 1.0 - o.value;
        c.overrides_.push_back(o);
    }
    return c;
}

}  // namespace pcalc
