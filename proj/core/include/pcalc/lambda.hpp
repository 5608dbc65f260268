#pragma once

#include "pcalc/real.hpp"

#include <vector>

namespace pcalc {

// Borel selector lambda: Omega -> [0, 1] in any dimension: closed boxes with
// constant values (first match wins), exact point overrides, and a default.
class LambdaSelector {
public:
    struct Region {
        std::vector<double> lo, hi;
        double value = 0.0;
    };
    struct Override {
        std::vector<double> point;
        double value = 0.0;
    };

    LambdaSelector() = default;
    explicit LambdaSelector(double default_value);
    LambdaSelector(std::vector<Region> regions, std::vector<Override> overrides, double default_value);

    static LambdaSelector constant(double v) { return LambdaSelector(v); }
    // 1D helpers.
    LambdaSelector& add_region(double lo, double hi, double value);
    LambdaSelector& add_override(double x, double value);
    LambdaSelector& add_region(std::vector<double> lo, std::vector<double> hi, double value);
    LambdaSelector& add_override(std::vector<double> x, double value);

    double operator()(const std::vector<double>& x) const;
    double at(double x) const { return (*this)(std::vector<double>{x}); }
    double at(const Rational& x) const { return at(to_double(x)); }
    Rational exact_at(const Rational& x) const { return to_rational(at(x)); }
    // Value ignoring point overrides; used on faces, where single points carry no mass.
    double region_value(const std::vector<double>& x) const;

    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<Override>& overrides() const { return overrides_; }
    double default_value() const { return default_; }
    bool is_constant() const { return regions_.empty() && overrides_.empty(); }
    // 1 - lambda, used by the complement rule.
    LambdaSelector complement() const;

private:
    static void check(double v);
    std::vector<Region> regions_;
    std::vector<Override> overrides_;
    double default_ = 0.5;
};

}  // namespace pcalc
