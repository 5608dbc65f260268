#pragma once

#include "pcalc/piece.hpp"
#include "pcalc/sets1d.hpp"

#include <utility>
#include <vector>

namespace pcalc {

struct Atom1D {
    Rational x;
    Real w;
};

struct DensityPart {
    Rational lo, hi;
    Piece piece;
};

// Signed Radon measure on an open interval: finitely many atoms plus a
// piecewise analytic density. Canonical after construction: atoms sorted and
// merged with zero weights dropped, densities on a common partition with zero
// pieces dropped and equal neighbours fused.
class Measure1D {
public:
    Measure1D() = default;
    explicit Measure1D(Interval1D domain, std::vector<Atom1D> atoms = {}, std::vector<DensityPart> density = {});

    static Measure1D dirac(const Interval1D& domain, const Rational& x, const Real& w = Real(1));
    static Measure1D with_density(const Interval1D& domain, const Rational& lo, const Rational& hi, Piece p);

    const Interval1D& domain() const { return domain_; }
    const std::vector<Atom1D>& atoms() const { return atoms_; }
    const std::vector<DensityPart>& density() const { return density_; }
    bool is_zero() const { return atoms_.empty() && density_.empty(); }

    // |mu|(domain). NonIntegrablePiece when a density piece is not absolutely integrable.
    double total_variation() const;
    // mu(domain), exact as far as the pieces allow.
    Real total_mass() const;
    Real measure_of(const BorelSet1D& b) const;

    Measure1D restrict(const BorelSet1D& b) const;
    std::pair<Measure1D, Measure1D> lebesgue_decompose() const;  // (ac, singular)
    BorelSet1D support() const;

    Measure1D operator-() const;
    friend Measure1D operator+(const Measure1D& a, const Measure1D& b);
    friend Measure1D operator-(const Measure1D& a, const Measure1D& b) { return a + (-b); }
    friend Measure1D operator*(const Rational& s, const Measure1D& m);
    friend bool operator==(const Measure1D& a, const Measure1D& b);
    friend bool operator!=(const Measure1D& a, const Measure1D& b) { return !(a == b); }

    // Largest |difference| between the two measures' atom weights and the
    // total variation of the density difference; 0 for exactly equal measures.
    static double distance(const Measure1D& a, const Measure1D& b);

private:
    void normalize();
    Interval1D domain_;
    std::vector<Atom1D> atoms_;
    std::vector<DensityPart> density_;
};

}  // namespace pcalc
