#include "pcalc/measure1d.hpp"

#include "pcalc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pcalc {

Measure1D::Measure1D(Interval1D domain, std::vector<Atom1D> atoms, std::vector<DensityPart> density)
    : domain_(std::move(domain)), atoms_(std::move(atoms)), density_(std::move(density)) {
    normalize();
}

Measure1D Measure1D::dirac(const Interval1D& domain, const Rational& x, const Real& w) {
    return Measure1D(domain, {{x, w}}, {});
}

Measure1D Measure1D::with_density(const Interval1D& domain, const Rational& lo, const Rational& hi, Piece p) {
    return Measure1D(domain, {}, {{lo, hi, std::move(p)}});
}

void Measure1D::normalize() {
    for (const auto& a : atoms_)
        if (!domain_.contains(a.x)) throw InvalidArgument("atom at " + to_string(a.x) + " lies outside the domain");
    std::stable_sort(atoms_.begin(), atoms_.end(), [](const Atom1D& a, const Atom1D& b) { return a.x < b.x; });
    std::vector<Atom1D> merged;
    for (auto& a : atoms_) {
        if (!merged.empty() && merged.back().x == a.x) {
            merged.back().w += a.w;
        } else {
            merged.push_back(std::move(a));
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Atom1D& a) { return a.w.is_zero(); }),
                 merged.end());
    atoms_ = std::move(merged);

    // Common refinement of all density parts, clipped to the domain.
    std::vector<Rational> cuts;
    for (auto& d : density_) {
        d.lo = std::max(d.lo, domain_.lo);
        d.hi = std::min(d.hi, domain_.hi);
        if (d.lo < d.hi) {
            cuts.push_back(d.lo);
            cuts.push_back(d.hi);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<DensityPart> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Piece sum;
        for (const auto& d : density_)
            if (d.lo <= cuts[i] && cuts[i + 1] <= d.hi) sum += d.piece;
        if (sum.is_zero()) continue;
        if (!out.empty() && out.back().hi == cuts[i] && out.back().piece == sum) {
            out.back().hi = cuts[i + 1];
        } else {
            out.push_back({cuts[i], cuts[i + 1], std::move(sum)});
        }
    }
    density_ = std::move(out);
}

double Measure1D::total_variation() const {
    double s = 0;
    for (const auto& a : atoms_) s += std::fabs(a.w.value());
    for (const auto& d : density_) {
        if (!d.piece.integrable_on(d.lo, d.hi))
            throw NonIntegrablePiece(d.piece.describe() + " on (" + to_string(d.lo) + ", " + to_string(d.hi) + ")");
        s += d.piece.abs_integral(d.lo, d.hi);
    }
    return s;
}

Real Measure1D::total_mass() const {
    Real s;
    for (const auto& a : atoms_) s += a.w;
    for (const auto& d : density_) s += d.piece.integrate(d.lo, d.hi);
    return s;
}

Real Measure1D::measure_of(const BorelSet1D& b) const { return restrict(b).total_mass(); }

Measure1D Measure1D::restrict(const BorelSet1D& b) const {
    std::vector<Atom1D> atoms;
    for (const auto& a : atoms_)
        if (b.contains(a.x)) atoms.push_back(a);
    std::vector<DensityPart> dens;
    for (const auto& d : density_)
        for (const auto& iv : b.intervals()) {
            Rational lo = std::max(d.lo, iv.lo), hi = std::min(d.hi, iv.hi);
            if (lo < hi) dens.push_back({lo, hi, d.piece});
        }
    return Measure1D(domain_, std::move(atoms), std::move(dens));
}

std::pair<Measure1D, Measure1D> Measure1D::lebesgue_decompose() const {
    return {Measure1D(domain_, {}, density_), Measure1D(domain_, atoms_, {})};
}

BorelSet1D Measure1D::support() const {
    BorelSet1D s;
    std::vector<Rational> pts;
    for (const auto& a : atoms_) pts.push_back(a.x);
    s = BorelSet1D({}, pts);
    for (const auto& d : density_) s = s.unite(BorelSet1D::closed(d.lo, d.hi, domain_));
    return s;
}

Measure1D Measure1D::operator-() const { return Rational(-1) * *this; }

Measure1D operator+(const Measure1D& a, const Measure1D& b) {
    if (!(a.domain_ == b.domain_)) throw InvalidArgument("measures live on different domains");
    auto atoms = a.atoms_;
    atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
    auto dens = a.density_;
    dens.insert(dens.end(), b.density_.begin(), b.density_.end());
    return Measure1D(a.domain_, std::move(atoms), std::move(dens));
}

Measure1D operator*(const Rational& s, const Measure1D& m) {
    auto atoms = m.atoms_;
    for (auto& a : atoms) a.w = Real(s) * a.w;
    auto dens = m.density_;
    for (auto& d : dens) d.piece = d.piece * s;
    return Measure1D(m.domain_, std::move(atoms), std::move(dens));
}

bool operator==(const Measure1D& a, const Measure1D& b) {
    if (!(a.domain_ == b.domain_) || a.atoms_.size() != b.atoms_.size() || a.density_.size() != b.density_.size())
        return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i)
        if (a.atoms_[i].x != b.atoms_[i].x || a.atoms_[i].w != b.atoms_[i].w) return false;
    for (std::size_t i = 0; i < a.density_.size(); ++i) {
        const auto &x = a.density_[i], &y = b.density_[i];
        if (x.lo != y.lo || x.hi != y.hi || x.piece != y.piece) return false;
    }
    return true;
}

double Measure1D::distance(const Measure1D& a, const Measure1D& b) {
    Measure1D d = a - b;
    double worst = 0;
    for (const auto& at : d.atoms_) worst = std::max(worst, std::fabs(at.w.value()));
    double tv = 0;
    for (const auto& p : d.density_) tv += p.piece.abs_integral(p.lo, p.hi);
    return std::max(worst, tv);
}

}  // namespace pcalc
