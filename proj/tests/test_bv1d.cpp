#include "pcalc/bv1d.hpp"
#include "pcalc/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcalc;

namespace {

const Interval1D kUnit(-1, 1);

PiecewiseFunction1D log_abs_u() {
    return PiecewiseFunction1D(kUnit, {0}, {Piece::log_abs(1, 0, -1), Piece::log_abs(1, 0, 1)});
}

Poly random_poly(std::mt19937_64& g, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree), num(-9, 9), den(1, 4);
    std::vector<Rational> c(deg(g) + 1);
    for (auto& v : c) v = Rational(num(g), den(g));
    return Poly(c);
}

// Random piecewise polynomial on (-1,1) with breakpoints on a grid of eighths.
PiecewiseFunction1D random_pw(std::mt19937_64& g, int max_degree = 2) {
    std::vector<Rational> bp;
    for (int i = -7; i <= 7; ++i)
        if (std::uniform_int_distribution<int>(0, 3)(g) == 0) bp.emplace_back(i, 8);
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i <= bp.size(); ++i) pieces.emplace_back(random_poly(g, max_degree));
    return PiecewiseFunction1D(kUnit, bp, pieces);
}

// Random piecewise polynomial vanishing outside [lo, hi].
PiecewiseFunction1D random_compact(std::mt19937_64& g, const Rational& lo, const Rational& hi) {
    std::vector<Rational> bp{lo};
    std::uniform_int_distribution<int> cut(1, 15);
    Rational w = hi - lo;
    for (int i = 0; i < 2; ++i) bp.push_back(lo + w * Rational(cut(g), 16));
    bp.push_back(hi);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<Piece> pieces{Piece()};
    for (std::size_t i = 1; i < bp.size(); ++i) pieces.emplace_back(random_poly(g, 3));
    pieces.emplace_back();
    return PiecewiseFunction1D(kUnit, bp, pieces);
}

}  // namespace

TEST(ApproxLimits, IndicatorJump) {
    auto [lo, hi] = approx_limits(PiecewiseFunction1D::indicator(kUnit, 0, 1), 0);
    EXPECT_EQ(lo, ExtReal(Real(0)));
    EXPECT_EQ(hi, ExtReal(Real(1)));
}

TEST(ApproxLimits, OppositeBlowUp) {
    // 1/sqrt(x) for x > 0, 1/cbrt(x) for x < 0
    PiecewiseFunction1D u(kUnit, {0}, {Piece::power(-1, 0, -1.0 / 3.0, -1), Piece::power(1, 0, -0.5, 1)});
    auto [lo, hi] = approx_limits(u, 0);
    EXPECT_TRUE(lo.is_neg_inf());
    EXPECT_TRUE(hi.is_pos_inf());
}

TEST(ApproxLimits, ContinuityPoint) {
    auto u = PiecewiseFunction1D::single(kUnit, Piece(Poly({1, 2, 3})));
    auto [lo, hi] = approx_limits(u, Rational(1, 2));
    EXPECT_EQ(lo, ExtReal(Real(Rational(11, 4))));
    EXPECT_EQ(hi, lo);
}

TEST(LambdaRepresentative, Examples) {
    auto chi = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    EXPECT_EQ(lambda_representative(chi, LambdaSelector(0.25), 0), ExtReal(Real(Rational(1, 4))));
    PiecewiseFunction1D z(kUnit, {0}, {Piece::recip(1, 0, -1), Piece::recip(1, 0, 1)});  // 1/x
    EXPECT_EQ(lambda_representative(z, LambdaSelector(0.5), 0), ExtReal(Real(0)));
    EXPECT_TRUE(lambda_representative(z, LambdaSelector(0.7), 0).is_pos_inf());
    EXPECT_TRUE(lambda_representative(z, LambdaSelector(0.2), 0).is_neg_inf());
}

TEST(LambdaRepresentative, OverrideWinsAtPoint) {
    auto chi = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    LambdaSelector lam(0.5);
    lam.add_region(-0.5, 0.5, 0.9).add_override(0.0, 0.1);
    EXPECT_EQ(lambda_representative(chi, lam, 0), ExtReal(Real(to_rational(0.1))));
}

TEST(Derivative, Examples) {
    Measure1D d = derivative(PiecewiseFunction1D::indicator(kUnit, Rational(-1, 2), Rational(1, 3)));
    EXPECT_EQ(d, Measure1D::dirac(kUnit, Rational(-1, 2)) - Measure1D::dirac(kUnit, Rational(1, 3)));
    Interval1D dom(0, 1);
    EXPECT_EQ(derivative(PiecewiseFunction1D::single(dom, Piece(Poly::identity()))),
              Measure1D::with_density(dom, 0, 1, Piece::constant(1)));
    EXPECT_THROW(derivative(log_abs_u()), NotBV);
}

TEST(ClassX, Examples) {
    auto a = PiecewiseFunction1D::indicator(kUnit, Rational(1, 2), 1);
    for (double l : {0.0, 0.5, 1.0}) EXPECT_TRUE(in_class_X(log_abs_u(), a, LambdaSelector(l)).member);
    PiecewiseFunction1D inv(kUnit, {0}, {Piece::recip(1, 0, -1), Piece::recip(1, 0, 1)});
    auto c = in_class_X(inv, PiecewiseFunction1D::constant(kUnit, 1), LambdaSelector(0.5));
    EXPECT_FALSE(c.member);
    EXPECT_FALSE(c.reason.empty());
    auto b = in_class_X(PiecewiseFunction1D::indicator(kUnit, 0, 1), a, LambdaSelector(0.5));
    EXPECT_TRUE(b.member);
    EXPECT_DOUBLE_EQ(b.l1_A, 0.5);
    EXPECT_DOUBLE_EQ(b.l1_divA, 1.0);  // DA = delta_{1/2}; x = 1 is not in the domain
}

TEST(Pairing1D, LogExampleIsReciprocalDensity) {
    auto a = PiecewiseFunction1D::indicator(kUnit, Rational(1, 2), 1);
    Measure1D expect = Measure1D::with_density(kUnit, Rational(1, 2), 1, Piece::recip(1, 0, 1));
    for (double l : {0.0, 0.3, 0.5, 1.0}) {
        auto r = pairing_1d(a, log_abs_u(), LambdaSelector(l));
        EXPECT_TRUE(r.pairing.atoms().empty());
        EXPECT_EQ(r.pairing, expect);
    }
}

TEST(Pairing1D, GluedStepAtomAtOrigin) {
    // A = chi_(0,1), u = a pi/2 on (0,1), -b pi/2 on (-1,0): atom (1 - lam(0)) (a + b) pi/2
    auto a = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    Rational hp = to_rational(M_PI / 2);
    for (auto [ca, cb] : {std::pair<int, int>{1, 1}, {2, 1}, {1, 3}}) {
        PiecewiseFunction1D u(kUnit, {0}, {Piece::constant(-cb * hp), Piece::constant(ca * hp)});
        for (double l : {0.0, 0.25, 0.5, 1.0}) {
            auto r = pairing_1d(a, u, LambdaSelector(l));
            ASSERT_EQ(r.pairing.atoms().size(), l == 1.0 ? 0u : 1u);
            ASSERT_TRUE(r.pairing.density().empty());
            Rational expect = (1 - to_rational(l)) * (ca + cb) * hp;
            EXPECT_EQ(r.pairing.measure_of(BorelSet1D::point(0)), Real(expect));
        }
    }
}

TEST(Pairing1D, NotInBVAWhenProductIsNotBV) {
    PiecewiseFunction1D inv(kUnit, {0}, {Piece::recip(1, 0, -1), Piece::recip(1, 0, 1)});
    auto a = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    EXPECT_THROW(pairing_1d(a, inv, LambdaSelector(0.5)), NotInBVA);
}

TEST(Pairing1DProperty, LeibnizAudit) {
    auto g = testing_support::rng(11);
    for (int i = 0; i < 40; ++i) {
        auto a = random_pw(g), u = random_pw(g);
        auto r = pairing_1d(a, u, LambdaSelector(0.3));
        EXPECT_EQ(r.pairing + r.u_lambda_divA, r.uA_derivative);
    }
}

TEST(Pairing1DProperty, ConstantsAreKilled) {
    auto g = testing_support::rng(12);
    std::uniform_int_distribution<int> num(-20, 20);
    for (int i = 0; i < 30; ++i) {
        auto a = random_pw(g);
        auto c = PiecewiseFunction1D::constant(kUnit, Rational(num(g), 7));
        for (double l : {0.0, 0.4, 1.0}) EXPECT_TRUE(pairing_1d(a, c, LambdaSelector(l)).pairing.is_zero());
    }
}

TEST(Pairing1DProperty, LambdaDifferenceAtAtoms) {
    auto g = testing_support::rng(13);
    for (int i = 0; i < 30; ++i) {
        auto a = random_pw(g), u = random_pw(g);
        LambdaSelector l1(0.25), l2(0.75);
        Measure1D diff = pairing_1d(a, u, l1).pairing - pairing_1d(a, u, l2).pairing;
        std::vector<Atom1D> expect;
        Measure1D da = derivative(a);
        for (const auto& at : da.atoms()) {
            auto [lo, hi] = approx_limits(u, at.x);
            expect.push_back({at.x, Real(Rational(1, 2)) * (hi.finite() - lo.finite()) * at.w});
        }
        EXPECT_EQ(diff, Measure1D(kUnit, expect));
    }
}

TEST(Pairing1DProperty, LambdaDifferenceVanishesWithoutAtoms) {
    auto a = PiecewiseFunction1D::single(kUnit, Piece(Poly({1, 2})));
    auto u = PiecewiseFunction1D::indicator(kUnit, 0, Rational(1, 2));
    EXPECT_EQ(pairing_1d(a, u, LambdaSelector(0.0)).pairing, pairing_1d(a, u, LambdaSelector(1.0)).pairing);
}

TEST(Pairing1DProperty, ConvexCombination) {
    auto g = testing_support::rng(14);
    for (int i = 0; i < 30; ++i) {
        auto a = random_pw(g), u = random_pw(g);
        Measure1D p0 = pairing_1d(a, u, LambdaSelector(0.0)).pairing;
        Measure1D p1 = pairing_1d(a, u, LambdaSelector(1.0)).pairing;
        for (double t : {0.125, 0.5, 0.8125}) {
            Rational q = to_rational(t);
            EXPECT_EQ(pairing_1d(a, u, LambdaSelector(t)).pairing, (1 - q) * p0 + q * p1);
        }
    }
}

TEST(Pairing1DProperty, CompactSupportGaussGreen) {
    auto g = testing_support::rng(15);
    for (int i = 0; i < 20; ++i) {
        auto a = random_pw(g);
        auto u = random_compact(g, Rational(-3, 4), Rational(5, 8));
        LambdaSelector lam(0.375);
        auto r = pairing_1d(a, u, lam);
        EXPECT_EQ(integrate_lambda(u, lam, derivative(a)), -r.pairing.total_mass());
    }
}

TEST(Pairing1DProperty, TruncationConsistency) {
    auto a = PiecewiseFunction1D::indicator(kUnit, Rational(1, 4), 1);
    auto u = PiecewiseFunction1D(kUnit, {0}, {Piece::log_abs(1, 0, -1), Piece::log_abs(1, 0, 1)});
    auto phi = PiecewiseFunction1D::single(kUnit, Piece(Poly({1, 0, -1})));
    double target = integrate(phi, pairing_1d(a, u, LambdaSelector(0.5)).pairing).value();
    double prev = INFINITY;
    for (int k : {1, 2, 4, 8}) {
        auto tk = truncate(u, k);
        double v = integrate(phi, pairing_1d(a, tk, LambdaSelector(0.5)).pairing).value();
        double err = std::fabs(v - target);
        EXPECT_LE(err, prev + 1e-15);
        prev = err;
    }
    EXPECT_LE(prev, 1e-12);
}

TEST(Seminorm, Examples) {
    EXPECT_EQ(seminorm_bva(PiecewiseFunction1D::constant(kUnit, 0), PiecewiseFunction1D::constant(kUnit, 1)), 0.0);
    EXPECT_DOUBLE_EQ(seminorm_bva(PiecewiseFunction1D::indicator(kUnit, 0, Rational(1, 2)),
                                  PiecewiseFunction1D::constant(kUnit, 1)),
                     2.5);
    Interval1D dom(0, 1);
    EXPECT_DOUBLE_EQ(seminorm_bva(PiecewiseFunction1D::single(dom, Piece(Poly::identity())),
                                  PiecewiseFunction1D::constant(dom, 1)),
                     1.5);
}

TEST(Truncate, Examples) {
    Interval1D dom(0, 2);
    auto t = truncate(PiecewiseFunction1D::single(dom, Piece(Poly::identity())), 1);
    EXPECT_EQ(t, PiecewiseFunction1D(dom, {1}, {Piece(Poly::identity()), Piece::constant(1)}));
    auto bounded = PiecewiseFunction1D::single(kUnit, Piece(Poly({0, Rational(1, 2)})));
    EXPECT_EQ(truncate(bounded, 1), bounded);
    Interval1D unit(0, 1);
    auto s = truncate(PiecewiseFunction1D::single(unit, Piece::power(1, 0, -0.5, 1)), 2);
    ASSERT_EQ(s.breakpoints(), std::vector<Rational>{Rational(1, 4)});
    EXPECT_EQ(s.pieces()[0], Piece::constant(2));
    EXPECT_EQ(s.pieces()[1], Piece::power(1, 0, -0.5, 1));
}
