#include "pcalc/errors.hpp"
#include "pcalc/function1d.hpp"
#include "pcalc/measure1d.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pcalc;

namespace {

const Interval1D kUnit(-1, 1);

Measure1D lebesgue(const Rational& lo, const Rational& hi, const Interval1D& dom = kUnit) {
    return Measure1D::with_density(dom, lo, hi, Piece::constant(1));
}

Poly random_poly(std::mt19937_64& g, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree), num(-9, 9), den(1, 5);
    std::vector<Rational> c(deg(g) + 1);
    for (auto& v : c) v = Rational(num(g), den(g));
    return Poly(c);
}

}  // namespace

TEST(Measure1D, TotalVariationExamples) {
    Measure1D atoms(kUnit, {{0, Real(2)}, {Rational(1, 2), Real(-3)}});
    EXPECT_EQ(atoms.total_variation(), 5.0);
    Measure1D m = Measure1D::with_density(Interval1D(0, 1), 0, 1, Piece(Poly::identity()));
    EXPECT_EQ(m.total_variation(), 0.5);
    Measure1D mix = Measure1D::dirac(kUnit, 0) - Rational(1, 2) * lebesgue(0, 1);
    EXPECT_EQ(mix.total_variation(), 1.5);
}

TEST(Measure1D, TotalVariationLocatesSignChanges) {
    // x - 1/3 on (0,1): |.| integrates to 5/18
    Measure1D m = Measure1D::with_density(Interval1D(0, 1), 0, 1, Piece(Poly({Rational(-1, 3), 1})));
    EXPECT_NEAR(m.total_variation(), 5.0 / 18.0, 1e-15);
    EXPECT_EQ(m.total_mass(), Real(Rational(1, 6)));
}

TEST(Measure1D, NonIntegrablePieceThrows) {
    Measure1D m = Measure1D::with_density(kUnit, 0, 1, Piece::recip(1, 0, 1));
    EXPECT_THROW(m.total_variation(), NonIntegrablePiece);
}

TEST(Measure1D, RestrictExamples) {
    Interval1D dom(0, 1);
    EXPECT_EQ(lebesgue(0, 1, dom).restrict(BorelSet1D::interval(0, Rational(1, 2))), lebesgue(0, Rational(1, 2), dom));
    Measure1D d = Measure1D::dirac(kUnit, 0);
    EXPECT_EQ(d.restrict(BorelSet1D::point(0)), d);
    EXPECT_TRUE(d.restrict(BorelSet1D::interval(0, 1)).is_zero());
}

TEST(Measure1D, LebesgueDecomposeExamples) {
    Measure1D mu = Measure1D::dirac(kUnit, 0) + lebesgue(0, 1);
    auto [ac, s] = mu.lebesgue_decompose();
    EXPECT_EQ(ac, lebesgue(0, 1));
    EXPECT_EQ(s, Measure1D::dirac(kUnit, 0));
    auto [ac2, s2] = lebesgue(0, 1).lebesgue_decompose();
    EXPECT_TRUE(s2.is_zero());
    EXPECT_EQ(ac2, lebesgue(0, 1));
    auto [ac3, s3] = Measure1D::dirac(kUnit, 0).lebesgue_decompose();
    EXPECT_TRUE(ac3.is_zero());
    EXPECT_EQ(s3 + ac3, Measure1D::dirac(kUnit, 0));
}

TEST(Measure1D, IntegrateExamples) {
    auto x2 = PiecewiseFunction1D::single(kUnit, Piece(Poly::monomial(1, 2)));
    EXPECT_EQ(integrate(x2, Measure1D::dirac(kUnit, Rational(1, 2))), Real(Rational(1, 4)));
    EXPECT_EQ(integrate(PiecewiseFunction1D::constant(kUnit, 1), lebesgue(0, 1)), Real(1));
    auto x = PiecewiseFunction1D::single(kUnit, Piece(Poly::identity()));
    EXPECT_EQ(integrate(x, lebesgue(0, 1)), Real(Rational(1, 2)));
}

TEST(Measure1D, IntegrateAtJumpNeedsPointValue) {
    auto chi = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    EXPECT_THROW(integrate(chi, Measure1D::dirac(kUnit, 0)), UndefinedAtAtom);
    PiecewiseFunction1D withv(kUnit, {0}, {Piece::constant(0), Piece::constant(1)},
                              {{0, Real(Rational(1, 2))}});
    EXPECT_EQ(integrate(withv, Measure1D::dirac(kUnit, 0)), Real(Rational(1, 2)));
}

TEST(Measure1D, SupportExamples) {
    EXPECT_EQ(Measure1D::dirac(kUnit, 0).support(), BorelSet1D::point(0));
    EXPECT_EQ(lebesgue(0, 1).support(), BorelSet1D::closed(0, 1, kUnit));
    EXPECT_TRUE(Measure1D(kUnit).support().empty());
}

TEST(Measure1D, ClosedFormWhitelistIntegrals) {
    // log|x| on (0,1) integrates to -1; k/(1+k^2x^2) on (0,1) to atan(k)
    Measure1D lg = Measure1D::with_density(kUnit, 0, 1, Piece::log_abs(1, 0, 1));
    EXPECT_NEAR(lg.total_mass().value(), -1.0, 1e-15);
    Measure1D c = Measure1D::with_density(kUnit, 0, 1, Piece::cauchy(1, 50.0));
    EXPECT_NEAR(c.total_mass().value(), std::atan(50.0), 1e-14);
    Measure1D r = Measure1D::with_density(kUnit, Rational(1, 2), 1, Piece::recip(1, 0, 1));
    EXPECT_NEAR(r.total_mass().value(), std::log(2.0), 1e-15);
}

TEST(Measure1DProperty, ScalingAndSubadditivity) {
    auto g = testing_support::rng(1);
    std::uniform_int_distribution<int> num(-7, 7);
    for (int i = 0; i < 50; ++i) {
        Measure1D mu = Measure1D::with_density(kUnit, -1, Rational(1, 3), Piece(random_poly(g, 3))) +
                       Measure1D::dirac(kUnit, Rational(num(g), 8), Real(Rational(num(g), 3)));
        Measure1D nu = Measure1D::with_density(kUnit, Rational(-1, 2), 1, Piece(random_poly(g, 3)));
        Rational a(num(g), 4);
        EXPECT_NEAR((a * mu).total_variation(), std::fabs(to_double(a)) * mu.total_variation(), 1e-13);
        BorelSet1D b({{Rational(-3, 4), Rational(1, 2)}}, {Rational(7, 8)});
        EXPECT_LE((mu + nu).restrict(b).total_variation(),
                  mu.restrict(b).total_variation() + nu.restrict(b).total_variation() + 1e-13);
    }
}

TEST(Measure1DProperty, RestrictIsAdditiveOnDisjointSets) {
    auto g = testing_support::rng(2);
    for (int i = 0; i < 30; ++i) {
        Measure1D mu = Measure1D::with_density(kUnit, -1, 1, Piece(random_poly(g, 4))) +
                       Measure1D::dirac(kUnit, 0, Real(Rational(3, 2))) +
                       Measure1D::dirac(kUnit, Rational(1, 2), Real(-1));
        BorelSet1D b1({{-1, 0}}, {Rational(1, 2)});
        BorelSet1D b2({{0, Rational(1, 3)}}, {0});
        EXPECT_EQ(mu.restrict(b1.unite(b2)), mu.restrict(b1) + mu.restrict(b2));
    }
}

TEST(Measure1DProperty, DecomposedPartsAreMutuallySingular) {
    auto g = testing_support::rng(3);
    for (int i = 0; i < 20; ++i) {
        Measure1D mu = Measure1D::with_density(kUnit, -1, 1, Piece(random_poly(g, 2))) +
                       Measure1D::dirac(kUnit, Rational(1, 5), Real(2));
        auto [ac, s] = mu.lebesgue_decompose();
        EXPECT_EQ(s.support().lebesgue_measure(), 0);
        EXPECT_TRUE(ac.atoms().empty());
        EXPECT_EQ(ac + s, mu);
    }
}

TEST(Measure1DProperty, IntegrateMatchesQuadratureOracle) {
    auto g = testing_support::rng(4);
    for (int i = 0; i < 100; ++i) {
        Poly pf = random_poly(g, 4), pd = random_poly(g, 4);
        auto f = PiecewiseFunction1D::single(kUnit, Piece(pf));
        Measure1D mu = Measure1D::with_density(kUnit, Rational(-1, 2), 1, Piece(pd));
        double exact = integrate(f, mu).value();
        double oracle = testing_support::gauss_legendre([&](double x) { return pf.eval(x) * pd.eval(x); }, -0.5, 1.0, 8);
        EXPECT_NEAR(exact, oracle, 1e-9 * std::max(1.0, std::fabs(oracle)));
    }
}
