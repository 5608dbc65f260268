#include "pcalc/coarea.hpp"
#include "pcalc/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pcalc;

namespace {

const Interval1D kUnit(-1, 1);

PiecewiseFunction1D phi_poly() { return PiecewiseFunction1D::single(kUnit, Piece(Poly({1, Rational(1, 2), -1, Rational(-1, 2)}))); }

// u = -x on (-1,0), 1 on (0,1): at t = 0 both sides of 0 lie in {u > 0}, so 0 is in N_0.
PiecewiseFunction1D tent_step() {
    return PiecewiseFunction1D(kUnit, {0}, {Piece(Poly({0, -1})), Piece::constant(1)});
}

// Piecewise-linear u with jumps and a continuous piecewise-linear A >= 1 (no atoms in DA).
struct Instance {
    PiecewiseFunction1D A, u;
};

Instance random_instance(std::mt19937_64& g) {
    std::uniform_int_distribution<int> num(-12, 12), cells(2, 5);
    std::vector<Rational> bp;
    int m = cells(g);
    for (int i = 1; i < m; ++i) bp.emplace_back(2 * i - m, m);
    std::vector<Piece> up;
    for (int i = 0; i < m; ++i) up.emplace_back(Poly({Rational(num(g), 6), Rational(num(g), 5)}));
    Rational k(num(g), 24);
    Rational s(num(g), 13);
    // A = 2 + x + s |x - k|, continuous with a kink at k
    std::vector<Piece> ap{Piece(Poly({2 + s * k, 1 - s})), Piece(Poly({2 - s * k, 1 + s}))};
    return {PiecewiseFunction1D(kUnit, {k}, ap), PiecewiseFunction1D(kUnit, bp, up)};
}

}  // namespace

TEST(LevelSet, RepresentativeExamples) {
    auto chi = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    EXPECT_DOUBLE_EQ(level_set_representative(chi, Rational(1, 2), LambdaSelector(0.3), 0), 0.3);
    auto x = PiecewiseFunction1D::single(kUnit, Piece(Poly::identity()));
    EXPECT_EQ(level_set_representative(x, Rational(1, 4), LambdaSelector(0.3), Rational(1, 2)), 1.0);
    EXPECT_EQ(level_set_representative(x, Rational(1, 4), LambdaSelector(0.3), Rational(-1, 2)), 0.0);
}

TEST(LevelSet, ExceptionalPoint) {
    EXPECT_EQ(exceptional_set(tent_step(), 0), std::vector<Rational>{0});
    EXPECT_THROW(level_set_representative(tent_step(), 0, LambdaSelector(0.5), 0), ExceptionalPoint);
    EXPECT_TRUE(exceptional_set(tent_step(), Rational(1, 2)).empty());
    EXPECT_TRUE(exceptional_set(PiecewiseFunction1D::indicator(kUnit, 0, 1), 0).empty());
}

TEST(LevelSet, SuperlevelAndCriticalLevels) {
    PiecewiseFunction1D u(kUnit, {0}, {Piece(Poly({0, -1})), Piece(Poly({Rational(1, 2), 1}))});
    auto s = level_set_slice(u, Rational(3, 4));
    EXPECT_EQ(s.superlevel, BorelSet1D({{-1, Rational(-3, 4)}, {Rational(1, 4), 1}}, {}));
    EXPECT_EQ(critical_levels(u), (std::vector<Rational>{0, Rational(1, 2), 1, Rational(3, 2)}));
    auto chi = superlevel_indicator(u, Rational(3, 4));
    EXPECT_EQ(chi.eval(-0.9), 1.0);
    EXPECT_EQ(chi.eval(0.0 + 0.1), 0.0);
}

TEST(CoareaCheck, IdentityU) {
    Interval1D dom(0, 1);
    auto u = PiecewiseFunction1D::single(dom, Piece(Poly::identity()));
    auto a = PiecewiseFunction1D::constant(dom, 1);
    auto phi = PiecewiseFunction1D::single(dom, Piece(Poly({2, -1, 3})));
    for (double l : {0.0, 0.5, 1.0}) {
        auto r = coarea_check(a, u, LambdaSelector(l), phi);
        EXPECT_NEAR(r.lhs, 2 - 0.5 + 1, 1e-15);
        EXPECT_LE(r.residual, 1e-10);
    }
}

TEST(CoareaCheck, StepAgainstAtom) {
    auto a = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    auto u = PiecewiseFunction1D::indicator(kUnit, 0, 1, 3);
    for (double l : {0.0, 0.3, 1.0}) {
        auto r = coarea_check(a, u, LambdaSelector(l), phi_poly());
        EXPECT_LE(r.residual, 1e-10);
    }
}

TEST(CoareaCheck, ConstantIsZero) {
    auto r = coarea_check(PiecewiseFunction1D::indicator(kUnit, 0, 1), PiecewiseFunction1D::constant(kUnit, 5),
                          LambdaSelector(0.5), phi_poly());
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
}

TEST(CoareaCheck, HypothesisViolationDetected) {
    auto a = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    auto bad = coarea_hypotheses(a, tent_step());
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0].t, 0);
    EXPECT_EQ(bad[0].x, 0);
    EXPECT_DOUBLE_EQ(bad[0].mass, 1.0);
    EXPECT_THROW(coarea_check(a, tent_step(), LambdaSelector(0.5), phi_poly()), HypothesisFailed);
    // without an atom of DA at the jump the hypothesis holds
    EXPECT_TRUE(coarea_hypotheses(PiecewiseFunction1D::constant(kUnit, 1), tent_step()).empty());
}

TEST(CoareaCheck, UnboundedUIsRejected) {
    auto u = PiecewiseFunction1D(kUnit, {0}, {Piece::log_abs(1, 0, -1), Piece::log_abs(1, 0, 1)});
    EXPECT_ANY_THROW(coarea_check(PiecewiseFunction1D::constant(kUnit, 1), u, LambdaSelector(0.5), phi_poly()));
}

TEST(CoareaProperty, EqualityOnRandomPiecewiseLinear) {
    auto g = testing_support::rng(41);
    std::uniform_real_distribution<double> lam(0, 1);
    for (int i = 0; i < 20; ++i) {
        auto inst = random_instance(g);
        auto r = coarea_check(inst.A, inst.u, LambdaSelector(lam(g)), phi_poly());
        EXPECT_LE(r.residual, 1e-8) << i;
    }
}

TEST(CoareaProperty, InequalityOnWindows) {
    auto g = testing_support::rng(42);
    std::vector<Interval1D> windows{{-1, 1}, {Rational(-1, 2), Rational(1, 3)}, {0, Rational(7, 8)}};
    for (int i = 0; i < 8; ++i) {
        auto inst = random_instance(g);
        for (const auto& w : coarea_inequality(inst.A, inst.u, LambdaSelector(0.5), windows)) EXPECT_TRUE(w.holds);
    }
    // an atom of DA at a jump: still an inequality
    auto a = PiecewiseFunction1D::indicator(kUnit, 0, 1);
    for (const auto& w : coarea_inequality(a, PiecewiseFunction1D::indicator(kUnit, 0, 1, 2), LambdaSelector(0.2), windows))
        EXPECT_TRUE(w.holds);
}

TEST(CoareaND, HeavisideStep) {
    FieldND f = catalog("heaviside", {{"N", 2}, {"domain", {-1, 1}}});
    Grid grid({{-1, -0.5, 0.0, 0.5, 1}, {-1, -0.25, 0.25, 1}});
    std::vector<double> v(grid.cell_count());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>((k * 7) % 5) / 2.0;
    StepFunctionND u(grid, Box::cube(2, -1, 1), v);
    TestFunction phi = TestFunction::bump({0.1, 0.0}, 0.8);
    auto r = coarea_check_nd(f, u, LambdaSelector(0.4), phi);
    EXPECT_LE(r.residual, 1e-8);
    EXPECT_FALSE(r.levels.empty());
}

TEST(CoareaND, RadialAtomAtCornerFails) {
    FieldND f = catalog("radial", {{"N", 2}});
    StepFunctionND corner = StepFunctionND::indicator(BoxSet::single(Box::cube(2, 0, 1)), f.domain);
    EXPECT_THROW(coarea_check_nd(f, corner, LambdaSelector(0.5), TestFunction::bump({0, 0}, 0.5)), HypothesisFailed);
}
