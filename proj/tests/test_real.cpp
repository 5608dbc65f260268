#include "pcalc/real.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcalc;

TEST(Real, RationalRoundTrip) {
    for (double v : {0.1, -3.75, 1e-300, 123456789.123}) EXPECT_EQ(to_double(to_rational(v)), v);
    EXPECT_EQ(to_rational(0.5), Rational(1, 2));
}

TEST(Real, FloatSummandsCancelExactly) {
    Real x = Rational(1, 3);
    Real y = Real::floating(std::atan(7.0));
    Real z = x + y - y;
    EXPECT_TRUE(z.is_exact());
    EXPECT_EQ(z, x);
    EXPECT_TRUE((y - y).is_zero());
}

TEST(Real, ProductOfExactParts) {
    Real a = Rational(2, 3), b = Rational(-3, 4);
    EXPECT_EQ(a * b, Real(Rational(-1, 2)));
    EXPECT_EQ((a * Real::floating(2.0)).value(), 4.0 / 3.0);
}

TEST(Real, SignIsExactForRationals) {
    EXPECT_EQ(Real(Rational(-1, 1000000)).sign(), -1);
    EXPECT_EQ(Real(0).sign(), 0);
    EXPECT_EQ((Real(Rational(1)) + Real::floating(-0.5)).sign(), 1);
}

TEST(ExtReal, ZeroTimesInfinityIsZero) {
    EXPECT_EQ(scale(0, ExtReal::pos_inf()), ExtReal(Real(0)));
    EXPECT_EQ(scale(0, ExtReal::neg_inf()), ExtReal(Real(0)));
    EXPECT_TRUE(scale(Rational(1, 2), ExtReal::pos_inf()).is_pos_inf());
}

TEST(ExtReal, Ordering) {
    ExtReal a = Real(Rational(1, 2)), b = Real(2);
    EXPECT_TRUE(less(a, b));
    EXPECT_TRUE(less(ExtReal::neg_inf(), a));
    EXPECT_TRUE(less(b, ExtReal::pos_inf()));
    EXPECT_TRUE(min(a, ExtReal::neg_inf()).is_neg_inf());
    EXPECT_EQ(max(a, b), b);
    EXPECT_TRUE(std::isinf(ExtReal::pos_inf().value()));
    EXPECT_ANY_THROW(ExtReal::pos_inf().finite());
}
