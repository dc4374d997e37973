#include "moyal/scalars.hpp"
#include "support/random_values.hpp"

#include <gtest/gtest.h>

using namespace moyal;

TEST(Rational, ParseAndRender) {
    EXPECT_EQ(Rational::parse("6/4"), Rational(3, 2));
    EXPECT_EQ(Rational(-3, 2).str(), "-3/2");
    EXPECT_EQ(Rational(5).str(), "5");
    EXPECT_EQ(Rational(1, 3).latex(), "\\frac{1}{3}");
    EXPECT_EQ(binomial(-1, 3), Rational(-1));
    EXPECT_EQ(falling_factorial(3, 4), Rational(0));
}

TEST(KappaScalar, Substitution) {
    EXPECT_EQ(substitute_kappa(kappa(2), Rational(0)), Rational(0));
    EXPECT_EQ(substitute_kappa(KappaScalar(Rational(3, 2)) + kappa(1) * Rational(2), Rational(1, 2)), Rational(5, 2));
    EXPECT_EQ(substitute_kappa(kappa(3) - kappa(1), Rational(1, 2)), Rational(-3, 8));
}

TEST(KappaScalar, RingAxiomsAndHomomorphism) {
    moyal::testing::Random rnd(1);
    for (int i = 0; i < 1000; ++i) {
        KappaScalar a = rnd.kappa_scalar(), b = rnd.kappa_scalar(), c = rnd.kappa_scalar();
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_TRUE((a - a).is_zero());
        Rational v = rnd.rational();
        ASSERT_EQ(substitute_kappa(a * b, v), substitute_kappa(a, v) * substitute_kappa(b, v));
    }
}

TEST(QScalar, Numbers) {
    EXPECT_TRUE(q_number(0).is_zero());
    EXPECT_EQ(q_number(1), QScalar(1));
    EXPECT_EQ(q_number(3).str(), "1 + q + q^2");
    EXPECT_EQ(q_number(-1), -QScalar::q_power(-1));
}

TEST(QScalar, Binomials) {
    EXPECT_EQ(q_binomial(7, 0), QScalar(1));
    EXPECT_EQ(q_binomial(-3, 0), QScalar(1));
    EXPECT_EQ(q_binomial(2, 1).str(), "1 + q");
    QScalar expected = QScalar(QPoly(std::vector<Rational>{1, 0, 1})) * q_number(3);
    EXPECT_EQ(q_binomial(4, 2), expected);
    for (int m = -4; m <= 6; ++m)
        for (int k = 0; k <= 5; ++k)
            EXPECT_EQ(q_binomial(m, k).substitute(Rational(1)), binomial(m, k)) << m << " " << k;
}

TEST(QScalar, CanonicalForm) {
    QScalar a = QScalar(QPoly(std::vector<Rational>{-1, 0, 1})) / QScalar(QPoly(std::vector<Rational>{-2, 2}));
    EXPECT_EQ(a.str(), "1/2 + 1/2*q");
    QScalar b = QScalar(1) / QScalar(QPoly(std::vector<Rational>{0, 3}));
    EXPECT_EQ(b.str(), "(1/3)/q");
    EXPECT_TRUE(b.denominator().leading().is_one());
}

TEST(QScalar, RingAxioms) {
    moyal::testing::Random rnd(2);
    for (int i = 0; i < 1000; ++i) {
        QScalar a = rnd.qscalar(), b = rnd.qscalar(), c = rnd.qscalar();
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_TRUE((a - a).is_zero());
        if (!b.is_zero())
            ASSERT_EQ(a / b * b, a);
    }
}
