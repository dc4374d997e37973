#include "moyal/diffalg.hpp"
#include "moyal/parser.hpp"
#include "support/random_values.hpp"

#include <gtest/gtest.h>

using namespace moyal;

namespace {
DiffPoly dp(const char* s) { return parse_diffpoly(s); }
const JetVariable u{0, 0};
} // namespace

TEST(DiffPoly, Rendering) {
    EXPECT_EQ(dp("u_xx*u + 3/2*u^2*k^2 - u1_x").str(), "u*u_xx + 3/2*k^2*u^2 - u1_x");
    EXPECT_EQ(DiffPoly::field(0, 5).str(), "u^(5)");
    EXPECT_EQ(DiffPoly::field(2, 1).str(), "u2_x");
    EXPECT_EQ(dp("3/2*u*u_x + k^2*u_xxx").latex(), "\\frac{3}{2} u u_x + \\kappa^2 u_{xxx}");
    EXPECT_EQ(DiffPoly().str(), "0");
}

TEST(DiffPoly, TotalDerivative) {
    EXPECT_TRUE(total_x_derivative(DiffPoly(7)).is_zero());
    EXPECT_EQ(total_x_derivative(dp("u^2")), dp("2*u*u_x"));
    EXPECT_EQ(total_x_derivative(dp("u_x^2 - 2*u*u_xx")), dp("-2*u*u_xxx"));
    EXPECT_EQ(total_x_derivative(DiffPoly::coordinate()), DiffPoly(1));
    EXPECT_EQ(total_x_derivative(dp("x*u")), dp("u + x*u_x"));
}

TEST(DiffPoly, VariationalDerivative) {
    EXPECT_TRUE(variational_derivative(dp("u_x"), u).is_zero());
    EXPECT_EQ(variational_derivative(dp("1/2*u^2"), u), dp("u"));
    EXPECT_EQ(variational_derivative(dp("1/2*u_x^2"), u), dp("-u_xx"));
}

TEST(DiffPoly, ModTotalDerivative) {
    EXPECT_TRUE(equals_mod_total_derivative(dp("u*u_x"), DiffPoly()));
    EXPECT_TRUE(equals_mod_total_derivative(dp("u^2"), dp("u^2")));
    EXPECT_TRUE(equals_mod_total_derivative(dp("u*u_xx"), dp("-u_x^2")));
    EXPECT_FALSE(equals_mod_total_derivative(DiffPoly(1), DiffPoly()));
    EXPECT_FALSE(equals_mod_total_derivative(dp("u^2"), dp("u^3")));
}

TEST(DiffPoly, Kappa) {
    EXPECT_EQ(substitute_kappa(dp("u + k^2*u_xx"), Rational(0)), dp("u"));
    EXPECT_EQ(divide_by_kappa(dp("2*k*u + k^3*u_x")), dp("2*u + k^2*u_x"));
    EXPECT_THROW(divide_by_kappa(dp("u + k*u_x")), InexactKappaDivision);
    EXPECT_EQ(rescale_kappa(dp("k^2*u_xx"), Rational(2)), dp("4*k^2*u_xx"));
}

TEST(DiffPoly, SubstituteFields) {
    std::map<std::uint32_t, DiffPoly> s{{0, dp("u1 + u")}, {1, dp("u")}};
    EXPECT_EQ(substitute_fields(dp("u*u1_x"), s), dp("u*u_x + u1*u_x"));
}

TEST(DiffPoly, Grading) {
    EXPECT_EQ(dp("3/2*u*u_x + k^2*u_xxx").homogeneous_weight(scaling_grading()), 5);
    EXPECT_EQ(dp("3/2*u*u_x + k^2*u_xxx").homogeneous_weight(derivative_grading()), 1);
    EXPECT_FALSE(dp("u + u^2").homogeneous_weight(scaling_grading()).has_value());
}

TEST(DiffPoly, DerivationProperty) {
    moyal::testing::Random rnd(3);
    for (int i = 0; i < 500; ++i) {
        DiffPoly f = rnd.diffpoly(), g = rnd.diffpoly();
        ASSERT_EQ(total_x_derivative(f * g), total_x_derivative(f) * g + f * total_x_derivative(g));
    }
}

TEST(DiffPoly, EulerOperatorKillsDerivatives) {
    moyal::testing::Random rnd(4);
    for (int i = 0; i < 500; ++i) {
        DiffPoly f = rnd.diffpoly(2, 3, 3, 4);
        for (std::uint32_t field : {0u, 1u})
            ASSERT_TRUE(variational_derivative(total_x_derivative(f), {field, 0}).is_zero()) << f.str();
    }
}

TEST(DiffPoly, ModTotalDerivativeIsCongruence) {
    moyal::testing::Random rnd(5);
    for (int i = 0; i < 200; ++i) {
        DiffPoly f = rnd.diffpoly(), g = rnd.diffpoly(), h = rnd.diffpoly();
        DiffPoly f2 = f + total_x_derivative(g);
        ASSERT_TRUE(equals_mod_total_derivative(f, f2));
        ASSERT_TRUE(equals_mod_total_derivative(f2, f));
        ASSERT_TRUE(equals_mod_total_derivative(f + h, f2 + h));
    }
}
