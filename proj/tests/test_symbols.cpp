#include "moyal/parser.hpp"
#include "moyal/symbols.hpp"
#include "support/random_values.hpp"

#include <gtest/gtest.h>

using namespace moyal;

namespace {
PhaseSymbol S(const char* s) { return parse_symbol(s); }
constexpr auto M = ProductKind::Moyal;
constexpr auto L = ProductKind::PsdoLeft;
} // namespace

TEST(PhaseSymbol, RenderingAndFloors) {
    PhaseSymbol s = S("p^3 + u*p^-1 + O(p^-3)");
    EXPECT_EQ(s.floor(), -2);
    EXPECT_EQ(s.str(), "p^3 + u*p^-1 + O(p^-3)");
    EXPECT_EQ(s.latex(), "p^3 + u p^{-1} + O(p^{-3})");
    EXPECT_THROW(s.coefficient(-3), FloorTooShallow);
    EXPECT_TRUE(s.coefficient(-2).is_zero());
    EXPECT_EQ(s.truncated(0).str(), "p^3 + O(p^-1)");
}

TEST(Star, Examples) {
    EXPECT_EQ(star(PhaseSymbol(1), S("u*p + u_x"), M, std::nullopt), S("u*p + u_x"));
    EXPECT_EQ(star(S("p^3"), S("u"), M, std::nullopt), S("p^3*u + 3*k*p^2*u_x + 3*k^2*p*u_xx + k^3*u_xxx"));
    EXPECT_EQ(star(S("u"), S("p^3"), M, std::nullopt), S("p^3*u - 3*k*p^2*u_x + 3*k^2*p*u_xx - k^3*u_xxx"));
    EXPECT_EQ(star(S("p^2"), S("u*p^-1"), M, -1), S("u*p + 2*k*u_x + k^2*p^-1*u_xx + O(p^-2)"));
    EXPECT_EQ(star(S("p"), S("u"), L, std::nullopt), S("u*p + k*u_x"));
    EXPECT_EQ(star(S("u"), S("p"), L, std::nullopt), S("u*p"));
    EXPECT_THROW(star(S("u*p^-1"), S("u"), M, std::nullopt), FloorTooDeep);
}

TEST(Star, MomentumRelations) {
    // p^n * f = sum_m C(n,m) k^m f^(m) p^{n-m} for x-only f.
    for (int n = 0; n <= 6; ++n) {
        PhaseSymbol expected;
        for (int m = 0; m <= n; ++m)
            expected.add_term(n - m, DiffPoly::field(0, static_cast<std::uint32_t>(m)) * KappaScalar::monomial(m, binomial(n, m)));
        EXPECT_EQ(star(PhaseSymbol::momentum(n), S("u"), M, std::nullopt), expected);
    }
}

TEST(Bracket, Examples) {
    EXPECT_EQ(bracket(S("p"), S("u"), M, std::nullopt), S("u_x"));
    EXPECT_EQ(bracket(S("p^3"), S("u"), M, std::nullopt), S("3*p^2*u_x + k^2*u_xxx"));
    PhaseSymbol f = S("p^2 + u*p + u1");
    EXPECT_TRUE(bracket(f, f, M, std::nullopt).is_zero());
    EXPECT_TRUE(bracket(f, f, L, std::nullopt).is_zero());
    EXPECT_EQ(poisson_bracket(S("p"), S("u")), S("u_x"));
    EXPECT_TRUE(poisson_bracket(f, f).is_zero());
    PhaseSymbol a = S("p^2 + u"), b = S("p^3 + 3/2*u*p");
    EXPECT_EQ(poisson_bracket(a, b), substitute_kappa(bracket(a, b, M, std::nullopt), Rational(0)));
}

TEST(Projection, Examples) {
    EXPECT_EQ(project(S("p^3 + u*p^-1"), 0), S("p^3"));
    EXPECT_TRUE(project(S("u*p^-1 + u1*p^-2"), 0).is_zero());
    EXPECT_EQ(project(S("p^2 + u*p + u1"), 1), S("p^2 + u*p"));
    EXPECT_THROW(project(S("p^2 + O(p^1)"), 0), FloorTooShallow);
}

TEST(Trace, Examples) {
    EXPECT_EQ(residue(S("p^-1")), DiffPoly(1));
    EXPECT_TRUE(residue(S("p^3 + u")).is_zero());
    PhaseSymbol A = S("p^2 + u"), B = S("u1*p^-1 + u2*p^-2 + O(p^-5)");
    EXPECT_TRUE(trace_equal(bracket(A, B, M, contamination_bound(A, B)), PhaseSymbol()));
    EXPECT_TRUE(trace_equal(A, A));
}

TEST(Trace, Cyclicity) {
    moyal::testing::Random rnd(6);
    for (int trial = 0; trial < 100; ++trial) {
        PhaseSymbol A = rnd.laurent_symbol(2, -4), B = rnd.laurent_symbol(1, -4);
        auto bound = contamination_bound(A, B);
        if (bound && *bound > -1)
            continue;
        for (auto kind : {M, L})
            ASSERT_TRUE(trace_equal(star(A, B, kind, bound), star(B, A, kind, bound))) << A.str() << " | " << B.str();
        // Pairing: the trace of a product is the trace of the plain product.
        ASSERT_TRUE(trace_equal(star(A, B, M, bound), multiply_commutative(A, B)));
    }
}

TEST(Star, PoissonDegeneration) {
    moyal::testing::Random rnd(7);
    for (int trial = 0; trial < 100; ++trial) {
        PhaseSymbol f = rnd.polynomial_symbol(), g = rnd.polynomial_symbol();
        for (auto kind : {M, L}) {
            ASSERT_EQ(substitute_kappa(star(f, g, kind, std::nullopt), Rational(0)),
                      substitute_kappa(multiply_commutative(f, g), Rational(0)));
        }
        ASSERT_EQ(substitute_kappa(bracket(f, g, M, std::nullopt), Rational(0)),
                  substitute_kappa(poisson_bracket(f, g), Rational(0)));
    }
}

TEST(Star, AssociativityOnLaurentTails) {
    moyal::testing::Random rnd(8);
    for (int trial = 0; trial < 50; ++trial) {
        PhaseSymbol f = rnd.laurent_symbol(1, -4), g = rnd.laurent_symbol(1, -4), h = rnd.laurent_symbol(1, -4);
        for (auto kind : {M, L}) {
            PhaseSymbol fg = star(f, g, kind, contamination_bound(f, g));
            PhaseSymbol gh = star(g, h, kind, contamination_bound(g, h));
            PhaseSymbol left = star(fg, h, kind, contamination_bound(fg, h));
            PhaseSymbol right = star(f, gh, kind, contamination_bound(f, gh));
            int common = std::max(*left.floor(), *right.floor());
            ASSERT_TRUE(agree_above(left, right, common));
        }
    }
}

TEST(Star, RequestingTooDeepAFloorThrows) {
    PhaseSymbol f = S("p + u*p^-1 + O(p^-3)");
    EXPECT_THROW(star(f, f, M, -4), FloorTooDeep);
    EXPECT_NO_THROW(star(f, f, M, -1));
}

TEST(StarPower, MatchesRepeatedProducts) {
    PhaseSymbol f = S("p^2 + u*p + u1");
    PhaseSymbol cube = star(star(f, f, M, std::nullopt), f, M, std::nullopt);
    EXPECT_EQ(star_power(f, 3, M, std::nullopt), cube);
    EXPECT_EQ(star_power(f, 0, M, std::nullopt), PhaseSymbol(1));
    EXPECT_THROW(star_power(f, -1, M, std::nullopt), InvalidRequest);
}
