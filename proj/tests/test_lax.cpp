#include "moyal/lax.hpp"
#include "moyal/parser.hpp"

#include <gtest/gtest.h>

using namespace moyal;

namespace {
DiffPoly dp(const char* s) { return parse_diffpoly(s); }
const LaxOperator kKdv = LaxOperator::kdv();
} // namespace

TEST(Root, KdvCoefficients) {
    EXPECT_EQ(nth_root(kKdv, 1), parse_symbol("p + 1/2*u*p^-1 + O(p^-2)"));
    PhaseSymbol R = nth_root(kKdv, 5);
    EXPECT_TRUE(R.coefficient(-2).is_zero());
    EXPECT_TRUE(R.coefficient(-4).is_zero());
    EXPECT_EQ(R.coefficient(-3), dp("-1/8*u^2"));
    EXPECT_EQ(R.coefficient(-5), dp("1/16*u^3 + 1/8*k^2*(u_x^2 - 2*u*u_xx)"));
    EXPECT_THROW(nth_root(kKdv, -1), DomainError);
}

TEST(Root, ExactPower) {
    LaxOperator cube = LaxOperator::from_symbol(parse_symbol("p^3"));
    EXPECT_EQ(nth_root(cube, 4), parse_symbol("p + O(p^-5)"));
    EXPECT_EQ(frac_power(kKdv, 2, 3), kKdv.symbol);
}

TEST(Root, ConsistencyForKdvAndBoussinesq) {
    for (auto kind : {ProductKind::Moyal, ProductKind::PsdoLeft}) {
        for (int depth = 1; depth <= 9; ++depth) {
            PhaseSymbol R = nth_root(kKdv, depth, kind);
            PhaseSymbol sq = star(R, R, kind, contamination_bound(R, R));
            EXPECT_TRUE(agree_above(sq, kKdv.symbol, *sq.floor()));
            for (int k = 2; k <= depth; k += 2)
                if (kind == ProductKind::Moyal)
                    EXPECT_TRUE(R.coefficient(-k).is_zero());
        }
        LaxOperator bsq = LaxOperator::gelfand_dickey(3);
        for (int depth = 1; depth <= 5; ++depth) {
            PhaseSymbol R = nth_root(bsq, depth, kind);
            PhaseSymbol cube = star_power(R, 3, kind, R.floor().value() + 2);
            EXPECT_TRUE(agree_above(cube, bsq.symbol, *cube.floor()));
        }
    }
}

TEST(Flow, KdvHierarchy) {
    EXPECT_EQ(lax_flow(kKdv, 1).rhs.at(0), dp("u_x"));
    EXPECT_EQ(lax_flow(kKdv, 3).rhs.at(0), dp("3/2*u*u_x + k^2*u_xxx"));
    EXPECT_EQ(lax_flow(kKdv, 5).rhs.at(0), dp("15/8*u^2*u_x + 5/2*k^2*(u*u_xxx + 2*u_x*u_xx) + k^4*u^(5)"));
    // kappa = 1/2 gives ordinary KdV with dispersion 1/4.
    EXPECT_EQ(substitute_kappa(lax_flow(kKdv, 3), Rational(1, 2)).rhs.at(0), dp("3/2*u*u_x + 1/4*u_xxx"));
    FlowOptions n;
    n.normalize = true;
    EXPECT_EQ(lax_flow(kKdv, 3, n).rhs.at(0), dp("1/2*u*u_x + 1/3*k^2*u_xxx"));
    EXPECT_THROW(lax_flow(kKdv, 4), InvalidRequest);
}

TEST(Flow, Homogeneity) {
    for (int k : {1, 3, 5, 7, 9}) {
        DiffPoly r = lax_flow(kKdv, k).rhs.at(0);
        EXPECT_EQ(r.homogeneous_weight(scaling_grading()), k + 2) << k;
    }
}

TEST(Flow, Boussinesq) {
    FlowResult f = lax_flow(LaxOperator::gelfand_dickey(3), 2);
    EXPECT_EQ(f.rhs.at(1), dp("2*u2_x"));
    EXPECT_EQ(f.rhs.at(2), dp("-2/3*u1*u1_x - 2/3*k^2*u1_xxx"));
}

TEST(Flow, KpFirstFlows) {
    FlowResult t1 = lax_flow(LaxOperator::kp(3), 1);
    for (std::uint32_t i = 0; i < 3; ++i)
        EXPECT_EQ(t1.rhs.at(i), DiffPoly::field(i, 1));
    FlowResult t2 = lax_flow(LaxOperator::kp(3), 2);
    EXPECT_EQ(t2.rhs.at(0), dp("2*u1_x"));
    EXPECT_EQ(t2.rhs.at(1), dp("2*u*u_x + 2*u2_x"));
    EXPECT_EQ(t2.rhs.at(2), dp("4*u_x*u1 + 2*u3_x"));
}

TEST(Charges, ConservedAlongFlows) {
    EXPECT_EQ(conserved_charge(kKdv, 1), dp("1/2*u"));
    EXPECT_EQ(conserved_charge(kKdv, 3), dp("3/8*u^2 + 1/2*k^2*u_xx"));
    for (int c : {1, 3, 5})
        for (int k : {3, 5})
            EXPECT_TRUE(is_conserved(conserved_charge(kKdv, c), lax_flow(kKdv, k))) << c << " " << k;
    EXPECT_THROW(conserved_charge(kKdv, 2), InvalidRequest);
    EXPECT_THROW(conserved_charge(kKdv, 5, 3), FloorTooDeep);
}

TEST(Limit, Dispersionless) {
    FlowResult lim = dispersionless_limit(lax_flow(kKdv, 3));
    EXPECT_EQ(lim.rhs.at(0), dp("3/2*u*u_x"));
    PhaseSymbol plain = parse_symbol("p^2 + u*p");
    EXPECT_EQ(dispersionless_limit(plain), plain);
}

TEST(Sato, CoefficientMap) {
    std::vector<DiffPoly> v{DiffPoly::field(0), DiffPoly::field(1), DiffPoly::field(2)};
    auto u = sato_to_moyal(v);
    EXPECT_EQ(sato_to_moyal({v[0]})[0], v[0]);
    EXPECT_EQ(u[1], dp("u1 + 1/2*u_x"));
    EXPECT_EQ(u[2], dp("u2 + u1_x + 1/4*u_xx"));
    EXPECT_THROW(sato_to_moyal(v, 5), InsufficientCoefficients);
}

TEST(Sato, IntertwiningT2) {
    IntertwiningReport r = sato_moyal_intertwining(2, 3);
    EXPECT_TRUE(r.agrees);
    EXPECT_EQ(r.sides.size(), 3u);
}
