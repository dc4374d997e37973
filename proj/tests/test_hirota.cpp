#include "moyal/hirota.hpp"
#include "support/random_values.hpp"

#include <gtest/gtest.h>

using namespace moyal;

namespace {
TimePoly t(int j) { return TimePoly::variable(j); }
HirotaPoly D(int j) { return HirotaPoly::variable(j); }
ExpSum::Wave wave(std::initializer_list<std::pair<const int, Rational>> k) { return ExpSum::Wave(k); }
} // namespace

TEST(Schur, LowOrders) {
    auto p = schur_polys(3);
    EXPECT_EQ(p[0], TimePoly(1));
    EXPECT_EQ(p[1], t(1));
    EXPECT_EQ(p[3], t(1).pow(3) * Rational(1, 6) + t(1) * t(2) + t(3));
    EXPECT_EQ(p[3].render(time_name, false), "1/6*t1^3 + t1*t2 + t3");
    for (std::size_t j = 0; j < p.size(); ++j)
        for (int v : p[j].variables())
            EXPECT_LE(v, static_cast<int>(j));
}

TEST(Hirota, PureExponentials) {
    ExpSum a = ExpSum::exponential(wave({{1, Rational(2)}, {2, Rational(3)}}));
    ExpSum b = ExpSum::exponential(wave({{1, Rational(5)}}));
    ExpSum r = hirota_apply(D(1), a, b);
    EXPECT_EQ(r, ExpSum::exponential(wave({{1, Rational(7)}, {2, Rational(3)}}), Rational(-3)));
    EXPECT_EQ(r.str(), "-3*exp(7*t1 + 3*t2)");
}

TEST(Hirota, OddOperatorsKillSquares) {
    moyal::testing::Random rnd(9);
    for (int trial = 0; trial < 50; ++trial) {
        ExpSum tau(Rational(1));
        for (int i = 0; i < 3; ++i)
            tau = tau + ExpSum::exponential(wave({{1, rnd.rational()}, {2, rnd.rational()}, {3, rnd.rational()}}), rnd.rational());
        for (int j = 1; j <= 3; ++j)
            for (unsigned m : {1u, 3u})
                ASSERT_TRUE(hirota_apply(D(j).pow(m), tau, tau).is_zero());
    }
}

TEST(Hirota, Antisymmetry) {
    moyal::testing::Random rnd(10);
    for (int trial = 0; trial < 50; ++trial) {
        ExpSum a = ExpSum(rnd.rational()) + ExpSum::exponential(wave({{1, rnd.rational()}, {2, rnd.rational()}}));
        ExpSum b = ExpSum::exponential(wave({{1, rnd.rational()}, {3, rnd.rational()}}), rnd.rational());
        for (int j = 1; j <= 3; ++j)
            ASSERT_EQ(hirota_apply(D(j), a, b), Rational(-1) * hirota_apply(D(j), b, a));
    }
}

TEST(Hirota, OneSolitonD1D2) {
    // tau = 1 + e^eta: the (1, e) and (e, 1) pairs each contribute k1 k2 e^eta with sign (+)(+) and (-)(-).
    ExpSum tau = one_soliton(Rational(2), Rational(1, 3), Rational(1), 2);
    ExpSum::Wave k = soliton_wave(Rational(2), Rational(1, 3), 2);
    ExpSum r = hirota_apply(D(1) * D(2), tau, tau);
    EXPECT_EQ(r, ExpSum::exponential(k, Rational(2) * k[1] * k[2]));
}

TEST(Hirota, BilinearKp) {
    for (int n = 2; n <= 5; ++n)
        EXPECT_TRUE(kp_bilinear_residual(n, ExpSum(Rational(1))).is_zero());
    EXPECT_TRUE(kp_bilinear_residual(3, one_soliton(Rational(2), Rational(1, 3), Rational(1), 5)).is_zero());
    ExpSum::Wave k = soliton_wave(Rational(2), Rational(1, 3), 5);
    k[3] += Rational(1, 7);
    EXPECT_FALSE(kp_bilinear_residual(3, ExpSum(Rational(1)) + ExpSum::exponential(k)).is_zero());
    EXPECT_THROW(kp_bilinear_operator(1), InvalidRequest);
}

TEST(DFay, Relations) {
    EXPECT_TRUE(dfay_relations(2).relations.empty());
    RelationSet r4 = dfay_relations(4);
    ASSERT_EQ(r4.relations.size(), 1u);
    EXPECT_EQ(r4.relations[0].rhs, F(1, 1).pow(2) * Rational(-2) + F(1, 3) * Rational(4, 3));
    EXPECT_EQ(to_p_variables(r4.relations[0].rhs).render(p_name, false), "-2*P_2^2 + 4*P_4");
}

TEST(DFay, SymmetryUpToOrderEight) {
    RelationSet r = dfay_relations(8);
    for (const auto& rel : r.relations) {
        const FRelation* mirror = r.find(rel.n, rel.m);
        ASSERT_NE(mirror, nullptr);
        EXPECT_EQ(reduce_with(rel.rhs, r), reduce_with(mirror->rhs, r)) << rel.m << rel.n;
    }
    EXPECT_NE(r.find(2, 3), nullptr);
}

TEST(DHirota, LowCases) {
    auto entries = dhirota_check(4);
    auto find = [&](int i, int j) {
        for (const auto& e : entries)
            if (e.i == i && e.j == j)
                return e;
        throw std::out_of_range("missing entry");
    };
    EXPECT_EQ(find(1, 1).status, DHirotaStatus::Tautology);
    EXPECT_EQ(find(1, 2).status, DHirotaStatus::Tautology);
    EXPECT_EQ(find(1, 3).status, DHirotaStatus::Identity);
    EXPECT_EQ(find(2, 2).status, DHirotaStatus::Residual);
}
