#include "moyal/cli.hpp"
#include "support/random_values.hpp"

#include <gtest/gtest.h>

using namespace moyal;

namespace {
cli::Result run(std::vector<std::string> args) { return cli::run(args); }
} // namespace

TEST(Parser, Grammar) {
    EXPECT_EQ(parse_symbol("p^2 + u"), PhaseSymbol::momentum(2) + PhaseSymbol(DiffPoly::field(0)));
    EXPECT_EQ(parse_symbol("p^-1"), PhaseSymbol::momentum(-1));
    EXPECT_THROW(parse_symbol("p^(1/2)"), ParseError);
    EXPECT_EQ(parse_symbol("2^3^2"), PhaseSymbol(512));
    EXPECT_EQ(parse_symbol("-p^2"), PhaseSymbol::momentum(2, DiffPoly(-1)));
    EXPECT_EQ(parse_symbol("p^3 + 3/2*u#p + 3/2*k*u_x"), parse_symbol("p^3 + 3/2*u*p"));
    EXPECT_EQ(parse_diffpoly("u^(3) - u_xxx"), DiffPoly());
    EXPECT_THROW(parse_diffpoly("u_xxxx"), ParseError);
    EXPECT_THROW(parse_diffpoly("u*p"), ParseError);
    EXPECT_THROW(parse_symbol("u/u"), ParseError);
}

TEST(Parser, ErrorPositions) {
    try {
        parse_symbol("p +\n  * u");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_EQ(e.column, 3);
    }
}

TEST(Parser, QOperators) {
    EXPECT_TRUE(operator_equal(parse_qoperator("dq*T - q*T*dq"), QOperator()));
    EXPECT_EQ(parse_qlaurent("q*x^2 - (1 + q)*x + 3").str(), "q*x^2 + (-1 - q)*x + 3");
    EXPECT_THROW(parse_qoperator("dq # T"), ParseError);
}

TEST(Parser, RoundTrip) {
    moyal::testing::Random rnd(12);
    for (int trial = 0; trial < 500; ++trial) {
        PhaseSymbol s = trial % 2 ? rnd.polynomial_symbol(3) : rnd.laurent_symbol(2, -3);
        ASSERT_EQ(parse_symbol(s.str()), s) << s.str();
        DiffPoly d = rnd.diffpoly(3, 5, 3, 4);
        ASSERT_EQ(parse_diffpoly(d.str()), d) << d.str();
        QLaurent f = rnd.qlaurent(-2, 2);
        ASSERT_EQ(parse_qlaurent(f.str()), f) << f.str();
    }
}

TEST(Cli, Examples) {
    EXPECT_EQ(run({"flow", "--hierarchy", "kdv", "--k", "3", "--format", "latex"}).out,
              "u_{t_3} = \\frac{3}{2} u u_x + \\kappa^2 u_{xxx}\n");
    EXPECT_EQ(run({"schur", "--N", "0"}).out, "p_0 = 1\n");
    EXPECT_EQ(run({"hirota", "--n", "3", "--soliton", "a=2,b=1/3,c=1"}).out, "residual = 0\n");
    EXPECT_EQ(run({"flow", "--k", "3", "--reverse"}).out, "u_t3 = -3/2*u*u_x - k^2*u_xxx\n");
}

TEST(Cli, Json) {
    auto r = run({"flow", "--k", "3", "--format", "json"});
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["rhs"]["u"], "3/2*u*u_x + k^2*u_xxx");
    auto s = nlohmann::json::parse(run({"root", "--depth", "3", "--format", "json"}).out);
    EXPECT_EQ(cli::symbol_from_json(s), nth_root(LaxOperator::kdv(), 3));
    auto f = nlohmann::json::parse(run({"dfay", "--order", "4", "--format", "json"}).out);
    EXPECT_EQ(f["relations"][0]["m"], 2);
    EXPECT_EQ(f["relations"][0]["rhs"][1][1]["F"][0][1], 3);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"flow"}).code, 1);
    EXPECT_EQ(run({"star", "--lhs", "p +", "--rhs", "p"}).code, 1);
    auto domain = run({"charge", "--k", "4"});
    EXPECT_EQ(domain.code, 2);
    EXPECT_TRUE(domain.out.empty());
    EXPECT_FALSE(domain.err.empty());
    EXPECT_EQ(run({"limit"}).code, 1);
}

TEST(Cli, Deterministic) {
    std::vector<std::string> args{"dhirota", "--order", "5"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, FileInputs) {
    const auto dir = std::filesystem::temp_directory_path();
    {
        std::ofstream(dir / "moyal_v.txt") << "u\n0 ; comment\nu1\n";
        std::ofstream(dir / "moyal_tau.txt") << "1:\n1: 5/3 35/9 215/27\n";
    }
    EXPECT_EQ(run({"map-sato", "--coeff-file", (dir / "moyal_v.txt").string()}).out,
              "u_0 = u\nu_1 = 1/2*u_x\nu_2 = 1/4*u_xx + u1\n");
    EXPECT_EQ(run({"hirota", "--n", "3", "--tau-file", (dir / "moyal_tau.txt").string()}).out, "residual = 0\n");
}
