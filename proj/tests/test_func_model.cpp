#include <bvft/func_model.hpp>
#include <bvft/parser.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace bvft;

TEST(Parser, StepWithDisplacedPointValue)
{
    const PiecewiseFunction f = parse_function("on (-inf,0): 0 | on (0,inf): 1 | at 0: 7 tail- limit tail+ limit");
    EXPECT_DOUBLE_EQ(f.eval(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(f.eval(0.0), 7.0);
    EXPECT_DOUBLE_EQ(f.eval(3.0), 1.0);
    EXPECT_DOUBLE_EQ(f.midpoint_value(0.0), 0.5);
    const auto [l, r] = f.one_sided_limits(0.0);
    EXPECT_DOUBLE_EQ(l, 0.0);
    EXPECT_DOUBLE_EQ(r, 1.0);
    ASSERT_NE(f.breakpoint_at(0.0), nullptr);
    EXPECT_TRUE(f.breakpoint_at(0.0)->is_jump());
}

TEST(Parser, GapsAreFilledWithZero)
{
    const PiecewiseFunction f = parse_function("on (1,2): x^2");
    EXPECT_DOUBLE_EQ(f.eval(0.0), 0.0);
    EXPECT_DOUBLE_EQ(f.eval(1.5), 2.25);
    EXPECT_DOUBLE_EQ(f.eval(5.0), 0.0);
    EXPECT_DOUBLE_EQ(f.total_variation(-inf, inf), 8.0);
}

TEST(Parser, BuiltinFunctionsAndConstants)
{
    const PiecewiseFunction f = parse_function("on (-inf,inf): atan(x) + pi/2*sgn(x) tail- limit tail+ limit");
    EXPECT_NEAR(f.eval(1.0), std::atan(1.0) + std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(f.left_tail().limit(), -std::numbers::pi, 1e-12);
    EXPECT_NEAR(f.right_tail().limit(), std::numbers::pi, 1e-12);
}

TEST(Parser, ReportsPosition)
{
    try {
        parse_function("on (0,1): x +* 2");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_GT(e.column(), 10);
    }
}

TEST(Parser, RejectsUnknownIdentifier) { EXPECT_THROW(parse_function("on (0,1): foo(x)"), ParseError); }

TEST(FuncModel, OverlappingPiecesRejected)
{
    EXPECT_THROW(parse_function("on (0,2): 1 | on (1,3): 2"), Error);
}

TEST(FuncModel, TailClassificationChecked)
{
    // 1/x on (1,inf) is not integrable, and has no nonzero limit.
    EXPECT_THROW(parse_function("on (1,inf): 1/x tail+ l1"), Error);
    EXPECT_NO_THROW(parse_function("on (1,inf): 1/x tail+ bvzero"));
    EXPECT_THROW(parse_function("on (1,inf): sin(x) tail+ bvzero"), Error);
}

TEST(FuncModel, AutoClassification)
{
    const PiecewiseFunction f = parse_function("on (1,inf): exp(-x)");
    EXPECT_TRUE(f.right_tail().decays());
}

TEST(FuncModel, ArithmeticCombinesPieces)
{
    const PiecewiseFunction a = parse_function("on (0,2): 1");
    const PiecewiseFunction b = parse_function("on (1,3): x");
    const PiecewiseFunction s = a + b;
    EXPECT_DOUBLE_EQ(s.eval(0.5), 1.0);
    EXPECT_DOUBLE_EQ(s.eval(1.5), 2.5);
    EXPECT_DOUBLE_EQ(s.eval(2.5), 2.5);
    const PiecewiseFunction p = a * b;
    EXPECT_DOUBLE_EQ(p.eval(1.5), 1.5);
    EXPECT_DOUBLE_EQ(p.eval(2.5), 0.0);
    EXPECT_DOUBLE_EQ(a.scaled(-3.0).eval(1.0), -3.0);
}

TEST(FuncModel, RestrictionKeepsWindow)
{
    const PiecewiseFunction f = parse_function("on (-inf,inf): atan(x) tail- limit tail+ limit");
    const PiecewiseFunction r = f.restricted(-1.0, 2.0);
    EXPECT_DOUBLE_EQ(r.eval(-2.0), 0.0);
    EXPECT_DOUBLE_EQ(r.eval(1.0), std::atan(1.0));
    EXPECT_DOUBLE_EQ(r.eval(3.0), 0.0);
    EXPECT_TRUE(r.left_tail().decays() && r.right_tail().decays());
}

TEST(FuncModel, JumpsListed)
{
    const PiecewiseFunction f = parse_function("on (0,1): 1 | on (1,2): 3");
    const auto js = f.jumps(-inf, inf);
    ASSERT_EQ(js.size(), 3u);
    EXPECT_DOUBLE_EQ(js[0].at, 0.0);
    EXPECT_DOUBLE_EQ(js[1].at, 1.0);
    EXPECT_DOUBLE_EQ(js[2].at, 2.0);
}

TEST(FuncModel, CantorFunction)
{
    EXPECT_DOUBLE_EQ(cantor_function(0.25), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(cantor_function(0.5), 0.5);
    EXPECT_DOUBLE_EQ(cantor_function(1.0), 1.0);
    const PiecewiseFunction f = parse_function("on (0,1): cantor(x)");
    EXPECT_NEAR(f.eval(0.75), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(f.total_variation(-inf, inf), 2.0, 1e-12);
}

TEST(FuncModel, PolynomialTailAsymptote)
{
    const PiecewiseFunction f = parse_function("on (-inf,inf): x^2*tanh(x) tail- poly(0,0,-1) tail+ poly(0,0,1)");
    const AsymptoteSplit sp = f.subtract_asymptote();
    EXPECT_TRUE(sp.residual.left_tail().decays());
    EXPECT_TRUE(sp.residual.right_tail().decays());
    for (double t : {-3.0, -0.5, 0.7, 4.0})
        EXPECT_NEAR(sp.residual.eval(t) + sp.added_back.eval(t), f.eval(t), 1e-12);
}
