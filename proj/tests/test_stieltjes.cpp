#include <bvft/acceptance.hpp>
#include <bvft/parser.hpp>
#include <bvft/stieltjes.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace bvft;

namespace
{
const cplx I(0.0, 1.0);
}

TEST(Stieltjes, SmoothAgainstSmooth)
{
    const PiecewiseFunction phi = parse_function("on (-1,2): x");
    const PiecewiseFunction g = parse_function("on (0,1): x^2 | on [1,inf): 1");
    // int_0^1 x d(x^2) = 2/3
    EXPECT_NEAR(std::abs(hs_integral(phi, g, 0.0, 1.0).value - 2.0 / 3.0), 0.0, 1e-12);
}

TEST(Stieltjes, JumpPicksMidpointOfIntegrand)
{
    const PiecewiseFunction g = parse_function("on (-inf,inf): heaviside(x) tail- limit tail+ limit");
    const PiecewiseFunction phi = parse_function("on (-2,2): cos(x)");
    EXPECT_NEAR(std::abs(hs_integral(phi, g, -1.0, 1.0).value - 1.0), 0.0, 1e-13);
    // phi jumping at the same point: sub-jumps pair with the one-sided values.
    const PiecewiseFunction step = parse_function("on (0,5): 3");
    EXPECT_NEAR(std::abs(hs_integral(step, g, -1.0, 1.0).value - 1.5), 0.0, 1e-13);
}

TEST(Stieltjes, EndpointSubJumps)
{
    const PiecewiseFunction g = parse_function("on (0,inf): 1 tail+ limit");
    const PiecewiseFunction one = parse_function("on (-inf,inf): 1 tail- limit tail+ limit");
    // g(0) = 1/2: only the right half of the jump lies in [0, 1].
    EXPECT_NEAR(hs_integral(one, g, 0.0, 1.0).value.real(), 0.5, 1e-14);
    EXPECT_NEAR(hs_integral(one, g, -1.0, 0.0).value.real(), 0.5, 1e-14);
}

TEST(Stieltjes, CantorMoments)
{
    const PiecewiseFunction C = parse_function("on (0,1): cantor(x) | on [1,inf): 1 tail+ limit");
    const PiecewiseFunction one = parse_function("on (-inf,inf): 1 tail- limit tail+ limit");
    const PiecewiseFunction x = parse_function("on (-5,5): x");
    EXPECT_NEAR(std::abs(hs_integral(one, C, 0.0, 1.0).value - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(hs_integral(x, C, 0.0, 1.0).value - 0.5), 0.0, 1e-10);
    for (double s : {0.5, 3.0, 20.0}) {
        const cplx v = hs_integral(one, C, -inf, inf, Weight{s, 0.0}).value;
        EXPECT_NEAR(std::abs(v - cantor_characteristic(s)), 0.0, 1e-10) << "s = " << s;
    }
}

TEST(Stieltjes, CantorCharacteristicFunction)
{
    EXPECT_NEAR(std::abs(cantor_characteristic(0.0) - 1.0), 0.0, 1e-15);
    // phi(3^k * 2 pi) does not decay: the triadic self-similarity.
    const double s = 2.0 * std::numbers::pi;
    EXPECT_NEAR(std::abs(cantor_characteristic(s) - cantor_characteristic(3.0 * s)), 0.0, 1e-12);
}

TEST(Stieltjes, WeightedJump)
{
    const PiecewiseFunction H = parse_function("on (-inf,inf): heaviside(x-1) tail- limit tail+ limit");
    const PiecewiseFunction one = parse_function("on (-inf,inf): 1 tail- limit tail+ limit");
    const double s = 2.5;
    const cplx v = hs_integral(one, H, -inf, inf, Weight{s, 0.0}).value;
    EXPECT_NEAR(std::abs(v - std::exp(-I * s)), 0.0, 1e-14);
}

TEST(Stieltjes, IntegrationByParts)
{
    const PiecewiseFunction phi = parse_function("on (0,2): exp(x) | at 1: 4");
    const PiecewiseFunction g = parse_function("on (-1,1): x^3 | on (1,3): 2 - x");
    for (auto [a, b] : {std::pair{-0.5, 1.5}, std::pair{0.0, 1.0}, std::pair{1.0, 2.5}, std::pair{-inf, inf}}) {
        const cplx lhs = hs_integral(phi, g, a, b).value;
        const cplx rhs = by_parts_rhs(phi, g, a, b).value;
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-11) << "[" << a << ", " << b << "]";
    }
}

TEST(Stieltjes, ProductRule)
{
    const PiecewiseFunction A = parse_function("on (-1,2): x + 1");
    const PiecewiseFunction B = parse_function("on (0,3): sin(x) + 1");
    const PiecewiseFunction C = parse_function("on (-2,1): exp(-x)");
    const cplx lhs = hs_integral(A, B * C, -1.5, 2.5).value;
    EXPECT_NEAR(std::abs(lhs - product_rule(A, B, C, -1.5, 2.5).value), 0.0, 1e-11);
}

TEST(Stieltjes, AcReductionRequiresContinuity)
{
    const PiecewiseFunction A = parse_function("on (-1,2): x");
    const PiecewiseFunction B = parse_function("on (-inf,inf): atan(x) tail- limit tail+ limit");
    const cplx hs = hs_integral(A, B, 0.0, 1.0).value;
    EXPECT_NEAR(std::abs(hs - ac_reduction(A, B, 0.0, 1.0).value), 0.0, 1e-12);
    EXPECT_THROW(ac_reduction(A, parse_function("on (0.5,3): 1"), 0.0, 1.0), NotACError);
}

TEST(Stieltjes, RegulatedIdentityRecoversMidpoint)
{
    const PiecewiseFunction f = parse_function("on (-1,0): x + 2 | on (0,1): exp(-x) tail- l1 tail+ l1");
    for (double x : {0.0, 0.5, -0.25}) {
        const double mid = f.midpoint_value(x);
        EXPECT_NEAR(std::abs(regulated_identity(f, I, x).value - mid), 0.0, 1e-8) << x;
        EXPECT_NEAR(std::abs(regulated_identity(f, 1.0, x, std::pair{x - 1.0, x + 1.0}).value - mid), 0.0, 1e-8)
            << x;
    }
}

TEST(Stieltjes, MeasureDecomposition)
{
    const StieltjesMeasure m = measure_of(parse_function("on (0,1): x | at 0: 1 | on (2,3): cantor(x-2)"));
    ASSERT_EQ(m.jumps().size(), 3u);
    EXPECT_DOUBLE_EQ(m.jumps()[0].left_sub, 1.0);
    EXPECT_DOUBLE_EQ(m.jumps()[0].right_sub, -1.0);
    EXPECT_DOUBLE_EQ(m.jumps()[1].mass(), -1.0);
    EXPECT_EQ(m.singular().size(), 1u);
    EXPECT_DOUBLE_EQ(m.density(0.5), 1.0);
}

TEST(Stieltjes, GaugeSumsSettleWhileRiemannSumsDoNot)
{
    const GaugeReport rep = gauge_demo();
    EXPECT_NEAR(std::abs(rep.hs_value - 0.5), 0.0, 1e-14);
    ASSERT_FALSE(rep.rows.empty());
    const GaugeRow& last = rep.rows.back();
    EXPECT_LT(last.hs_max - last.hs_min, 1e-3);
    EXPECT_GE(last.rs_max - last.rs_min, 0.4);
}
