#include <bvft/catalog.hpp>
#include <bvft/distrib.hpp>
#include <bvft/parser.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace bvft;

namespace
{
const cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;

std::string rendered(const std::string& def) { return build(parse_function(def)).render(); }
} // namespace

TEST(Distributional, HeavisideMonomials)
{
    // H(x) -> pi delta + 1/(is); x^n H(x) -> pi i^n delta^(n) + n!/(is)^(n+1)
    const DistributionalFT h0 = transform_heaviside_monomial(0);
    ASSERT_EQ(h0.delta_terms().size(), 1u);
    EXPECT_NEAR(std::abs(h0.delta_terms()[0].coeff - pi), 0.0, 1e-15);
    ASSERT_EQ(h0.power_terms().size(), 1u);
    EXPECT_NEAR(std::abs(h0.power_terms()[0].coeff - 1.0), 0.0, 1e-15);

    const DistributionalFT h3 = transform_heaviside_monomial(3);
    EXPECT_EQ(h3.delta_terms()[0].order, 3);
    EXPECT_NEAR(std::abs(h3.delta_terms()[0].coeff + pi * I), 0.0, 1e-14);
    EXPECT_EQ(h3.power_terms()[0].order, 3);
    EXPECT_NEAR(std::abs(h3.power_terms()[0].coeff - 6.0), 0.0, 1e-14);
    EXPECT_FALSE(h3.has_function_part());
}

TEST(Distributional, Renders)
{
    EXPECT_EQ(rendered("on (0,inf): x^3 tail+ poly(0,0,0,1)"), "(-3.141592654i)·δ⁽³⁾(s) + (6)·1/(i s)⁴");
    EXPECT_EQ(rendered("on (-inf,inf): sgn(x) tail- limit tail+ limit"), "(2)·1/(i s)");
    EXPECT_EQ(rendered("on (-inf,inf): heaviside(x) tail- limit tail+ limit"), "(3.141592654)·δ(s) + (1)·1/(i s)");
    EXPECT_EQ(build(catalog_entry("arctan").function).render(), "g^(s) + (3.141592654)·1/(i s)");
    EXPECT_EQ(build(catalog_entry("poly-tanh").function).render(), "g^(s) + (4)·1/(i s)³");
}

TEST(Distributional, PointValuesDoNotMatter)
{
    // the displaced value at the jump changes nothing in the transform
    EXPECT_EQ(build(catalog_entry("example-6.1-step").function).render(), "(3.141592654)·δ(s) + (1)·1/(i s)");
}

TEST(Distributional, DecayingFunctionHasOnlyFunctionPart)
{
    const DistributionalFT d = build(parse_function("on (0,inf): exp(-x) tail+ l1"));
    EXPECT_TRUE(d.delta_terms().empty());
    EXPECT_TRUE(d.power_terms().empty());
    EXPECT_NEAR(std::abs(d.eval_function_part(2.0) - 1.0 / (1.0 + 2.0 * I)), 0.0, 1e-11);
}

TEST(Distributional, ArctanFunctionPart)
{
    // arctan = (pi/2) sgn + residual; the folded function part is -i pi e^{-|s|}/s.
    const DistributionalFT d = build(catalog_entry("arctan").function);
    for (double s : {-3.0, -0.5, 0.5, 2.0}) {
        EXPECT_NEAR(std::abs(d.eval_function_part(s, true) + I * pi * std::exp(-std::abs(s)) / s), 0.0, 1e-8) << s;
        EXPECT_NEAR(std::abs(d.eval_function_part(s) - I * pi * (1.0 - std::exp(-std::abs(s))) / s), 0.0, 1e-8)
            << s;
    }
    EXPECT_THROW(d.eval_function_part(0.0), ZeroFrequencyError);
}

TEST(Distributional, AsymptoteTermsAreLinear)
{
    // 2 sgn(x) + 3 H(x) - 1: limits -3 and 4 at -inf, +inf
    const DistributionalFT d = build(parse_function("on (-inf,inf): 2*sgn(x) + 3*heaviside(x) - 1 tail- limit tail+ limit"));
    ASSERT_EQ(d.power_terms().size(), 1u);
    // jump of 7 at 0: 7/(is); constant part 0.5 * (4 + -3) = 1/2 gives 2 pi (1/2) delta = pi delta.
    EXPECT_NEAR(std::abs(d.power_terms()[0].coeff - 7.0), 0.0, 1e-12);
    ASSERT_EQ(d.delta_terms().size(), 1u);
    EXPECT_NEAR(std::abs(d.delta_terms()[0].coeff - pi), 0.0, 1e-12);
}
