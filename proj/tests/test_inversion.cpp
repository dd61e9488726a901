#include <bvft/catalog.hpp>
#include <bvft/inversion.hpp>
#include <bvft/parser.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace bvft;

namespace
{
const cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;
} // namespace

TEST(Inversion, SincKernelAndWindow)
{
    EXPECT_DOUBLE_EQ(sinc_kernel(0.0, 3.0), 3.0);
    EXPECT_DOUBLE_EQ(sinc_kernel(0.5, 2.0), std::sin(1.0) / 0.5);
    EXPECT_DOUBLE_EQ(detail::window(0.5), 1.0);
    EXPECT_DOUBLE_EQ(detail::window(2.5), 0.0);
    EXPECT_NEAR(detail::window(1.5), 0.5, 1e-15);
}

TEST(Inversion, BoxRecoversMidpoints)
{
    const PiecewiseFunction box = parse_function("on (-1,1): 1");
    InvertOptions opt;
    opt.strict = false;
    const auto reps = invert_many(box, {-2.0, -1.0, 0.0, 0.5, 1.0}, opt);
    const double expect[] = {0.0, 0.5, 1.0, 1.0, 0.5};
    for (std::size_t k = 0; k < reps.size(); ++k)
        EXPECT_NEAR(reps[k].recovered, expect[k], 1e-5) << "x = " << reps[k].x;
}

TEST(Inversion, CatalogPoints)
{
    for (const char* name : {"example-6.1-step", "arctan", "heaviside", "sgn", "arctan-residual"}) {
        const CatalogEntry e = catalog_entry(name);
        std::vector<double> xs;
        for (const TestPoint& p : e.points)
            xs.push_back(p.x);
        InvertOptions opt;
        opt.strict = false;
        const auto reps = invert_many(e.function, xs, opt);
        for (std::size_t k = 0; k < reps.size(); ++k)
            EXPECT_NEAR(reps[k].recovered, e.points[k].expected, e.points[k].tol) << name << " at " << xs[k];
    }
}

TEST(Inversion, PolynomialGrowthAddsBackRecord)
{
    const CatalogEntry e = catalog_entry("poly-tanh");
    InvertOptions opt;
    opt.strict = false;
    const auto reps = invert_many(e.function, {0.5, 2.0}, opt);
    EXPECT_NEAR(reps[0].recovered, 0.25 * std::tanh(0.5), 1e-3);
    EXPECT_NEAR(reps[1].recovered, 4.0 * std::tanh(2.0), 1e-3);
    EXPECT_NE(reps[1].added_back, 0.0);
}

TEST(Inversion, ClosedFormSpectrum)
{
    // g^(s) = 1/(1 + is) is the transform of e^{-x} H(x).
    auto ghat = [](double s) { return 1.0 / (1.0 + I * s); };
    for (double x : {-1.0, 0.0, 0.7}) {
        const double expect = x < 0 ? 0.0 : (x == 0.0 ? 0.5 : std::exp(-x));
        EXPECT_NEAR(pv_invert(ghat, x).recovered, expect, 1e-5) << x;
    }
}

TEST(Inversion, LocalWindowOnly)
{
    const PiecewiseFunction f = catalog_entry("arctan").function;
    const InversionReport r = local_inversion(f, -1.0, 2.0, 0.5, 1e-6);
    ASSERT_TRUE(r.target.has_value());
    EXPECT_NEAR(r.recovered, std::atan(0.5), 1e-5);
    EXPECT_THROW(local_inversion(f, 0.0, 1.0, 2.0), DomainError);
}

TEST(Inversion, OddWindowTransformInvertsToZeroOutside)
{
    const PiecewiseFunction f = catalog_entry("pv-alpha-0.5").function;
    const InversionReport r = tn_limit(f, 2.5);
    EXPECT_NEAR(r.recovered, 0.0, 1e-3);
    EXPECT_THROW(tn_limit(f, 0.5), DomainError);
    EXPECT_THROW(tn_limit(parse_function("on (0,1): 1"), 2.0), HypothesisError);
}

TEST(Inversion, RemainderDecaysWithBand)
{
    const PiecewiseFunction f = parse_function("on (-3,3): exp(-x^2)");
    const double small = std::abs(remainder_decay(f, -1.0, 1.0, 0.0, 40.0, 80.0));
    const double large = std::abs(remainder_decay(f, -1.0, 1.0, 0.0, 4.0, 8.0));
    EXPECT_LT(small, large);
    EXPECT_THROW(remainder_decay(f, -1.0, 1.0, 2.0, 1.0, 2.0), DomainError);
}

TEST(Inversion, ReportSerialises)
{
    const InversionReport r = invert_pointwise(parse_function("on (-1,1): 1"), 0.0, 1e-5);
    EXPECT_NE(r.to_csv().find(','), std::string::npos);
    EXPECT_FALSE(r.method.empty());
    EXPECT_FALSE(r.stages.empty());
}
