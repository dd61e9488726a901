#include <bvft/catalog.hpp>
#include <bvft/oscillatory.hpp>
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

TEST(Kernels, PerronKernelUpperHalfPlane)
{
    const cplx omega(0.7, 1.3);
    for (double p : {-2.0, -0.5, 0.5, 1.0, 3.0}) {
        const cplx expect = p > 0 ? std::exp(I * p * omega) : cplx{};
        EXPECT_NEAR(std::abs(perron_kernel(p, omega).value - expect), 0.0, 1e-9) << "p = " << p;
    }
    EXPECT_NEAR(std::abs(perron_kernel(0.0, omega).value - 0.5), 0.0, 1e-9);
}

TEST(Kernels, PerronKernelRealOmega)
{
    const double omega = 0.4;
    for (double p : {-1.5, 2.0}) {
        const cplx expect = std::exp(I * p * omega) * (p > 0 ? 0.5 : -0.5);
        EXPECT_NEAR(std::abs(perron_kernel(p, omega).value - expect), 0.0, 1e-9);
    }
    EXPECT_THROW(perron_kernel(1.0, cplx(0.0, -1.0)), DomainError);
}

TEST(Kernels, DirichletIntegral)
{
    for (double p : {-3.0, -0.1, 0.1, 1.0, 10.0})
        EXPECT_NEAR(dirichlet_integral(p).value.real(), pi / 2 * (p > 0 ? 1 : -1), 1e-10) << p;
    EXPECT_EQ(dirichlet_integral(0.0).value, cplx{});
}

TEST(Transform, CompactBox)
{
    const PiecewiseFunction box = parse_function("on (-1,1): 1");
    for (double s : {-4.0, -0.3, 0.3, 2.0, 50.0})
        EXPECT_NEAR(std::abs(transform(box, s).value - 2.0 * std::sin(s) / s), 0.0, 1e-12) << s;
}

TEST(Transform, OneSidedExponential)
{
    const PiecewiseFunction f = parse_function("on (0,inf): exp(-x) tail+ l1");
    for (double s : {-2.0, 0.0, 1.0, 7.0})
        EXPECT_NEAR(std::abs(transform(f, s).value - 1.0 / (1.0 + I * s)), 0.0, 1e-11) << s;
}

TEST(Transform, SlowlyDecayingTail)
{
    // bounded variation tail 1/x on (1, inf): compare with the cosine/sine integrals.
    const PiecewiseFunction f = parse_function("on (1,inf): 1/x tail+ bvzero");
    const double s = 2.0;
    // int_1^inf e^{-isx}/x dx = -Ci(s) - i(pi/2 - Si(s)) for s > 0
    const double Ci2 = 0.42298082877486499570, Si2 = 1.6054129768026948486;
    const cplx expect(-Ci2, -(pi / 2 - Si2));
    EXPECT_NEAR(std::abs(transform(f, s).value - expect), 0.0, 1e-9);
}

TEST(Transform, FiniteWindowMatchesPrimitive)
{
    const PiecewiseFunction f = parse_function("on (-3,3): exp(x)");
    const double s = 3.0, a = -0.5, b = 1.0;
    const cplx k = 1.0 - I * s;
    const cplx expect = (std::exp(k * b) - std::exp(k * a)) / k;
    EXPECT_NEAR(std::abs(finite_oscillatory(f, a, b, s).value - expect), 0.0, 1e-12);
    EXPECT_THROW(finite_oscillatory(f, a, inf, s), DomainError);
}

TEST(Transform, CatalogClosedForms)
{
    for (const CatalogEntry& e : catalog()) {
        if (!e.has_closed_form())
            continue;
        for (double s : e.s_grid) {
            const cplx got = numeric_transform(e.function, s);
            EXPECT_NEAR(std::abs(got - e.closed_form(s)), 0.0, e.transform_tol) << e.name << " at s = " << s;
        }
    }
}

TEST(PrincipalValue, RequiresOddRecord)
{
    const PiecewiseFunction f = parse_function("on (1,2): 1");
    EXPECT_THROW(pv_transform(f, 1.0), NotOddError);
}

TEST(PrincipalValue, RadiusIndependence)
{
    const PiecewiseFunction f = catalog_entry("pv-alpha-0.5").function;
    const double s = 1.5;
    const cplx expect = detail::pv_power_transform(s, 0.5);
    for (double r : {0.25, 0.5, 1.0})
        EXPECT_NEAR(std::abs(pv_transform(f, s, r).value - expect), 0.0, 1e-7) << "radius " << r;
    EXPECT_THROW(pv_transform(f, s, 2.0), DomainError);
    EXPECT_THROW(pv_transform(f, s, 0.0), DomainError);
}

TEST(PrincipalValue, NonIntegrableCentre)
{
    // sgn(x)|x|^{-3/2} has no Lebesgue transform; the PV limit is finite.
    const CatalogEntry e = catalog_entry("pv-alpha-1.5");
    for (double s : {-2.0, 1.0})
        EXPECT_NEAR(std::abs(pv_transform(e.function, s).value - e.closed_form(s)), 0.0, 1e-6) << s;
}
