#include <bvft/catalog.hpp>
#include <bvft/properties.hpp>
#include <bvft/random.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace bvft;

namespace
{
std::string describe(const PropertyReport& r)
{
    std::string out = r.name + ": worst " + std::to_string(r.worst);
    for (const PropertyFailure& f : r.failures)
        out += "\n  " + f.description + " (" + std::to_string(f.error) + ")";
    return out;
}
} // namespace

TEST(Properties, IntegrationByParts)
{
    for (unsigned seed : {1u, 2u}) {
        const PropertyReport r = parts_suite(seed, 60);
        EXPECT_EQ(r.cases, 60);
        EXPECT_TRUE(r.passed()) << describe(r);
    }
}

TEST(Properties, ProductRule)
{
    const PropertyReport r = product_suite(7, 40);
    EXPECT_TRUE(r.passed()) << describe(r);
}

TEST(Properties, RegulatedRepresentation)
{
    const PropertyReport r = regulated_suite(11, 15);
    EXPECT_TRUE(r.passed()) << describe(r);
}

TEST(Properties, ReportRecordsFailures)
{
    PropertyReport r{"demo", 0, 0, 1e-3, 0.0, {}};
    r.record(0, 1e-6, "fine");
    r.record(1, 1.0, "bad");
    r.record_exception(2, "threw");
    EXPECT_EQ(r.cases, 3);
    EXPECT_EQ(r.failures.size(), 2u);
    EXPECT_DOUBLE_EQ(r.worst, 1.0);
    EXPECT_FALSE(r.passed());
}

TEST(RandomFunctions, DeterministicAndCompact)
{
    std::mt19937_64 a(99), b(99);
    for (int k = 0; k < 20; ++k) {
        const PiecewiseFunction f = random_bv(a), g = random_bv(b);
        ASSERT_EQ(f.pieces().size(), g.pieces().size());
        for (double t : {-2.0, -0.3, 0.1, 1.7})
            EXPECT_EQ(f.eval(t), g.eval(t));
        EXPECT_TRUE(f.left_tail().decays());
        EXPECT_TRUE(f.right_tail().decays());
    }
}

TEST(Catalog, EntriesParseAndAreUnique)
{
    const auto all = catalog();
    EXPECT_GE(all.size(), 10u);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j)
            EXPECT_NE(all[i].name, all[j].name);
        for (const TestPoint& p : all[i].points)
            EXPECT_GT(p.tol, 0.0) << all[i].name;
    }
    EXPECT_THROW(catalog_entry("no-such-entry"), DomainError);
}

TEST(Catalog, PointValuesMatchDefinitions)
{
    for (const CatalogEntry& e : catalog())
        for (const TestPoint& p : e.points)
            EXPECT_NEAR(e.function.midpoint_value(p.x), p.expected, 1e-12) << e.name << " at " << p.x;
}
