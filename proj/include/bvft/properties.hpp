#ifndef BVFT_PROPERTIES_HPP
#define BVFT_PROPERTIES_HPP

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random.hpp"
#include "stieltjes.hpp"

namespace bvft
{

/// One failed case of a property suite.
struct PropertyFailure {
    int index;
    std::string description;
    double error; ///< NaN when the case threw
};

/// Outcome of a seeded property suite.
struct PropertyReport {
    std::string name;
    unsigned seed = 0;
    int cases = 0;
    double tolerance = 0.0;
    double worst = 0.0;
    std::vector<PropertyFailure> failures;

    bool passed() const { return failures.empty(); }

    void record(int index, double err, const std::string& what)
    {
        ++cases;
        worst = std::max(worst, err);
        if (!(err < tolerance))
            failures.push_back({index, what, err});
    }
    void record_exception(int index, const std::string& what)
    {
        ++cases;
        failures.push_back({index, what, std::nan("")});
    }
};

namespace detail
{
inline std::string interval_text(double a, double b)
{
    std::ostringstream os;
    os.precision(17);
    os << '[' << a << ", " << b << ']';
    return os.str();
}
} // namespace detail

/// Integration by parts with jump corrections on random pairs. Every fourth
/// pair is taken over the whole line. A Cantor term may appear on one side.
inline PropertyReport parts_suite(unsigned seed, int n = 200, double tol = 1e-9)
{
    PropertyReport rep{"parts", seed, 0, tol, 0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> end(-3.5, 3.5);
    RandomOptions with, without;
    without.cantor_probability = 0.0;
    for (int k = 0; k < n; ++k) {
        const PiecewiseFunction phi = random_bv(rng, k % 2 ? with : without);
        const PiecewiseFunction g = random_bv(rng, k % 2 ? without : with);
        double a = end(rng), b = end(rng);
        if (a > b)
            std::swap(a, b);
        if (k % 4 == 0)
            a = -inf, b = inf;
        const std::string what = "pair " + std::to_string(k) + " on " + detail::interval_text(a, b);
        try {
            const cplx lhs = hs_integral(phi, g, a, b).value;
            const cplx rhs = by_parts_rhs(phi, g, a, b).value;
            rep.record(k, std::abs(lhs - rhs), what);
        } catch (const std::exception& e) {
            rep.record_exception(k, what + ": " + e.what());
        }
    }
    return rep;
}

/// int A d[BC] = int AB dC + int AC dB on random triples (no Cantor terms:
/// products of Cantor atoms are not representable).
inline PropertyReport product_suite(unsigned seed, int n = 100, double tol = 1e-9)
{
    PropertyReport rep{"product", seed, 0, tol, 0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> end(-3.5, 3.5);
    RandomOptions opt;
    opt.cantor_probability = 0.0;
    for (int k = 0; k < n; ++k) {
        const PiecewiseFunction A = random_bv(rng, opt), B = random_bv(rng, opt), C = random_bv(rng, opt);
        double a = end(rng), b = end(rng);
        if (a > b)
            std::swap(a, b);
        const std::string what = "triple " + std::to_string(k) + " on " + detail::interval_text(a, b);
        try {
            const cplx lhs = hs_integral(A, B * C, a, b).value;
            const cplx rhs = product_rule(A, B, C, a, b).value;
            rep.record(k, std::abs(lhs - rhs), what);
        } catch (const std::exception& e) {
            rep.record_exception(k, what + ": " + e.what());
        }
    }
    return rep;
}

/// Regulated representation at a jump point and a smooth point of random f:
/// infinite form for omega in {i/2, i, 2i}, finite form for omega in {0, 1}.
inline PropertyReport regulated_suite(unsigned seed, int n = 100, double tol = 1e-7)
{
    PropertyReport rep{"regulated", seed, 0, tol, 0.0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0), span(0.5, 2.0);
    for (int k = 0; k < n; ++k) {
        const PiecewiseFunction f = random_bv(rng);
        std::vector<double> xs;
        for (const Breakpoint& bp : f.breakpoints())
            if (bp.is_jump()) {
                xs.push_back(bp.at);
                break;
            }
        // smooth point: inside a piece, away from its ends
        const auto& ps = f.pieces();
        const Piece& p = ps[1 + static_cast<std::size_t>(unit(rng) * (ps.size() - 2)) % (ps.size() - 2)];
        xs.push_back(p.lo + (p.hi - p.lo) * (0.2 + 0.6 * unit(rng)));
        for (double x : xs) {
            const double mid = f.midpoint_value(x);
            auto check = [&](cplx omega, std::optional<std::pair<double, double>> fin) {
                std::ostringstream what;
                what.precision(17);
                what << "f " << k << " at x = " << x << ", omega = " << omega;
                if (fin)
                    what << ", finite on " << detail::interval_text(fin->first, fin->second);
                try {
                    rep.record(k, std::abs(regulated_identity(f, omega, x, fin).value - mid), what.str());
                } catch (const std::exception& e) {
                    rep.record_exception(k, what.str() + ": " + e.what());
                }
            };
            for (cplx omega : {cplx(0.0, 0.5), cplx(0.0, 1.0), cplx(0.0, 2.0)})
                check(omega, std::nullopt);
            const std::pair<double, double> fin{x - span(rng), x + span(rng)};
            for (double omega : {0.0, 1.0})
                check(omega, fin);
        }
    }
    return rep;
}

} // namespace bvft

#endif // BVFT_PROPERTIES_HPP
