#ifndef BVFT_CATALOG_HPP
#define BVFT_CATALOG_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "distrib.hpp"
#include "errors.hpp"
#include "oscillatory.hpp"
#include "parser.hpp"
#include "stieltjes.hpp"

namespace bvft
{

struct TestPoint {
    double x;
    double expected;
    double tol;
};

/// A named example function with its definition text, an optional closed
/// form for the transform (the folded function part when the tails do not
/// decay) and inversion test points.
struct CatalogEntry {
    std::string name;
    std::string definition;
    std::string citation;
    PiecewiseFunction function;
    std::function<cplx(double)> closed_form;
    std::vector<double> s_grid;
    double transform_tol = 1e-6;
    std::vector<TestPoint> points;

    bool has_closed_form() const { return static_cast<bool>(closed_form); }
};

/// Numerical transform at s != 0: the plain transform for decaying tails,
/// otherwise the folded function part of the distributional transform.
inline cplx numeric_transform(const PiecewiseFunction& f, double s, QuadOptions opt = {})
{
    if (f.left_tail().decays() && f.right_tail().decays())
        return Transformer(f, opt)(s).value;
    return build(f, opt).eval_function_part(s, true);
}

namespace detail
{
inline CatalogEntry entry(std::string name, std::string def, std::string cite, std::function<cplx(double)> closed,
                          std::vector<double> s_grid, double ttol, std::vector<TestPoint> pts)
{
    PiecewiseFunction f = parse_function(def);
    return {std::move(name), std::move(def), std::move(cite), std::move(f), std::move(closed), std::move(s_grid),
            ttol, std::move(pts)};
}

inline cplx pv_power_transform(double s, double alpha)
{
    // -2i sgn(s)|s|^{alpha-1} int_0^inf sin(t) t^{-alpha} dt, the integral being
    // Gamma(1-alpha) sin(pi(1-alpha)/2).
    const double mu = 1.0 - alpha;
    const double I = std::tgamma(mu) * std::sin(std::numbers::pi * mu / 2.0);
    return cplx(0.0, -2.0) * (s > 0 ? 1.0 : -1.0) * std::pow(std::abs(s), alpha - 1.0) * I;
}
} // namespace detail

inline std::vector<CatalogEntry> catalog()
{
    using detail::entry;
    static constexpr double pi = std::numbers::pi;
    const cplx i(0.0, 1.0);
    const std::vector<double> grid{-5.0, -1.0, -0.1, 0.1, 1.0, 5.0};
    std::vector<CatalogEntry> out;

    out.push_back(entry("example-6.1-step", "on (-inf,0): 0 | on (0,inf): 1 | at 0: 7 tail- limit tail+ limit",
                        "step with displaced point value a = 7 at the origin",
                        [i](double s) { return 1.0 / (i * s); }, grid, 1e-8,
                        {{-1.0, 0.0, 1e-4}, {0.0, 0.5, 1e-4}, {2.0, 1.0, 1e-4}}));

    const double ie = std::exp(-1.0);
    out.push_back(entry("log-example", "on (0,1/e): 1/log(x) | on [1/e,inf): -1/(e*x)^2",
                        "1/log(x) on (0,1/e], -1/(ex)^2 beyond, 0 on the negative axis", {}, {}, 1e-6,
                        {{-1.0, 0.0, 1e-4}, {0.1, 1.0 / std::log(0.1), 1e-4}, {ie, -1.0, 1e-4},
                         {1.0, -std::exp(-2.0), 1e-4}, {2.0, -std::exp(-2.0) / 4.0, 1e-4}}));

    out.push_back(entry("cantor", "on (0,1): cantor(x)", "Cantor-Lebesgue function on [0,1], 0 outside",
                        [i](double s) { return (cantor_characteristic(s) - std::exp(-i * s)) / (i * s); }, grid, 1e-8,
                        {{0.25, 1.0 / 3.0, 1e-3}, {0.5, 0.5, 1e-3}, {0.75, 2.0 / 3.0, 1e-3}}));

    out.push_back(entry("sgnlog", "on (-inf,-e): -1/log(x) | on (e,inf): 1/log(x) tail- bvzero tail+ bvzero",
                        "sgn(x)/log|x| for |x| > e, 0 otherwise", {}, {}, 1e-6,
                        {{0.0, 0.0, 1e-3}, {4.0, 1.0 / std::log(4.0), 1e-3}, {-5.0, -1.0 / std::log(5.0), 1e-3}}));

    out.push_back(entry("sin-sqrt", "on (1,inf): sin(x^0.5)/x^(2/3) tail+ bvzero",
                        "sin(x^(1/2))/x^(2/3) for x > 1, 0 otherwise", {}, {}, 1e-6,
                        {{0.0, 0.0, 1e-3}, {2.0, std::sin(std::sqrt(2.0)) / std::pow(2.0, 2.0 / 3.0), 1e-3}}));

    out.push_back(entry("arctan", "on (0,inf): atan(x) | on (-inf,0): atan(x) tail+ limit tail- limit",
                        "arctan with limits +-pi/2",
                        [i](double s) { return -i * pi * std::exp(-std::abs(s)) / s; }, grid, 1e-6,
                        {{-2.0, std::atan(-2.0), 1e-4}, {0.0, 0.0, 1e-4}, {0.5, std::atan(0.5), 1e-4},
                         {3.0, std::atan(3.0), 1e-4}}));

    out.push_back(entry("arctan-residual", "on (-inf,inf): atan(x) - pi/2*sgn(x) tail- bvzero tail+ bvzero",
                        "arctan(x) - (pi/2) sgn(x)",
                        [i](double s) { return i * pi * (1.0 - std::exp(-std::abs(s))) / s; }, grid, 1e-6,
                        {{1.0, pi / 4 - pi / 2, 1e-4}, {-2.0, std::atan(-2.0) + pi / 2, 1e-4}, {0.0, 0.0, 1e-4}}));

    out.push_back(entry("poly-tanh", "on (-inf,inf): x^2*tanh(x) tail- poly(0,0,-1) tail+ poly(0,0,1)",
                        "p(x) tanh(x) with p(x) = x^2", {}, {}, 1e-6,
                        {{-2.0, -4.0 * std::tanh(2.0), 1e-3}, {-0.5, -0.25 * std::tanh(0.5), 1e-3},
                         {0.5, 0.25 * std::tanh(0.5), 1e-3}, {2.0, 4.0 * std::tanh(2.0), 1e-3}}));

    out.push_back(entry("pv-alpha-0.5", "on (-inf,inf): sgn(x)*abs(x)^(-0.5) odd(0,1)",
                        "sgn(x)|x|^(-1/2), odd about 0",
                        [](double s) { return detail::pv_power_transform(s, 0.5); }, grid, 1e-6,
                        {{-2.0, -std::pow(2.0, -0.5), 1e-3}, {-1.0, -1.0, 1e-3}, {1.0, 1.0, 1e-3},
                         {2.0, std::pow(2.0, -0.5), 1e-3}}));

    out.push_back(entry("pv-alpha-1.5", "on (-inf,inf): sgn(x)*abs(x)^(-1.5) odd(0,1)",
                        "sgn(x)|x|^(-3/2), odd about 0 (principal value only)",
                        [](double s) { return detail::pv_power_transform(s, 1.5); }, grid, 1e-6, {}));

    out.push_back(entry("heaviside", "on (-inf,inf): heaviside(x) tail- limit tail+ limit", "Heaviside step",
                        [i](double s) { return 1.0 / (i * s); }, grid, 1e-8,
                        {{-1.0, 0.0, 1e-4}, {0.0, 0.5, 1e-4}, {1.0, 1.0, 1e-4}}));

    out.push_back(entry("sgn", "on (-inf,inf): sgn(x) tail- limit tail+ limit", "signum",
                        [i](double s) { return 2.0 / (i * s); }, grid, 1e-8,
                        {{-1.0, -1.0, 1e-4}, {0.0, 0.0, 1e-4}, {2.0, 1.0, 1e-4}}));
    return out;
}

inline CatalogEntry catalog_entry(const std::string& name)
{
    for (CatalogEntry& e : catalog())
        if (e.name == name)
            return e;
    throw DomainError("unknown catalog entry '" + name + "'");
}

} // namespace bvft

#endif // BVFT_CATALOG_HPP
