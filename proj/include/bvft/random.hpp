#ifndef BVFT_RANDOM_HPP
#define BVFT_RANDOM_HPP

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "expr.hpp"
#include "func_model.hpp"

namespace bvft
{

/// Knobs for random compactly supported BV functions (property suites).
struct RandomOptions {
    int max_breaks = 5;           ///< interior breakpoints
    double jump_probability = 0.7; ///< chance that an interior breakpoint jumps
    double point_probability = 0.3; ///< chance of a displaced point value
    double cantor_probability = 0.2; ///< chance that a piece carries a Cantor term
    bool compact = true;           ///< zero outside a random [lo, hi]
};

namespace detail
{
inline Expr random_atom(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.2, 3.0);
    using namespace ex;
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
        return Expr::polynomial({coef(rng), coef(rng), coef(rng)});
    case 1:
        return c(coef(rng)) * exp(c(coef(rng)) * x());
    case 2:
        return c(coef(rng)) * sin(c(freq(rng)) * x() + c(coef(rng)));
    case 3:
        return c(coef(rng)) * atan(c(freq(rng)) * x()) + c(coef(rng));
    default:
        return c(coef(rng)) * tanh(c(freq(rng)) * x()) + c(coef(rng));
    }
}
} // namespace detail

/// Random piecewise-smooth BV function, zero outside a random support
/// [lo, hi] with lo in (-3, -1.5) and hi in (1.5, 3), so that two draws
/// almost surely share no breakpoint.
inline PiecewiseFunction random_bv(std::mt19937_64& rng, const RandomOptions& opt = {})
{
    std::uniform_real_distribution<double> lo_d(-3.0, -1.5), hi_d(1.5, 3.0), unit(0.0, 1.0), coef(-1.0, 1.0);
    const double lo = lo_d(rng), hi = hi_d(rng);
    const int nb = std::uniform_int_distribution<int>(0, opt.max_breaks)(rng);
    std::vector<double> cuts{lo};
    for (int k = 0; k < nb; ++k)
        cuts.push_back(lo + (hi - lo) * (0.1 + 0.8 * unit(rng)));
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    std::vector<Piece> pieces;
    Expr prev;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        Expr e = detail::random_atom(rng);
        // Continuous junction: shift the new atom to meet the previous one.
        if (i > 0 && unit(rng) >= opt.jump_probability)
            e = e + ex::c(prev.eval(a) - e.eval(a));
        if (unit(rng) < opt.cantor_probability && b - a > 0.2) {
            const double len = (b - a) * (0.3 + 0.4 * unit(rng));
            const double start = a + (b - a - len) * unit(rng);
            e = e + ex::c(coef(rng)) * ex::cantor((ex::x() - ex::c(start)) / ex::c(len));
        }
        pieces.push_back({a, b, e});
        prev = e;
    }
    std::map<double, double> points;
    for (double c : cuts)
        if (unit(rng) < opt.point_probability)
            points[c] = coef(rng);
    return PiecewiseFunction::from_pieces(std::move(pieces), points, TailBehavior::l1(), TailBehavior::l1());
}

} // namespace bvft

#endif // BVFT_RANDOM_HPP
