#ifndef BVFT_QUADRATURE_HPP
#define BVFT_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "accel.hpp"

namespace bvft
{

using cplx = std::complex<double>;

/// Result of a numerical integration.
struct QuadResult {
    cplx value{};
    double abs_error = 0.0;
    bool converged = true;
    std::size_t panels = 0; ///< quadrature panels used
    std::size_t terms = 0;  ///< series terms (lobes) summed, when applicable

    QuadResult& operator+=(const QuadResult& o)
    {
        value += o.value;
        abs_error += o.abs_error;
        converged = converged && o.converged;
        panels += o.panels;
        terms += o.terms;
        return *this;
    }
};

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    std::size_t max_intervals = 4000;
    std::size_t max_lobes = 6000;
};

namespace quad
{

namespace detail
{
// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525313438, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
} // namespace detail

/// One Gauss-Kronrod 10/21 panel. The error is the Kronrod-Gauss difference.
template <typename F>
detail::Panel gk21(F&& f, double a, double b)
{
    using namespace detail;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx kron = fc * wgk[10];
    cplx gauss{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        const cplx s = cplx(f(c - dx)) + cplx(f(c + dx));
        kron += wgk[j] * s;
        if (j % 2 == 1)
            gauss += wg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    double err = std::abs(kron - gauss);
    if (!finite(kron))
        err = std::numeric_limits<double>::infinity();
    return {a, b, kron, err};
}

/// Globally adaptive Gauss-Kronrod integration on a finite interval: the
/// panel with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol*|I|).
template <typename F>
QuadResult adaptive(F&& f, double a, double b, const QuadOptions& opt = {})
{
    QuadResult res;
    if (a == b)
        return res;
    std::priority_queue<detail::Panel> heap;
    heap.push(gk21(f, a, b));
    cplx total = heap.top().value;
    double err = heap.top().error;
    std::size_t count = 1;
    bool stuck = false;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && count < opt.max_intervals) {
        detail::Panel p = heap.top();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            stuck = true;
            break;
        }
        heap.pop();
        auto l = gk21(f, p.a, m);
        auto r = gk21(f, m, p.b);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Recompute sums from scratch to shed accumulated rounding.
    total = 0;
    err = 0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.abs_error = err;
    res.panels = count;
    res.converged = !stuck && std::isfinite(err) && err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 1.0001;
    return res;
}

/// Adaptive integration over consecutive break points.
template <typename F>
QuadResult adaptive_points(F&& f, const std::vector<double>& pts, const QuadOptions& opt = {})
{
    QuadResult res;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] > pts[i])
            res += adaptive(f, pts[i], pts[i + 1], opt);
    return res;
}

/// Break points lo, lo+1, lo+3, lo+7, ... (doubling spans) clipped to hi.
/// Resolves features near `lo` on very long intervals.
inline std::vector<double> geometric_points(double lo, double hi, double unit = 1.0)
{
    std::vector<double> pts{lo};
    double span = unit;
    double x = lo + span;
    while (x < hi) {
        pts.push_back(x);
        span *= 2.0;
        x += span;
    }
    pts.push_back(hi);
    return pts;
}

/// Non-oscillatory integral over [b, inf). Panels double in length; the
/// remainder after the last panel is extrapolated from the ratio of the
/// last two panel contributions. Not converged when the panel
/// contributions fail to shrink geometrically.
template <typename F>
QuadResult semi_infinite(F&& h, double b, const QuadOptions& opt = {})
{
    QuadResult res;
    double lo = b;
    double span = 1.0;
    double prev = -1.0;
    int small_run = 0;
    for (int j = 0; j < 80; ++j) {
        const double hi = lo + span;
        QuadResult p = adaptive(h, lo, hi, opt);
        res += p;
        ++res.terms;
        const double mag = std::abs(p.value);
        if (prev >= 0.0) {
            const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
            if (mag == 0.0 && prev == 0.0) {
                if (++small_run >= 3)
                    return res;
            } else {
                const double r = prev > 0.0 ? mag / prev : 1.0;
                const double rem = r < 0.9 ? mag * r / (1.0 - r) : std::numeric_limits<double>::infinity();
                if (rem < tol && mag < tol) {
                    if (++small_run >= 2) {
                        res.abs_error += rem;
                        return res;
                    }
                } else {
                    small_run = 0;
                }
            }
        }
        prev = mag;
        lo = hi;
        span *= 2.0;
    }
    res.converged = false;
    return res;
}

/// Oscillatory integral  int_b^inf e^{-i s t} h(t) dt  for s != 0.
///
/// The range is cut into half-period lobes [b + k pi/|s|, b + (k+1) pi/|s|];
/// the sequence of partial sums is accelerated with the Euler transformation.
/// The first lobes are subdivided geometrically away from b so that
/// structure at unit scale is resolved even when the lobes are long.
template <typename F>
QuadResult oscillatory_tail(F&& h, double b, double s, const QuadOptions& opt = {})
{
    QuadResult res;
    const double half = std::numbers::pi / std::abs(s);
    auto integrand = [&](double t) { return std::exp(cplx(0.0, -s * t)) * cplx(h(t)); };
    std::vector<cplx> partial;
    cplx sum{};
    cplx last_est{};
    int settled = 0;
    double first_mag = -1.0;
    QuadOptions lobe_opt = opt;
    lobe_opt.rel_tol = 1e-13;
    for (std::size_t k = 0; k < opt.max_lobes; ++k) {
        const double lo = b + k * half;
        const double hi = b + (k + 1) * half;
        QuadResult lobe = (lo - b < 64.0) ? adaptive_points(integrand, geometric_points(lo, hi), lobe_opt)
                                          : adaptive(integrand, lo, hi, lobe_opt);
        res.panels += lobe.panels;
        res.converged = res.converged && lobe.converged;
        sum += lobe.value;
        partial.push_back(sum);
        const double mag = std::abs(lobe.value);
        if (first_mag < 0.0 && mag > 0.0)
            first_mag = mag;
        if (partial.size() < 6)
            continue;
        const std::span<const cplx> window = std::span<const cplx>(partial).last(std::min<std::size_t>(partial.size(), 50));
        auto est = accel::euler_partial_sums<cplx>(window, std::min<std::size_t>(window.size() / 2, 24));
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(est.value));
        if (est.error < tol && std::abs(est.value - last_est) < tol) {
            if (++settled >= 2) {
                res.value = est.value;
                res.abs_error = est.error + std::abs(est.value - last_est);
                res.terms = partial.size();
                return res;
            }
        } else {
            settled = 0;
        }
        if (mag == 0.0 && sum == cplx{} && partial.size() > 8) {
            res.value = 0.0;
            res.terms = partial.size();
            return res;
        }
        last_est = est.value;
    }
    const std::span<const cplx> window = std::span<const cplx>(partial).last(std::min<std::size_t>(partial.size(), 50));
    auto est = accel::euler_partial_sums<cplx>(window, std::min<std::size_t>(window.size() / 2, 24));
    res.value = est.value;
    res.abs_error = est.error;
    res.terms = partial.size();
    res.converged = false;
    return res;
}

} // namespace quad
} // namespace bvft

#endif // BVFT_QUADRATURE_HPP
