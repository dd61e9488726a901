#ifndef BVFT_OSCILLATORY_HPP
#define BVFT_OSCILLATORY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "func_model.hpp"
#include "quadrature.hpp"
#include "stieltjes.hpp"

namespace bvft
{

namespace detail
{

inline constexpr double pi = std::numbers::pi;

/// Break points lo = p0 < p1 < ... < pn = hi with spacing at most `len`.
inline std::vector<double> uniform_points(double lo, double hi, double len)
{
    std::vector<double> pts{lo};
    const double n = std::ceil((hi - lo) / len);
    const auto count = static_cast<std::size_t>(std::max(1.0, n));
    for (std::size_t k = 1; k < count; ++k)
        pts.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count));
    pts.push_back(hi);
    return pts;
}

/// W(t) = int_0^t e^{-isu} du, evaluated without cancellation.
inline cplx exp_primitive(double s, double t)
{
    const double th = 0.5 * s * t;
    const double sinc = th == 0.0 ? 1.0 : std::sin(th) / th;
    return t * sinc * std::exp(cplx(0.0, -th));
}

} // namespace detail

/// int_a^b e^{-ist} e(t) dt for one atom that is smooth on (a, b), apart
/// from Cantor terms, which are integrated by parts against
/// W(t) = int_0^t e^{-isu} du.
inline QuadResult oscillatory_segment(const Expr& e, double a, double b, double s, const QuadOptions& opt = {})
{
    QuadResult total;
    if (!(a < b) || e.is_zero())
        return total;
    Expr smooth = e;
    std::vector<CantorTerm> terms;
    if (e.has_cantor()) {
        auto sp = e.split_cantor();
        if (!sp)
            throw ValidationError("Cantor atom enters non-linearly");
        smooth = sp->first;
        terms = std::move(sp->second);
    }
    if (!smooth.is_zero()) {
        auto h = [&](double t) { return std::exp(cplx(0.0, -s * t)) * smooth.eval(t); };
        const double len = s == 0.0 ? (b - a) : std::min(b - a, detail::pi / std::abs(s));
        total += quad::adaptive_points(h, detail::uniform_points(a, b, len), opt);
    }
    for (const CantorTerm& ct : terms) {
        // [W wC]_a^b - w int W dC
        const double ca = cantor_function(ct.arg(a)), cb = cantor_function(ct.arg(b));
        cplx v = ct.weight * (detail::exp_primitive(s, b) * cb - detail::exp_primitive(s, a) * ca);
        const auto [s0, s1] = ct.support();
        QuadResult wdc;
        if (std::abs(s) * (s1 - s0) > 0.5) {
            // int W dC = (int dC - int e^{-ist} dC) / (is)
            const QuadResult ex = cantor_term_exp(ct, a, b, Weight{s, 0.0});
            wdc.value = ((cb - ca) - ex.value) / cplx(0.0, s);
            wdc.abs_error = ex.abs_error / std::abs(s);
        } else {
            wdc = cantor_term_integral(ct, a, b, [&](double t) { return detail::exp_primitive(s, t); });
        }
        v -= ct.weight * wdc.value;
        total.value += v;
        total.abs_error += std::abs(ct.weight) * wdc.abs_error;
    }
    return total;
}

/// int_a^b e^{-ist} f(t) dt on a compact interval free of PV singularities.
inline QuadResult finite_oscillatory(const PiecewiseFunction& f, double a, double b, double s,
                                     const QuadOptions& opt = {})
{
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("finite_oscillatory needs a compact interval");
    if (!(a <= b))
        throw DomainError("finite_oscillatory needs a <= b");
    QuadResult total;
    std::vector<double> cuts{a};
    for (const Breakpoint& bp : f.breakpoints()) {
        if (bp.at > a && bp.at < b) {
            if (bp.singular)
                throw SingularityError("principal-value singularity inside the interval at " + std::to_string(bp.at));
            cuts.push_back(bp.at);
        }
    }
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(lo < hi))
            continue;
        total += oscillatory_segment(f.pieces()[f.piece_index(0.5 * (lo + hi))].expr, lo, hi, s, opt);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Principal-value transforms

namespace detail
{

/// int_0^d k(u) g(u) du where g may be singular like u^{-alpha} (alpha < 2)
/// at 0 and k(u) = O(u): substitute u = d v^2.
template <typename K, typename G>
QuadResult near_zero_weighted(K&& k, G&& g, double d, double s_hint, const QuadOptions& opt)
{
    auto h = [&](double v) -> cplx {
        if (v == 0.0)
            return 0.0;
        const double u = d * v * v;
        return cplx(k(u)) * g(u) * 2.0 * d * v;
    };
    // oscillation of k at frequency s_hint: break at s u = n pi
    std::vector<double> pts{0.0};
    const double n = std::floor(std::abs(s_hint) * d / pi);
    const auto count = static_cast<std::size_t>(std::min(n, 20000.0));
    for (std::size_t j = 1; j <= count; ++j) {
        const double v = std::sqrt(static_cast<double>(j) * pi / (std::abs(s_hint) * d));
        if (v < 1.0)
            pts.push_back(v);
    }
    pts.push_back(1.0);
    return quad::adaptive_points(h, pts, opt);
}

} // namespace detail

/// Principal-value integral over the odd window [c - delta, c + delta]:
///   e^{-isc} (-2i) int_0^delta sin(su) f(c+u) du.
/// `radius` overrides the recorded delta when given.
inline QuadResult pv_window_transform(const PiecewiseFunction& f, double s, std::optional<double> radius = std::nullopt,
                               const QuadOptions& opt = {})
{
    const auto& odd = f.odd_symmetry();
    if (!odd)
        throw NotOddError("function carries no odd-symmetry record");
    const double c = odd->center;
    const double delta = radius.value_or(odd->radius);
    if (!(delta > 0.0) || delta > odd->radius)
        throw DomainError("PV radius must lie in (0, recorded radius]");
    // sampled oddness about c inside the window
    for (double u : {0.021, 0.23, 0.57, 0.89}) {
        const double t = u * delta;
        const double p = f.eval(c + t), m = f.eval(c - t);
        if (std::abs(p + m) > 1e-9 * (1.0 + std::abs(p)))
            throw NotOddError("function is not odd about " + std::to_string(c));
    }
    std::vector<double> cuts{0.0};
    for (const Breakpoint& bp : f.breakpoints())
        if (bp.at > c && bp.at - c < delta)
            cuts.push_back(bp.at - c);
    cuts.push_back(delta);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto fu = [&](double u) { return f.pieces()[f.piece_index(c + u)].expr.eval(c + u); };
    // weighted integrability near the centre
    {
        QuadOptions wopt = opt;
        wopt.rel_tol = 1e-8;
        QuadResult w = detail::near_zero_weighted([](double u) { return u; },
                                                  [&](double u) { return std::abs(fu(u)); }, cuts[1], 0.0, wopt);
        if (!std::isfinite(w.value.real()) || (!w.converged && w.abs_error > 1e-6 * (1.0 + std::abs(w.value))))
            throw WeightedIntegrabilityError("int |f(t)||t-c| dt does not converge near the centre");
    }
    QuadResult total = detail::near_zero_weighted([&](double u) { return std::sin(s * u); }, fu, cuts[1], s, opt);
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const Expr& e = f.pieces()[f.piece_index(c + 0.5 * (lo + hi))].expr;
        auto h = [&](double u) { return cplx(std::sin(s * u) * e.eval(c + u)); };
        const double len = s == 0.0 ? (hi - lo) : std::min(hi - lo, detail::pi / std::abs(s));
        total += quad::adaptive_points(h, detail::uniform_points(lo, hi, len), opt);
    }
    total.value *= cplx(0.0, -2.0) * std::exp(cplx(0.0, -s * c));
    total.abs_error *= 2.0;
    return total;
}

// ---------------------------------------------------------------------------
// Whole-line transform

enum class TailStrategy { None, TruncateL1, IbpDirichlet, Reject };

/// How a transform is assembled: compact core, tail strategies, PV window.
struct TransformPlan {
    double core_lo = 0.0;
    double core_hi = 0.0;
    TailStrategy left = TailStrategy::None;
    TailStrategy right = TailStrategy::None;
    std::optional<OddSymmetry> pv;
};

inline TailStrategy strategy_for(const TailBehavior& t)
{
    switch (t.cls) {
    case TailClass::L1:
        return TailStrategy::TruncateL1;
    case TailClass::BVZero:
        return TailStrategy::IbpDirichlet;
    case TailClass::BVLimit:
    case TailClass::PolynomialGrowth:
        return TailStrategy::Reject;
    default:
        throw ClassificationError("tail class must be declared before transforming");
    }
}

inline TransformPlan make_plan(const PiecewiseFunction& f)
{
    TransformPlan p;
    const auto& bps = f.breakpoints();
    if (!bps.empty()) {
        p.core_lo = bps.front().at;
        p.core_hi = bps.back().at;
    }
    if (const auto& odd = f.odd_symmetry()) {
        p.pv = odd;
        p.core_lo = std::min(p.core_lo, odd->center - odd->radius);
        p.core_hi = std::max(p.core_hi, odd->center + odd->radius);
    }
    p.left = strategy_for(f.left_tail());
    p.right = strategy_for(f.right_tail());
    return p;
}

namespace detail
{

/// int_b^inf e^{-ist} h(t) dt for the atom h (mirrored tails pass h(-u)).
/// `hb` is the one-sided limit h(b+).
template <typename H, typename DH>
QuadResult tail_transform(H&& h, DH&& dh, double hb, double b, double s, TailStrategy st, const QuadOptions& opt)
{
    switch (st) {
    case TailStrategy::None:
        return {};
    case TailStrategy::Reject:
        throw HypothesisError("tail does not decay; use the distributional transform");
    case TailStrategy::TruncateL1:
        if (s == 0.0) {
            QuadResult r = quad::semi_infinite([&](double t) { return cplx(h(t)); }, b, opt);
            if (!r.converged)
                throw DivergentIntegralError("L1 tail integral did not converge");
            return r;
        }
        return quad::oscillatory_tail(h, b, s, opt);
    case TailStrategy::IbpDirichlet: {
        if (s == 0.0)
            throw HypothesisError("transform at s = 0 needs integrable tails");
        // e^{-isb} h(b+)/(is) + (1/(is)) int_b^inf e^{-ist} h'(t) dt
        const cplx is(0.0, s);
        QuadResult r = quad::oscillatory_tail(dh, b, s, opt);
        r.value = (std::exp(cplx(0.0, -s * b)) * hb + r.value) / is;
        r.abs_error /= std::abs(s);
        return r;
    }
    }
    return {};
}

} // namespace detail

/// Fourier transform f^(s) = int e^{-ist} f(t) dt, assembled from a plan:
/// core by finite_oscillatory, PV window by pv_window_transform, tails by lobe
/// summation (L1) or integration by parts against the derivative (BV to 0).
class Transformer
{
public:
    explicit Transformer(PiecewiseFunction f, QuadOptions opt = {}) : f_(std::move(f)), plan_(make_plan(f_)), opt_(opt)
    {
    }

    const TransformPlan& plan() const { return plan_; }
    const PiecewiseFunction& function() const { return f_; }

    QuadResult operator()(double s) const
    {
        QuadResult r;
        const double lo = plan_.core_lo, hi = plan_.core_hi;
        if (plan_.pv) {
            const double wl = plan_.pv->center - plan_.pv->radius, wr = plan_.pv->center + plan_.pv->radius;
            r += finite_oscillatory(f_, lo, wl, s, opt_);
            r += pv_window_transform(f_, s, std::nullopt, opt_);
            r += finite_oscillatory(f_, wr, hi, s, opt_);
        } else {
            r += finite_oscillatory(f_, lo, hi, s, opt_);
        }
        const Expr& er = f_.pieces().back().expr;
        const Expr& el = f_.pieces().front().expr;
        if (!er.is_zero())
            r += detail::tail_transform([&](double t) { return er.eval(t); }, [&](double t) { return er.deriv(t); },
                                        er.eval(hi, +1), hi, s, plan_.right, opt_);
        if (!el.is_zero()) {
            // int_{-inf}^{lo} e^{-ist} f dt = int_{-lo}^{inf} e^{isu} f(-u) du
            r += detail::tail_transform([&](double u) { return el.eval(-u); },
                                        [&](double u) { return -el.deriv(-u); }, el.eval(lo, -1), -lo, -s, plan_.left, opt_);
        }
        if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
            throw DivergentIntegralError("transform is not finite at s = " + std::to_string(s));
        return r;
    }

private:
    PiecewiseFunction f_;
    TransformPlan plan_;
    QuadOptions opt_;
};

/// Whole-line principal-value transform of f with an odd window: the
/// symmetric limit at the centre plus the ordinary integral elsewhere.
/// `radius` shrinks the window when given.
inline QuadResult pv_transform(const PiecewiseFunction& f, double s, std::optional<double> radius = std::nullopt,
                               const QuadOptions& opt = {})
{
    const auto& odd = f.odd_symmetry();
    if (!odd)
        throw NotOddError("function carries no odd-symmetry record");
    if (!radius)
        return Transformer(f, opt)(s);
    if (!(*radius > 0.0) || *radius > odd->radius)
        throw DomainError("PV radius must lie in (0, recorded radius]");
    return Transformer(f.with_odd_symmetry(OddSymmetry{odd->center, *radius}), opt)(s);
}

/// f^(s) for tails classified L1 or BVZero.
inline QuadResult transform(const PiecewiseFunction& f, double s, double tol = 1e-10)
{
    QuadOptions opt;
    opt.rel_tol = std::min(opt.rel_tol, tol);
    return Transformer(f, opt)(s);
}

// ---------------------------------------------------------------------------
// Kernel integrals

/// (1/(2 pi i)) int e^{ips}/(s - omega) ds, symmetric at infinity.
/// Im(omega) > 0 gives H(p) e^{ip omega}; real omega is taken as a principal
/// value about omega, giving e^{ip omega} sgn(p)/2.
inline QuadResult perron_kernel(double p, cplx omega, const QuadOptions& opt = {})
{
    const double beta = omega.imag();
    const cplx phase = std::exp(cplx(0.0, p * omega.real()));
    QuadResult r;
    if (beta < 0.0)
        throw DomainError("perron_kernel needs Im(omega) >= 0");
    if (beta == 0.0) {
        // PV about omega: (1/pi) int_0^inf sin(pu)/u du
        if (p == 0.0)
            return r;
        const double half = detail::pi / std::abs(p);
        QuadResult head = quad::adaptive([&](double u) { return u == 0.0 ? p : std::sin(p * u) / u; }, 0.0, half, opt);
        QuadResult tail = quad::oscillatory_tail([](double u) { return 1.0 / u; }, half, -p, opt);
        r = head;
        r.value += tail.value.imag();
        r.abs_error += tail.abs_error;
        r.converged = r.converged && tail.converged;
        r.terms = tail.terms;
        r.value *= phase / detail::pi;
        return r;
    }
    // u = s - Re(omega): 2i int_0^inf [u sin(pu) + beta cos(pu)] / (u^2 + beta^2) du
    auto a = [beta](double u) { return u / (u * u + beta * beta); };
    auto b = [beta](double u) { return beta / (u * u + beta * beta); };
    double total;
    if (p == 0.0) {
        QuadResult rb = quad::semi_infinite([&](double u) { return cplx(b(u)); }, 0.0, opt);
        total = rb.value.real();
        r = rb;
    } else {
        QuadResult ka = quad::oscillatory_tail(a, 0.0, -p, opt);
        QuadResult kb = quad::oscillatory_tail(b, 0.0, -p, opt);
        total = ka.value.imag() + kb.value.real();
        r = ka;
        r += kb;
    }
    r.value = phase * total / detail::pi;
    r.abs_error /= detail::pi;
    return r;
}

/// int_0^inf sin(px)/x dx by lobe summation with Euler acceleration.
inline QuadResult dirichlet_integral(double p, const QuadOptions& opt = {})
{
    QuadResult r;
    if (p == 0.0)
        return r;
    const double half = detail::pi / std::abs(p);
    QuadResult head = quad::adaptive([&](double u) { return u == 0.0 ? p : std::sin(p * u) / u; }, 0.0, half, opt);
    QuadResult tail = quad::oscillatory_tail([](double u) { return 1.0 / u; }, half, -p, opt);
    r = head;
    r.value = head.value.real() + tail.value.imag();
    r.abs_error += tail.abs_error;
    r.converged = r.converged && tail.converged;
    r.terms = tail.terms;
    return r;
}

} // namespace bvft

#endif // BVFT_OSCILLATORY_HPP
