#ifndef BVFT_STIELTJES_HPP
#define BVFT_STIELTJES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "func_model.hpp"
#include "quadrature.hpp"

namespace bvft
{

/// Exponential weight w(t) = exp(-i kappa (t - origin)). kappa = 0 gives w = 1.
struct Weight {
    cplx kappa{};
    double origin = 0.0;

    cplx operator()(double t) const
    {
        if (kappa == cplx{})
            return 1.0;
        return std::exp(cplx(0.0, -1.0) * kappa * (t - origin));
    }
    bool trivial() const { return kappa == cplx{}; }
    bool real_frequency() const { return kappa.imag() == 0.0 && kappa.real() != 0.0; }
};

/// Sub-jumps of g at a breakpoint.
struct JumpMass {
    double at;
    double left_sub;  ///< g(c) - g(c-)
    double right_sub; ///< g(c+) - g(c)
    double mass() const { return left_sub + right_sub; }
};

/// Lebesgue-Stieltjes decomposition of dg: AC density, jumps, Cantor parts.
class StieltjesMeasure
{
public:
    explicit StieltjesMeasure(PiecewiseFunction g) : g_(std::move(g))
    {
        for (const Breakpoint& bp : g_.breakpoints()) {
            if (bp.singular)
                throw NotBVError("measure of a function with an unbounded singularity");
            if (bp.is_jump())
                jumps_.push_back({bp.at, bp.value - bp.left, bp.right - bp.value});
        }
        singular_ = g_.singular_components();
    }

    const PiecewiseFunction& generator() const { return g_; }
    double density(double t) const { return g_.deriv(t); }
    const std::vector<JumpMass>& jumps() const { return jumps_; }
    const std::vector<PiecewiseFunction::SingularComponent>& singular() const { return singular_; }

    /// Variation of the measure on [a, b]: jumps (with endpoint sub-jumps),
    /// AC density and Cantor scales, each in absolute value.
    double total_variation(double a, double b) const { return g_.total_variation(a, b); }

private:
    PiecewiseFunction g_;
    std::vector<JumpMass> jumps_;
    std::vector<PiecewiseFunction::SingularComponent> singular_;
};

inline StieltjesMeasure measure_of(const PiecewiseFunction& g) { return StieltjesMeasure(g); }

// ---------------------------------------------------------------------------
// Cantor measure

namespace detail
{

template <typename F>
struct CantorRecursion {
    F& psi;
    double lo, hi; // clip window in u
    int depth;
    double tol;
    std::size_t nodes = 0;

    cplx node(double u0, double len, double mass, int level)
    {
        ++nodes;
        const double u1 = u0 + len;
        if (u1 <= lo || u0 >= hi)
            return 0.0;
        const bool inside = u0 >= lo && u1 <= hi;
        const double mid = u0 + 0.5 * len;
        if (level >= depth)
            return (mid >= lo && mid <= hi) ? mass * cplx(psi(mid)) : cplx{};
        const double third = len / 3.0;
        if (inside && level >= 2) {
            const cplx e0 = mass * cplx(psi(mid));
            const cplx e1 = 0.5 * mass * (cplx(psi(u0 + 0.5 * third)) + cplx(psi(u1 - 0.5 * third)));
            // leading error term shrinks by 9 per level
            if (std::abs(e1 - e0) <= tol * mass)
                return e1 + (e1 - e0) / 8.0;
        }
        return node(u0, third, 0.5 * mass, level + 1) + node(u1 - third, third, 0.5 * mass, level + 1);
    }
};

} // namespace detail

/// Integral of psi(u) against the Cantor measure on [0,1], restricted to
/// [lo, hi], by the self-similar recursion mu = (mu o L^-1 + mu o R^-1)/2.
/// Nodes are refined until the one-level difference is below rel_tol times
/// the node mass (scaled by max|psi|), and never beyond `depth` levels.
template <typename F>
QuadResult cantor_integral(F&& psi, int depth = 40, double lo = 0.0, double hi = 1.0, double rel_tol = 1e-14)
{
    if (depth < 1 || depth > 60)
        throw DepthError("Cantor recursion depth must lie in [1, 60]");
    double scale = 0.0;
    for (double u : {0.0, 1.0 / 6, 0.5, 5.0 / 6, 1.0})
        scale = std::max(scale, std::abs(cplx(psi(u))));
    detail::CantorRecursion<std::remove_reference_t<F>> rec{psi, lo, hi, depth, rel_tol * std::max(scale, 1e-300)};
    QuadResult r;
    r.value = rec.node(0.0, 1.0, 1.0, 0);
    r.panels = rec.nodes;
    r.abs_error = rel_tol * std::max(scale, 1e-300);
    return r;
}

/// Characteristic function of the Cantor measure: int_0^1 e^{-i sigma u} dmu(u)
/// = e^{-i sigma/2} prod_k cos(sigma 3^-k). Terms are taken until the factors
/// are 1 to double precision, or `terms` factors when given.
inline cplx cantor_characteristic(cplx sigma, int terms = -1)
{
    cplx prod = std::exp(cplx(0.0, -0.5) * sigma);
    const int n = terms > 0 ? terms : static_cast<int>(std::ceil(std::log(std::abs(sigma) + 1.0) / std::log(3.0))) + 40;
    double p = 1.0;
    for (int k = 1; k <= n; ++k) {
        p /= 3.0;
        prod *= std::cos(sigma * p);
    }
    return prod;
}

// ---------------------------------------------------------------------------
// Henstock-Stieltjes integral

namespace detail
{

inline std::vector<double> merged_cuts(const PiecewiseFunction& f, const PiecewiseFunction& g, double a, double b)
{
    std::vector<double> cuts{a};
    for (const auto* h : {&f, &g})
        for (const Breakpoint& bp : h->breakpoints())
            if (bp.at > a && bp.at < b)
                cuts.push_back(bp.at);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

inline double probe(double lo, double hi)
{
    if (std::isinf(lo) && std::isinf(hi))
        return 0.0;
    if (std::isinf(lo))
        return hi - 1.0;
    if (std::isinf(hi))
        return lo + 1.0;
    return 0.5 * (lo + hi);
}

/// int C(u) h(u) du over [ulo, uhi] within [0, 1], C the Cantor function.
/// Triadic recursion: middle thirds are ordinary integrals, and a leaf of
/// level n carries C = c0 + 2^-n C((u - u0)/L), whose Cantor factor is
/// integrated by a rule exact for linear h (nodes 1/4, 3/4, weights 1/8,
/// 3/8, from int C(v)(v - 1/2) dv = 1/16). A node is accepted when its leaf
/// value agrees with the one-level refinement.
template <typename H>
QuadResult cantor_weighted(H&& h, double ulo, double uhi, int min_level, const QuadOptions& opt)
{
    ulo = std::max(ulo, 0.0);
    uhi = std::min(uhi, 1.0);
    QuadResult out;
    if (!(ulo < uhi))
        return out;
    double scale = 0.0;
    for (int j = 0; j <= 4; ++j)
        scale = std::max(scale, std::abs(h(ulo + (uhi - ulo) * j / 4.0)));
    const double tol = std::max(opt.abs_tol, 1e-14 * scale * (uhi - ulo));
    constexpr int max_level = 36;

    auto plain = [&](double a, double b) -> cplx {
        a = std::max(a, ulo);
        b = std::min(b, uhi);
        if (!(a < b))
            return 0.0;
        QuadResult r = quad::adaptive(h, a, b, opt);
        out.abs_error += r.abs_error;
        out.converged = out.converged && r.converged;
        out.panels += r.panels;
        return r.value;
    };
    auto leaf = [&](double u0, double L, double c0, double mass) {
        return c0 * plain(u0, u0 + L) + mass * L * (h(u0 + 0.25 * L) / 8.0 + 3.0 * h(u0 + 0.75 * L) / 8.0);
    };
    auto node = [&](auto&& self, double u0, double L, double c0, double mass, int level) -> cplx {
        const double u1 = u0 + L;
        if (u1 <= ulo || u0 >= uhi)
            return 0.0;
        const bool inside = u0 >= ulo && u1 <= uhi;
        const double third = L / 3.0, half = 0.5 * mass;
        if (inside && level >= min_level) {
            const cplx e0 = leaf(u0, L, c0, mass);
            const cplx e1 = leaf(u0, third, c0, half) + (c0 + half) * plain(u0 + third, u1 - third) +
                            leaf(u1 - third, third, c0 + half, half);
            if (std::abs(e1 - e0) <= tol * L || level >= max_level)
                return e1;
        } else if (level >= max_level) {
            return (c0 + half) * plain(u0, u1);
        }
        return self(self, u0, third, c0, half, level + 1) + (c0 + half) * plain(u0 + third, u1 - third) +
               self(self, u1 - third, third, c0 + half, half, level + 1);
    };
    out.value = node(node, 0.0, 1.0, 0.0, 1.0, 0);
    return out;
}

/// int_{lo}^{hi} phi(t) w(t) g'(t) dt on an interval free of breakpoints.
inline QuadResult ac_segment(const Expr& phi, const Expr& g, double lo, double hi, const Weight& w,
                             const QuadOptions& opt)
{
    if (phi.is_zero() || g.is_const())
        return {};
    if (phi.has_cantor()) {
        // phi = smooth + sum k C(u(t)): C is 0 or 1 off its support.
        const auto split = phi.split_cantor();
        if (!split)
            throw ValidationError("Cantor atoms may only enter linearly with constant coefficients");
        QuadResult r = ac_segment(split->first, g, lo, hi, w, opt);
        for (const CantorTerm& ct : split->second) {
            auto add = [&](QuadResult q) {
                q.value *= ct.weight;
                q.abs_error *= std::abs(ct.weight);
                r += q;
            };
            const auto [s0, s1] = ct.support();
            const double one_lo = ct.arg.scale > 0 ? std::max(lo, s1) : lo;
            const double one_hi = ct.arg.scale > 0 ? hi : std::min(hi, s0);
            if (one_lo < one_hi)
                add(ac_segment(Expr::constant(1.0), g, one_lo, one_hi, w, opt));
            const double clo = std::max(lo, s0), chi = std::min(hi, s1);
            if (!(clo < chi))
                continue;
            const Affine& arg = ct.arg;
            auto h = [&](double u) {
                const double t = (u - arg.shift) / arg.scale;
                return cplx(g.deriv(t)) * w(t) / std::abs(arg.scale);
            };
            const double span = (s1 - s0) * (std::abs(w.kappa) + 1.0);
            const int min_level = std::max(3, static_cast<int>(std::ceil(std::log(span) / std::log(3.0))) + 1);
            add(cantor_weighted(h, std::min(arg(clo), arg(chi)), std::max(arg(clo), arg(chi)), min_level, opt));
        }
        return r;
    }
    auto h = [&](double t) { return cplx(phi.eval(t) * g.deriv(t)) * w(t); };
    if (std::isfinite(lo) && std::isfinite(hi)) {
        QuadResult r = quad::adaptive(h, lo, hi, opt);
        if (r.converged)
            return r;
        // endpoint singularity of g': integrate by parts against bounded g
        auto gl = g.eval(lo, +1), gr = g.eval(hi, -1);
        if (std::isfinite(gl) && std::isfinite(gr)) {
            auto dphi = [&](double t) {
                const Dual p = phi.eval_dual(t);
                const cplx wt = w(t);
                const cplx dw = cplx(0.0, -1.0) * w.kappa * wt;
                return cplx(g.eval(t)) * (cplx(p.d) * wt + cplx(p.v) * dw);
            };
            QuadResult ibp = quad::adaptive(dphi, lo, hi, opt);
            ibp.value = cplx(phi.eval(hi, -1) * gr) * w(hi) - cplx(phi.eval(lo, +1) * gl) * w(lo) - ibp.value;
            if (ibp.converged || ibp.abs_error < r.abs_error)
                return ibp;
        }
        return r;
    }
    // semi-infinite: mirror the left tail to [.., inf)
    const bool right = std::isinf(hi);
    const double start = right ? lo : -hi;
    const double sgn = right ? 1.0 : -1.0;
    if (std::isinf(start))
        throw DivergentIntegralError("doubly infinite segment");
    if (w.real_frequency()) {
        const double s = sgn * w.kappa.real();
        const cplx shift = std::exp(cplx(0.0, w.kappa.real() * w.origin));
        auto amp = [&](double u) { return phi.eval(sgn * u) * g.deriv(sgn * u); };
        QuadResult r = quad::oscillatory_tail(amp, start, s, opt);
        r.value *= shift;
        return r;
    }
    auto hm = [&](double u) { return h(sgn * u); };
    return quad::semi_infinite(hm, start, opt);
}

} // namespace detail

/// AC part of int_a^b phi w dg (no jumps, no Cantor parts).
inline QuadResult ac_integral(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b,
                              const Weight& w = {}, const QuadOptions& opt = {})
{
    QuadResult total;
    const auto cuts = detail::merged_cuts(phi, g, a, b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double p = detail::probe(lo, hi);
        const Expr& pe = phi.pieces()[phi.piece_index(p)].expr;
        const Expr& ge = g.pieces()[g.piece_index(p)].expr;
        total += detail::ac_segment(pe, ge, lo, hi, w, opt);
    }
    if (!total.converged)
        throw DivergentIntegralError("Stieltjes integral did not converge (error estimate " +
                                     std::to_string(total.abs_error) + ")");
    return total;
}

/// Jump part of int_a^b phi w dg with the tag rule: phi's point value times
/// g(c+)-g(c-) inside, g(a+)-g(a) at a and g(b)-g(b-) at b.
inline cplx jump_sum(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b, const Weight& w = {})
{
    cplx sum{};
    for (const Breakpoint& bp : g.breakpoints()) {
        if (bp.at < a || bp.at > b)
            continue;
        if (bp.singular)
            throw NotBVError("integrator has an unbounded singularity at " + std::to_string(bp.at));
        double mass;
        if (bp.at == a && bp.at == b)
            mass = 0.0;
        else if (bp.at == a)
            mass = bp.right - bp.value;
        else if (bp.at == b)
            mass = bp.value - bp.left;
        else
            mass = bp.right - bp.left;
        if (mass != 0.0)
            sum += phi.eval(bp.at) * mass * w(bp.at);
    }
    return sum;
}

/// Signed integral of psi(t) d[C(arg(t))] over [lo, hi] for one Cantor term
/// (the term's weight is not applied).
template <typename F>
QuadResult cantor_term_integral(const CantorTerm& term, double lo, double hi, F&& psi, int depth = 40)
{
    const Affine& arg = term.arg;
    const double ulo = std::min(arg(lo), arg(hi)), uhi = std::max(arg(lo), arg(hi));
    const double orient = arg.scale > 0 ? 1.0 : -1.0;
    auto psi_u = [&](double u) { return cplx(psi((u - arg.shift) / arg.scale)); };
    QuadResult r = cantor_integral(psi_u, depth, ulo, uhi);
    r.value *= orient;
    return r;
}

/// Signed integral of e^{-i kappa (t - origin)} d[C(arg(t))] over [lo, hi].
/// Triadic cells inside the window use the characteristic function in
/// closed form, so only the two cells cut by lo and hi are refined.
inline QuadResult cantor_term_exp(const CantorTerm& term, double lo, double hi, const Weight& w, int depth = 40)
{
    const Affine& arg = term.arg;
    // t = (u - shift)/scale, so e^{-i kappa t} = e^{i kappa shift/scale} e^{-i (kappa/scale) u}
    const cplx sigma = w.kappa / arg.scale;
    const cplx pre = std::exp(cplx(0.0, 1.0) * w.kappa * (arg.shift / arg.scale + w.origin));
    const double ulo = std::min(arg(lo), arg(hi)), uhi = std::max(arg(lo), arg(hi));
    auto node = [&](auto&& self, double u0, double L, double mass, int level) -> cplx {
        const double u1 = u0 + L;
        if (u1 <= ulo || u0 >= uhi)
            return 0.0;
        if (u0 >= ulo && u1 <= uhi)
            return mass * std::exp(cplx(0.0, -1.0) * sigma * u0) * cantor_characteristic(sigma * L);
        if (level >= depth) {
            const double mid = u0 + 0.5 * L;
            return (mid >= ulo && mid <= uhi) ? mass * std::exp(cplx(0.0, -1.0) * sigma * mid) : cplx{};
        }
        const double third = L / 3.0;
        return self(self, u0, third, 0.5 * mass, level + 1) + self(self, u1 - third, third, 0.5 * mass, level + 1);
    };
    QuadResult r;
    r.value = (arg.scale > 0 ? 1.0 : -1.0) * pre * node(node, 0.0, 1.0, 1.0, 0);
    r.abs_error = std::ldexp(2.0, -depth);
    return r;
}

/// Cantor part of int_a^b phi w dg.
inline QuadResult singular_integral(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b,
                                    const Weight& w = {}, int depth = 40)
{
    QuadResult total;
    for (const auto& sc : g.singular_components()) {
        const double lo = std::max(sc.lo, a), hi = std::min(sc.hi, b);
        if (!(lo < hi))
            continue;
        const double k = sc.term.weight;
        // The Cantor measure has no atoms: split at phi's breakpoints and
        // integrate each piece's expression.
        std::vector<double> cuts{lo};
        for (const Breakpoint& bp : phi.breakpoints())
            if (bp.at > lo && bp.at < hi)
                cuts.push_back(bp.at);
        cuts.push_back(hi);
        QuadResult r;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double u = cuts[i], v = cuts[i + 1];
            const Expr& pe = phi.pieces()[phi.piece_index(detail::probe(u, v))].expr;
            QuadResult q;
            if (pe.is_const()) {
                q = cantor_term_exp(sc.term, u, v, w, depth);
                q.value *= pe.const_value();
            } else {
                q = cantor_term_integral(sc.term, u, v, [&](double t) { return cplx(pe.eval(t)) * w(t); }, depth);
            }
            r += q;
        }
        r.value *= k;
        r.abs_error *= std::abs(k);
        total += r;
    }
    return total;
}

/// Henstock-Stieltjes integral int_a^b phi(t) w(t) dg(t), computed from the
/// decomposition of dg. a and b may be infinite; no mass sits at infinity.
inline QuadResult hs_integral(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b,
                              const Weight& w = {}, const QuadOptions& opt = {})
{
    if (!(a <= b))
        throw DomainError("hs_integral requires a <= b");
    if (a == b)
        return {};
    QuadResult r = ac_integral(phi, g, a, b, w, opt);
    r.value += jump_sum(phi, g, a, b, w);
    r += singular_integral(phi, g, a, b, w);
    return r;
}

namespace detail
{
inline double value_or_limit(const PiecewiseFunction& f, double t)
{
    if (std::isinf(t))
        return f.value_at_infinity(t > 0 ? 1 : -1);
    return f.eval(t);
}
} // namespace detail

/// Right side of the integration by parts formula for int_a^b phi dg.
/// Jump corrections: left sums over (a, b], right sums over [a, b).
inline QuadResult by_parts_rhs(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b,
                               const QuadOptions& opt = {})
{
    QuadResult r = hs_integral(g, phi, a, b, {}, opt);
    r.value = -r.value;
    r.value += detail::value_or_limit(phi, b) * detail::value_or_limit(g, b) -
               detail::value_or_limit(phi, a) * detail::value_or_limit(g, a);
    std::vector<double> pts;
    for (const auto* h : {&phi, &g})
        for (const Breakpoint& bp : h->breakpoints())
            if (bp.at >= a && bp.at <= b)
                pts.push_back(bp.at);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (double c : pts) {
        const Breakpoint p = phi.triple(c), q = g.triple(c);
        if (p.singular || q.singular)
            throw NotBVError("unbounded singularity inside the interval");
        if (c > a)
            r.value += (p.value - p.left) * (q.value - q.left);
        if (c < b)
            r.value -= (p.value - p.right) * (q.value - q.right);
    }
    return r;
}

/// int_a^b A d[BC] through the product rule int AB dC + int AC dB.
inline QuadResult product_rule(const PiecewiseFunction& A, const PiecewiseFunction& B, const PiecewiseFunction& C,
                               double a, double b, const QuadOptions& opt = {})
{
    auto discontinuous = [&](const PiecewiseFunction& f, double c) {
        const Breakpoint t = f.triple(c);
        return (c > a && t.left != t.value) || (c < b && t.right != t.value);
    };
    for (const Breakpoint& bp : B.breakpoints())
        if (bp.at >= a && bp.at <= b && discontinuous(B, bp.at) && discontinuous(C, bp.at))
            throw CommonDiscontinuityError("B and C are both discontinuous at " + std::to_string(bp.at));
    QuadResult r = hs_integral(A * B, C, a, b, {}, opt);
    r += hs_integral(A * C, B, a, b, {}, opt);
    return r;
}

/// int_a^b A dB = int_a^b A B' dt for absolutely continuous B.
inline QuadResult ac_reduction(const PiecewiseFunction& A, const PiecewiseFunction& B, double a, double b,
                               const QuadOptions& opt = {})
{
    for (const Breakpoint& bp : B.breakpoints()) {
        if (bp.at < a || bp.at > b)
            continue;
        if (bp.singular || (bp.at > a && bp.value != bp.left) || (bp.at < b && bp.value != bp.right))
            throw NotACError("integrator jumps at " + std::to_string(bp.at));
    }
    for (const auto& sc : B.singular_components())
        if (std::max(sc.lo, a) < std::min(sc.hi, b))
            throw NotACError("integrator has a singular Cantor part");
    return ac_integral(A, B, a, b, {}, opt);
}

// ---------------------------------------------------------------------------
// Regulated representation

/// Right side of the regulated representation of (f(x-)+f(x+))/2:
///   int H(x-t) e^{i w (x-t)} [df(t) - i w f(t) dt]            (infinite form)
///   int_a^b H(x-t) e^{i w (x-t)} [df - i w f dt] + f(a) e^{i w (x-a)}   (finite form)
inline QuadResult regulated_identity(const PiecewiseFunction& f, cplx omega, double x,
                                     std::optional<std::pair<double, double>> finite = std::nullopt,
                                     const QuadOptions& opt = {})
{
    double a = -inf, b = inf;
    if (finite) {
        std::tie(a, b) = *finite;
        if (!(a < x && x < b))
            throw DomainError("regulated identity needs a < x < b");
    } else if (!(omega.imag() > 0.0)) {
        throw HypothesisError("the infinite form needs Im(omega) > 0");
    }
    const Weight w{omega, x};
    const auto H = PiecewiseFunction::from_expr(ex::heaviside(ex::c(x) - ex::x()));
    QuadResult r = hs_integral(H, f, a, b, w, opt);
    const auto id = PiecewiseFunction::from_expr(ex::x());
    QuadResult m = hs_integral(f, id, a, x, w, opt);
    r.value -= cplx(0.0, 1.0) * omega * m.value;
    r.abs_error += std::abs(omega) * m.abs_error;
    r.converged = r.converged && m.converged;
    if (finite)
        r.value += f.eval(a) * std::exp(cplx(0.0, 1.0) * omega * (x - a));
    return r;
}

// ---------------------------------------------------------------------------
// Gauge simulator

/// Gauge: gamma(c) = (c - r_c, c + r_c) at listed points, radius
/// min(default, distance to the nearest listed point) elsewhere, and
/// [-inf, -M-) / (M+, inf] at the ends.
struct GaugeSpec {
    std::map<double, double> radius_at;
    double default_radius = 1.0;
    double m_minus = 1e3;
    double m_plus = 1e3;

    double radius(double z) const
    {
        if (auto it = radius_at.find(z); it != radius_at.end())
            return it->second;
        double r = default_radius;
        for (const auto& [c, rc] : radius_at)
            r = std::min(r, std::abs(z - c));
        return r;
    }

    /// Whether [lo, hi] lies in gamma(z).
    bool fine(double lo, double hi, double z) const
    {
        if (z == -inf)
            return lo == -inf && hi < -m_minus;
        if (z == inf)
            return hi == inf && lo > m_plus;
        const double r = radius(z);
        return lo > z - r && hi < z + r;
    }
};

struct TaggedCell {
    double lo, hi, tag;
};

using TaggedPartition = std::vector<TaggedCell>;

namespace detail
{
inline double limit_or_value(const PiecewiseFunction& f, double t)
{
    if (std::isinf(t)) {
        const TailBehavior& tb = t > 0 ? f.right_tail() : f.left_tail();
        if (tb.cls == TailClass::Unclassified && f.pieces()[t > 0 ? f.pieces().size() - 1 : 0].expr.is_const())
            return f.pieces()[t > 0 ? f.pieces().size() - 1 : 0].expr.const_value();
        return f.value_at_infinity(t > 0 ? 1 : -1);
    }
    return f.eval(t);
}

/// w at an infinite tag: 1 for the trivial weight, otherwise 0 (the
/// increment of g next to an infinite tag vanishes as M -> inf).
inline cplx weight_at(const Weight& w, double z)
{
    if (std::isfinite(z) || w.trivial())
        return w(std::isfinite(z) ? z : 0.0);
    return 0.0;
}
} // namespace detail

/// The same sum without a gauge check (Riemann-Stieltjes mode).
inline cplx riemann_sum_unchecked(const PiecewiseFunction& phi, const PiecewiseFunction& g, const TaggedPartition& P,
                                  const Weight& w = {})
{
    cplx sum{};
    for (const TaggedCell& c : P) {
        const double dg = detail::limit_or_value(g, c.hi) - detail::limit_or_value(g, c.lo);
        if (dg == 0.0)
            continue;
        sum += detail::limit_or_value(phi, c.tag) * detail::weight_at(w, c.tag) * dg;
    }
    return sum;
}

/// Riemann-Stieltjes sum  sum phi(z) w(z) [g(x_n) - g(x_{n-1})]  for a
/// partition checked against the gauge.
inline cplx gauge_sum(const PiecewiseFunction& phi, const PiecewiseFunction& g, const GaugeSpec& spec,
                      const TaggedPartition& P, const Weight& w = {})
{
    for (std::size_t i = 0; i < P.size(); ++i) {
        const TaggedCell& c = P[i];
        if (!(c.lo < c.hi) || c.tag < c.lo || c.tag > c.hi || (i > 0 && P[i - 1].hi != c.lo))
            throw NotFineError("malformed tagged partition");
        if (!spec.fine(c.lo, c.hi, c.tag))
            throw NotFineError("cell [" + std::to_string(c.lo) + ", " + std::to_string(c.hi) +
                               "] is not inside the gauge interval of its tag " + std::to_string(c.tag));
    }
    return riemann_sum_unchecked(phi, g, P, w);
}

/// Random gamma-fine tagged partition of [a, b]. Listed gauge points inside
/// (a, b) and finite endpoints become tags; the remaining cells are split
/// until a random tag makes them fine.
template <typename Rng>
TaggedPartition fine_partition(const GaugeSpec& spec, double a, double b, Rng& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    struct Forced {
        double lo, hi, tag;
    };
    std::vector<Forced> forced;
    std::vector<double> tags;
    for (const auto& [c, r] : spec.radius_at)
        if (c > a && c < b)
            tags.push_back(c);
    double lo_bound = a, hi_bound = b;
    TaggedPartition out;
    if (a == -inf) {
        const double m = spec.m_minus * (1.0 + 0.5 * U(rng)) + 1.0;
        out.push_back({-inf, -m, -inf});
        lo_bound = -m;
    }
    std::vector<TaggedCell> tail;
    if (b == inf) {
        const double m = spec.m_plus * (1.0 + 0.5 * U(rng)) + 1.0;
        tail.push_back({m, inf, inf});
        hi_bound = m;
    }
    // forced cells around listed points, shrunk to stay clear of neighbours
    std::vector<TaggedCell> cells;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const double c = tags[i];
        double room = spec.radius(c);
        const double left_gap = i > 0 ? (c - tags[i - 1]) / 2 : c - lo_bound;
        const double right_gap = i + 1 < tags.size() ? (tags[i + 1] - c) / 2 : hi_bound - c;
        const double l = std::min(room, left_gap) * (0.1 + 0.85 * U(rng));
        const double r = std::min(room, right_gap) * (0.1 + 0.85 * U(rng));
        cells.push_back({c - l, c + r, c});
    }
    if (std::isfinite(a)) {
        const double r = std::min(spec.radius(a), (cells.empty() ? hi_bound : cells.front().lo) - a) * (0.1 + 0.8 * U(rng));
        cells.insert(cells.begin(), {a, a + r, a});
    }
    if (std::isfinite(b)) {
        const double r = std::min(spec.radius(b), b - (cells.empty() ? lo_bound : cells.back().hi)) * (0.1 + 0.8 * U(rng));
        cells.push_back({b - r, b, b});
    }
    // fill gaps
    auto fill = [&](double lo, double hi, auto&& self, int guard) -> void {
        if (!(lo < hi))
            return;
        const double z = lo + (hi - lo) * U(rng);
        if (spec.fine(lo, hi, z) || guard > 200) {
            out.push_back({lo, hi, z});
            return;
        }
        const double m = lo + (hi - lo) * (0.3 + 0.4 * U(rng));
        self(lo, m, self, guard + 1);
        self(m, hi, self, guard + 1);
    };
    double cursor = lo_bound;
    for (const TaggedCell& c : cells) {
        fill(cursor, c.lo, fill, 0);
        out.push_back(c);
        cursor = c.hi;
    }
    fill(cursor, hi_bound, fill, 0);
    for (const auto& t : tail)
        out.push_back(t);
    return out;
}

/// One row of the gauge convergence table.
struct GaugeRow {
    double delta;
    double hs_min, hs_max; ///< real parts over sampled gauge-fine sums
    double rs_min, rs_max; ///< real parts over tag choices with mesh < delta only
};

struct GaugeReport {
    cplx hs_value; ///< hs_integral of the same pair
    std::vector<GaugeRow> rows;

    std::string to_csv() const
    {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "delta,hs_min,hs_max,rs_min,rs_max\n";
        for (const auto& r : rows)
            os << r.delta << ',' << r.hs_min << ',' << r.hs_max << ',' << r.rs_min << ',' << r.rs_max << '\n';
        return os.str();
    }
};

/// Shrink the gauge radius at every breakpoint of phi and g over `deltas`.
/// For each delta: HS mode samples random gauge-fine partitions of [a, b] with
/// random and endpoint-biased tags; RS mode uses a uniform mesh of width
/// below delta on [rs_a, rs_b] (offset so that breakpoints sit inside cells)
/// and takes the extreme real parts over the tag choices of every cell.
inline GaugeReport gauge_converge(const PiecewiseFunction& phi, const PiecewiseFunction& g, double a, double b,
                                  const Weight& w, const std::vector<double>& deltas, double rs_a, double rs_b,
                                  unsigned seed = 12345, int samples = 20)
{
    GaugeReport rep;
    rep.hs_value = hs_integral(phi, g, a, b, w).value;
    std::mt19937_64 rng(seed);
    std::vector<double> bps;
    for (const auto* h : {&phi, &g})
        for (const Breakpoint& bp : h->breakpoints())
            bps.push_back(bp.at);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    for (double delta : deltas) {
        GaugeSpec spec;
        for (double c : bps)
            spec.radius_at[c] = delta;
        spec.default_radius = 1.0;
        // the cutoffs grow with 1/delta but stay bounded so partitions stay small
        spec.m_minus = spec.m_plus = std::min(1.0 / delta, 100.0);
        GaugeRow row{delta, inf, -inf, 0.0, 0.0};
        for (int k = 0; k < samples; ++k) {
            const TaggedPartition P = fine_partition(spec, a, b, rng);
            const double v = gauge_sum(phi, g, spec, P, w).real();
            row.hs_min = std::min(row.hs_min, v);
            row.hs_max = std::max(row.hs_max, v);
        }
        // RS: cells of width 0.9*delta, breakpoints at cell centres where possible
        const double h = 0.9 * delta;
        const double anchor = bps.empty() ? rs_a : bps.front();
        double start = anchor - h / 2 - std::ceil((anchor - h / 2 - rs_a) / h) * h;
        std::vector<double> grid{rs_a};
        for (double x = start + h; x < rs_b; x += h)
            if (x > rs_a)
                grid.push_back(x);
        grid.push_back(rs_b);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double lo = grid[i], hi = grid[i + 1];
            const double dg = g.eval(hi) - g.eval(lo);
            if (dg == 0.0)
                continue;
            double mn = inf, mx = -inf;
            std::vector<double> cand{lo, hi, 0.5 * (lo + hi)};
            for (double c : bps)
                if (c > lo && c < hi)
                    cand.push_back(c);
            for (double z : cand) {
                const double v = (phi.eval(z) * w(z) * dg).real();
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            row.rs_min += mn;
            row.rs_max += mx;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace bvft

#endif // BVFT_STIELTJES_HPP
