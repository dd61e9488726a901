#ifndef BVFT_FUNC_MODEL_HPP
#define BVFT_FUNC_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "quadrature.hpp"

namespace bvft
{

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// A point where the function may be discontinuous: f(c-), f(c), f(c+).
/// `singular` marks the centre of an odd principal-value singularity, where
/// the limits are infinite.
struct Breakpoint {
    double at = 0.0;
    double left = 0.0;
    double value = 0.0;
    double right = 0.0;
    bool singular = false;

    bool is_jump() const { return left != value || value != right; }
};

enum class TailClass { Unclassified, L1, BVZero, BVLimit, PolynomialGrowth };

/// Behaviour of f at one end of the real line.
struct TailBehavior {
    TailClass cls = TailClass::Unclassified;
    /// BVLimit: the limit. PolynomialGrowth: coefficients a_k of p(x)=sum a_k x^k.
    std::vector<double> coeffs;

    static TailBehavior unclassified() { return {}; }
    static TailBehavior l1() { return {TailClass::L1, {}}; }
    static TailBehavior bv_zero() { return {TailClass::BVZero, {}}; }
    static TailBehavior bv_limit(double limit) { return {TailClass::BVLimit, {limit}}; }
    /// Limit to be estimated from the tail atom.
    static TailBehavior bv_limit_auto() { return {TailClass::BVLimit, {}}; }
    static TailBehavior polynomial(std::vector<double> a) { return {TailClass::PolynomialGrowth, std::move(a)}; }

    double limit() const { return coeffs.empty() ? 0.0 : coeffs[0]; }

    /// Asymptote value at t (0 for L1 and BVZero).
    double asymptote(double t) const
    {
        switch (cls) {
        case TailClass::BVLimit:
            return limit();
        case TailClass::PolynomialGrowth: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;)
                v = v * t + coeffs[k];
            return v;
        }
        default:
            return 0.0;
        }
    }

    bool decays() const { return cls == TailClass::L1 || cls == TailClass::BVZero; }

    friend bool operator==(const TailBehavior&, const TailBehavior&) = default;
};

/// f is odd about `center` on [center-radius, center+radius]; its transform
/// there is taken as a symmetric principal value.
struct OddSymmetry {
    double center = 0.0;
    double radius = 0.0;
};

/// Smooth atom attached to the open interval (lo, hi).
struct Piece {
    double lo = -inf;
    double hi = inf;
    Expr expr;
};

/// Polynomials subtracted by subtract_asymptote, as H(x)p+(x) + H(-x)p-(x).
struct AsymptoteRecord {
    std::vector<double> plus;
    std::vector<double> minus;

    static double poly(const std::vector<double>& a, double t)
    {
        double v = 0.0;
        for (std::size_t k = a.size(); k-- > 0;)
            v = v * t + a[k];
        return v;
    }

    /// H(x)p+(x) + H(-x)p-(x) with H(0) = 1/2.
    double eval(double x) const
    {
        if (x > 0)
            return poly(plus, x);
        if (x < 0)
            return poly(minus, x);
        return 0.5 * (poly(plus, 0.0) + poly(minus, 0.0));
    }

    bool empty() const
    {
        auto zero = [](const std::vector<double>& a) {
            return std::all_of(a.begin(), a.end(), [](double c) { return c == 0.0; });
        };
        return zero(plus) && zero(minus);
    }
};

class PiecewiseFunction;

/// Result of subtract_asymptote.
struct AsymptoteSplit;

/// A regulated, locally BV real-line function: atoms on the open intervals
/// between consecutive breakpoints, explicit breakpoint triples, and a tail
/// class at each end. Pieces always cover the whole line.
class PiecewiseFunction
{
public:
    /// Zero function.
    PiecewiseFunction() : PiecewiseFunction(std::vector<Piece>{Piece{-inf, inf, Expr::constant(0.0)}}, {}, {}, {}) {}

    /// Low-level constructor: `pieces` must tile the real line and
    /// `breakpoints` must sit on every interior piece boundary.
    PiecewiseFunction(std::vector<Piece> pieces, std::vector<Breakpoint> breakpoints, TailBehavior left,
                      TailBehavior right, std::optional<OddSymmetry> odd = std::nullopt)
        : pieces_(std::move(pieces)), breakpoints_(std::move(breakpoints)), left_tail_(std::move(left)),
          right_tail_(std::move(right)), odd_(odd)
    {
        validate();
        resolve_auto_limits();
    }

    /// Build from pieces that may leave gaps (filled with 0), with optional
    /// point values and automatic breakpoints at the non-smooth points of the
    /// atoms. One-sided limits at breakpoints are read from the adjacent atoms.
    static PiecewiseFunction from_pieces(std::vector<Piece> pieces, const std::map<double, double>& point_values = {},
                                         TailBehavior left = {}, TailBehavior right = {},
                                         std::optional<OddSymmetry> odd = std::nullopt)
    {
        std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
        std::vector<Piece> tiled;
        double cursor = -inf;
        for (const Piece& p : pieces) {
            if (!(p.lo < p.hi))
                throw ValidationError("empty interval in piece definition");
            if (p.lo < cursor)
                throw ValidationError("overlapping pieces near " + std::to_string(p.lo));
            if (p.lo > cursor)
                tiled.push_back({cursor, p.lo, Expr::constant(0.0)});
            tiled.push_back(p);
            cursor = p.hi;
        }
        if (cursor < inf)
            tiled.push_back({cursor, inf, Expr::constant(0.0)});

        // split at atom critical points and at isolated point values
        std::vector<Piece> split;
        for (const Piece& p : tiled) {
            std::vector<double> cuts = p.expr.critical_points(p.lo, p.hi);
            for (const auto& [c, v] : point_values)
                if (c > p.lo && c < p.hi)
                    cuts.push_back(c);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            double lo = p.lo;
            for (double c : cuts) {
                split.push_back({lo, c, p.expr});
                lo = c;
            }
            split.push_back({lo, p.hi, p.expr});
        }

        std::vector<Breakpoint> bps;
        for (std::size_t i = 0; i + 1 < split.size(); ++i) {
            const double c = split[i].hi;
            Breakpoint bp;
            bp.at = c;
            bp.left = side_limit(split[i].expr, c, -1);
            bp.right = side_limit(split[i + 1].expr, c, +1);
            const bool center = odd && odd->center == c;
            if (!std::isfinite(bp.left) || !std::isfinite(bp.right)) {
                if (!center)
                    throw ValidationError("function is not regulated at " + std::to_string(c));
                bp.singular = true;
                bp.left = bp.right = bp.value = std::numeric_limits<double>::quiet_NaN();
            } else if (auto it = point_values.find(c); it != point_values.end()) {
                bp.value = it->second;
            } else if (split[i].expr.to_string() == split[i + 1].expr.to_string() &&
                       std::isfinite(split[i].expr.eval(c))) {
                // auto split inside one atom: the atom's own value (sgn(0)=0, H(0)=1/2)
                bp.value = split[i].expr.eval(c);
            } else if (bp.left == bp.right) {
                bp.value = bp.left;
            } else {
                bp.value = 0.5 * (bp.left + bp.right);
            }
            bps.push_back(bp);
        }
        if (auto it = point_values.begin(); it != point_values.end()) {
            for (const auto& [c, v] : point_values) {
                const bool known = std::any_of(bps.begin(), bps.end(), [&](const Breakpoint& b) { return b.at == c; });
                if (!known)
                    throw ValidationError("point value outside the function's breakpoints");
            }
        }

        auto default_tail = [](const Piece& p, const TailBehavior& t) {
            if (t.cls == TailClass::Unclassified && p.expr.is_zero())
                return TailBehavior::l1();
            return t;
        };
        TailBehavior lt = default_tail(split.front(), left);
        TailBehavior rt = default_tail(split.back(), right);
        return PiecewiseFunction(std::move(split), std::move(bps), lt, rt, odd);
    }

    /// Single atom on the whole line (with automatic breakpoints).
    static PiecewiseFunction from_expr(const Expr& e, TailBehavior left = {}, TailBehavior right = {},
                                       std::optional<OddSymmetry> odd = std::nullopt)
    {
        return from_pieces({Piece{-inf, inf, e}}, {}, left, right, odd);
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
    const TailBehavior& left_tail() const { return left_tail_; }
    const TailBehavior& right_tail() const { return right_tail_; }
    const std::optional<OddSymmetry>& odd_symmetry() const { return odd_; }

    PiecewiseFunction with_tails(TailBehavior left, TailBehavior right) const
    {
        return PiecewiseFunction(pieces_, breakpoints_, std::move(left), std::move(right), odd_);
    }

    PiecewiseFunction with_odd_symmetry(std::optional<OddSymmetry> odd) const
    {
        return PiecewiseFunction(pieces_, breakpoints_, left_tail_, right_tail_, odd);
    }

    /// Index of the piece whose open interval contains t (t not a breakpoint).
    std::size_t piece_index(double t) const
    {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                                   [](double v, const Breakpoint& b) { return v < b.at; });
        return static_cast<std::size_t>(it - breakpoints_.begin());
    }

    const Breakpoint* breakpoint_at(double t) const
    {
        auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t,
                                   [](const Breakpoint& b, double v) { return b.at < v; });
        if (it != breakpoints_.end() && it->at == t)
            return &*it;
        return nullptr;
    }

    /// Point value; the breakpoint's stored value at breakpoints.
    double eval(double t) const
    {
        if (const Breakpoint* bp = breakpoint_at(t)) {
            if (bp->singular)
                throw DomainError("evaluation at a principal-value singularity");
            return bp->value;
        }
        if (std::isinf(t))
            return t > 0 ? value_at_infinity(+1) : value_at_infinity(-1);
        const double v = pieces_[piece_index(t)].expr.eval(t);
        if (!std::isfinite(v))
            throw DomainError("function is not evaluable at " + std::to_string(t));
        return v;
    }

    /// Derivative of the AC part at a non-breakpoint.
    double deriv(double t) const { return pieces_[piece_index(t)].expr.deriv(t); }

    /// (f(x-), f(x+)).
    std::pair<double, double> one_sided_limits(double x) const
    {
        if (const Breakpoint* bp = breakpoint_at(x)) {
            if (bp->singular)
                throw DomainError("one-sided limits at a principal-value singularity");
            return {bp->left, bp->right};
        }
        const double v = eval(x);
        return {v, v};
    }

    double midpoint_value(double x) const
    {
        const auto [l, r] = one_sided_limits(x);
        return (l + r) / 2;
    }

    /// Breakpoints in [a, b] that carry a jump or a displaced point value.
    std::vector<Breakpoint> jumps(double a, double b) const
    {
        std::vector<Breakpoint> out;
        for (const Breakpoint& bp : breakpoints_)
            if (bp.at >= a && bp.at <= b && (bp.singular || bp.is_jump()))
                out.push_back(bp);
        return out;
    }

    /// Limit at +inf (side=+1) or -inf for tails with a limit; 0 for decaying tails.
    double value_at_infinity(int side) const
    {
        const TailBehavior& t = side > 0 ? right_tail_ : left_tail_;
        if (t.decays())
            return 0.0;
        if (t.cls == TailClass::BVLimit)
            return t.limit();
        throw ClassificationError("no finite value at infinity");
    }

    /// Total variation over [a, b] (a, b may be infinite).
    double total_variation(double a, double b) const
    {
        if (!(a < b))
            return 0.0;
        double tv = 0.0;
        for (const Piece& p : pieces_) {
            const double lo = std::max(p.lo, a), hi = std::min(p.hi, b);
            if (!(lo < hi))
                continue;
            tv += piece_variation(p, lo, hi);
        }
        for (const Breakpoint& bp : breakpoints_) {
            if (bp.at < a || bp.at > b)
                continue;
            if (bp.singular)
                throw NotBVError("unbounded variation at " + std::to_string(bp.at));
            if (bp.at > a)
                tv += std::abs(bp.value - bp.left);
            if (bp.at < b)
                tv += std::abs(bp.right - bp.value);
        }
        return tv;
    }

    /// Check one declared tail class (side = +1 or -1) against the atom.
    void validate_tail(int side) const { check_tail(side); }

    /// Verify the declared tail classes against samples of the tail atoms.
    std::pair<TailBehavior, TailBehavior> classify_tails() const
    {
        check_tail(-1);
        check_tail(+1);
        return {left_tail_, right_tail_};
    }

    /// Elementwise combination; breakpoint triples combine componentwise.
    template <typename Op>
    static PiecewiseFunction combine(const PiecewiseFunction& f, const PiecewiseFunction& g, Op op)
    {
        std::vector<double> cuts;
        for (const auto& b : f.breakpoints_)
            cuts.push_back(b.at);
        for (const auto& b : g.breakpoints_)
            cuts.push_back(b.at);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<Piece> pieces;
        double lo = -inf;
        for (std::size_t i = 0; i <= cuts.size(); ++i) {
            const double hi = i < cuts.size() ? cuts[i] : inf;
            const double probe = mid_probe(lo, hi);
            pieces.push_back({lo, hi, op(f.pieces_[f.piece_index(probe)].expr, g.pieces_[g.piece_index(probe)].expr)});
            lo = hi;
        }
        std::vector<Breakpoint> bps;
        for (double c : cuts) {
            const Breakpoint a = f.triple(c), b = g.triple(c);
            Breakpoint r;
            r.at = c;
            r.left = op(Expr::constant(a.left), Expr::constant(b.left)).const_value();
            r.value = op(Expr::constant(a.value), Expr::constant(b.value)).const_value();
            r.right = op(Expr::constant(a.right), Expr::constant(b.right)).const_value();
            r.singular = a.singular || b.singular;
            bps.push_back(r);
        }
        return PiecewiseFunction(std::move(pieces), std::move(bps), {}, {});
    }

    friend PiecewiseFunction operator+(const PiecewiseFunction& f, const PiecewiseFunction& g)
    {
        auto out = combine(f, g, [](const Expr& a, const Expr& b) { return a + b; });
        return out.with_tails(sum_tail(f.left_tail_, g.left_tail_), sum_tail(f.right_tail_, g.right_tail_));
    }
    friend PiecewiseFunction operator-(const PiecewiseFunction& f, const PiecewiseFunction& g)
    {
        return f + g.scaled(-1.0);
    }
    friend PiecewiseFunction operator*(const PiecewiseFunction& f, const PiecewiseFunction& g)
    {
        return combine(f, g, [](const Expr& a, const Expr& b) { return a * b; });
    }

    PiecewiseFunction scaled(double k) const
    {
        std::vector<Piece> ps = pieces_;
        for (auto& p : ps)
            p.expr = Expr::constant(k) * p.expr;
        std::vector<Breakpoint> bs = breakpoints_;
        for (auto& b : bs) {
            b.left *= k;
            b.value *= k;
            b.right *= k;
        }
        auto scale_tail = [k](TailBehavior t) {
            for (auto& c : t.coeffs)
                c *= k;
            return t;
        };
        return PiecewiseFunction(std::move(ps), std::move(bs), scale_tail(left_tail_), scale_tail(right_tail_), odd_);
    }

    /// f on the open interval (a, b), zero elsewhere (zero point values at a, b).
    PiecewiseFunction restricted(double a, double b) const
    {
        std::vector<Piece> ps;
        std::map<double, double> pv;
        for (const Piece& p : pieces_) {
            const double lo = std::max(p.lo, a), hi = std::min(p.hi, b);
            if (lo < hi)
                ps.push_back({lo, hi, p.expr});
        }
        for (const Breakpoint& bp : breakpoints_)
            if (bp.at > a && bp.at < b && !bp.singular)
                pv[bp.at] = bp.value;
        if (std::isfinite(a))
            pv[a] = 0.0;
        if (std::isfinite(b))
            pv[b] = 0.0;
        std::optional<OddSymmetry> odd;
        if (odd_ && odd_->center > a && odd_->center < b)
            odd = odd_;
        TailBehavior lt = std::isfinite(a) ? TailBehavior::l1() : left_tail_;
        TailBehavior rt = std::isfinite(b) ? TailBehavior::l1() : right_tail_;
        return from_pieces_exact(std::move(ps), pv, lt, rt, odd);
    }

    /// g = f - H(x)p+(x) - H(-x)p-(x) for BVLimit / PolynomialGrowth tails.
    AsymptoteSplit subtract_asymptote() const;

    /// Breakpoint triple at c (continuous points give three equal values).
    Breakpoint triple(double c) const
    {
        if (const Breakpoint* bp = breakpoint_at(c))
            return *bp;
        const double v = pieces_[piece_index(c)].expr.eval(c);
        return {c, v, v, v, false};
    }

    /// Cantor components of every piece, clipped to the piece interval.
    struct SingularComponent {
        double lo, hi; ///< support in t, clipped to the piece
        CantorTerm term;
    };
    std::vector<SingularComponent> singular_components() const
    {
        std::vector<SingularComponent> out;
        for (const Piece& p : pieces_) {
            if (!p.expr.has_cantor())
                continue;
            auto sp = p.expr.split_cantor();
            for (const CantorTerm& ct : sp->second) {
                auto [s0, s1] = ct.support();
                const double lo = std::max(s0, p.lo), hi = std::min(s1, p.hi);
                if (lo < hi)
                    out.push_back({lo, hi, ct});
            }
        }
        return out;
    }

private:
    friend struct AsymptoteSplit;

    static PiecewiseFunction from_pieces_exact(std::vector<Piece> ps, const std::map<double, double>& pv,
                                               TailBehavior lt, TailBehavior rt, std::optional<OddSymmetry> odd)
    {
        return from_pieces(std::move(ps), pv, std::move(lt), std::move(rt), odd);
    }

    static TailBehavior sum_tail(const TailBehavior& a, const TailBehavior& b)
    {
        if (a.cls == TailClass::Unclassified || b.cls == TailClass::Unclassified)
            return {};
        if (a.decays() && b.decays())
            return (a.cls == TailClass::L1 && b.cls == TailClass::L1) ? TailBehavior::l1() : TailBehavior::bv_zero();
        if (a.cls == TailClass::PolynomialGrowth || b.cls == TailClass::PolynomialGrowth) {
            std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
            for (std::size_t k = 0; k < a.coeffs.size(); ++k)
                c[k] += a.coeffs[k];
            for (std::size_t k = 0; k < b.coeffs.size(); ++k)
                c[k] += b.coeffs[k];
            return TailBehavior::polynomial(c);
        }
        return TailBehavior::bv_limit(a.limit() + b.limit());
    }

    static double mid_probe(double lo, double hi)
    {
        if (std::isinf(lo) && std::isinf(hi))
            return 0.0;
        if (std::isinf(lo))
            return hi - 1.0;
        if (std::isinf(hi))
            return lo + 1.0;
        return 0.5 * (lo + hi);
    }

    static double side_limit(const Expr& e, double c, int side)
    {
        double v = e.eval(c, side);
        if (std::isfinite(v))
            return v;
        if (std::isinf(v))
            return v;
        // removable singularity: extrapolate from nearby samples
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double h = 1e-4; h >= 1e-8; h *= 0.1) {
            const double a = e.eval(c + side * h), b = e.eval(c + side * h * 0.5);
            const double est = 2 * b - a;
            if (std::isfinite(prev) && std::abs(est - prev) < 1e-10 * (1 + std::abs(est)))
                return est;
            prev = est;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    void validate() const
    {
        if (pieces_.empty())
            throw ValidationError("a function needs at least one piece");
        if (pieces_.front().lo != -inf || pieces_.back().hi != inf)
            throw ValidationError("pieces must cover the real line");
        if (breakpoints_.size() + 1 != pieces_.size())
            throw ValidationError("one breakpoint is required between consecutive pieces");
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            const Breakpoint& bp = breakpoints_[i];
            if (pieces_[i].hi != bp.at || pieces_[i + 1].lo != bp.at)
                throw ValidationError("breakpoint does not sit on a piece boundary");
            if (i > 0 && !(breakpoints_[i - 1].at < bp.at))
                throw ValidationError("breakpoints must be strictly increasing");
            if (bp.singular) {
                if (!odd_ || odd_->center != bp.at)
                    throw ValidationError("infinite limits are only allowed at an odd-symmetry centre");
                continue;
            }
            if (!std::isfinite(bp.left) || !std::isfinite(bp.right) || !std::isfinite(bp.value))
                throw ValidationError("breakpoint limits must be finite");
            check_limit(pieces_[i].expr, bp.at, -1, bp.left);
            check_limit(pieces_[i + 1].expr, bp.at, +1, bp.right);
        }
        for (const Piece& p : pieces_) {
            if (!p.expr.critical_points(p.lo, p.hi).empty())
                throw ValidationError("atom " + p.expr.to_string() + " is not smooth inside its interval");
            if (p.expr.has_cantor() && !p.expr.split_cantor())
                throw ValidationError("Cantor atoms may only enter linearly with constant coefficients");
            check_denominators(p);
        }
        if (odd_) {
            if (!(odd_->radius > 0.0))
                throw ValidationError("odd-symmetry radius must be positive");
            for (double u : {0.013, 0.17, 0.41, 0.77, 0.93}) {
                const double t = u * odd_->radius;
                const double a = raw(odd_->center + t), b = raw(odd_->center - t);
                if (std::abs(a + b) > 1e-9 * (1.0 + std::abs(a)))
                    throw ValidationError("function is not odd about the declared centre");
            }
        }
    }

    double raw(double t) const { return pieces_[piece_index(t)].expr.eval(t); }

    static void check_limit(const Expr& e, double c, int side, double stored)
    {
        const double v = e.eval(c, side);
        if (std::isfinite(v) && std::abs(v - stored) > 1e-12 * std::max(1.0, std::abs(v)))
            throw ValidationError("stored one-sided limit at " + std::to_string(c) + " disagrees with the atom");
    }

    static void check_denominators(const Piece& p)
    {
        const auto dens = p.expr.denominators();
        if (dens.empty())
            return;
        const double lo = std::isinf(p.lo) ? (std::isinf(p.hi) ? -1e6 : std::min(p.hi - 1e6, p.hi - 1.0)) : p.lo;
        const double hi = std::isinf(p.hi) ? std::max(lo + 1e6, lo + 1.0) : p.hi;
        for (const Expr& d : dens) {
            double prev_sign = 0.0;
            for (int k = 1; k < 400; ++k) {
                const double t = lo + (hi - lo) * k / 400.0;
                const double v = d.eval(t);
                if (v == 0.0)
                    throw ValidationError("denominator vanishes inside the interval near " + std::to_string(t));
                const double sg = v > 0 ? 1.0 : -1.0;
                if (prev_sign != 0.0 && sg != prev_sign)
                    throw ValidationError("denominator changes sign inside the interval near " + std::to_string(t));
                prev_sign = sg;
            }
        }
    }

    void resolve_auto_limits()
    {
        auto resolve = [&](TailBehavior& t, int side) {
            if (t.cls != TailClass::BVLimit || !t.coeffs.empty())
                return;
            const Expr& e = side > 0 ? pieces_.back().expr : pieces_.front().expr;
            const double T = 1e8 * side;
            const double a = e.eval(T), b = e.eval(2 * T);
            const double est = 2 * b - a;
            if (!std::isfinite(est))
                throw ClassificationError("tail has no finite limit");
            t.coeffs = {est};
        };
        resolve(left_tail_, -1);
        resolve(right_tail_, +1);
    }

    double piece_variation(const Piece& p, double lo, double hi) const
    {
        const Expr& e = p.expr;
        const auto ends_ok = [&](double t, int side) {
            if (std::isinf(t))
                return;
            const double v = e.eval(t, side);
            if (std::isinf(v))
                throw NotBVError("unbounded atom at " + std::to_string(t));
        };
        ends_ok(lo, +1);
        ends_ok(hi, -1);
        double tv = 0.0;
        auto dens = [&](double t) { return std::abs(e.deriv(t)); };
        QuadOptions opt;
        opt.abs_tol = 1e-14;
        opt.rel_tol = 1e-13;
        opt.max_intervals = 20000;
        QuadResult r;
        if (std::isfinite(lo) && std::isfinite(hi)) {
            r = quad::adaptive(dens, lo, hi, opt);
        } else if (std::isfinite(lo)) {
            r = quad::semi_infinite(dens, lo, opt);
        } else if (std::isfinite(hi)) {
            r = quad::semi_infinite([&](double u) { return dens(-u); }, -hi, opt);
        } else {
            r = quad::semi_infinite(dens, 0.0, opt);
            r += quad::semi_infinite([&](double u) { return dens(-u); }, 0.0, opt);
        }
        if (!r.converged && r.abs_error > 1e-8)
            throw NotBVError("variation of " + e.to_string() + " does not converge");
        tv += r.value.real();
        if (e.has_cantor()) {
            const auto split = e.split_cantor();
            for (const CantorTerm& ct : split->second) {
                const double c0 = cantor_function(ct.arg(lo)), c1 = cantor_function(ct.arg(hi));
                tv += std::abs(ct.weight) * std::abs(c1 - c0);
            }
        }
        return tv;
    }

    void check_tail(int side) const
    {
        const TailBehavior& t = side > 0 ? right_tail_ : left_tail_;
        const Expr& e = side > 0 ? pieces_.back().expr : pieces_.front().expr;
        if (t.cls == TailClass::Unclassified)
            throw ClassificationError(std::string("tail class not declared at ") + (side > 0 ? "+inf" : "-inf"));
        std::array<double, 3> env{};
        std::array<double, 3> env_weighted{};
        for (int d = 0; d < 3; ++d) {
            for (int k = 0; k <= 40; ++k) {
                const double mag = std::pow(10.0, 1.0 + d + k / 40.0);
                const double x = side * mag;
                const double v = e.eval(x), a = t.asymptote(x);
                double r = std::abs(v - a);
                // cancellation noise of a polynomial tail is not growth
                if (r <= 1e-13 * (std::abs(v) + std::abs(a)))
                    r = 0.0;
                if (!std::isfinite(r))
                    throw ClassificationError("tail atom is not finite at " + std::to_string(x));
                env[d] = std::max(env[d], r);
                env_weighted[d] = std::max(env_weighted[d], r * mag);
            }
        }
        auto decaying = [](const std::array<double, 3>& v) {
            if (v[0] < 1e-12)
                return v[2] <= 1e-12;
            return v[1] <= v[0] * 1.0001 && v[2] <= v[1] * 1.0001 && v[2] < 0.9 * v[0];
        };
        if (!decaying(env))
            throw ClassificationError("tail residual does not decay at " + std::string(side > 0 ? "+inf" : "-inf"));
        if (t.cls == TailClass::L1 && !decaying(env_weighted))
            throw ClassificationError("tail is not integrable at " + std::string(side > 0 ? "+inf" : "-inf"));
    }

    std::vector<Piece> pieces_;
    std::vector<Breakpoint> breakpoints_;
    TailBehavior left_tail_;
    TailBehavior right_tail_;
    std::optional<OddSymmetry> odd_;
};

struct AsymptoteSplit {
    PiecewiseFunction residual;
    AsymptoteRecord added_back;
};

inline AsymptoteSplit PiecewiseFunction::subtract_asymptote() const
{
    auto coeffs_of = [](const TailBehavior& t) -> std::vector<double> {
        switch (t.cls) {
        case TailClass::BVLimit:
            return {t.limit()};
        case TailClass::PolynomialGrowth:
            return t.coeffs;
        case TailClass::L1:
        case TailClass::BVZero:
            return {};
        default:
            throw ClassificationError("tails must be classified before subtracting asymptotes");
        }
    };
    AsymptoteRecord rec{coeffs_of(right_tail_), coeffs_of(left_tail_)};
    if (rec.empty())
        return {*this, rec};

    const Expr pplus = Expr::polynomial(rec.plus);
    const Expr pminus = Expr::polynomial(rec.minus);
    std::vector<Piece> ps;
    std::vector<Breakpoint> bs;
    const bool has_zero = breakpoint_at(0.0) != nullptr;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        if (p.lo < 0.0 && p.hi > 0.0) {
            ps.push_back({p.lo, 0.0, p.expr - pminus});
            ps.push_back({0.0, p.hi, p.expr - pplus});
            const double v = p.expr.eval(0.0);
            bs.push_back({0.0, v - AsymptoteRecord::poly(rec.minus, 0.0), v - rec.eval(0.0),
                          v - AsymptoteRecord::poly(rec.plus, 0.0), false});
        } else {
            ps.push_back({p.lo, p.hi, p.expr - (p.hi <= 0.0 ? pminus : pplus)});
        }
        if (i < breakpoints_.size()) {
            Breakpoint b = breakpoints_[i];
            if (!b.singular) {
                b.left -= rec.eval(b.at) + (b.at == 0.0 ? AsymptoteRecord::poly(rec.minus, 0.0) - rec.eval(0.0) : 0.0);
                b.value -= rec.eval(b.at);
                b.right -= rec.eval(b.at) + (b.at == 0.0 ? AsymptoteRecord::poly(rec.plus, 0.0) - rec.eval(0.0) : 0.0);
            }
            bs.push_back(b);
        }
    }
    (void)has_zero;
    TailBehavior lt = left_tail_.decays() ? left_tail_ : TailBehavior::bv_zero();
    TailBehavior rt = right_tail_.decays() ? right_tail_ : TailBehavior::bv_zero();
    return {PiecewiseFunction(std::move(ps), std::move(bs), lt, rt, odd_), rec};
}

} // namespace bvft

#endif // BVFT_FUNC_MODEL_HPP
