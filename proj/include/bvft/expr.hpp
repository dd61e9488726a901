#ifndef BVFT_EXPR_HPP
#define BVFT_EXPR_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace bvft
{

/// Value and first derivative, propagated through an expression.
struct Dual {
    double v = 0.0;
    double d = 0.0;
};

/// Cantor-Lebesgue function on [0,1], constant outside. Ternary digits are
/// read off to `depth` places.
inline double cantor_function(double u, int depth = 60)
{
    if (!(u > 0.0))
        return 0.0;
    if (u >= 1.0)
        return 1.0;
    double result = 0.0;
    double weight = 0.5;
    for (int k = 0; k < depth; ++k) {
        u *= 3.0;
        if (u < 1.0) {
            // digit 0
        } else if (u > 2.0) {
            result += weight;
            u -= 2.0;
        } else {
            return result + weight;
        }
        weight *= 0.5;
    }
    return result;
}

/// Affine map u = scale*t + shift.
struct Affine {
    double scale = 1.0;
    double shift = 0.0;
    double operator()(double t) const { return scale * t + shift; }
    /// Point where the map vanishes.
    double root() const { return -shift / scale; }
};

/// A Cantor-Lebesgue term  weight * C(scale*t + shift)  inside a piece.
struct CantorTerm {
    double weight = 1.0;
    Affine arg;
    /// Support of the singular measure in t, as an ordered pair.
    std::pair<double, double> support() const
    {
        const double t0 = (0.0 - arg.shift) / arg.scale;
        const double t1 = (1.0 - arg.shift) / arg.scale;
        return {std::min(t0, t1), std::max(t0, t1)};
    }
};

enum class Op {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Log, // log|u|
    Abs,
    Sin,
    Cos,
    Atan,
    Tanh,
    Sgn,
    Heaviside,
    Cantor,
};

/// Immutable expression over the real variable x, restricted to the closed
/// atom set the theorems are stated for. Shared subtrees are allowed.
class Expr
{
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double c) { return Expr(std::make_shared<Node>(Node{Op::Const, c, {}, {}})); }
    static Expr var() { return Expr(std::make_shared<Node>(Node{Op::Var, 0.0, {}, {}})); }

    static Expr unary(Op op, const Expr& a)
    {
        if (op == Op::Neg) {
            if (a.is_const())
                return constant(-a.const_value());
        }
        if (a.is_const() && op != Op::Cantor && op != Op::Sgn && op != Op::Heaviside && op != Op::Log &&
            op != Op::Abs) {
            // smooth atoms of a constant fold immediately
            const Expr tmp(std::make_shared<Node>(Node{op, 0.0, a.node_, {}}));
            return constant(tmp.eval(0.0));
        }
        return Expr(std::make_shared<Node>(Node{op, 0.0, a.node_, {}}));
    }

    static Expr binary(Op op, const Expr& a, const Expr& b)
    {
        if (a.is_const() && b.is_const()) {
            const Expr tmp(std::make_shared<Node>(Node{op, 0.0, a.node_, b.node_}));
            return constant(tmp.eval(0.0));
        }
        switch (op) {
        case Op::Add:
            if (a.is_zero())
                return b;
            if (b.is_zero())
                return a;
            break;
        case Op::Sub:
            if (b.is_zero())
                return a;
            if (a.is_zero())
                return unary(Op::Neg, b);
            break;
        case Op::Mul:
            if (a.is_zero() || b.is_zero())
                return constant(0.0);
            if (a.is_const() && a.const_value() == 1.0)
                return b;
            if (b.is_const() && b.const_value() == 1.0)
                return a;
            break;
        case Op::Div:
            if (a.is_zero())
                return constant(0.0);
            if (b.is_const() && b.const_value() == 1.0)
                return a;
            break;
        default:
            break;
        }
        return Expr(std::make_shared<Node>(Node{op, 0.0, a.node_, b.node_}));
    }

    static Expr pow(const Expr& base, double exponent)
    {
        if (exponent == 1.0)
            return base;
        if (exponent == 0.0)
            return constant(1.0);
        if (base.is_const())
            return constant(std::pow(base.const_value(), exponent));
        return Expr(std::make_shared<Node>(Node{Op::Pow, exponent, base.node_, {}}));
    }

    /// Polynomial sum_k c_k x^k.
    static Expr polynomial(const std::vector<double>& coeffs)
    {
        Expr out = constant(0.0);
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            out = out * var() + constant(coeffs[k]);
        }
        return out;
    }

    friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
    friend Expr operator-(const Expr& a) { return unary(Op::Neg, a); }

    bool is_const() const { return node_->op == Op::Const; }
    bool is_zero() const { return is_const() && node_->value == 0.0; }
    double const_value() const { return node_->value; }
    Op op() const { return node_->op; }

    /// Value at t. `side` selects the one-sided limit (-1 left, +1 right) for
    /// the step atoms sgn and heaviside when their argument vanishes at t.
    double eval(double t, int side = 0) const { return eval_dual(*node_, t, side).v; }

    /// Derivative of the absolutely continuous part (Cantor terms contribute 0).
    double deriv(double t, int side = 0) const { return eval_dual(*node_, t, side).d; }

    Dual eval_dual(double t, int side = 0) const { return eval_dual(*node_, t, side); }

    /// True when the expression contains a Cantor-Lebesgue atom.
    bool has_cantor() const { return contains(*node_, Op::Cantor); }

    /// Split into (smooth part, Cantor terms) when the expression is
    /// smooth + sum of constant multiples of Cantor atoms. Returns nullopt when a
    /// Cantor atom enters non-linearly (its Stieltjes measure would then need a
    /// density weight, which the engine does not represent).
    std::optional<std::pair<Expr, std::vector<CantorTerm>>> split_cantor() const
    {
        std::vector<CantorTerm> terms;
        auto smooth = split(*this, 1.0, terms);
        if (!smooth)
            return std::nullopt;
        return std::make_pair(*smooth, std::move(terms));
    }

    /// Points in the open interval (lo, hi) where an atom is non-smooth or
    /// undefined: zeros of the affine argument of abs, sgn, heaviside, log and
    /// of non-integer or negative powers. Returns the list of such points;
    /// throws ValidationError when an inner argument is not affine.
    std::vector<double> critical_points(double lo, double hi) const
    {
        std::vector<double> out;
        collect_critical(*node_, lo, hi, out);
        return out;
    }

    /// Denominators of every quotient in the expression.
    std::vector<Expr> denominators() const
    {
        std::vector<Expr> out;
        collect_denominators(node_, out);
        return out;
    }

    /// Affine coefficients if the expression is affine in x.
    std::optional<Affine> as_affine() const
    {
        const double b = eval(0.0);
        const double a = eval(1.0) - b;
        if (!std::isfinite(a) || !std::isfinite(b))
            return std::nullopt;
        // an affine expression has constant derivative
        for (double t : {-3.7, 0.0, 2.9, 11.3})
            if (std::abs(deriv(t) - a) > 1e-12 * (1.0 + std::abs(a)))
                return std::nullopt;
        for (double t : {-3.7, 2.9, 11.3})
            if (std::abs(eval(t) - (a * t + b)) > 1e-12 * (1.0 + std::abs(a * t) + std::abs(b)))
                return std::nullopt;
        if (a == 0.0)
            return std::nullopt;
        return Affine{a, b};
    }

    std::string to_string() const
    {
        std::ostringstream os;
        os.precision(17);
        print(os, *node_);
        return os.str();
    }

private:
    struct Node {
        Op op;
        double value; // constant value or Pow exponent
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expr wrap(const std::shared_ptr<const Node>& n) { return Expr(n); }

    static double sign_at(Dual u, int side)
    {
        if (u.v > 0.0)
            return 1.0;
        if (u.v < 0.0)
            return -1.0;
        if (side == 0 || u.d == 0.0)
            return 0.0;
        return (side * u.d > 0.0) ? 1.0 : -1.0;
    }

    static Dual eval_dual(const Node& n, double t, int side)
    {
        switch (n.op) {
        case Op::Const:
            return {n.value, 0.0};
        case Op::Var:
            return {t, 1.0};
        case Op::Add: {
            const Dual x = eval_dual(*n.a, t, side), y = eval_dual(*n.b, t, side);
            return {x.v + y.v, x.d + y.d};
        }
        case Op::Sub: {
            const Dual x = eval_dual(*n.a, t, side), y = eval_dual(*n.b, t, side);
            return {x.v - y.v, x.d - y.d};
        }
        case Op::Mul: {
            const Dual x = eval_dual(*n.a, t, side), y = eval_dual(*n.b, t, side);
            return {x.v * y.v, x.d * y.v + x.v * y.d};
        }
        case Op::Div: {
            const Dual x = eval_dual(*n.a, t, side), y = eval_dual(*n.b, t, side);
            return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)};
        }
        case Op::Neg: {
            const Dual x = eval_dual(*n.a, t, side);
            return {-x.v, -x.d};
        }
        case Op::Pow: {
            const Dual x = eval_dual(*n.a, t, side);
            const double p = n.value;
            const double v = std::pow(x.v, p);
            return {v, x.d == 0.0 ? 0.0 : p * std::pow(x.v, p - 1.0) * x.d};
        }
        case Op::Exp: {
            const Dual x = eval_dual(*n.a, t, side);
            const double e = std::exp(x.v);
            return {e, e * x.d};
        }
        case Op::Log: {
            const Dual x = eval_dual(*n.a, t, side);
            return {std::log(std::abs(x.v)), x.d / x.v};
        }
        case Op::Abs: {
            const Dual x = eval_dual(*n.a, t, side);
            return {std::abs(x.v), sign_at(x, side) * x.d};
        }
        case Op::Sin: {
            const Dual x = eval_dual(*n.a, t, side);
            return {std::sin(x.v), std::cos(x.v) * x.d};
        }
        case Op::Cos: {
            const Dual x = eval_dual(*n.a, t, side);
            return {std::cos(x.v), -std::sin(x.v) * x.d};
        }
        case Op::Atan: {
            const Dual x = eval_dual(*n.a, t, side);
            return {std::atan(x.v), x.d / (1.0 + x.v * x.v)};
        }
        case Op::Tanh: {
            const Dual x = eval_dual(*n.a, t, side);
            const double th = std::tanh(x.v);
            return {th, (1.0 - th * th) * x.d};
        }
        case Op::Sgn: {
            const Dual x = eval_dual(*n.a, t, side);
            return {sign_at(x, side), 0.0};
        }
        case Op::Heaviside: {
            const Dual x = eval_dual(*n.a, t, side);
            const double sg = sign_at(x, side);
            return {sg > 0 ? 1.0 : (sg < 0 ? 0.0 : 0.5), 0.0};
        }
        case Op::Cantor: {
            const Dual x = eval_dual(*n.a, t, side);
            return {cantor_function(x.v), 0.0};
        }
        }
        return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    }

    static bool contains(const Node& n, Op op)
    {
        if (n.op == op)
            return true;
        if (n.a && contains(*n.a, op))
            return true;
        return n.b && contains(*n.b, op);
    }

    static std::optional<Expr> split(const Expr& e, double weight, std::vector<CantorTerm>& out)
    {
        const Node& n = *e.node_;
        if (!contains(n, Op::Cantor))
            return e;
        switch (n.op) {
        case Op::Cantor: {
            auto aff = wrap(n.a).as_affine();
            if (!aff)
                return std::nullopt;
            out.push_back({weight, *aff});
            return constant(0.0);
        }
        case Op::Add:
        case Op::Sub: {
            const double sb = n.op == Op::Add ? 1.0 : -1.0;
            auto l = split(wrap(n.a), weight, out);
            auto r = split(wrap(n.b), weight * sb, out);
            if (!l || !r)
                return std::nullopt;
            return n.op == Op::Add ? *l + *r : *l - *r;
        }
        case Op::Neg: {
            auto l = split(wrap(n.a), -weight, out);
            if (!l)
                return std::nullopt;
            return -*l;
        }
        case Op::Mul: {
            const Expr a = wrap(n.a), b = wrap(n.b);
            if (a.is_const()) {
                auto r = split(b, weight * a.const_value(), out);
                if (!r)
                    return std::nullopt;
                return a * *r;
            }
            if (b.is_const()) {
                auto l = split(a, weight * b.const_value(), out);
                if (!l)
                    return std::nullopt;
                return *l * b;
            }
            return std::nullopt;
        }
        case Op::Div: {
            const Expr a = wrap(n.a), b = wrap(n.b);
            if (!b.is_const() || contains(*n.b, Op::Cantor))
                return std::nullopt;
            auto l = split(a, weight / b.const_value(), out);
            if (!l)
                return std::nullopt;
            return *l / b;
        }
        default:
            return std::nullopt;
        }
    }

    static void push_root(const std::shared_ptr<const Node>& arg, double lo, double hi, std::vector<double>& out,
                          const char* what)
    {
        auto aff = wrap(arg).as_affine();
        if (!aff) {
            if (arg->op == Op::Const)
                return;
            throw ValidationError(std::string("inner argument of ") + what + " must be affine in x");
        }
        const double r = aff->root();
        if (r > lo && r < hi)
            out.push_back(r);
    }

    static void collect_denominators(const std::shared_ptr<const Node>& n, std::vector<Expr>& out)
    {
        if (n->op == Op::Div)
            out.push_back(wrap(n->b));
        if (n->a)
            collect_denominators(n->a, out);
        if (n->b)
            collect_denominators(n->b, out);
    }

    static void collect_critical(const Node& n, double lo, double hi, std::vector<double>& out)
    {
        switch (n.op) {
        case Op::Abs:
            push_root(n.a, lo, hi, out, "abs");
            break;
        case Op::Sgn:
            push_root(n.a, lo, hi, out, "sgn");
            break;
        case Op::Heaviside:
            push_root(n.a, lo, hi, out, "heaviside");
            break;
        case Op::Log:
            push_root(n.a, lo, hi, out, "log");
            break;
        case Op::Cantor: {
            auto aff = wrap(n.a).as_affine();
            if (!aff)
                throw ValidationError("inner argument of cantor must be affine in x");
            break;
        }
        case Op::Pow: {
            const double p = n.value;
            const bool integer = p == std::floor(p);
            if (!integer || p < 0.0) {
                if (n.a->op == Op::Abs) {
                    push_root(n.a->a, lo, hi, out, "abs");
                } else {
                    push_root(n.a, lo, hi, out, "a fractional or negative power");
                }
            }
            break;
        }
        default:
            break;
        }
        if (n.a)
            collect_critical(*n.a, lo, hi, out);
        if (n.b)
            collect_critical(*n.b, lo, hi, out);
    }

    static void print(std::ostream& os, const Node& n)
    {
        auto fn = [&](const char* name) {
            os << name << '(';
            print(os, *n.a);
            os << ')';
        };
        auto bin = [&](const char* sym) {
            os << '(';
            print(os, *n.a);
            os << ' ' << sym << ' ';
            print(os, *n.b);
            os << ')';
        };
        switch (n.op) {
        case Op::Const:
            os << n.value;
            break;
        case Op::Var:
            os << 'x';
            break;
        case Op::Add:
            bin("+");
            break;
        case Op::Sub:
            bin("-");
            break;
        case Op::Mul:
            bin("*");
            break;
        case Op::Div:
            bin("/");
            break;
        case Op::Neg:
            os << "(-";
            print(os, *n.a);
            os << ')';
            break;
        case Op::Pow:
            os << '(';
            print(os, *n.a);
            os << ")^(" << n.value << ')';
            break;
        case Op::Exp:
            fn("exp");
            break;
        case Op::Log:
            fn("log");
            break;
        case Op::Abs:
            fn("abs");
            break;
        case Op::Sin:
            fn("sin");
            break;
        case Op::Cos:
            fn("cos");
            break;
        case Op::Atan:
            fn("atan");
            break;
        case Op::Tanh:
            fn("tanh");
            break;
        case Op::Sgn:
            fn("sgn");
            break;
        case Op::Heaviside:
            fn("heaviside");
            break;
        case Op::Cantor:
            fn("cantor");
            break;
        }
    }

    std::shared_ptr<const Node> node_;
};

namespace ex
{
inline Expr x() { return Expr::var(); }
inline Expr c(double v) { return Expr::constant(v); }
inline Expr exp(const Expr& a) { return Expr::unary(Op::Exp, a); }
inline Expr log(const Expr& a) { return Expr::unary(Op::Log, a); }
inline Expr abs(const Expr& a) { return Expr::unary(Op::Abs, a); }
inline Expr sin(const Expr& a) { return Expr::unary(Op::Sin, a); }
inline Expr cos(const Expr& a) { return Expr::unary(Op::Cos, a); }
inline Expr atan(const Expr& a) { return Expr::unary(Op::Atan, a); }
inline Expr tanh(const Expr& a) { return Expr::unary(Op::Tanh, a); }
inline Expr sgn(const Expr& a) { return Expr::unary(Op::Sgn, a); }
inline Expr heaviside(const Expr& a) { return Expr::unary(Op::Heaviside, a); }
inline Expr cantor(const Expr& a) { return Expr::unary(Op::Cantor, a); }
inline Expr pow(const Expr& a, double p) { return Expr::pow(a, p); }
} // namespace ex

} // namespace bvft

#endif // BVFT_EXPR_HPP
