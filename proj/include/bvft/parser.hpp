#ifndef BVFT_PARSER_HPP
#define BVFT_PARSER_HPP

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "func_model.hpp"

namespace bvft
{

namespace detail
{

struct Token {
    enum Kind { Number, Ident, Symbol, End } kind;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

inline std::vector<Token> tokenize(const std::string& src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Token t{Token::Symbol, "", 0.0, line, col};
        if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && i + 1 < src.size() &&
                                                             std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t used = 0;
            try {
                t.number = std::stod(src.substr(i), &used);
            } catch (const std::exception&) {
                throw ParseError("malformed number", line, col);
            }
            t.kind = Token::Number;
            t.text = src.substr(i, used);
            advance(used);
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Token::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (std::string("()[],:|+-*/^").find(ch) != std::string::npos) {
            t.text = std::string(1, ch);
            advance(1);
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
        }
        out.push_back(t);
    }
    out.push_back({Token::End, "", 0.0, line, col});
    return out;
}

class Parser
{
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    PiecewiseFunction parse()
    {
        std::vector<Piece> pieces;
        std::map<double, double> points;
        do {
            if (accept_ident("on")) {
                const Token& open = peek();
                if (!accept("(") && !accept("["))
                    fail("expected '(' or '[' to open the interval", open);
                const double lo = constant_expr();
                expect(",");
                const double hi = constant_expr();
                if (!accept(")") && !accept("]"))
                    fail("expected ')' or ']' to close the interval", peek());
                if (!(lo < hi))
                    fail("empty interval", open);
                expect(":");
                pieces.push_back({lo, hi, expr()});
            } else if (accept_ident("at")) {
                const double at = constant_expr();
                expect(":");
                const Token& where = peek();
                if (points.count(at))
                    fail("duplicate point value", where);
                points[at] = constant_expr();
            } else {
                fail("expected 'on' or 'at'", peek());
            }
        } while (accept("|"));

        std::optional<TailBehavior> left, right;
        std::optional<OddSymmetry> odd;
        while (peek().kind != Token::End) {
            const Token& t = peek();
            if (accept_ident("tail")) {
                if (accept("+"))
                    right = tail_class();
                else if (accept("-"))
                    left = tail_class();
                else
                    fail("expected 'tail+' or 'tail-'", peek());
            } else if (accept_ident("odd")) {
                expect("(");
                const double c = constant_expr();
                expect(",");
                const double d = constant_expr();
                expect(")");
                if (!(d > 0.0))
                    fail("odd window radius must be positive", t);
                odd = OddSymmetry{c, d};
            } else {
                fail("unexpected '" + t.text + "'", t);
            }
        }
        if (pieces.empty())
            fail("no pieces", peek());

        auto build = [&](TailBehavior l, TailBehavior r) {
            return PiecewiseFunction::from_pieces(pieces, points, l, r, odd);
        };
        PiecewiseFunction f = build(left.value_or(TailBehavior{}), right.value_or(TailBehavior{}));
        // Undeclared tails: first class the outer atom satisfies.
        const TailBehavior candidates[] = {TailBehavior::l1(), TailBehavior::bv_zero(), TailBehavior::bv_limit_auto()};
        for (int side : {-1, +1}) {
            const bool declared = side < 0 ? left.has_value() : right.has_value();
            const TailBehavior& cur = side < 0 ? f.left_tail() : f.right_tail();
            if (declared || cur.cls != TailClass::Unclassified)
                continue;
            bool found = false;
            for (const TailBehavior& c : candidates) {
                PiecewiseFunction g = side < 0 ? build(c, f.right_tail()) : build(f.left_tail(), c);
                try {
                    g.validate_tail(side);
                } catch (const ClassificationError&) {
                    continue;
                }
                f = g;
                found = true;
                break;
            }
            if (!found)
                throw ClassificationError(std::string("cannot classify the tail at ") + (side > 0 ? "+inf" : "-inf") +
                                          "; declare it with tail" + (side > 0 ? "+" : "-"));
        }
        f.classify_tails();
        return f;
    }

private:
    [[noreturn]] static void fail(const std::string& what, const Token& at) { throw ParseError(what, at.line, at.column); }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool accept(const std::string& sym)
    {
        if (peek().kind == Token::Symbol && peek().text == sym) {
            next();
            return true;
        }
        return false;
    }

    bool accept_ident(const std::string& id)
    {
        if (peek().kind == Token::Ident && peek().text == id) {
            next();
            return true;
        }
        return false;
    }

    void expect(const std::string& sym)
    {
        if (!accept(sym))
            fail("expected '" + sym + "'", peek());
    }

    double constant_expr()
    {
        const Token& start = peek();
        const Expr e = expr();
        if (!e.is_const())
            fail("expected a constant", start);
        return e.const_value();
    }

    TailBehavior tail_class()
    {
        const Token& t = peek();
        if (accept_ident("l1"))
            return TailBehavior::l1();
        if (accept_ident("bvzero"))
            return TailBehavior::bv_zero();
        if (accept_ident("limit")) {
            if (accept("(")) {
                const double v = constant_expr();
                expect(")");
                return TailBehavior::bv_limit(v);
            }
            return TailBehavior::bv_limit_auto();
        }
        if (accept_ident("poly")) {
            expect("(");
            std::vector<double> a{constant_expr()};
            while (accept(","))
                a.push_back(constant_expr());
            expect(")");
            return TailBehavior::polynomial(a);
        }
        fail("expected a tail class (l1, bvzero, limit, poly)", t);
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept("+"))
                e = e + term();
            else if (accept("-"))
                e = e - term();
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            if (accept("*"))
                e = e * unary();
            else if (accept("/"))
                e = e / unary();
            else
                return e;
        }
    }

    Expr unary()
    {
        if (accept("-"))
            return -unary();
        if (accept("+"))
            return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        while (accept("^")) {
            const Token& t = peek();
            double p;
            if (accept("(")) {
                p = constant_expr();
                expect(")");
            } else {
                const bool neg = accept("-");
                if (peek().kind != Token::Number)
                    fail("expected a numeric exponent", t);
                p = next().number;
                if (neg)
                    p = -p;
            }
            base = Expr::pow(base, p);
        }
        return base;
    }

    Expr primary()
    {
        const Token& t = peek();
        if (t.kind == Token::Number) {
            next();
            return Expr::constant(t.number);
        }
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.kind != Token::Ident)
            fail(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
        next();
        if (t.text == "x")
            return Expr::var();
        if (t.text == "pi")
            return Expr::constant(std::numbers::pi);
        if (t.text == "e")
            return Expr::constant(std::numbers::e);
        if (t.text == "inf")
            return Expr::constant(inf);
        static const std::map<std::string, Op> atoms = {
            {"exp", Op::Exp},   {"log", Op::Log}, {"abs", Op::Abs},  {"sin", Op::Sin},
            {"cos", Op::Cos},   {"atan", Op::Atan}, {"tanh", Op::Tanh}, {"sgn", Op::Sgn},
            {"heaviside", Op::Heaviside}, {"cantor", Op::Cantor}};
        const auto it = atoms.find(t.text);
        if (it == atoms.end())
            fail("unknown name '" + t.text + "'", t);
        expect("(");
        const Token& arg_tok = peek();
        Expr arg = expr();
        expect(")");
        // Non-smooth atoms need an affine argument so their breakpoints and
        // singular supports are known exactly.
        const bool needs_affine = it->second == Op::Abs || it->second == Op::Sgn || it->second == Op::Heaviside ||
                                  it->second == Op::Cantor || it->second == Op::Log;
        if (needs_affine && !arg.is_const() && !arg.as_affine())
            fail("argument of " + t.text + " must be affine in x", arg_tok);
        return Expr::unary(it->second, arg);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse a function definition:
///   on (lo,hi): EXPR | on [lo,hi): EXPR | at c: v  ... [tail+ CLASS] [tail- CLASS] [odd(c, delta)]
/// with CLASS one of l1, bvzero, limit, limit(v), poly(c0, c1, ...).
inline PiecewiseFunction parse_function(const std::string& text)
{
    return detail::Parser(text).parse();
}

} // namespace bvft

#endif // BVFT_PARSER_HPP
