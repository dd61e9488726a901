#ifndef BVFT_DISTRIB_HPP
#define BVFT_DISTRIB_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "func_model.hpp"
#include "oscillatory.hpp"

namespace bvft
{

/// (order k, coefficient) of delta^(k)(s) or of 1/(is)^(k+1).
struct DistTerm {
    int order;
    cplx coeff;
};

/// Fourier transform as  g^(s) + sum c_k delta^(k)(s) + sum d_k / (is)^(k+1).
/// The function part is an evaluator for the transform of the residual.
class DistributionalFT
{
public:
    using Evaluator = std::function<cplx(double)>;

    DistributionalFT() = default;
    DistributionalFT(Evaluator fn, std::string ref, std::vector<DistTerm> deltas, std::vector<DistTerm> powers)
        : fn_(std::move(fn)), ref_(std::move(ref)), deltas_(normalise(std::move(deltas))),
          powers_(normalise(std::move(powers)))
    {
    }

    const std::vector<DistTerm>& delta_terms() const { return deltas_; }
    const std::vector<DistTerm>& power_terms() const { return powers_; }
    bool has_function_part() const { return static_cast<bool>(fn_); }
    const std::string& function_part_ref() const { return ref_; }

    /// Function part at s != 0; with `fold` the power terms are added as
    /// ordinary functions. Delta terms never contribute.
    cplx eval_function_part(double s, bool fold = false) const
    {
        if (s == 0.0)
            throw ZeroFrequencyError("the function part is only defined for s != 0");
        cplx v = fn_ ? fn_(s) : cplx{};
        if (fold)
            for (const DistTerm& t : powers_)
                v += t.coeff / std::pow(cplx(0.0, s), t.order + 1);
        return v;
    }

    /// Canonical text, e.g. "g^(s) + (3.141592654)·δ(s) + (1)·1/(i s)".
    std::string render() const
    {
        std::vector<std::string> parts;
        if (fn_)
            parts.push_back(ref_.empty() ? "g^(s)" : ref_);
        for (const DistTerm& t : deltas_)
            parts.push_back("(" + format(t.coeff) + ")·" + delta_token(t.order));
        for (const DistTerm& t : powers_)
            parts.push_back("(" + format(t.coeff) + ")·" + power_token(t.order));
        if (parts.empty())
            return "0";
        std::string out = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i)
            out += " + " + parts[i];
        return out;
    }

    /// Sum of two transforms (function parts add pointwise).
    friend DistributionalFT operator+(const DistributionalFT& a, const DistributionalFT& b)
    {
        Evaluator fn;
        if (a.fn_ && b.fn_)
            fn = [fa = a.fn_, fb = b.fn_](double s) { return fa(s) + fb(s); };
        else
            fn = a.fn_ ? a.fn_ : b.fn_;
        std::string ref = a.ref_.empty() ? b.ref_ : (b.ref_.empty() ? a.ref_ : a.ref_ + " + " + b.ref_);
        std::vector<DistTerm> d = a.deltas_, p = a.powers_;
        d.insert(d.end(), b.deltas_.begin(), b.deltas_.end());
        p.insert(p.end(), b.powers_.begin(), b.powers_.end());
        return DistributionalFT(std::move(fn), std::move(ref), std::move(d), std::move(p));
    }

    static std::string format(cplx c)
    {
        auto num = [](double v) {
            std::ostringstream os;
            os << std::setprecision(10) << v;
            return os.str();
        };
        if (c.imag() == 0.0)
            return num(c.real());
        if (c.real() == 0.0)
            return num(c.imag()) + "i";
        return num(c.real()) + (c.imag() < 0 ? "-" : "+") + num(std::abs(c.imag())) + "i";
    }

    static std::string delta_token(int k)
    {
        if (k == 0)
            return "δ(s)";
        return "δ" + superscript("(" + std::to_string(k) + ")") + "(s)";
    }

    static std::string power_token(int k)
    {
        if (k == 0)
            return "1/(i s)";
        return "1/(i s)" + superscript(std::to_string(k + 1));
    }

private:
    static std::string superscript(const std::string& s)
    {
        static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
        std::string out;
        for (char ch : s) {
            if (ch >= '0' && ch <= '9')
                out += digits[ch - '0'];
            else if (ch == '(')
                out += "⁽";
            else if (ch == ')')
                out += "⁾";
        }
        return out;
    }

    /// Merge entries of equal order, drop zeros, sort by order.
    static std::vector<DistTerm> normalise(std::vector<DistTerm> terms)
    {
        std::map<int, cplx> acc;
        for (const DistTerm& t : terms)
            acc[t.order] += t.coeff;
        std::vector<DistTerm> out;
        for (const auto& [k, c] : acc)
            if (c != cplx{})
                out.push_back({k, c});
        return out;
    }

    Evaluator fn_;
    std::string ref_;
    std::vector<DistTerm> deltas_;
    std::vector<DistTerm> powers_;
};

namespace detail
{
inline cplx i_pow(int k)
{
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((k % 4) + 4) % 4];
}
inline double factorial(int k)
{
    double f = 1.0;
    for (int j = 2; j <= k; ++j)
        f *= j;
    return f;
}
/// Structural zero test, or zeros at a spread of sample points (residuals
/// such as sgn(x) - 1 on (0, inf) are not simplified away). `scale` gives
/// the magnitude below which rounding noise counts as zero.
inline bool vanishes_on(const Expr& e, double lo, double hi,
                        const std::function<double(double)>& scale = [](double) { return 0.0; })
{
    if (e.is_zero())
        return true;
    std::vector<double> ts;
    for (int j = -4; j <= 6; ++j) {
        const double d = std::pow(10.0, j);
        if (std::isfinite(lo) && std::isfinite(hi)) {
            const double u = 0.5 + 0.5 * std::tanh(j * 0.4);
            ts.push_back(lo + (hi - lo) * u);
        } else if (std::isfinite(lo)) {
            ts.push_back(lo + d);
        } else if (std::isfinite(hi)) {
            ts.push_back(hi - d);
        } else {
            ts.push_back(d);
            ts.push_back(-d);
            ts.push_back(0.0);
        }
    }
    for (double t : ts)
        if (std::abs(e.eval(t)) > 1e-13 * scale(t))
            return false;
    return true;
}
} // namespace detail

/// Transform of h_n(x) = H(x) x^n:  pi i^n delta^(n)(s) + n!/(is)^(n+1).
inline DistributionalFT transform_heaviside_monomial(int n)
{
    if (n < 0 || n > 20)
        throw DomainError("Heaviside monomial order must lie in [0, 20]");
    return DistributionalFT({}, "", {{n, std::numbers::pi * detail::i_pow(n)}}, {{n, detail::factorial(n)}});
}

/// Delta and power coefficients from the asymptotic polynomials:
///   delta order k:  pi i^k (a_{+k} + a_{-k})
///   power order k:  k! (a_{+k} - a_{-k})
/// where the minus side uses delta^(k)(-s) = (-1)^k delta^(k)(s).
inline std::pair<std::vector<DistTerm>, std::vector<DistTerm>> asymptote_terms(const AsymptoteRecord& rec)
{
    std::vector<DistTerm> deltas, powers;
    const std::size_t n = std::max(rec.plus.size(), rec.minus.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double ap = k < rec.plus.size() ? rec.plus[k] : 0.0;
        const double am = k < rec.minus.size() ? rec.minus[k] : 0.0;
        const int kk = static_cast<int>(k);
        deltas.push_back({kk, std::numbers::pi * detail::i_pow(kk) * (ap + am)});
        powers.push_back({kk, detail::factorial(kk) * (ap - am)});
    }
    return {deltas, powers};
}

/// Distributional transform of f with BV-limit or polynomial tails: the
/// residual of subtract_asymptote is transformed numerically.
inline DistributionalFT build(const PiecewiseFunction& f, QuadOptions opt = {})
{
    f.classify_tails();
    AsymptoteSplit split = f.subtract_asymptote();
    auto [deltas, powers] = asymptote_terms(split.added_back);
    auto tr = std::make_shared<Transformer>(split.residual, opt);
    DistributionalFT::Evaluator fn;
    const PiecewiseFunction& r = split.residual;
    auto scale = [&](double t) { return std::abs(f.eval(t)) + std::abs(split.added_back.eval(t)); };
    bool zero = std::all_of(r.pieces().begin(), r.pieces().end(), [&](const Piece& p) {
                    return detail::vanishes_on(p.expr, p.lo, p.hi, scale);
                }) &&
                std::all_of(r.breakpoints().begin(), r.breakpoints().end(), [](const Breakpoint& b) {
                    // point values do not change a transform
                    return b.left == 0.0 && b.right == 0.0 && !b.singular;
                });
    if (!zero)
        fn = [tr](double s) { return (*tr)(s).value; };
    return DistributionalFT(std::move(fn), zero ? "" : "g^(s)", std::move(deltas), std::move(powers));
}

} // namespace bvft

#endif // BVFT_DISTRIB_HPP
