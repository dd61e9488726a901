#ifndef BVFT_INVERSION_HPP
#define BVFT_INVERSION_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "accel.hpp"
#include "errors.hpp"
#include "func_model.hpp"
#include "oscillatory.hpp"

namespace bvft
{

/// phi_U(u) = sin(uU)/u, with the removable value U at u = 0.
inline double sinc_kernel(double u, double U)
{
    return u == 0.0 ? U : std::sin(u * U) / u;
}

/// How the two-sided limit  (1/2pi) lim int_{S<|s-a|<T} e^{ixs} g^(s) ds
/// is taken and accelerated.
struct PVLimitSpec {
    enum class Inner { None, Symmetric, Shifted };
    enum class Outer { Symmetric, Sequence };
    /// Window: smooth cutoff eta(|s|/T) (flat on [0,T], zero beyond 2T), then
    /// the best of raw / Richardson / Aitken. Averaging: mean of consecutive
    /// half-period truncations. Aitken: averaging followed by delta-squared.
    enum class Accel { None, Averaging, Aitken, Window };

    Inner inner = Inner::Symmetric;
    double shift = 0.0; ///< a, used with Inner::Shifted
    Outer outer = Outer::Symmetric;
    double center = 0.0; ///< c in T_n = (2n+1)pi/(2|x-c|); also the half-period reference
    Accel accel = Accel::Window;
    int max_stages = 8;
    int min_stages = 4;
    double tol = 1e-6;
    double ratio = 0.0; ///< growth of T (or n) per stage; 0 selects 3 (T) or 2 (n)
    double first = 0.0; ///< T_0 or n_0; 0 selects 8 (T) or 25 (n)
    double reach = 0.0; ///< bound on |x - t| over the bulk of f; 0 selects |x| + 2
    bool hermitian = false; ///< g^(-s) = conj g^(s), true for real-valued f
    bool strict = true;     ///< throw NonConvergenceError when stages do not settle

    static double tn(int n, double x, double c) { return (2.0 * n + 1.0) * std::numbers::pi / (2.0 * std::abs(x - c)); }

    double growth() const { return ratio > 1.0 ? ratio : (outer == Outer::Sequence ? 2.0 : 3.0); }
    double start() const { return first > 0.0 ? first : (outer == Outer::Sequence ? 25.0 : 8.0); }
};

struct StageRow {
    int stage;
    double S;
    double T;
    cplx value;
};

struct InversionReport {
    double x = 0.0;
    double recovered = 0.0;
    cplx complex_value{};
    std::optional<double> target;
    std::vector<StageRow> stages;
    bool converged = false;
    double error_estimate = std::numeric_limits<double>::infinity();
    std::string method;
    double added_back = 0.0; ///< Heaviside/polynomial record at x (already in `recovered`)
    std::size_t evaluations = 0;

    std::string to_csv() const
    {
        std::ostringstream os;
        os << std::setprecision(17) << "stage,S,T,partial_value_re,partial_value_im\n";
        for (const StageRow& r : stages)
            os << r.stage << ',' << r.S << ',' << r.T << ',' << r.value.real() << ',' << r.value.imag() << '\n';
        return os.str();
    }

    std::string to_json() const
    {
        std::ostringstream os;
        os << std::setprecision(17) << "{\"x\":" << x << ",\"recovered\":" << recovered;
        if (target)
            os << ",\"target\":" << *target;
        else
            os << ",\"target\":null";
        os << ",\"converged\":" << (converged ? "true" : "false") << ",\"error_estimate\":" << error_estimate
           << ",\"method\":\"" << method << "\",\"added_back\":" << added_back << ",\"stages\":" << stages.size()
           << ",\"evaluations\":" << evaluations << '}';
        return os.str();
    }
};

namespace detail
{

/// C-infinity cutoff: 1 on [0,1], 0 on [2,inf).
inline double window(double sigma)
{
    if (sigma <= 1.0)
        return 1.0;
    if (sigma >= 2.0)
        return 0.0;
    auto psi = [](double t) { return std::exp(-1.0 / t); };
    const double a = psi(2.0 - sigma), b = psi(sigma - 1.0);
    return a / (a + b);
}

/// Samples of g^ at the 21 Kronrod nodes of a fixed panel grid along the ray
/// s = anchor + dir*u, u > 0. Panel k < 0 is [u1 2^k, u1 2^(k+1)], panel
/// k >= 0 is [u1 + k h, u1 + (k+1) h]. Readers share the cache, refinement
/// is exclusive.
class RaySamples
{
public:
    using Fn = std::function<cplx(double)>;
    using Block = std::array<cplx, 21>;

    RaySamples(Fn g, double anchor, int dir, double u1, double h)
        : g_(std::move(g)), anchor_(anchor), dir_(dir), u1_(u1), h_(h)
    {
    }

    std::pair<double, double> bounds(int k) const
    {
        if (k < 0)
            return {std::ldexp(u1_, k), std::ldexp(u1_, k + 1)};
        return {u1_ + k * h_, u1_ + (k + 1) * h_};
    }

    static double node(double a, double b, int j)
    {
        const double c = 0.5 * (a + b), r = 0.5 * (b - a);
        if (j < 10)
            return c - r * quad::detail::xgk[j];
        if (j == 10)
            return c;
        return c + r * quad::detail::xgk[j - 11];
    }

    static double weight(double a, double b, int j)
    {
        const double r = 0.5 * (b - a);
        return r * quad::detail::wgk[j < 10 ? j : (j == 10 ? 10 : j - 11)];
    }

    const Block& values(int k) const
    {
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(k);
            if (it != cache_.end())
                return it->second;
        }
        const auto [a, b] = bounds(k);
        Block blk;
        for (int j = 0; j < 21; ++j)
            blk[j] = g_(anchor_ + dir_ * node(a, b, j));
        evaluations_ += 21;
        std::unique_lock lock(mutex_);
        return cache_.emplace(k, blk).first->second;
    }

    cplx sample(double u) const
    {
        ++evaluations_;
        return g_(anchor_ + dir_ * u);
    }

    double anchor() const { return anchor_; }
    int dir() const { return dir_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    Fn g_;
    double anchor_;
    int dir_;
    double u1_, h_;
    mutable std::shared_mutex mutex_;
    mutable std::map<int, Block> cache_;
    mutable std::atomic<std::size_t> evaluations_{0};
};

struct Candidate {
    std::string name;
    std::vector<cplx> seq;
};

/// Pick the accelerated sequence whose two newest entries agree best.
inline std::pair<Candidate, double> best_candidate(const std::vector<Candidate>& cands)
{
    const Candidate* best = nullptr;
    double err = std::numeric_limits<double>::infinity();
    for (const Candidate& c : cands) {
        if (c.seq.size() < 2)
            continue;
        const double e = std::abs(c.seq.back() - c.seq[c.seq.size() - 2]);
        if (e < err) {
            err = e;
            best = &c;
        }
    }
    if (!best)
        return {cands.front(), err};
    return {*best, err};
}

inline std::vector<cplx> richardson(const std::vector<cplx>& v, double factor)
{
    std::vector<cplx> out;
    for (std::size_t j = 1; j < v.size(); ++j)
        out.push_back((factor * v[j] - v[j - 1]) / (factor - 1.0));
    return out;
}

inline std::vector<cplx> aitken_sequence(const std::vector<cplx>& v)
{
    std::vector<cplx> out;
    for (std::size_t j = 2; j < v.size(); ++j)
        out.push_back(accel::aitken<cplx>(std::span<const cplx>(v.data() + j - 2, 3)).value);
    return out;
}

} // namespace detail

/// Pointwise inverter for a fixed transform; the g^ samples are shared by
/// every x it is asked for.
class SpectralInverter
{
public:
    using Fn = std::function<cplx(double)>;

    /// `reach` bounds |x - t| over the support of f for every x that will be
    /// requested; it fixes the panel width so that e^{i(x-t)s} is resolved.
    SpectralInverter(Fn ghat, PVLimitSpec spec, double reach) : spec_(spec)
    {
        if (spec_.hermitian && spec_.inner == PVLimitSpec::Inner::Shifted && spec_.shift != 0.0)
            throw HypothesisError("conjugate symmetry needs the exclusion centred at 0");
        h_ = std::min(2.0, 10.0 / std::max(reach, 1e-3));
        const double anchor = spec_.inner == PVLimitSpec::Inner::Shifted ? spec_.shift : 0.0;
        rays_.push_back(std::make_unique<detail::RaySamples>(ghat, anchor, +1, h_, h_));
        if (!spec_.hermitian)
            rays_.push_back(std::make_unique<detail::RaySamples>(ghat, anchor, -1, h_, h_));
    }

    const PVLimitSpec& spec() const { return spec_; }

    std::size_t evaluations() const
    {
        std::size_t n = 0;
        for (const auto& r : rays_)
            n += r->evaluations();
        return n;
    }

    InversionReport invert(double x) const
    {
        const bool sequence = spec_.outer == PVLimitSpec::Outer::Sequence;
        if (sequence && x == spec_.center)
            throw DomainError("the T_n sequence needs x != c");
        InversionReport rep;
        rep.x = x;
        const Inner in = inner_part(x);
        const cplx inner = in.value;
        const double S = in.S;
        const double quad_err = in.quad_error / (2.0 * std::numbers::pi);
        const double r = spec_.growth();
        const double d = std::abs(x - spec_.center) > 0.0 ? std::abs(x - spec_.center) : 1.0;
        std::vector<cplx> values;
        const bool window = spec_.accel == PVLimitSpec::Accel::Window && !sequence;
        const bool averaging = spec_.accel != PVLimitSpec::Accel::None && !window;
        for (int j = 0; j < spec_.max_stages; ++j) {
            cplx v;
            double T;
            if (sequence) {
                const int n = static_cast<int>(std::llround(spec_.start() * std::pow(r, j)));
                T = PVLimitSpec::tn(n, x, spec_.center);
                v = sharp(x, T);
                if (averaging)
                    v = 0.5 * (v + sharp(x, PVLimitSpec::tn(n + 1, x, spec_.center)));
            } else {
                T = std::max(spec_.start(), 4.0 * h_) * std::pow(r, j);
                if (window)
                    v = windowed(x, T);
                else {
                    v = sharp(x, T);
                    if (averaging)
                        v = 0.5 * (v + sharp(x, T + std::numbers::pi / d));
                }
            }
            v = (v + inner) / (2.0 * std::numbers::pi);
            values.push_back(v);
            rep.stages.push_back({j, S, T, v});

            std::vector<detail::Candidate> cands{{"raw", values}};
            if (window) {
                auto r1 = detail::richardson(values, r);
                cands.push_back({"richardson1", r1});
                cands.push_back({"richardson2", detail::richardson(r1, r * r)});
                cands.push_back({"aitken", detail::aitken_sequence(values)});
            } else if (spec_.accel == PVLimitSpec::Accel::Aitken) {
                cands.push_back({"aitken", detail::aitken_sequence(values)});
            }
            auto [best, err] = detail::best_candidate(cands);
            rep.complex_value = best.seq.back();
            rep.recovered = rep.complex_value.real();
            rep.error_estimate = err + quad_err;
            rep.method = best.name;
            if (j + 1 >= spec_.min_stages && err <= spec_.tol) {
                // Further stages cannot reduce the error near s = 0.
                rep.converged = err + quad_err <= spec_.tol;
                break;
            }
        }
        rep.evaluations = evaluations();
        if (!rep.converged && spec_.strict)
            throw NonConvergenceError("inversion stages did not settle at x = " + std::to_string(x) +
                                      " (last change " + std::to_string(rep.error_estimate) + ")\n" + rep.to_csv());
        return rep;
    }

    /// (1/2pi) int_{S<|s|<T} e^{ixs} g^(s) ds at the finest S, no acceleration.
    cplx truncated(double x, double T) const
    {
        return (inner_part(x).value + sharp(x, T)) / (2.0 * std::numbers::pi);
    }

private:
    /// Integrand at offset u: e^{ixs} g^(s) summed over the rays.
    cplx integrand(const detail::RaySamples& ray, double x, double u, cplx g) const
    {
        const double s = ray.anchor() + ray.dir() * u;
        const cplx v = std::exp(cplx(0.0, x * s)) * g;
        return spec_.hermitian ? cplx(2.0 * v.real(), 0.0) : v;
    }

    /// Kronrod sum of one cached panel; `gk_err` receives |Kronrod - Gauss|.
    cplx panel_sum(int k, double x, double T, bool smooth, double* gk_err = nullptr) const
    {
        cplx acc{}, gauss{};
        for (const auto& ray : rays_) {
            const auto [a, b] = ray->bounds(k);
            const auto& vals = ray->values(k);
            for (int j = 0; j < 21; ++j) {
                const double u = detail::RaySamples::node(a, b, j);
                double w = detail::RaySamples::weight(a, b, j);
                if (smooth)
                    w *= detail::window(u / T);
                const cplx v = integrand(*ray, x, u, vals[j]);
                acc += w * v;
                // Gauss nodes are the odd-indexed Kronrod abscissae.
                const int m = j < 10 ? j : (j == 10 ? -1 : j - 11);
                if (m >= 0 && m % 2 == 1)
                    gauss += 0.5 * (b - a) * quad::detail::wg[m / 2] * (smooth ? detail::window(u / T) : 1.0) * v;
            }
        }
        if (gk_err)
            *gk_err = std::abs(acc - gauss);
        return acc;
    }

    struct Inner {
        cplx value;
        double S;
        double quad_error;
    };

    /// Contribution of u in (0, u1]: geometric panels toward 0. The part below
    /// the last panel is extrapolated from the ratio of the last two panel
    /// sums (exact for a power law), and the march stops once that total
    /// settles. Unresolved oscillation near 0 shows up in quad_error.
    Inner inner_part(double x) const
    {
        cplx acc{}, prev_panel{}, prev_total{};
        double qerr = 0.0;
        int calm = 0;
        const double settle = 1e-3 * spec_.tol;
        for (int k = -1; k >= -160; --k) {
            double e = 0.0;
            const cplx p = panel_sum(k, x, 1.0, false, &e);
            qerr += e;
            acc += p;
            cplx total = acc;
            if (k < -1 && std::abs(prev_panel) > 1e-300) {
                const cplx r = p / prev_panel;
                if (std::abs(r) < 0.95 && r.real() > 0.0)
                    total += p * r / (1.0 - r);
            }
            calm = (k < -1 && std::abs(total - prev_total) < settle) ? calm + 1 : 0;
            prev_panel = p;
            prev_total = total;
            if (calm >= 2 && k <= -6)
                return {total, rays_.front()->bounds(k).first, qerr};
        }
        return {prev_total, rays_.front()->bounds(-160).first, qerr};
    }

    /// int_{u1}^{2T} eta(u/T) F(u) du.
    cplx windowed(double x, double T) const
    {
        cplx acc{};
        for (int k = 0;; ++k) {
            const auto [a, b] = rays_.front()->bounds(k);
            if (a >= 2.0 * T)
                break;
            acc += panel_sum(k, x, T, true);
        }
        return acc;
    }

    /// int_{u1}^{T} F(u) du with a fresh partial panel at the end.
    cplx sharp(double x, double T) const
    {
        cplx acc{};
        int k = 0;
        for (;; ++k) {
            const auto [a, b] = rays_.front()->bounds(k);
            if (b > T)
                break;
            acc += panel_sum(k, x, T, false);
        }
        const double a = rays_.front()->bounds(k).first;
        if (T > a) {
            for (const auto& ray : rays_)
                for (int j = 0; j < 21; ++j) {
                    const double u = detail::RaySamples::node(a, T, j);
                    acc += detail::RaySamples::weight(a, T, j) * integrand(*ray, x, u, ray->sample(u));
                }
        }
        return acc;
    }

    PVLimitSpec spec_;
    double h_ = 1.0;
    std::vector<std::unique_ptr<detail::RaySamples>> rays_;
};

/// (1/2pi) lim int_{S<|s-a|<T} e^{ixs} g^(s) ds for an evaluable transform.
inline InversionReport pv_invert(const std::function<cplx(double)>& ghat, double x, PVLimitSpec spec = {})
{
    const double reach = spec.reach > 0.0 ? spec.reach : std::abs(x) + 2.0;
    return SpectralInverter(ghat, spec, reach).invert(x);
}

/// Options shared by the PiecewiseFunction front ends.
struct InvertOptions {
    double tol = 1e-6;
    int max_stages = 8;
    bool strict = true;
    QuadOptions quad{};
};

namespace detail
{
inline double reach_of(const TransformPlan& plan, const std::vector<double>& xs)
{
    double reach = 1.0;
    for (double x : xs)
        reach = std::max(reach, std::max(std::abs(x - plan.core_lo), std::abs(x - plan.core_hi)) + 1.0);
    return reach;
}

inline PVLimitSpec spec_for(const PiecewiseFunction& g, const InvertOptions& opt)
{
    PVLimitSpec spec;
    spec.tol = opt.tol;
    spec.max_stages = opt.max_stages;
    spec.strict = opt.strict;
    spec.hermitian = true;
    if (const auto& odd = g.odd_symmetry()) {
        spec.outer = PVLimitSpec::Outer::Sequence;
        spec.center = odd->center;
        spec.accel = PVLimitSpec::Accel::Aitken;
    }
    return spec;
}
} // namespace detail

/// Recover (f(x-)+f(x+))/2 at each x. Tails with limits or polynomial growth
/// are removed first and their Heaviside/polynomial record is added back;
/// the residual transform is sampled once and shared by all x.
inline std::vector<InversionReport> invert_many(const PiecewiseFunction& f, const std::vector<double>& xs,
                                                InvertOptions opt = {})
{
    const auto [lt, rt] = f.classify_tails();
    std::optional<PiecewiseFunction> residual;
    AsymptoteRecord record;
    if (!lt.decays() || !rt.decays()) {
        AsymptoteSplit split = f.subtract_asymptote();
        residual = std::move(split.residual);
        record = split.added_back;
    }
    PiecewiseFunction g = residual ? *residual : f;
    if (const auto odd = g.odd_symmetry()) {
        // f is odd on every smaller ball too: shrink the window so that each x
        // stays clear of it.
        double delta = odd->radius;
        for (double x : xs) {
            if (x == odd->center)
                throw DomainError("x coincides with the principal-value centre");
            delta = std::min(delta, 0.5 * std::abs(x - odd->center));
        }
        g = g.with_odd_symmetry(OddSymmetry{odd->center, delta});
    }
    auto tr = std::make_shared<Transformer>(g, opt.quad);
    SpectralInverter inv([tr](double s) { return (*tr)(s).value; }, detail::spec_for(g, opt),
                         detail::reach_of(tr->plan(), xs));
    std::vector<InversionReport> out;
    for (double x : xs) {
        InversionReport rep = inv.invert(x);
        rep.added_back = record.eval(x);
        rep.recovered += rep.added_back;
        rep.complex_value += rep.added_back;
        try {
            rep.target = f.midpoint_value(x);
        } catch (const Error&) {
        }
        out.push_back(std::move(rep));
    }
    return out;
}

inline InversionReport invert_pointwise(const PiecewiseFunction& f, double x, double tol = 1e-6,
                                        InvertOptions opt = {})
{
    opt.tol = tol;
    return invert_many(f, {x}, opt).front();
}

/// Inversion of the [a,b]-restricted transform: recovers the midpoint of f
/// at a < x < b from int_a^b e^{-ist} f(t) dt alone.
inline InversionReport local_inversion(const PiecewiseFunction& f, double a, double b, double x, double tol = 1e-6,
                                       InvertOptions opt = {})
{
    if (!(a < x && x < b))
        throw DomainError("local inversion needs a < x < b");
    InversionReport rep = invert_pointwise(f.restricted(a, b), x, tol, opt);
    rep.target = f.midpoint_value(x);
    return rep;
}

/// Limit along T_n = (2n+1)pi/(2|x-c|) for a transform odd about c. Stages
/// run over n = n_max/8, n_max/4, n_max/2, n_max; each stage averages two
/// consecutive T_n.
inline InversionReport tn_limit(const std::function<cplx(double)>& fhat, double x, double c, int n_max = 200,
                                PVLimitSpec spec = {})
{
    if (x == c)
        throw DomainError("the T_n sequence needs x != c");
    spec.outer = PVLimitSpec::Outer::Sequence;
    spec.center = c;
    if (spec.accel == PVLimitSpec::Accel::Window)
        spec.accel = PVLimitSpec::Accel::Averaging;
    spec.ratio = 2.0;
    spec.first = std::max(1, n_max / 8);
    spec.max_stages = 4;
    spec.min_stages = 4;
    spec.strict = false;
    const double reach = spec.reach > 0.0 ? spec.reach : std::abs(x - c) + 2.0;
    return SpectralInverter(fhat, spec, reach).invert(x);
}

/// T_n limit for the odd part of f on its principal-value window.
inline InversionReport tn_limit(const PiecewiseFunction& f, double x, int n_max = 200, PVLimitSpec spec = {})
{
    const auto& odd = f.odd_symmetry();
    if (!odd)
        throw HypothesisError("tn_limit needs a function with an odd principal-value window");
    if (std::abs(x - odd->center) <= odd->radius)
        throw DomainError("x must lie outside the odd window [c - delta, c + delta]");
    const PiecewiseFunction fc = f;
    spec.hermitian = true;
    spec.reach = std::abs(x - odd->center) + odd->radius + 1.0;
    InversionReport rep =
        tn_limit([fc](double s) { return pv_window_transform(fc, s).value; }, x, odd->center, n_max, spec);
    rep.target = 0.0;
    return rep;
}

/// (1/2pi) int_A^B e^{ixs} r^(s) ds for the part r of f outside (a, b),
/// evaluated as (1/2pi i)[e^{ixB} q^(B) - e^{ixA} q^(A)] with q = r/(x - t).
inline cplx remainder_decay(const PiecewiseFunction& f, double a, double b, double x, double A, double B,
                            QuadOptions opt = {})
{
    if (!(a < x && x < b))
        throw DomainError("remainder_decay needs a < x < b");
    if (!f.left_tail().decays() || !f.right_tail().decays())
        throw HypothesisError("remainder_decay needs f integrable outside [a, b]");
    std::vector<Piece> ps;
    const Expr kernel = ex::c(1.0) / (ex::c(x) - ex::x());
    for (const Piece& p : f.pieces()) {
        if (p.lo < a)
            ps.push_back({p.lo, std::min(p.hi, a), p.expr * kernel});
        if (p.hi > b)
            ps.push_back({std::max(p.lo, b), p.hi, p.expr * kernel});
    }
    auto tail = [](const TailBehavior& t) { return t.cls == TailClass::L1 ? TailBehavior::l1() : TailBehavior::bv_zero(); };
    const PiecewiseFunction q =
        PiecewiseFunction::from_pieces(std::move(ps), {}, tail(f.left_tail()), tail(f.right_tail()));
    Transformer tq(q, opt);
    const cplx i(0.0, 1.0);
    const cplx val = std::exp(i * (x * B)) * tq(B).value - std::exp(i * (x * A)) * tq(A).value;
    return val / (2.0 * std::numbers::pi * i);
}

} // namespace bvft

#endif // BVFT_INVERSION_HPP
