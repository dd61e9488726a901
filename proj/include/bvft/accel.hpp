#ifndef BVFT_ACCEL_HPP
#define BVFT_ACCEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace bvft::accel
{

using cplx = std::complex<double>;

template <typename T>
struct Estimate {
    T value{};
    double error = 0.0;
};

/// Euler transformation of a series given by its partial sums, in the
/// repeated-averaging form: each level replaces consecutive partial sums by
/// their mean. For alternating terms with a smooth amplitude every level
/// removes one order of the oscillating remainder.
///
/// `depth` caps the number of averaging levels; the final estimate uses the
/// two newest entries of the deepest level reached.
template <typename T>
Estimate<T> euler_partial_sums(std::span<const T> partial, std::size_t depth = 16)
{
    Estimate<T> out;
    if (partial.empty())
        return out;
    if (partial.size() == 1) {
        out.value = partial[0];
        out.error = std::abs(partial[0]);
        return out;
    }
    std::vector<T> level(partial.begin(), partial.end());
    // Keep at least two entries at the deepest level so an error can be read off.
    std::size_t levels = std::min(depth, level.size() - 2);
    for (std::size_t k = 0; k < levels; ++k) {
        for (std::size_t j = 0; j + 1 < level.size(); ++j)
            level[j] = 0.5 * (level[j] + level[j + 1]);
        level.pop_back();
    }
    out.value = level.back();
    out.error = std::abs(level.back() - level[level.size() - 2]);
    return out;
}

/// Aitken's delta-squared on the last three entries of a sequence. Falls
/// back to the newest entry when the second difference vanishes.
template <typename T>
Estimate<T> aitken(std::span<const T> seq)
{
    Estimate<T> out;
    const std::size_t n = seq.size();
    if (n == 0)
        return out;
    if (n < 3) {
        out.value = seq[n - 1];
        out.error = n == 2 ? std::abs(seq[1] - seq[0]) : std::abs(seq[0]);
        return out;
    }
    const T x0 = seq[n - 3], x1 = seq[n - 2], x2 = seq[n - 1];
    const T d1 = x1 - x0, d2 = x2 - x1;
    const T dd = d2 - d1;
    const double scale = std::max({std::abs(x0), std::abs(x1), std::abs(x2), 1e-300});
    if (std::abs(dd) <= 1e-14 * scale) {
        out.value = x2;
        out.error = std::abs(d2);
        return out;
    }
    out.value = x2 - d2 * d2 / dd;
    out.error = std::abs(out.value - x2);
    return out;
}

/// Iterated Aitken: apply delta-squared to the whole sequence repeatedly
/// while at least three entries remain (at most `passes` times).
template <typename T>
Estimate<T> aitken_iterated(std::span<const T> seq, std::size_t passes = 2)
{
    std::vector<T> cur(seq.begin(), seq.end());
    for (std::size_t p = 0; p < passes && cur.size() >= 5; ++p) {
        std::vector<T> next;
        next.reserve(cur.size() - 2);
        for (std::size_t j = 0; j + 2 < cur.size(); ++j) {
            const T d1 = cur[j + 1] - cur[j], d2 = cur[j + 2] - cur[j + 1];
            const T dd = d2 - d1;
            if (std::abs(dd) <= 1e-14 * std::max(std::abs(cur[j + 2]), 1e-300))
                next.push_back(cur[j + 2]);
            else
                next.push_back(cur[j + 2] - d2 * d2 / dd);
        }
        cur = std::move(next);
    }
    Estimate<T> out;
    if (cur.empty())
        return out;
    out.value = cur.back();
    out.error = cur.size() > 1 ? std::abs(cur.back() - cur[cur.size() - 2]) : std::abs(cur.back());
    return out;
}

} // namespace bvft::accel

#endif // BVFT_ACCEL_HPP
