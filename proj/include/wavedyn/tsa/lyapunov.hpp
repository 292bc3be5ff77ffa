#pragma once

// Maximal Lyapunov exponent from the divergence curve
//   S(eps, m, t) = < ln( (1/|U_n|) sum_{n' in U_n} |s_{n+t} - s_{n'+t}| ) >_n
// where U_n holds the eps-neighbors of reference point n in the delay
// embedding, excluding temporal neighbors |n - n'| <= theiler. Neighbors are
// selected with the full Euclidean embedding distance; divergence is measured
// in the final scalar delay coordinate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"
#include "wavedyn/tsa/embedding.hpp"
#include "wavedyn/tsa/neighbors.hpp"

namespace wavedyn::tsa {

/// Inclusive range [first, last] of t offsets.
struct FitWindow {
    std::size_t first = 0;
    std::size_t last = 0;
};

struct LyapunovCurve {
    std::vector<std::size_t> t_values;
    std::vector<double> s_values;
    std::vector<std::size_t> contributing;  // reference points averaged at each t
    double epsilon = 0.0;
    std::size_t dimension = 0;
    std::size_t delay = 0;
    std::size_t theiler = 0;
    double dt = 1.0;
    std::size_t references_with_neighbors = 0;
    std::size_t references_tried = 0;
    std::optional<double> lambda_max;  // per unit time
    std::optional<FitWindow> fit_window;
};

/// Mean distances below this fraction of epsilon count as exact repeats.
inline constexpr double kExactRepeat = 1e-9;

struct CurveOptions {
    /// Upper bound on reference points; 0 uses all of them. References are
    /// taken with a uniform stride so the result does not depend on run order.
    std::size_t max_references = 0;
};

inline LyapunovCurve lyapunov_curve(const EmbeddedSeries& emb, double epsilon, std::size_t theiler, std::size_t t_max,
                                    const CurveOptions& options = {}) {
    require(epsilon > 0.0, "lyapunov_curve: epsilon must be > 0");
    require(emb.size() > t_max + theiler + 2, "lyapunov_curve: series too short for t_max and Theiler window");

    const std::size_t usable = emb.size() - t_max;  // points whose future up to t_max exists
    const BoxGrid grid(emb, epsilon, usable);

    std::size_t stride = 1;
    if (options.max_references > 0 && usable > options.max_references)
        stride = (usable + options.max_references - 1) / options.max_references;

    std::vector<double> sum(t_max + 1, 0.0);
    std::vector<std::size_t> count(t_max + 1, 0);
    std::vector<double> dist(t_max + 1);
    std::vector<std::size_t> neighbors;

    LyapunovCurve curve;
    for (std::size_t n = 0; n < usable; n += stride) {
        ++curve.references_tried;
        neighbors.clear();
        grid.for_each_neighbor(n, [&](std::size_t j) {
            const std::size_t gap = j > n ? j - n : n - j;
            if (gap > theiler) neighbors.push_back(j);
        });
        if (neighbors.empty()) continue;
        ++curve.references_with_neighbors;
        std::fill(dist.begin(), dist.end(), 0.0);
        for (std::size_t j : neighbors)
            for (std::size_t t = 0; t <= t_max; ++t) dist[t] += std::abs(emb.last(n + t) - emb.last(j + t));
        const double inv = 1.0 / static_cast<double>(neighbors.size());
        for (std::size_t t = 0; t <= t_max; ++t) {
            // exact repeats (zero up to rounding) have no meaningful logarithm; skip them
            if (dist[t] * inv > kExactRepeat * epsilon) {
                sum[t] += std::log(dist[t] * inv);
                ++count[t];
            }
        }
    }
    if (curve.references_with_neighbors == 0)
        throw NumericalError("lyapunov_curve: every eps-neighborhood is empty; try a larger epsilon (eps = " +
                             format_double(epsilon) + ")");

    curve.epsilon = epsilon;
    curve.dimension = emb.dimension();
    curve.delay = emb.delay();
    curve.theiler = theiler;
    curve.dt = emb.dt();
    for (std::size_t t = 0; t <= t_max; ++t) {
        if (count[t] == 0) continue;
        curve.t_values.push_back(t);
        curve.s_values.push_back(sum[t] / static_cast<double>(count[t]));
        curve.contributing.push_back(count[t]);
    }
    return curve;
}

/// Least-squares slope of (t, S) over the inclusive window, converted to per
/// unit time with the curve's dt. Stores it as the curve's lambda_max.
inline double fit_slope(LyapunovCurve& curve, FitWindow window) {
    require(window.last >= window.first + 3, "fit_slope: window must span at least 4 points");
    double st = 0.0, ss = 0.0, stt = 0.0, sts = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
        const std::size_t t = curve.t_values[i];
        if (t < window.first || t > window.last) continue;
        const double x = static_cast<double>(t);
        const double y = curve.s_values[i];
        st += x;
        ss += y;
        stt += x * x;
        sts += x * y;
        ++n;
    }
    require(n >= 4, "fit_slope: fewer than 4 curve points inside the window");
    const double nd = static_cast<double>(n);
    const double slope = (nd * sts - st * ss) / (nd * stt - st * st);
    curve.lambda_max = slope / curve.dt;
    curve.fit_window = window;
    return *curve.lambda_max;
}

/// Picks the initial rising part of S, starting at t = 1 (t = 0 is biased by
/// the neighbor selection itself) and ending where S has covered
/// `rise_fraction` of its rise above S(1). A curve rising by less than
/// `min_rise` is treated as flat and fitted over its whole support.
inline FitWindow auto_fit_window(const LyapunovCurve& curve, double rise_fraction = 0.5, double min_rise = 0.5) {
    std::size_t begin = 0;
    while (begin < curve.t_values.size() && curve.t_values[begin] < 1) ++begin;
    require(curve.t_values.size() >= begin + 4, "auto_fit_window: curve has fewer than 4 points past t = 0");
    const double s1 = curve.s_values[begin];
    double hi = s1;
    for (std::size_t i = begin; i < curve.s_values.size(); ++i) hi = std::max(hi, curve.s_values[i]);
    if (hi - s1 < min_rise) return {curve.t_values[begin], curve.t_values.back()};
    const double threshold = s1 + rise_fraction * (hi - s1);
    std::size_t end = curve.t_values.size() - 1;
    for (std::size_t i = begin; i < curve.s_values.size(); ++i) {
        if (curve.s_values[i] >= threshold) {
            end = i;
            break;
        }
    }
    end = std::max(end, begin + 3);
    return {curve.t_values[begin], curve.t_values[end]};
}

}  // namespace wavedyn::tsa
