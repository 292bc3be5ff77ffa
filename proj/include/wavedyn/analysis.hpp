#pragma once

// End-to-end analyses on a raw series: normalization to [0, 1], embedding
// parameter selection and the dimension scan for the Lyapunov estimate.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"
#include "wavedyn/tsa/embedding.hpp"
#include "wavedyn/tsa/first_return.hpp"
#include "wavedyn/tsa/lyapunov.hpp"
#include "wavedyn/tsa/recurrence.hpp"

namespace wavedyn::analysis {

struct F1Options {
    double cell_size = 0.01;  // fraction of the normalized range
    std::optional<double> reference;  // normalized value; default is sample 0
    bool normalize = true;
};

inline tsa::F1Histogram run_f1(const TimeSeries& raw, const F1Options& opt = {}) {
    const TimeSeries series = opt.normalize ? normalize_unit(raw) : raw;
    return tsa::f1_distribution(series, opt.cell_size, opt.reference);
}

struct EmbeddingChoice {
    std::size_t dimension = 3;
    std::size_t delay = 0;  // 0: first autocorrelation minimum
};

inline std::size_t resolve_delay(const TimeSeries& series, std::size_t delay) {
    return delay > 0 ? delay : tsa::choose_delay(series.values());
}

struct RecurrenceOptions {
    double epsilon = 0.05;
    EmbeddingChoice embedding{};
    bool raw_scalar = false;  // skip embedding (m = 1)
    std::size_t window_start = 0;
    std::size_t window_length = tsa::kDefaultRecurrenceWindow;
    bool normalize = true;
};

inline tsa::RecurrenceData run_recurrence(const TimeSeries& raw, const RecurrenceOptions& opt = {}) {
    const TimeSeries series = opt.normalize ? normalize_unit(raw) : raw;
    const std::size_t m = opt.raw_scalar ? 1 : opt.embedding.dimension;
    const std::size_t d = opt.raw_scalar ? 1 : resolve_delay(series, opt.embedding.delay);
    const tsa::EmbeddedSeries emb = tsa::delay_embed(series, m, d);
    return tsa::recurrence_plot(emb, opt.epsilon, opt.window_start, opt.window_length);
}

struct LyapunovOptions {
    std::vector<std::size_t> dimensions{3, 4, 5};
    std::size_t delay = 0;    // 0: first autocorrelation minimum
    std::size_t theiler = 0;  // 0: 2 d m
    double epsilon = 0.02;    // on the normalized series
    std::size_t t_max = 40;
    std::size_t max_references = 0;
    std::optional<tsa::FitWindow> window;  // default: initial rise of each curve
    bool normalize = true;
};

struct LyapunovEstimate {
    std::vector<tsa::LyapunovCurve> curves;  // one per dimension, each with its fitted slope
    std::size_t delay = 0;
    double lambda = 0.0;  // mean over dimensions, per unit time
    double spread = 0.0;  // max - min over dimensions
};

inline LyapunovEstimate estimate_lyapunov(const TimeSeries& raw, const LyapunovOptions& opt = {}) {
    require(!opt.dimensions.empty(), "lyapunov: need at least one embedding dimension");
    const TimeSeries series = opt.normalize ? normalize_unit(raw) : raw;
    LyapunovEstimate est;
    est.delay = resolve_delay(series, opt.delay);
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    for (std::size_t m : opt.dimensions) {
        const tsa::EmbeddedSeries emb = tsa::delay_embed(series, m, est.delay);
        const std::size_t theiler = opt.theiler > 0 ? opt.theiler : 2 * est.delay * m;
        tsa::LyapunovCurve curve = tsa::lyapunov_curve(emb, opt.epsilon, theiler, opt.t_max, {opt.max_references});
        const tsa::FitWindow window = opt.window ? *opt.window : tsa::auto_fit_window(curve);
        const double slope = tsa::fit_slope(curve, window);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
        sum += slope;
        est.curves.push_back(std::move(curve));
    }
    est.lambda = sum / static_cast<double>(opt.dimensions.size());
    est.spread = hi - lo;
    return est;
}

}  // namespace wavedyn::analysis
