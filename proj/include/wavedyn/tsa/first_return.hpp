#pragma once

// First-return-time (F1) statistics of a scalar series to a small value cell.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::tsa {

struct ExponentialFit {
    double mu = 0.0;            // 1/<tau>, per sample
    double fit_quality = 0.0;   // R^2 of log-frequency against log(mu) - mu tau, clamped to [0, 1]
    bool quasi_periodic = false;
    double bin_width = 1.0;     // samples per aggregated bin used in the fit
    std::size_t bins_used = 0;
};

struct F1Histogram {
    double cell_size = 0.0;
    double cell_lower = 0.0;  // reference cell [lower, upper)
    double cell_upper = 0.0;
    double dt = 1.0;
    std::vector<std::size_t> return_times;     // samples, chronological
    std::map<std::size_t, std::size_t> counts;  // tau -> occurrences
    double mean_tau = 0.0;
    std::optional<double> mu_fit;
    std::optional<double> fit_quality;  // absent when statistics are insufficient
    bool quasi_periodic = false;

    std::size_t occupied_bins() const { return counts.size(); }
};

inline constexpr std::size_t kMinReturnsForFit = 10;
inline constexpr std::size_t kMinDistinctBinsForFit = 10;

/// Exponential law mu e^{-mu tau} with the Kac/Poincare estimator mu = 1/<tau>.
/// The goodness of fit is measured on aggregated bins of `bin_width` samples
/// (0 picks <tau>/8, at least 1); only occupied bins enter the R^2.
inline ExponentialFit fit_exponential(const F1Histogram& hist, std::size_t bin_width = 0) {
    ExponentialFit fit;
    require(!hist.return_times.empty(), "fit_exponential: histogram has no return times");
    fit.mu = 1.0 / hist.mean_tau;
    if (hist.counts.size() < kMinDistinctBinsForFit) {
        // a handful of discrete return values: no exponential to speak of
        fit.quasi_periodic = true;
        fit.fit_quality = 0.0;
        fit.bins_used = hist.counts.size();
        return fit;
    }
    if (bin_width == 0) bin_width = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hist.mean_tau / 8.0)));
    fit.bin_width = static_cast<double>(bin_width);

    std::map<std::size_t, std::size_t> binned;  // bin index -> count; bin b covers [b*w + 1, (b+1)*w]
    for (const auto& [tau, c] : hist.counts) binned[(tau - 1) / bin_width] += c;
    const double total = static_cast<double>(hist.return_times.size());
    std::vector<double> xs, ys;
    for (const auto& [b, c] : binned) {
        const double lo = static_cast<double>(b * bin_width) + 1.0;
        const double centre = lo + 0.5 * (static_cast<double>(bin_width) - 1.0);
        xs.push_back(centre);
        ys.push_back(std::log(static_cast<double>(c) / (total * static_cast<double>(bin_width))));
    }
    fit.bins_used = xs.size();
    if (xs.size() < 2) {
        fit.quasi_periodic = true;
        return fit;
    }
    double mean_y = 0.0;
    for (double y : ys) mean_y += y;
    mean_y /= static_cast<double>(ys.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double model = std::log(fit.mu) - fit.mu * xs[i];
        ss_res += (ys[i] - model) * (ys[i] - model);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.fit_quality = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
    return fit;
}

/// Cells of width `cell_size` are anchored at the series minimum; the
/// reference cell is the one holding sample 0, or the one holding
/// `reference_value` when given. A return is a re-entry into the reference cell
/// after at least one sample outside it; return times are the gaps between
/// successive entries. Sample 0 counts as an entry when it lies in the cell.
inline F1Histogram f1_distribution(const TimeSeries& series, double cell_size,
                                   std::optional<double> reference_value = std::nullopt) {
    const auto [lo_it, hi_it] = std::minmax_element(series.values().begin(), series.values().end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    require(cell_size > 0.0, "f1_distribution: cell_size must be > 0");
    require(cell_size < range, "f1_distribution: cell_size must be smaller than the series range");

    const auto cell_of = [&](double v) { return static_cast<long long>(std::floor((v - lo) / cell_size)); };
    if (reference_value)
        require(*reference_value >= lo && *reference_value <= *hi_it, "f1_distribution: reference value outside the series range");
    const long long ref = cell_of(reference_value.value_or(series[0]));

    F1Histogram hist;
    hist.cell_size = cell_size;
    hist.cell_lower = lo + static_cast<double>(ref) * cell_size;
    hist.cell_upper = hist.cell_lower + cell_size;
    hist.dt = series.dt();

    std::optional<std::size_t> last_entry;
    bool inside = false;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const bool now_inside = cell_of(series[k]) == ref;
        if (now_inside && !inside) {
            if (last_entry) hist.return_times.push_back(k - *last_entry);
            last_entry = k;
        }
        inside = now_inside;
    }
    double sum = 0.0;
    for (std::size_t tau : hist.return_times) {
        ++hist.counts[tau];
        sum += static_cast<double>(tau);
    }
    if (hist.return_times.empty()) return hist;
    hist.mean_tau = sum / static_cast<double>(hist.return_times.size());
    hist.mu_fit = 1.0 / hist.mean_tau;
    if (hist.return_times.size() >= kMinReturnsForFit) {
        const ExponentialFit fit = fit_exponential(hist);
        hist.fit_quality = fit.fit_quality;
        hist.quasi_periodic = fit.quasi_periodic;
    }
    return hist;
}

}  // namespace wavedyn::tsa
