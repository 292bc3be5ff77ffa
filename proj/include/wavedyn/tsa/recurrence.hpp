#pragma once

// Recurrence plots R(i, j) = [ |x_i - x_j| <= eps ] over a window of an
// embedded trajectory, plus the diagonal-line statistics used to tell periodic,
// quasi-periodic and chaotic windows apart.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/tsa/embedding.hpp"

namespace wavedyn::tsa {

/// Sparse symmetric recurrence matrix of a window [start, start + n_points).
/// Pairs use window-local indices and are sorted lexicographically.
struct RecurrenceData {
    double epsilon = 0.0;
    std::size_t window_start = 0;
    std::size_t n_points = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

    bool contains(std::size_t i, std::size_t j) const {
        const std::pair<std::uint32_t, std::uint32_t> key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
        return std::binary_search(pairs.begin(), pairs.end(), key);
    }
    double recurrence_rate() const {
        return n_points == 0 ? 0.0 : static_cast<double>(pairs.size()) / (static_cast<double>(n_points) * n_points);
    }
};

inline constexpr std::size_t kDefaultRecurrenceWindow = 5000;

inline RecurrenceData recurrence_plot(const EmbeddedSeries& emb, double epsilon, std::size_t start, std::size_t length) {
    require(epsilon > 0.0, "recurrence_plot: epsilon must be > 0");
    require(start < emb.size(), "recurrence_plot: window starts past the end of the series");
    length = std::min(length, emb.size() - start);
    require(length >= 1, "recurrence_plot: empty window");

    RecurrenceData rd;
    rd.epsilon = epsilon;
    rd.window_start = start;
    rd.n_points = length;
    const double eps2 = epsilon * epsilon;
    for (std::size_t i = 0; i < length; ++i) {
        const auto xi = emb.point(start + i);
        for (std::size_t j = i; j < length; ++j) {
            if (squared_distance(xi, emb.point(start + j)) <= eps2) {
                rd.pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
                if (j != i) rd.pairs.emplace_back(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(i));
            }
        }
    }
    std::sort(rd.pairs.begin(), rd.pairs.end());
    return rd;
}

/// Per-offset occupancy of the upper triangle: rate[k] = #{(i, i+k) recurrent} / (n - k).
inline std::vector<double> diagonal_recurrence_rate(const RecurrenceData& rd) {
    std::vector<double> count(rd.n_points, 0.0);
    for (const auto& [i, j] : rd.pairs)
        if (j >= i) count[j - i] += 1.0;
    for (std::size_t k = 0; k < rd.n_points; ++k) count[k] /= static_cast<double>(rd.n_points - k);
    return count;
}

/// Lengths of runs of consecutive recurrent points along every diagonal above
/// the main one, keeping runs of at least `min_length`.
inline std::vector<std::size_t> diagonal_line_lengths(const RecurrenceData& rd, std::size_t min_length = 2) {
    std::vector<std::vector<std::uint32_t>> by_offset(rd.n_points);
    for (const auto& [i, j] : rd.pairs)
        if (j > i) by_offset[j - i].push_back(i);
    std::vector<std::size_t> lengths;
    for (auto& starts : by_offset) {
        if (starts.empty()) continue;
        std::sort(starts.begin(), starts.end());
        std::size_t run = 1;
        for (std::size_t a = 1; a <= starts.size(); ++a) {
            if (a < starts.size() && starts[a] == starts[a - 1] + 1) {
                ++run;
                continue;
            }
            if (run >= min_length) lengths.push_back(run);
            run = 1;
        }
    }
    return lengths;
}

inline double mean_diagonal_length(const RecurrenceData& rd, std::size_t min_length = 2) {
    const std::vector<std::size_t> lengths = diagonal_line_lengths(rd, min_length);
    if (lengths.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t l : lengths) sum += static_cast<double>(l);
    return sum / static_cast<double>(lengths.size());
}

/// Offsets of the populated diagonals: maximal runs of offsets k >= 1 whose
/// occupancy is at least `threshold` times the largest off-main occupancy,
/// each run reduced to its best offset.
inline std::vector<std::size_t> diagonal_line_offsets(const RecurrenceData& rd, double threshold = 0.5) {
    const std::vector<double> rate = diagonal_recurrence_rate(rd);
    double best = 0.0;
    for (std::size_t k = 1; k < rate.size(); ++k) best = std::max(best, rate[k]);
    std::vector<std::size_t> offsets;
    if (best <= 0.0) return offsets;
    const double cut = threshold * best;
    std::size_t k = 1;
    while (k < rate.size()) {
        if (rate[k] < cut) {
            ++k;
            continue;
        }
        std::size_t arg = k;
        for (; k < rate.size() && rate[k] >= cut; ++k)
            if (rate[k] > rate[arg]) arg = k;
        offsets.push_back(arg);
    }
    return offsets;
}

/// Gaps between successive populated diagonals, starting from the main one.
inline std::vector<std::size_t> diagonal_spacings(const RecurrenceData& rd, double threshold = 0.5) {
    std::vector<std::size_t> spacings;
    std::size_t prev = 0;
    for (std::size_t k : diagonal_line_offsets(rd, threshold)) {
        spacings.push_back(k - prev);
        prev = k;
    }
    return spacings;
}

/// A spacing-histogram peak: spacings within `tolerance` (relative, at least
/// 2 samples) of each other are merged.
struct SpacingPeak {
    double centre = 0.0;
    std::size_t count = 0;
};

inline std::vector<SpacingPeak> spacing_peaks(std::vector<std::size_t> spacings, double tolerance = 0.05) {
    std::sort(spacings.begin(), spacings.end());
    std::vector<SpacingPeak> peaks;
    std::size_t a = 0;
    while (a < spacings.size()) {
        std::size_t b = a;
        double sum = 0.0;
        const double base = static_cast<double>(spacings[a]);
        const double width = std::max(2.0, tolerance * base);
        while (b < spacings.size() && static_cast<double>(spacings[b]) - base <= width) sum += static_cast<double>(spacings[b++]);
        peaks.push_back({sum / static_cast<double>(b - a), b - a});
        a = b;
    }
    return peaks;
}

/// Peaks holding at least `min_share` of all spacings.
inline std::size_t dominant_peak_count(const std::vector<SpacingPeak>& peaks, double min_share = 0.1) {
    std::size_t total = 0;
    for (const auto& p : peaks) total += p.count;
    std::size_t n = 0;
    for (const auto& p : peaks)
        if (static_cast<double>(p.count) >= min_share * static_cast<double>(total)) ++n;
    return n;
}

}  // namespace wavedyn::tsa
