#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::tsa {

/// Delay vectors (v[k], v[k+d], ..., v[k+(m-1)d]), stored row-major.
class EmbeddedSeries {
public:
    EmbeddedSeries(std::size_t dimension, std::size_t delay, std::vector<double> flat, double dt)
        : m_(dimension), d_(delay), data_(std::move(flat)), dt_(dt) {}

    std::size_t dimension() const { return m_; }
    std::size_t delay() const { return d_; }
    std::size_t size() const { return data_.size() / m_; }
    double dt() const { return dt_; }

    std::span<const double> point(std::size_t k) const { return {data_.data() + k * m_, m_}; }
    /// Final scalar coordinate v[k + (m-1)d].
    double last(std::size_t k) const { return data_[k * m_ + m_ - 1]; }
    double first(std::size_t k) const { return data_[k * m_]; }

private:
    std::size_t m_;
    std::size_t d_;
    std::vector<double> data_;
    double dt_;
};

inline EmbeddedSeries delay_embed(std::span<const double> values, std::size_t m, std::size_t d, double dt = 1.0) {
    require(m >= 1, "delay_embed: dimension m must be >= 1");
    require(d >= 1, "delay_embed: delay d must be >= 1");
    const std::size_t span = (m - 1) * d;
    require(values.size() >= span + 2, "delay_embed: series too short for m = " + std::to_string(m) +
                                                    ", d = " + std::to_string(d));
    const std::size_t count = values.size() - span;
    std::vector<double> flat(count * m);
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t j = 0; j < m; ++j) flat[k * m + j] = values[k + j * d];
    return EmbeddedSeries(m, d, std::move(flat), dt);
}

inline EmbeddedSeries delay_embed(const TimeSeries& series, std::size_t m, std::size_t d) {
    return delay_embed(series.values(), m, d, series.dt());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

/// Autocorrelation evaluated one lag at a time.
struct AutocorrelationProbe {
    std::span<const double> values;
    double mean = 0.0;
    double var = 0.0;

    explicit AutocorrelationProbe(std::span<const double> v) : values(v) {
        for (double x : values) mean += x;
        mean /= static_cast<double>(values.size());
        for (double x : values) var += (x - mean) * (x - mean);
    }

    double at(std::size_t lag) const {
        if (var == 0.0) return 0.0;
        double acc = 0.0;
        for (std::size_t k = 0; k + lag < values.size(); ++k) acc += (values[k] - mean) * (values[k + lag] - mean);
        return acc / var;
    }
};

/// Sample autocorrelation for lags 0..max_lag (biased estimator, r(0) = 1).
inline std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag) {
    const AutocorrelationProbe probe(values);
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag && lag < values.size(); ++lag) r[lag] = probe.at(lag);
    return r;
}

/// Delay from the first local minimum of the autocorrelation; falls back to
/// the first zero crossing, then to 1. Lags are evaluated lazily.
inline std::size_t choose_delay(std::span<const double> values, std::size_t max_lag = 1000) {
    max_lag = std::min(max_lag, values.size() / 2);
    if (max_lag < 2) return 1;
    const AutocorrelationProbe probe(values);
    std::size_t first_zero = 0;
    double prev = 1.0;
    double cur = probe.at(1);
    for (std::size_t lag = 1; lag < max_lag; ++lag) {
        const double next = probe.at(lag + 1);
        if (first_zero == 0 && cur <= 0.0) first_zero = lag;
        if (cur < prev && cur <= next) return lag;
        prev = cur;
        cur = next;
    }
    if (first_zero == 0 && cur <= 0.0) first_zero = max_lag;
    return first_zero != 0 ? first_zero : 1;
}

}  // namespace wavedyn::tsa
