#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wavedyn/errors.hpp"

namespace wavedyn {

/// Sampling instants t_k = t_start + k*dt, k = 0..n_samples-1.
struct SamplingPlan {
    double t_start = 0.0;
    double dt = 0.1;
    std::size_t n_samples = 2;

    void validate() const {
        require(dt > 0.0 && std::isfinite(dt), "sampling: dt must be positive");
        require(n_samples >= 2, "sampling: n_samples must be >= 2");
        require(std::isfinite(t_start), "sampling: t_start must be finite");
    }
    double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
};

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Metadata travels with the series into every file written from it.
using Metadata = std::map<std::string, std::string>;

/// Uniformly sampled real sequence.
class TimeSeries {
public:
    TimeSeries() = default;

    TimeSeries(std::vector<double> values, double dt, Metadata origin = {})
        : values_(std::move(values)), dt_(dt), origin_(std::move(origin)) {
        require(values_.size() >= 2, "TimeSeries needs at least two samples");
        require(dt_ > 0.0 && std::isfinite(dt_), "TimeSeries: dt must be positive");
        for (double v : values_)
            if (!std::isfinite(v)) throw ContractViolation("TimeSeries: non-finite sample");
    }

    const std::vector<double>& values() const { return values_; }
    double dt() const { return dt_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    const Metadata& origin() const { return origin_; }
    Metadata& origin() { return origin_; }

private:
    std::vector<double> values_;
    double dt_ = 1.0;
    Metadata origin_;
};

/// Affine map onto [0, 1]; the applied offset/scale are recorded in the
/// metadata as `normalize.min` and `normalize.max`. Constant series map to 0.
inline TimeSeries normalize_unit(const TimeSeries& series) {
    const auto [lo_it, hi_it] = std::minmax_element(series.values().begin(), series.values().end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double span = hi - lo;
    std::vector<double> out(series.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = span > 0.0 ? (series[k] - lo) / span : 0.0;
    Metadata meta = series.origin();
    meta["normalize.min"] = format_double(lo);
    meta["normalize.max"] = format_double(hi);
    return TimeSeries(std::move(out), series.dt(), std::move(meta));
}

}  // namespace wavedyn
