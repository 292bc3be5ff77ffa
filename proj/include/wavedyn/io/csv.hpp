#pragma once

// Series files: `#`-prefixed key=value header lines (the resolved run config
// plus dt), then one sample per line at 17 significant digits.

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/io/atomic_file.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::io {

/// Malformed input file; `line` is 1-based.
class ParseError : public InvalidArgument {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : InvalidArgument(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Full-string numeric parse; nullopt-style via bool.
inline bool parse_double(std::string_view text, double& out) {
    const std::string s(trim(text));
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno != ERANGE;
}

inline std::string format_series(const TimeSeries& series) {
    std::ostringstream os;
    os << "# format=wavedyn-series-1\n";
    os << "# dt=" << format_double(series.dt()) << '\n';
    os << "# n_samples=" << series.size() << '\n';
    for (const auto& [k, v] : series.origin()) {
        if (k == "dt" || k == "n_samples" || k == "format") continue;
        os << "# " << k << '=' << v << '\n';
    }
    for (double v : series.values()) os << format_double(v) << '\n';
    return os.str();
}

inline void write_series(const std::filesystem::path& path, const TimeSeries& series) { write_atomic(path, format_series(series)); }

inline TimeSeries parse_series(const std::string& text, const std::string& source = "<series>") {
    Metadata meta;
    std::vector<double> values;
    std::optional<double> dt;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            const std::string_view body = trim(view.substr(1));
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) throw ParseError(source, lineno, "header line without key=value");
            const std::string key(trim(body.substr(0, eq)));
            const std::string value(trim(body.substr(eq + 1)));
            if (key == "dt") {
                double v = 0.0;
                if (!parse_double(value, v) || !(v > 0.0)) throw ParseError(source, lineno, "dt must be a positive number");
                dt = v;
            } else if (key != "n_samples" && key != "format") {
                meta[key] = value;
            }
            continue;
        }
        double v = 0.0;
        if (!parse_double(view, v)) throw ParseError(source, lineno, "not a number: '" + std::string(view) + "'");
        if (!std::isfinite(v)) throw ParseError(source, lineno, "non-finite sample");
        values.push_back(v);
    }
    if (!dt) throw ParseError(source, lineno, "missing '# dt=' header");
    if (values.size() < 2) throw ParseError(source, lineno, "need at least two samples");
    return TimeSeries(std::move(values), *dt, std::move(meta));
}

inline TimeSeries read_series(const std::filesystem::path& path) { return parse_series(read_file(path), path.string()); }

/// Header block for derived result tables.
inline std::string header_block(const Metadata& meta) {
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
    return out;
}

}  // namespace wavedyn::io
