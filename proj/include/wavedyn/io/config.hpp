#pragma once

// Flat run configuration: `section.key = value` lines, `#` comments. Every
// key has a default; unknown or repeated keys are rejected with their line.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/io/atomic_file.hpp"
#include "wavedyn/io/csv.hpp"

namespace wavedyn::io {

struct ConfigKey {
    const char* key;
    const char* fallback;
    const char* help;
};

inline const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys{
        {"system", "kerr", "kerr | morse | bjj"},
        {"observable", "", "kerr: x^k, p^k, fidelity (x^2); morse: x, p (x); bjj: x, y, z (x)"},
        {"sampling.t_start", "0", "first sample time"},
        {"sampling.dt", "0.1", "sample spacing"},
        {"sampling.n_samples", "100000", "number of samples"},
        {"kerr.chi", "1", "Kerr strength"},
        {"kerr.chi_prime_ratio", "1e-3", "cubic strength over chi"},
        {"kerr.alpha", "5", "coherent amplitude modulus"},
        {"kerr.alpha_phase", "0", "coherent amplitude phase"},
        {"kerr.ell", "1", "number of superposed coherent states"},
        {"kerr.cutoff", "0", "Fock cutoff, 0 = automatic"},
        {"morse.D", "231.125", "dissociation energy"},
        {"morse.beta", "1", "range parameter"},
        {"morse.mu", "1", "reduced mass"},
        {"morse.r0", "1", "equilibrium position"},
        {"morse.alpha", "0.3", "Perelomov amplitude"},
        {"morse.ell", "1", "number of superposed Perelomov states"},
        {"morse.grid.x_min", "-2.5", "grid start"},
        {"morse.grid.x_max", "60", "grid end"},
        {"morse.grid.step", "0.005", "grid spacing"},
        {"bjj.n_atoms", "40", "number of bosons (even)"},
        {"bjj.u", "50", "N U / J"},
        {"bjj.J", "1", "hopping"},
        {"bjj.state", "even", "pi | even"},
        {"output.series", "series.csv", "series file"},
        {"output.prefix", "", "prefix of analysis outputs, default: series path without extension"},
        {"analysis.run", "", "comma list of f1, rp, lyap run after simulate"},
        {"f1.cell_size", "0.01", "cell width on the normalized series"},
        {"f1.reference", "", "reference value on the normalized series, default: sample 0"},
        {"rp.epsilon", "0.05", "recurrence threshold on the normalized series"},
        {"rp.m", "3", "embedding dimension"},
        {"rp.d", "0", "delay, 0 = first autocorrelation minimum"},
        {"rp.raw", "false", "use the raw scalar series"},
        {"rp.window_start", "0", "first sample of the window"},
        {"rp.window_length", "5000", "window length"},
        {"lyap.epsilon", "0.02", "neighborhood radius on the normalized series"},
        {"lyap.m", "3,4,5", "embedding dimensions"},
        {"lyap.d", "0", "delay, 0 = first autocorrelation minimum"},
        {"lyap.theiler", "0", "Theiler window, 0 = 2 d m"},
        {"lyap.t_max", "40", "largest offset of S(t)"},
        {"lyap.max_references", "20000", "reference points, 0 = all"},
        {"lyap.fit_first", "", "fit window start, default: automatic"},
        {"lyap.fit_last", "", "fit window end, default: automatic"},
    };
    return keys;
}

inline bool is_config_key(const std::string& key) {
    const auto& keys = config_keys();
    return std::any_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return key == k.key; });
}

/// Resolved configuration: every known key present.
class RunConfig {
public:
    RunConfig() {
        for (const ConfigKey& k : config_keys()) values_[k.key] = k.fallback;
    }

    void set(const std::string& key, const std::string& value) {
        if (!is_config_key(key)) throw InvalidArgument("config: unknown key '" + key + "'");
        values_[key] = value;
    }

    const std::string& str(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw InvalidArgument("config: unknown key '" + key + "'");
        return it->second;
    }

    double real(const std::string& key) const {
        double v = 0.0;
        if (!parse_double(str(key), v) || !std::isfinite(v))
            throw InvalidArgument("config: " + key + " = '" + str(key) + "' is not a number");
        return v;
    }

    long long integer(const std::string& key) const {
        const std::string& s = str(key);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw InvalidArgument("config: " + key + " = '" + s + "' is not an integer");
    }

    std::size_t count(const std::string& key) const {
        const long long v = integer(key);
        if (v < 0) throw InvalidArgument("config: " + key + " must be >= 0");
        return static_cast<std::size_t>(v);
    }

    bool flag(const std::string& key) const {
        const std::string& s = str(key);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw InvalidArgument("config: " + key + " = '" + s + "' is not a boolean");
    }

    std::optional<double> optional_real(const std::string& key) const {
        if (str(key).empty()) return std::nullopt;
        return real(key);
    }

    std::vector<std::string> list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t(trim(item));
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    /// Every resolved key, for file headers.
    Metadata echo() const { return Metadata(values_.begin(), values_.end()); }

private:
    std::map<std::string, std::string> values_;
};

inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
    RunConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected key = value");
        const std::string key(trim(view.substr(0, eq)));
        const std::string value(trim(view.substr(eq + 1)));
        if (!is_config_key(key)) throw ParseError(source, lineno, "unknown key '" + key + "'");
        if (const auto it = seen.find(key); it != seen.end())
            throw ParseError(source, lineno, "key '" + key + "' already set on line " + std::to_string(it->second));
        seen[key] = lineno;
        cfg.set(key, value);
    }
    return cfg;
}

inline RunConfig read_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

}  // namespace wavedyn::io
