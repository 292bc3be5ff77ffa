#pragma once

// Config-driven simulation and the analysis result files.

#include <complex>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "wavedyn/analysis.hpp"
#include "wavedyn/bjj.hpp"
#include "wavedyn/errors.hpp"
#include "wavedyn/fock.hpp"
#include "wavedyn/io/atomic_file.hpp"
#include "wavedyn/io/config.hpp"
#include "wavedyn/io/csv.hpp"
#include "wavedyn/io/pbm.hpp"
#include "wavedyn/kerr.hpp"
#include "wavedyn/morse.hpp"

namespace wavedyn::io {

inline SamplingPlan sampling_plan(const RunConfig& cfg) {
    SamplingPlan plan{cfg.real("sampling.t_start"), cfg.real("sampling.dt"), cfg.count("sampling.n_samples")};
    plan.validate();
    return plan;
}

inline int checked_int(const RunConfig& cfg, const std::string& key) {
    const long long v = cfg.integer(key);
    if (v < -1000000000LL || v > 1000000000LL) throw InvalidArgument("config: " + key + " out of range");
    return static_cast<int>(v);
}

inline TimeSeries simulate_kerr(const RunConfig& cfg) {
    const kerr::KerrParams params{cfg.real("kerr.chi"), cfg.real("kerr.chi_prime_ratio") * cfg.real("kerr.chi")};
    params.validate();
    const fock::SuperpositionSpec spec{std::polar(cfg.real("kerr.alpha"), cfg.real("kerr.alpha_phase")),
                                       checked_int(cfg, "kerr.ell")};
    require(cfg.real("kerr.alpha") >= 0.0, "config: kerr.alpha must be >= 0");
    require(spec.ell >= 1, "config: kerr.ell must be >= 1");
    std::size_t cutoff = cfg.count("kerr.cutoff");
    if (cutoff == 0) cutoff = fock::recommended_cutoff(spec.alpha);
    const std::string obs_text = cfg.str("observable").empty() ? "x^2" : cfg.str("observable");
    const auto state0 = fock::superpose_coherent(spec, cutoff);
    TimeSeries series = kerr::kerr_series(state0, params, kerr::Observable::parse(obs_text), sampling_plan(cfg));
    series.origin()["kerr.cutoff.resolved"] = std::to_string(cutoff);
    return series;
}

inline TimeSeries simulate_morse(const RunConfig& cfg) {
    const morse::MorseParams params{cfg.real("morse.D"), cfg.real("morse.beta"), cfg.real("morse.mu"), cfg.real("morse.r0")};
    params.validate();
    const morse::GridSpec grid{cfg.real("morse.grid.x_min"), cfg.real("morse.grid.x_max"), cfg.real("morse.grid.step")};
    const morse::MorseEigenbasis basis = morse::cached_eigenbasis(params, grid);
    const morse::MorseState state0 = morse::superpose_morse(cfg.real("morse.alpha"), checked_int(cfg, "morse.ell"), params);
    const std::string obs_text = cfg.str("observable").empty() ? "x" : cfg.str("observable");
    TimeSeries series = morse::morse_moments_series(state0, basis, sampling_plan(cfg), morse::parse_morse_observable(obs_text));
    series.origin()["morse.n_max"] = std::to_string(params.n_max());
    if (params.revival_denominator() != 0)
        series.origin()["morse.t_per"] = format_double(morse::revival_period_base(params));
    return series;
}

inline TimeSeries simulate_bjj(const RunConfig& cfg) {
    const bjj::BJJParams params = bjj::BJJParams::from_u(checked_int(cfg, "bjj.n_atoms"), cfg.real("bjj.u"), cfg.real("bjj.J"));
    params.validate();
    const bjj::BJJOperatorSet ops = bjj::build_bjj(params);
    const bjj::SpinState state0 = bjj::make_initial(bjj::parse_initial_kind(cfg.str("bjj.state")), params.n_atoms);
    const std::string obs_text = cfg.str("observable").empty() ? "x" : cfg.str("observable");
    TimeSeries series = bjj::bloch_series(state0, ops, sampling_plan(cfg), bjj::parse_bloch_component(obs_text));
    series.origin()["bjj.josephson_regime"] = params.josephson_regime() ? "true" : "false";
    return series;
}

/// Runs the configured system; the series metadata carries the full resolved
/// config plus whatever the simulation derived.
inline TimeSeries simulate(const RunConfig& cfg) {
    const std::string& system = cfg.str("system");
    TimeSeries series;
    if (system == "kerr")
        series = simulate_kerr(cfg);
    else if (system == "morse")
        series = simulate_morse(cfg);
    else if (system == "bjj")
        series = simulate_bjj(cfg);
    else
        throw InvalidArgument("config: system must be kerr, morse or bjj, got '" + system + "'");
    Metadata meta = cfg.echo();
    for (const auto& [k, v] : series.origin()) meta[k] = v;
    series.origin() = std::move(meta);
    return series;
}

// --- analysis options from config --------------------------------------------

inline analysis::F1Options f1_options(const RunConfig& cfg) {
    analysis::F1Options opt;
    opt.cell_size = cfg.real("f1.cell_size");
    opt.reference = cfg.optional_real("f1.reference");
    return opt;
}

inline analysis::RecurrenceOptions rp_options(const RunConfig& cfg) {
    analysis::RecurrenceOptions opt;
    opt.epsilon = cfg.real("rp.epsilon");
    opt.embedding = {cfg.count("rp.m"), cfg.count("rp.d")};
    require(opt.embedding.dimension >= 1, "config: rp.m must be >= 1");
    opt.raw_scalar = cfg.flag("rp.raw");
    opt.window_start = cfg.count("rp.window_start");
    opt.window_length = cfg.count("rp.window_length");
    require(opt.window_length >= 1, "config: rp.window_length must be >= 1");
    return opt;
}

inline analysis::LyapunovOptions lyap_options(const RunConfig& cfg) {
    analysis::LyapunovOptions opt;
    opt.dimensions.clear();
    for (const std::string& item : cfg.list("lyap.m")) {
        RunConfig one;
        one.set("lyap.m", item);
        const long long m = one.integer("lyap.m");
        require(m >= 1, "config: lyap.m entries must be >= 1");
        opt.dimensions.push_back(static_cast<std::size_t>(m));
    }
    opt.delay = cfg.count("lyap.d");
    opt.theiler = cfg.count("lyap.theiler");
    opt.epsilon = cfg.real("lyap.epsilon");
    opt.t_max = cfg.count("lyap.t_max");
    opt.max_references = cfg.count("lyap.max_references");
    const bool has_first = !cfg.str("lyap.fit_first").empty();
    const bool has_last = !cfg.str("lyap.fit_last").empty();
    require(has_first == has_last, "config: lyap.fit_first and lyap.fit_last go together");
    if (has_first) opt.window = tsa::FitWindow{cfg.count("lyap.fit_first"), cfg.count("lyap.fit_last")};
    return opt;
}

// --- result files ------------------------------------------------------------

/// Series metadata plus the resolved tunables of one analysis section.
inline Metadata with_section(const Metadata& base, const RunConfig& cfg, const std::string& section) {
    Metadata meta = base;
    for (const auto& [k, v] : cfg.values())
        if (k.rfind(section, 0) == 0) meta[k] = v;
    return meta;
}

inline std::string output_prefix(const RunConfig& cfg, const std::filesystem::path& series_path) {
    if (!cfg.str("output.prefix").empty()) return cfg.str("output.prefix");
    std::filesystem::path p = series_path;
    p.replace_extension();
    return p.string();
}

/// Writes <prefix>.f1.csv; returns the one-line summary.
inline std::string write_f1(const TimeSeries& series, const RunConfig& cfg, const std::string& prefix) {
    const tsa::F1Histogram h = analysis::run_f1(series, f1_options(cfg));
    std::ostringstream summary;
    summary << "f1 returns=" << h.return_times.size() << " occupied_bins=" << h.occupied_bins()
            << " mean_tau=" << format_double(h.mean_tau) << " mu=" << (h.mu_fit ? format_double(*h.mu_fit) : "none")
            << " fit_quality=" << (h.fit_quality ? format_double(*h.fit_quality) : "none")
            << " quasi_periodic=" << (h.quasi_periodic ? "true" : "false");
    std::ostringstream os;
    os << header_block(with_section(series.origin(), cfg, "f1."));
    os << "# " << summary.str() << '\n';
    os << "tau,count\n";
    for (const auto& [tau, c] : h.counts) os << tau << ',' << c << '\n';
    write_atomic(prefix + ".f1.csv", os.str());
    return summary.str();
}

/// Writes <prefix>.rp.csv (window-local pairs) and <prefix>.rp.pbm.
inline std::string write_rp(const TimeSeries& series, const RunConfig& cfg, const std::string& prefix) {
    const tsa::RecurrenceData rd = analysis::run_recurrence(series, rp_options(cfg));
    const auto peaks = tsa::spacing_peaks(tsa::diagonal_spacings(rd));
    std::ostringstream summary;
    summary << "rp n_points=" << rd.n_points << " pairs=" << rd.pairs.size()
            << " recurrence_rate=" << format_double(rd.recurrence_rate())
            << " mean_diagonal_length=" << format_double(tsa::mean_diagonal_length(rd))
            << " dominant_spacing_peaks=" << tsa::dominant_peak_count(peaks);
    std::ostringstream os;
    os << header_block(with_section(series.origin(), cfg, "rp."));
    os << "# " << summary.str() << '\n';
    os << "i,j\n";
    for (const auto& [i, j] : rd.pairs) os << i << ',' << j << '\n';
    write_atomic(prefix + ".rp.csv", os.str());
    write_atomic(prefix + ".rp.pbm", recurrence_pbm(rd));
    return summary.str();
}

/// Writes <prefix>.lyap.m<k>.csv per dimension; returns the summary lines.
inline std::string write_lyap(const TimeSeries& series, const RunConfig& cfg, const std::string& prefix) {
    const analysis::LyapunovEstimate est = analysis::estimate_lyapunov(series, lyap_options(cfg));
    std::ostringstream summary;
    summary << "lyap lambda=" << format_double(est.lambda) << " spread=" << format_double(est.spread)
            << " delay=" << est.delay;
    for (const tsa::LyapunovCurve& c : est.curves) {
        std::ostringstream line;
        line << "lyap m=" << c.dimension << " lambda=" << format_double(*c.lambda_max) << " window=" << c.fit_window->first
             << ".." << c.fit_window->last << " theiler=" << c.theiler << " epsilon=" << format_double(c.epsilon)
             << " references=" << c.references_with_neighbors << "/" << c.references_tried;
        std::ostringstream os;
        os << header_block(with_section(series.origin(), cfg, "lyap."));
        os << "# " << line.str() << '\n';
        os << "t,S,contributing\n";
        for (std::size_t i = 0; i < c.t_values.size(); ++i)
            os << c.t_values[i] << ',' << format_double(c.s_values[i]) << ',' << c.contributing[i] << '\n';
        write_atomic(prefix + ".lyap.m" + std::to_string(c.dimension) + ".csv", os.str());
        summary << '\n' << line.str();
    }
    return summary.str();
}

}  // namespace wavedyn::io
