// wavedyn: simulate wavepacket dynamics and analyze the resulting series.
//
//   wavedyn simulate <config> [--set key=value]...
//   wavedyn analyze f1|rp|lyap <series.csv> [--key=value]...
//   wavedyn repro fig3|fig7|fig11 [--out-dir dir] [--samples n]
//
// Exit codes: 0 success, 1 usage/config/input error, 2 numerical contract violation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/io/config.hpp"
#include "wavedyn/io/csv.hpp"
#include "wavedyn/io/run.hpp"

namespace {

using wavedyn::io::RunConfig;

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets) {
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw wavedyn::InvalidArgument("--set expects key=value, got '" + kv + "'");
        cfg.set(std::string(wavedyn::io::trim(kv.substr(0, eq))), std::string(wavedyn::io::trim(kv.substr(eq + 1))));
    }
}

void run_analyses(const wavedyn::TimeSeries& series, const RunConfig& cfg, const std::string& prefix,
                  const std::vector<std::string>& which) {
    for (const std::string& a : which) {
        if (a == "f1")
            std::cout << wavedyn::io::write_f1(series, cfg, prefix) << '\n';
        else if (a == "rp")
            std::cout << wavedyn::io::write_rp(series, cfg, prefix) << '\n';
        else if (a == "lyap")
            std::cout << wavedyn::io::write_lyap(series, cfg, prefix) << '\n';
        else
            throw wavedyn::InvalidArgument("unknown analysis '" + a + "' (expected f1, rp or lyap)");
    }
}

void simulate_and_analyze(const RunConfig& cfg) {
    const wavedyn::TimeSeries series = wavedyn::io::simulate(cfg);
    const std::filesystem::path out = cfg.str("output.series");
    wavedyn::io::write_series(out, series);
    std::cout << "wrote " << out.string() << " (" << series.size() << " samples)\n";
    run_analyses(series, cfg, wavedyn::io::output_prefix(cfg, out), cfg.list("analysis.run"));
}

/// `--cell_size=0.01` under `analyze f1` sets `f1.cell_size`.
RunConfig analysis_config(const std::string& kind, const std::vector<std::string>& flags) {
    RunConfig cfg;
    for (std::string flag : flags) {
        if (flag.rfind("--", 0) != 0) throw wavedyn::InvalidArgument("unexpected argument '" + flag + "'");
        flag = flag.substr(2);
        const auto eq = flag.find('=');
        if (eq == std::string::npos) throw wavedyn::InvalidArgument("flags take the form --key=value, got '--" + flag + "'");
        std::string key = flag.substr(0, eq);
        for (char& c : key)
            if (c == '-') c = '_';
        const std::string value = flag.substr(eq + 1);
        if (key == "prefix")
            cfg.set("output.prefix", value);
        else if (wavedyn::io::is_config_key(kind + "." + key))
            cfg.set(kind + "." + key, value);
        else
            throw wavedyn::InvalidArgument("unknown flag --" + key + " for analyze " + kind);
    }
    return cfg;
}

RunConfig repro_base(const std::string& out_dir, std::size_t samples) {
    RunConfig cfg;
    cfg.set("sampling.n_samples", std::to_string(samples));
    cfg.set("sampling.dt", "0.1");
    std::filesystem::create_directories(out_dir);
    return cfg;
}

void repro(const std::string& figure, const std::string& out_dir, std::size_t samples) {
    const auto path = [&](const std::string& name) { return (std::filesystem::path(out_dir) / name).string(); };
    if (figure == "fig3") {
        for (const char* ell : {"1", "2"}) {
            RunConfig cfg = repro_base(out_dir, samples);
            cfg.set("system", "kerr");
            cfg.set("kerr.alpha", "5");
            cfg.set("kerr.chi_prime_ratio", "1e-3");
            cfg.set("kerr.ell", ell);
            cfg.set("observable", "x^2");
            cfg.set("analysis.run", "f1");
            cfg.set("output.series", path(std::string("fig3_ell") + ell + ".csv"));
            simulate_and_analyze(cfg);
        }
    } else if (figure == "fig7") {
        for (const char* state : {"pi", "even"}) {
            RunConfig cfg = repro_base(out_dir, samples);
            cfg.set("system", "bjj");
            cfg.set("bjj.u", "50");
            cfg.set("bjj.state", state);
            cfg.set("analysis.run", "rp");
            cfg.set("output.series", path(std::string("fig7_") + state + ".csv"));
            simulate_and_analyze(cfg);
        }
    } else if (figure == "fig11") {
        RunConfig cfg = repro_base(out_dir, samples);
        cfg.set("system", "bjj");
        cfg.set("bjj.u", "50");
        cfg.set("bjj.state", "even");
        cfg.set("analysis.run", "lyap");
        cfg.set("output.series", path("fig11_even.csv"));
        simulate_and_analyze(cfg);
    } else {
        throw wavedyn::InvalidArgument("repro target must be fig3, fig7 or fig11, got '" + figure + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavepacket dynamics under nonlinear Hamiltonians and time-series analysis"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run a configured simulation and write the series");
    std::string config_path;
    std::vector<std::string> sets;
    sim->add_option("config", config_path, "Config file (key = value lines)")->required();
    sim->add_option("--set", sets, "Override a config key: --set key=value");

    auto* ana = app.add_subcommand("analyze", "Analyze a series file: f1, rp or lyap");
    std::string kind, series_path;
    ana->add_option("kind", kind, "f1 | rp | lyap")->required()->check(CLI::IsMember({"f1", "rp", "lyap"}));
    ana->add_option("series", series_path, "Series CSV")->required();
    ana->allow_extras();

    auto* rep = app.add_subcommand("repro", "Chain simulate and analyze with the reference parameters");
    std::string figure, out_dir = "repro";
    std::size_t samples = 100000;
    rep->add_option("figure", figure, "fig3 | fig7 | fig11")->required()->check(CLI::IsMember({"fig3", "fig7", "fig11"}));
    rep->add_option("--out-dir", out_dir, "Output directory");
    rep->add_option("--samples", samples, "Samples per series")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            RunConfig cfg = wavedyn::io::read_config(config_path);
            apply_overrides(cfg, sets);
            simulate_and_analyze(cfg);
        } else if (*ana) {
            const RunConfig cfg = analysis_config(kind, ana->remaining());
            const wavedyn::TimeSeries series = wavedyn::io::read_series(series_path);
            const std::string prefix = wavedyn::io::output_prefix(cfg, series_path);
            run_analyses(series, cfg, prefix, {kind});
        } else if (*rep) {
            repro(figure, out_dir, samples);
        }
    } catch (const wavedyn::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
