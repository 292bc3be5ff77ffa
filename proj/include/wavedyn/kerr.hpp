#pragma once

// Kerr medium H = chi N(N-1) + chi' N(N-1)(N-2) (hbar = 1). The Hamiltonian is
// diagonal in the number basis, so evolution is an exact per-level phase.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/fock.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::kerr {

using fock::cplx;
using fock::FockVector;

struct KerrParams {
    double chi = 1.0;
    double chi_prime = 0.0;

    void validate() const {
        require(chi > 0.0 && std::isfinite(chi), "kerr: chi must be > 0");
        require(chi_prime >= 0.0 && std::isfinite(chi_prime), "kerr: chi_prime must be >= 0");
    }
    double ratio() const { return chi_prime / chi; }
};

/// Eigenvalue of level n.
inline double level_energy(std::size_t n, const KerrParams& params) {
    const double nd = static_cast<double>(n);
    return params.chi * nd * (nd - 1.0) + params.chi_prime * nd * (nd - 1.0) * (nd - 2.0);
}

inline FockVector evolve_kerr(const FockVector& state, const KerrParams& params, double t) {
    params.validate();
    std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, -level_energy(n, params) * t);
    return FockVector(std::move(out));
}

/// State-fidelity revival period for the l-fold superposition with chi' = 0:
/// 2 pi/(chi l) for even l, pi/(chi l) for odd l. Meaningless for chi' > 0.
inline double revival_period(int ell, double chi) {
    require(ell >= 1, "revival_period: ell must be >= 1");
    require(chi > 0.0, "revival_period: chi must be > 0");
    const double l = static_cast<double>(ell);
    return (ell % 2 == 0 ? 2.0 * std::numbers::pi : std::numbers::pi) / (chi * l);
}

/// <x^2>(t) for an initial coherent state from the closed-form series
///   1/2 + |a|^2 + Re( e^{-|a|^2} sum_n |a|^{2n} a^2/n! e^{-i(2(2n+1)chi + 6 n^2 chi') t} ).
/// The oscillating part enters with weight 1/2 on (sum + c.c.), the value that
/// reproduces <x^2> = 1/2 + 2 a^2 at t = 0.
inline double xsq_closed_form(cplx alpha, const KerrParams& params, double t, std::size_t cutoff) {
    params.validate();
    const double mean = std::norm(alpha);
    if (fock::poisson_tail(mean, cutoff) >= fock::kTailTolerance)
        throw TruncationError("xsq_closed_form: cutoff " + std::to_string(cutoff) + " too small");
    if (mean == 0.0) return 0.5;
    const cplx alpha_sq = alpha * alpha;
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double nd = static_cast<double>(n);
        const double weight = std::exp(-mean + nd * std::log(mean) - std::lgamma(nd + 1.0));
        const double freq = 2.0 * (2.0 * nd + 1.0) * params.chi + 6.0 * nd * nd * params.chi_prime;
        sum += weight * std::polar(1.0, -freq * t);
    }
    return 0.5 + mean + (alpha_sq * sum).real();
}

/// What kerr_series records at each sample.
struct Observable {
    enum class Kind { x, p, fidelity };
    Kind kind = Kind::x;
    int order = 1;

    /// "x", "x^2", "p^3", "fidelity"
    static Observable parse(const std::string& text) {
        if (text == "fidelity") return {Kind::fidelity, 1};
        require(!text.empty() && (text[0] == 'x' || text[0] == 'p'),
                        "observable: expected x^k, p^k or fidelity, got '" + text + "'");
        Observable obs{text[0] == 'x' ? Kind::x : Kind::p, 1};
        if (text.size() > 1) {
            require(text.size() > 2 && text[1] == '^', "observable: malformed '" + text + "'");
            try {
                obs.order = std::stoi(text.substr(2));
            } catch (const std::exception&) {
                throw InvalidArgument("observable: malformed order in '" + text + "'");
            }
            require(obs.order >= 1, "observable: order must be >= 1");
        }
        return obs;
    }

    std::string str() const {
        if (kind == Kind::fidelity) return "fidelity";
        std::string s = kind == Kind::x ? "x" : "p";
        return order == 1 ? s : s + "^" + std::to_string(order);
    }
};

inline double observe(const FockVector& state, const FockVector& initial, const Observable& obs) {
    switch (obs.kind) {
    case Observable::Kind::fidelity:
        return std::norm(fock::inner(state, initial));
    case Observable::Kind::x:
        return fock::quadrature_moment(state, fock::Quadrature::x, obs.order);
    case Observable::Kind::p:
        return fock::quadrature_moment(state, fock::Quadrature::p, obs.order);
    }
    return 0.0;
}

inline TimeSeries kerr_series(const FockVector& state0, const KerrParams& params, const Observable& obs,
                              const SamplingPlan& plan) {
    params.validate();
    plan.validate();
    std::vector<double> values(plan.n_samples);
    for (std::size_t k = 0; k < plan.n_samples; ++k) {
        const FockVector evolved = evolve_kerr(state0, params, plan.time(k));
        values[k] = observe(evolved, state0, obs);
    }
    Metadata meta{{"system", "kerr"},
                  {"observable", obs.str()},
                  {"kerr.chi", format_double(params.chi)},
                  {"kerr.chi_prime", format_double(params.chi_prime)}};
    return TimeSeries(std::move(values), plan.dt, std::move(meta));
}

}  // namespace wavedyn::kerr
