#pragma once

// Truncated Fock-space wavepackets: coherent states, l-fold coherent
// superpositions and quadrature moments computed with ladder operators.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavedyn/errors.hpp"

namespace wavedyn::fock {

using cplx = std::complex<double>;

inline constexpr double kTailTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-10;

/// Complex amplitudes C_n over number states n = 0..cutoff.
class FockVector {
public:
    FockVector() : amps_(1, cplx{0.0, 0.0}) {}

    explicit FockVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        require(!amps_.empty(), "FockVector needs at least one amplitude");
        for (const cplx& c : amps_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw ContractViolation("FockVector amplitude is not finite");
        }
    }

    std::size_t cutoff() const { return amps_.size() - 1; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    const cplx& operator[](std::size_t n) const { return amps_[n]; }

    /// Copy zero-extended to `new_cutoff` (never shrinks).
    FockVector padded(std::size_t new_cutoff) const {
        std::vector<cplx> out(amps_);
        if (new_cutoff + 1 > out.size()) out.resize(new_cutoff + 1, cplx{0.0, 0.0});
        return FockVector(std::move(out));
    }

private:
    std::vector<cplx> amps_;
};

/// Parameters of |Psi_l> = N_l sum_j |alpha e^{2 pi i j / l}>.
struct SuperpositionSpec {
    cplx alpha{0.0, 0.0};
    int ell = 1;
};

enum class Quadrature { x, p };

// --- inner products -------------------------------------------------------

inline cplx inner(const FockVector& a, const FockVector& b) {
    const std::size_t n = std::min(a.dimension(), b.dimension());
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

inline double norm(const FockVector& a) {
    double acc = 0.0;
    for (const cplx& c : a.amplitudes()) acc += std::norm(c);
    return std::sqrt(acc);
}

// --- Poisson tail bookkeeping ---------------------------------------------

namespace detail {

inline double log_poisson(double mean, std::size_t n) {
    if (mean == 0.0) return n == 0 ? 0.0 : -INFINITY;
    const double nd = static_cast<double>(n);
    return -mean + nd * std::log(mean) - std::lgamma(nd + 1.0);
}

/// sum over n > cutoff with n % ell == 0 of e^{-mean} mean^n / n!
inline double lattice_poisson_tail(double mean, std::size_t cutoff, std::size_t ell) {
    if (mean == 0.0) return 0.0;
    std::size_t n = (cutoff / ell + 1) * ell;
    double sum = 0.0;
    for (;; n += ell) {
        const double term = std::exp(log_poisson(mean, n));
        sum += term;
        if (static_cast<double>(n) > mean && term < 1e-40) break;
    }
    return sum;
}

inline double lattice_poisson_head(double mean, std::size_t cutoff, std::size_t ell) {
    double sum = 0.0;
    for (std::size_t n = 0; n <= cutoff; n += ell) sum += std::exp(log_poisson(mean, n));
    return sum;
}

}  // namespace detail

/// Weight e^{-mean} sum_{n > cutoff} mean^n / n! dropped by truncation.
inline double poisson_tail(double mean, std::size_t cutoff) {
    return detail::lattice_poisson_tail(mean, cutoff, 1);
}

/// Smallest cutoff whose Poisson tail is below `tolerance`.
inline std::size_t minimal_cutoff(double mean, double tolerance = kTailTolerance) {
    std::size_t n = static_cast<std::size_t>(mean);
    // the tail is monotone in the cutoff; walk up from the mean
    while (poisson_tail(mean, n) >= tolerance) ++n;
    while (n > 0 && poisson_tail(mean, n - 1) < tolerance) --n;
    return n;
}

/// Cutoff rule used throughout: the minimal Poisson cutoff with a x1.5 margin,
/// so superpositions living on the lattice l*n keep headroom.
inline std::size_t recommended_cutoff(cplx alpha) {
    const std::size_t n0 = minimal_cutoff(std::norm(alpha));
    return static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(std::max<std::size_t>(n0, 2))));
}

// --- state construction ---------------------------------------------------

/// Coherent state amplitudes e^{-|a|^2/2} a^n / sqrt(n!), evaluated through
/// log-magnitudes so large n does not overflow the factorial.
inline FockVector coherent(cplx alpha, std::size_t cutoff) {
    const double mean = std::norm(alpha);
    const double tail = poisson_tail(mean, cutoff);
    if (tail >= kTailTolerance)
        throw TruncationError("coherent: cutoff " + std::to_string(cutoff) +
                              " leaves tail weight " + std::to_string(tail) + " (|alpha|^2 = " +
                              std::to_string(mean) + ")");
    std::vector<cplx> amps(cutoff + 1, cplx{0.0, 0.0});
    if (mean == 0.0) {
        amps[0] = 1.0;
        return FockVector(std::move(amps));
    }
    const double log_r = std::log(std::abs(alpha));
    const double phase = std::arg(alpha);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double nd = static_cast<double>(n);
        const double log_mag = -0.5 * mean + nd * log_r - 0.5 * std::lgamma(nd + 1.0);
        amps[n] = std::polar(std::exp(log_mag), nd * phase);
    }
    return FockVector(std::move(amps));
}

/// N_l for the superposition; obtained by normalizing the assembled vector.
inline double superposition_norm_constant(const SuperpositionSpec& spec, std::size_t cutoff) {
    require(spec.ell >= 1, "superposition: ell must be >= 1");
    const auto ell = static_cast<std::size_t>(spec.ell);
    const double mean = std::norm(spec.alpha);
    const double head = detail::lattice_poisson_head(mean, cutoff, ell);
    return 1.0 / (static_cast<double>(ell) * std::sqrt(head));
}

/// Equal-weight superposition of |alpha e^{2 pi i j / l}>, j = 0..l-1. Only
/// n divisible by l survive, each with weight l*C_n; entries off the lattice
/// are exact zeros.
inline FockVector superpose_coherent(const SuperpositionSpec& spec, std::size_t cutoff) {
    require(spec.ell >= 1, "superposition: ell must be >= 1");
    if (spec.ell == 1) return coherent(spec.alpha, cutoff);

    const auto ell = static_cast<std::size_t>(spec.ell);
    const double mean = std::norm(spec.alpha);
    const double head = detail::lattice_poisson_head(mean, cutoff, ell);
    const double tail = detail::lattice_poisson_tail(mean, cutoff, ell);
    if (tail / (head + tail) >= kTailTolerance)
        throw TruncationError("superpose_coherent: cutoff " + std::to_string(cutoff) +
                              " too small for |alpha|^2 = " + std::to_string(mean));

    const FockVector base = coherent(spec.alpha, cutoff);
    std::vector<cplx> amps(cutoff + 1, cplx{0.0, 0.0});
    double weight = 0.0;
    for (std::size_t n = 0; n <= cutoff; n += ell) {
        amps[n] = static_cast<double>(ell) * base[n];
        weight += std::norm(amps[n]);
    }
    const double scale = 1.0 / std::sqrt(weight);
    for (std::size_t n = 0; n <= cutoff; n += ell) amps[n] *= scale;
    return FockVector(std::move(amps));
}

// --- quadratures ----------------------------------------------------------

namespace detail {

/// out = (a + a^dag)/sqrt2 in, or (a - a^dag)/(i sqrt2) in. `in` and `out`
/// share the same (already padded) dimension.
inline void apply_quadrature(Quadrature axis, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t dim = in.size();
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (std::size_t n = 0; n < dim; ++n) {
        const cplx lower = n + 1 < dim ? std::sqrt(static_cast<double>(n + 1)) * in[n + 1] : cplx{};
        const cplx raise = n > 0 ? std::sqrt(static_cast<double>(n)) * in[n - 1] : cplx{};
        if (axis == Quadrature::x)
            out[n] = (lower + raise) * inv_sqrt2;
        else
            out[n] = cplx{0.0, -1.0} * (lower - raise) * inv_sqrt2;
    }
}

inline void check_normalized(const FockVector& state, const char* who) {
    const double n2 = norm(state) * norm(state);
    if (std::abs(n2 - 1.0) > kNormTolerance)
        throw ContractViolation(std::string(who) + ": state is not normalized (|psi|^2 = " +
                                std::to_string(n2) + ")");
}

}  // namespace detail

/// <x^k> or <p^k> of a normalized state via repeated ladder-operator action.
inline double quadrature_moment(const FockVector& state, Quadrature axis, int order) {
    require(order >= 1, "quadrature_moment: order must be >= 1");
    detail::check_normalized(state, "quadrature_moment");

    const std::size_t cutoff = state.cutoff();
    const auto k = static_cast<std::size_t>(order);
    // weight that k ladder steps could carry past the cutoff
    double top = 0.0;
    for (std::size_t n = cutoff >= k ? cutoff - k + 1 : 0; n <= cutoff; ++n) top += std::norm(state[n]);
    const double growth = std::pow(2.0 * static_cast<double>(cutoff + k + 1), static_cast<double>(k));
    if (top * growth > kNormTolerance)
        throw TruncationError("quadrature_moment: order " + std::to_string(order) +
                              " pushes weight past cutoff " + std::to_string(cutoff));

    const FockVector padded = state.padded(cutoff + k);
    std::vector<cplx> cur(padded.amplitudes().begin(), padded.amplitudes().end());
    std::vector<cplx> next(cur.size());
    for (std::size_t step = 0; step < k; ++step) {
        detail::apply_quadrature(axis, cur, next);
        cur.swap(next);
    }
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < cur.size(); ++n) acc += std::conj(padded[n]) * cur[n];
    if (std::abs(acc.imag()) > kNormTolerance * std::max(1.0, std::abs(acc.real())))
        throw ContractViolation("quadrature_moment: expectation has imaginary residue " +
                                std::to_string(acc.imag()));
    return acc.real();
}

}  // namespace wavedyn::fock
