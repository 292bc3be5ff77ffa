#pragma once

// Morse oscillator V(x) = D (1 - e^{-beta x})^2 with x = (r - r0)/r0 and
// kinetic term -1/(2 mu r0^2) d^2/dx^2 (hbar = 1). Bound eigenfunctions are
//   psi_n(xi) = N_n xi^{s/2} e^{-xi/2} L_n^{(s)}(xi),  xi = 2 lambda e^{-beta x},
// s = 2 lambda - 2n - 1, sampled on a uniform x grid. Dynamics run in the
// eigenbasis with exact phases.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::morse {

using cplx = std::complex<double>;

inline constexpr double kOrthonormalityTolerance = 1e-6;
inline constexpr double kHermiticityTolerance = 1e-6;

struct MorseParams {
    double D = 231.125;
    double beta = 1.0;
    double mu = 1.0;
    double r0 = 1.0;

    void validate() const {
        require(D > 0.0 && beta > 0.0 && mu > 0.0 && r0 > 0.0, "morse: D, beta, mu and r0 must be > 0");
        require(lambda() > 0.5, "morse: lambda <= 1/2, no bound state");
    }

    double lambda() const { return std::sqrt(2.0 * mu * D) * r0 / beta; }
    double n_param() const { return lambda() - 0.5; }               // N_n
    double x_e() const { return 1.0 / (2.0 * n_param() + 1.0); }
    double xe_omega_e() const { return beta * beta / (2.0 * mu * r0 * r0); }  // anharmonic constant
    double omega_e() const { return xe_omega_e() / x_e(); }
    double omega() const { return omega_e() * (1.0 - x_e()); }

    /// Highest n with s_n = 2 lambda - 2n - 1 > 0 (normalizable).
    int n_max() const {
        const double lam = lambda();
        int n = static_cast<int>(std::floor(lam - 0.5));
        while (n >= 0 && 2.0 * lam - 2.0 * n - 1.0 <= 0.0) --n;
        return n;
    }

    /// N_n = n' + u/v; returns v, or 0 when N_n is not close to a fraction with v <= 64.
    int revival_denominator() const {
        const double nn = n_param();
        for (int v = 1; v <= 64; ++v)
            if (std::abs(nn * v - std::round(nn * v)) < 1e-9 * std::max(1.0, nn * v)) return v;
        return 0;
    }
};

/// E_n - E_0 = omega n - x_e omega_e n^2 = x_e omega_e (2 N_n n - n^2).
inline double level_energy(const MorseParams& p, int n) {
    const double nd = static_cast<double>(n);
    return p.xe_omega_e() * (2.0 * p.n_param() * nd - nd * nd);
}

/// Recurrence period of the full Perelomov packet, 2 pi v / (x_e omega_e).
inline double revival_period_base(const MorseParams& p) {
    const int v = p.revival_denominator();
    if (v == 0) throw InvalidArgument("morse: N_n = lambda - 1/2 is not a small-denominator fraction, no exact revival");
    return 2.0 * std::numbers::pi * static_cast<double>(v) / p.xe_omega_e();
}

/// T_per for l = 1, T_per/(2l) for the l-term superposition.
inline double morse_revival_period(int ell, const MorseParams& p) {
    require(ell >= 1, "morse_revival_period: ell must be >= 1");
    const double t = revival_period_base(p);
    return ell == 1 ? t : t / (2.0 * ell);
}

struct GridSpec {
    double x_min = -2.5;
    double x_max = 60.0;
    double step = 0.005;

    void validate() const {
        require(x_max > x_min && step > 0.0, "morse grid: need x_max > x_min and step > 0");
        require((x_max - x_min) / step >= 16.0, "morse grid: fewer than 16 points");
    }
    std::size_t points() const { return static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1; }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * step; }
};

struct MorseEigenbasis {
    MorseParams params;
    GridSpec grid;
    Eigen::MatrixXd psi;          // grid point x level
    Eigen::VectorXd energies;     // relative to E_0
    Eigen::MatrixXd x_matrix;     // <n|x|m>
    Eigen::MatrixXd d_matrix;     // <n|d/dx|m>, antisymmetric; P = -i D
    double orthonormality_residue = 0.0;
    double hermiticity_residue = 0.0;

    int levels() const { return static_cast<int>(energies.size()); }
};

namespace detail {

/// log|N_n| with N_n^2 = beta s n! / Gamma(2 lambda - n).
inline double log_norm(const MorseParams& p, int n, double s) {
    return 0.5 * (std::log(p.beta) + std::log(s) + std::lgamma(n + 1.0) - std::lgamma(2.0 * p.lambda() - n));
}

/// Associated Laguerre L_n^{(s)}(xi) via the three-term recurrence.
inline double laguerre(int n, double s, double xi) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + s - xi;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + s - xi) * cur - (k + s) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// sum_i w_i f_i g_i (trapezoid; integrands vanish at both ends).
inline double integrate(const Eigen::VectorXd& f, const Eigen::VectorXd& g, double h) {
    const Eigen::Index n = f.size();
    double acc = f.cwiseProduct(g).sum();
    acc -= 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    return acc * h;
}

/// Fourth-order central difference, second order at the two outer points.
inline Eigen::VectorXd derivative(const Eigen::VectorXd& f, double h) {
    const Eigen::Index n = f.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n)
            d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        else if (i >= 1 && i + 1 < n)
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        else
            d[i] = 0.0;
    }
    return d;
}

}  // namespace detail

/// Bound eigenfunction n at position x.
inline double eigenfunction(const MorseParams& p, int n, double x) {
    const double lam = p.lambda();
    const double s = 2.0 * lam - 2.0 * n - 1.0;
    const double xi = 2.0 * lam * std::exp(-p.beta * x);
    const double lag = detail::laguerre(n, s, xi);
    if (lag == 0.0) return 0.0;
    const double log_mag = detail::log_norm(p, n, s) + 0.5 * s * std::log(xi) - 0.5 * xi + std::log(std::abs(lag));
    return std::copysign(std::exp(log_mag), lag);
}

inline MorseEigenbasis build_eigenbasis(const MorseParams& params, const GridSpec& grid = {}) {
    params.validate();
    grid.validate();
    const int levels = params.n_max() + 1;
    const std::size_t npts = grid.points();

    MorseEigenbasis basis;
    basis.params = params;
    basis.grid = grid;
    basis.psi.resize(static_cast<Eigen::Index>(npts), levels);
    basis.energies.resize(levels);
    for (int n = 0; n < levels; ++n) {
        basis.energies[n] = level_energy(params, n);
        for (std::size_t i = 0; i < npts; ++i) basis.psi(static_cast<Eigen::Index>(i), n) = eigenfunction(params, n, grid.x(i));
    }

    const double h = grid.step;
    Eigen::VectorXd xs(static_cast<Eigen::Index>(npts));
    for (std::size_t i = 0; i < npts; ++i) xs[static_cast<Eigen::Index>(i)] = grid.x(i);

    double residue = 0.0;
    basis.x_matrix.resize(levels, levels);
    Eigen::MatrixXd d_raw(levels, levels);
    std::vector<Eigen::VectorXd> derivs;
    for (int m = 0; m < levels; ++m) derivs.push_back(detail::derivative(basis.psi.col(m), h));
    for (int n = 0; n < levels; ++n) {
        const Eigen::VectorXd pn = basis.psi.col(n);
        for (int m = 0; m < levels; ++m) {
            const Eigen::VectorXd pm = basis.psi.col(m);
            const double overlap = detail::integrate(pn, pm, h);
            residue = std::max(residue, std::abs(overlap - (n == m ? 1.0 : 0.0)));
            basis.x_matrix(n, m) = detail::integrate(pn, xs.cwiseProduct(pm), h);
            d_raw(n, m) = detail::integrate(pn, derivs[m], h);
        }
    }
    basis.orthonormality_residue = residue;
    if (residue > kOrthonormalityTolerance)
        throw ContractViolation("morse: eigenbasis orthonormality residue " + format_double(residue) +
                                " exceeds 1e-6; refine or widen the grid");

    basis.hermiticity_residue = (d_raw + d_raw.transpose()).cwiseAbs().maxCoeff();
    if (basis.hermiticity_residue > kHermiticityTolerance)
        throw ContractViolation("morse: momentum matrix Hermiticity residue " + format_double(basis.hermiticity_residue) +
                                " exceeds 1e-6; refine the grid");
    basis.d_matrix = 0.5 * (d_raw - d_raw.transpose());
    basis.x_matrix = 0.5 * (basis.x_matrix + basis.x_matrix.transpose()).eval();
    return basis;
}

// --- eigenbasis cache -------------------------------------------------------

/// Directory from WAVEDYN_CACHE_DIR, or empty when caching is off.
inline std::filesystem::path cache_directory() {
    const char* env = std::getenv("WAVEDYN_CACHE_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path();
}

inline std::string cache_key(const MorseParams& p, const GridSpec& g) {
    std::ostringstream os;
    os << "morse-v1";
    for (double v : {p.D, p.beta, p.mu, p.r0, g.x_min, g.x_max, g.step}) os << '_' << std::hex << std::bit_cast<std::uint64_t>(v);
    return os.str();
}

/// Text dump: a version line, the parameters, then the level matrices
/// (energies, x, d) at 17 digits. Grid samples are rebuilt on load.
inline void save_eigenbasis(const MorseEigenbasis& b, const std::filesystem::path& file) {
    std::filesystem::create_directories(file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InvalidArgument("morse cache: cannot write " + tmp.string());
        out << "wavedyn-morse-cache 1\n";
        out << cache_key(b.params, b.grid) << '\n';
        const int n = b.levels();
        out << n << ' ' << format_double(b.orthonormality_residue) << ' ' << format_double(b.hermiticity_residue) << '\n';
        for (int i = 0; i < n; ++i) out << format_double(b.energies[i]) << '\n';
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out << format_double(b.x_matrix(i, j)) << ' ' << format_double(b.d_matrix(i, j)) << '\n';
    }
    std::filesystem::rename(tmp, file);
}

/// Loads a cache written for exactly these parameters; returns false on any
/// mismatch so the caller rebuilds. Grid samples of psi are recomputed.
inline bool load_eigenbasis(const std::filesystem::path& file, const MorseParams& p, const GridSpec& g, MorseEigenbasis& out) {
    std::ifstream in(file);
    if (!in) return false;
    std::string magic, key;
    int version = 0, n = 0;
    if (!(in >> magic >> version) || magic != "wavedyn-morse-cache" || version != 1) return false;
    if (!(in >> key) || key != cache_key(p, g)) return false;
    MorseEigenbasis b;
    b.params = p;
    b.grid = g;
    if (!(in >> n >> b.orthonormality_residue >> b.hermiticity_residue) || n != p.n_max() + 1) return false;
    b.energies.resize(n);
    b.x_matrix.resize(n, n);
    b.d_matrix.resize(n, n);
    for (int i = 0; i < n; ++i)
        if (!(in >> b.energies[i])) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> b.x_matrix(i, j) >> b.d_matrix(i, j))) return false;
    const std::size_t npts = g.points();
    b.psi.resize(static_cast<Eigen::Index>(npts), n);
    for (int k = 0; k < n; ++k)
        for (std::size_t i = 0; i < npts; ++i) b.psi(static_cast<Eigen::Index>(i), k) = eigenfunction(p, k, g.x(i));
    out = std::move(b);
    return true;
}

/// build_eigenbasis through the cache directory when one is configured.
inline MorseEigenbasis cached_eigenbasis(const MorseParams& p, const GridSpec& g = {}) {
    const std::filesystem::path dir = cache_directory();
    if (dir.empty()) return build_eigenbasis(p, g);
    const std::filesystem::path file = dir / (cache_key(p, g) + ".txt");
    MorseEigenbasis b;
    if (load_eigenbasis(file, p, g, b)) return b;
    b = build_eigenbasis(p, g);
    save_eigenbasis(b, file);
    return b;
}

// --- states -----------------------------------------------------------------

/// Coefficients d_n over the bound levels, normalized.
class MorseState {
public:
    MorseState() = default;
    explicit MorseState(Eigen::VectorXcd coeffs, double norm_constant = 1.0)
        : coeffs_(std::move(coeffs)), norm_constant_(norm_constant) {
        for (Eigen::Index n = 0; n < coeffs_.size(); ++n)
            if (!std::isfinite(coeffs_[n].real()) || !std::isfinite(coeffs_[n].imag()))
                throw ContractViolation("MorseState: non-finite coefficient");
    }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    double norm_constant() const { return norm_constant_; }
    Eigen::Index levels() const { return coeffs_.size(); }

private:
    Eigen::VectorXcd coeffs_;
    double norm_constant_ = 1.0;
};

inline cplx inner(const MorseState& a, const MorseState& b) { return a.coeffs().dot(b.coeffs()); }

/// Unnormalized Perelomov coefficients on the highest bound state n' = n_max:
///   d_n = (-alpha)^{n'-n}/(n'-n)! sqrt(n'! Gamma(2 lambda - n)/(n! Gamma(2 lambda - n'))).
inline Eigen::VectorXcd perelomov_coefficients(cplx alpha, const MorseParams& p) {
    p.validate();
    const int top = p.n_max();
    const double lam = p.lambda();
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(top + 1);
    d[top] = 1.0;
    if (alpha == cplx{0.0, 0.0}) return d;
    const cplx minus_alpha = -alpha;
    const double log_r = std::log(std::abs(alpha));
    const double phase = std::arg(minus_alpha);
    for (int n = 0; n < top; ++n) {
        const int k = top - n;
        const double log_mag = k * log_r - std::lgamma(k + 1.0) +
                               0.5 * (std::lgamma(top + 1.0) + std::lgamma(2.0 * lam - n) - std::lgamma(n + 1.0) -
                                      std::lgamma(2.0 * lam - top));
        if (!std::isfinite(log_mag) || log_mag > 700.0)
            throw InvalidArgument("perelomov_state: |alpha| too large, coefficients overflow");
        d[n] = std::polar(std::exp(log_mag), k * phase);
    }
    return d;
}

inline MorseState normalized_state(Eigen::VectorXcd d) {
    const double nrm = d.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ContractViolation("morse: coefficient vector cannot be normalized");
    d /= nrm;
    return MorseState(std::move(d), 1.0 / nrm);
}

inline MorseState perelomov_state(cplx alpha, const MorseParams& p) { return normalized_state(perelomov_coefficients(alpha, p)); }

/// Sum over j of the Perelomov state with alpha e^{2 pi i j/l}: only levels
/// with n' - n divisible by l survive.
inline MorseState superpose_morse(cplx alpha, int ell, const MorseParams& p) {
    require(ell >= 1, "superpose_morse: ell must be >= 1");
    const int top = p.n_max();
    if (ell == 2 && top % 2 != 0)
        throw InvalidArgument("superpose_morse: even state needs an even highest bound level, got n' = " + std::to_string(top));
    Eigen::VectorXcd d = perelomov_coefficients(alpha, p);
    if (ell == 1) return normalized_state(std::move(d));
    for (int n = 0; n <= top; ++n)
        d[n] = (top - n) % ell == 0 ? d[n] * static_cast<double>(ell) : cplx{0.0, 0.0};
    return normalized_state(std::move(d));
}

inline void check_normalized(const MorseState& s, const char* who) {
    const double n2 = s.coeffs().squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ContractViolation(std::string(who) + ": state is not normalized (|d|^2 = " + format_double(n2) + ")");
}

inline MorseState evolve_morse(const MorseState& s, const MorseEigenbasis& b, double t) {
    check_normalized(s, "evolve_morse");
    require(s.levels() == b.levels(), "evolve_morse: state and basis dimensions differ");
    Eigen::VectorXcd out = s.coeffs();
    for (Eigen::Index n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, -b.energies[n] * t);
    return MorseState(std::move(out), s.norm_constant());
}

/// A(t) = sum_n |d_n|^2 e^{-i E_n t}.
inline cplx morse_autocorrelation(const MorseState& s0, const MorseEigenbasis& b, double t) {
    check_normalized(s0, "morse_autocorrelation");
    cplx acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < s0.levels(); ++n) acc += std::norm(s0.coeffs()[n]) * std::polar(1.0, -b.energies[n] * t);
    return acc;
}

inline double fidelity(const MorseState& s0, const MorseEigenbasis& b, double t) { return std::norm(morse_autocorrelation(s0, b, t)); }

enum class MorseObservable { x, p };

inline MorseObservable parse_morse_observable(const std::string& text) {
    if (text == "x") return MorseObservable::x;
    if (text == "p") return MorseObservable::p;
    throw InvalidArgument("morse observable: expected x or p, got '" + text + "'");
}

inline double expect(const MorseState& s, const MorseEigenbasis& b, MorseObservable obs) {
    const Eigen::VectorXcd& c = s.coeffs();
    if (obs == MorseObservable::x) return c.dot(b.x_matrix.cast<cplx>() * c).real();
    // <p> = <c| -i D |c>
    return (cplx{0.0, -1.0} * c.dot(b.d_matrix.cast<cplx>() * c)).real();
}

inline double mean_energy(const MorseState& s, const MorseEigenbasis& b) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < s.levels(); ++n) acc += std::norm(s.coeffs()[n]) * b.energies[n];
    return acc;
}

inline TimeSeries morse_moments_series(const MorseState& s0, const MorseEigenbasis& b, const SamplingPlan& plan,
                                       MorseObservable obs) {
    plan.validate();
    check_normalized(s0, "morse_moments_series");
    std::vector<double> values(plan.n_samples);
    for (std::size_t k = 0; k < plan.n_samples; ++k) values[k] = expect(evolve_morse(s0, b, plan.time(k)), b, obs);
    Metadata meta{{"system", "morse"},
                  {"observable", obs == MorseObservable::x ? "x" : "p"},
                  {"morse.D", format_double(b.params.D)},
                  {"morse.beta", format_double(b.params.beta)},
                  {"morse.mu", format_double(b.params.mu)},
                  {"morse.r0", format_double(b.params.r0)}};
    return TimeSeries(std::move(values), plan.dt, std::move(meta));
}

}  // namespace wavedyn::morse
