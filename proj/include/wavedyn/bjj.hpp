#pragma once

// Two-site Bose-Hubbard dimer (bosonic Josephson junction) in the angular
// momentum basis |l; m>, l = N/2, m = -l..l:  H = -J Lx + U Lz^2  (hbar = 1).

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavedyn/errors.hpp"
#include "wavedyn/time_series.hpp"

namespace wavedyn::bjj {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct BJJParams {
    int n_atoms = 40;
    double hopping = 1.0;      // J
    double interaction = 0.0;  // U

    /// Builds the parameter set from the dimensionless u = N U / J.
    static BJJParams from_u(int n_atoms, double u, double hopping = 1.0) {
        require(n_atoms >= 2, "bjj: N_atoms must be >= 2");
        return {n_atoms, hopping, u * hopping / static_cast<double>(n_atoms)};
    }

    void validate() const {
        require(n_atoms >= 2, "bjj: N_atoms must be >= 2");
        require(hopping > 0.0 && std::isfinite(hopping), "bjj: J must be > 0");
        require(interaction >= 0.0 && std::isfinite(interaction), "bjj: U must be >= 0");
    }

    double u() const { return static_cast<double>(n_atoms) * interaction / hopping; }
    double l() const { return 0.5 * static_cast<double>(n_atoms); }
    int dimension() const { return n_atoms + 1; }

    /// 1 < u < N^2.
    bool josephson_regime() const {
        const double n = static_cast<double>(n_atoms);
        return u() > 1.0 && u() < n * n;
    }
};

/// Amplitudes over m = -l..l (index m + l).
class SpinState {
public:
    SpinState() = default;
    explicit SpinState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
        require(amps_.size() >= 3, "SpinState: dimension must be >= 3");
        for (Eigen::Index i = 0; i < amps_.size(); ++i)
            if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
                throw ContractViolation("SpinState: non-finite amplitude");
    }

    const ComplexVector& amplitudes() const { return amps_; }
    Eigen::Index dimension() const { return amps_.size(); }
    double l() const { return 0.5 * static_cast<double>(amps_.size() - 1); }
    double norm() const { return amps_.norm(); }
    cplx operator[](Eigen::Index i) const { return amps_[i]; }

private:
    ComplexVector amps_;
};

inline cplx inner(const SpinState& a, const SpinState& b) { return a.amplitudes().dot(b.amplitudes()); }

/// Lx, Ly, Lz and H in the |l; m> basis, plus the cached spectral
/// decomposition of H used for evolution.
struct BJJOperatorSet {
    BJJParams params;
    RealMatrix lx;
    ComplexMatrix ly;
    RealMatrix lz;
    RealMatrix hamiltonian;
    Eigen::VectorXd energies;
    RealMatrix eigenvectors;  // columns

    int dimension() const { return params.dimension(); }
};

/// <m+1| L+ |m> = sqrt(l(l+1) - m(m+1)).
inline double raising_element(double l, double m) { return std::sqrt(std::max(0.0, l * (l + 1.0) - m * (m + 1.0))); }

inline BJJOperatorSet build_bjj(const BJJParams& params) {
    params.validate();
    const int dim = params.dimension();
    const double l = params.l();

    BJJOperatorSet ops;
    ops.params = params;
    ops.lx = RealMatrix::Zero(dim, dim);
    ops.ly = ComplexMatrix::Zero(dim, dim);
    ops.lz = RealMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = static_cast<double>(i) - l;
        ops.lz(i, i) = m;
        if (i + 1 < dim) {
            const double up = raising_element(l, m);  // <i+1| L+ |i>
            ops.lx(i + 1, i) = 0.5 * up;
            ops.lx(i, i + 1) = 0.5 * up;
            // Ly = (L+ - L-)/(2i)
            ops.ly(i + 1, i) = cplx{0.0, -0.5 * up};
            ops.ly(i, i + 1) = cplx{0.0, 0.5 * up};
        }
    }
    ops.hamiltonian = -params.hopping * ops.lx + params.interaction * ops.lz * ops.lz;

    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(ops.hamiltonian);
    if (solver.info() != Eigen::Success) throw NumericalError("build_bjj: eigendecomposition failed");
    ops.energies = solver.eigenvalues();
    ops.eigenvectors = solver.eigenvectors();
    return ops;
}

/// SU(2) coherent state |theta, phi> obtained by rotating |m = -l>:
///   amplitude(m) = C(2l, l+m)^{1/2} cos^{l-m}(theta/2) sin^{l+m}(theta/2) e^{-i(l+m) phi},
/// i.e. proportional to [tan(theta/2) e^{-i phi}]^{l+m} C(2l, l+m)^{1/2}. This
/// form stays finite at the poles, so theta = 0 and theta = pi are the limits.
/// The result is renormalized numerically.
inline SpinState su2_coherent(double theta, double phi, int n_atoms) {
    require(n_atoms >= 2, "su2_coherent: N_atoms must be >= 2");
    require(theta >= 0.0 && theta <= std::numbers::pi, "su2_coherent: theta outside [0, pi]");
    const int dim = n_atoms + 1;
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    ComplexVector amps(dim);
    for (int k = 0; k < dim; ++k) {  // k = l + m
        const double log_binom =
            std::lgamma(n_atoms + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_atoms - k + 1.0);
        // pow(0, 0) == 1 gives the pole limits
        const double mag = std::exp(0.5 * log_binom) * std::pow(c, n_atoms - k) * std::pow(s, k);
        amps[k] = std::polar(mag, -static_cast<double>(k) * phi);
    }
    amps /= amps.norm();
    return SpinState(std::move(amps));
}

enum class InitialKind { pi, even };

inline InitialKind parse_initial_kind(const std::string& text) {
    if (text == "pi") return InitialKind::pi;
    if (text == "even") return InitialKind::even;
    throw InvalidArgument("bjj: state kind must be 'pi' or 'even', got '" + text + "'");
}

/// pi state |pi/2, pi>, or the even state (|pi/2, 0> + |pi/2, pi>)/sqrt2.
/// For the even state the e^{-i k pi} phases are applied as exact signs, so odd
/// l+m amplitudes cancel to exact zeros and the norm is 1 without rescaling.
inline SpinState make_initial(InitialKind kind, int n_atoms) {
    if (kind == InitialKind::pi) return su2_coherent(std::numbers::pi / 2, std::numbers::pi, n_atoms);
    require(n_atoms % 2 == 0, "make_initial: the even state needs an even N_atoms");
    const int dim = n_atoms + 1;
    ComplexVector amps(dim);
    const double log_half = static_cast<double>(n_atoms) * std::log(0.5);
    for (int k = 0; k < dim; ++k) {
        const double log_binom =
            std::lgamma(n_atoms + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_atoms - k + 1.0);
        const double b = std::exp(0.5 * (log_binom + log_half));
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        amps[k] = cplx{(b + sign * b) / std::numbers::sqrt2, 0.0};
    }
    return SpinState(std::move(amps));
}

/// psi(t) = sum_k e^{-i E_k t} <E_k|psi(0)> |E_k>.
class SpectralPropagator {
public:
    SpectralPropagator(const BJJOperatorSet& ops, const SpinState& initial)
        : ops_(&ops), coeffs_(ops.eigenvectors.transpose().cast<cplx>() * checked(ops, initial)) {}

    ComplexVector at(double t) const {
        ComplexVector rotated(coeffs_.size());
        for (Eigen::Index k = 0; k < coeffs_.size(); ++k)
            rotated[k] = coeffs_[k] * std::polar(1.0, -ops_->energies[k] * t);
        return ops_->eigenvectors.cast<cplx>() * rotated;
    }

private:
    static const ComplexVector& checked(const BJJOperatorSet& ops, const SpinState& initial) {
        require(initial.dimension() == ops.dimension(), "evolve_bjj: state and operator dimensions differ");
        if (std::abs(initial.norm() - 1.0) > 1e-10) throw ContractViolation("evolve_bjj: state is not normalized");
        return initial.amplitudes();
    }

    const BJJOperatorSet* ops_;
    ComplexVector coeffs_;
};

inline SpinState evolve_bjj(const SpinState& state, const BJJOperatorSet& ops, double t) {
    return SpinState(SpectralPropagator(ops, state).at(t));
}

inline double expect(const RealMatrix& op, const ComplexVector& psi) { return psi.dot(op.cast<cplx>() * psi).real(); }

inline double expect(const ComplexMatrix& op, const ComplexVector& psi) { return psi.dot(op * psi).real(); }

enum class BlochComponent { x, y, z };

inline BlochComponent parse_bloch_component(const std::string& text) {
    if (text == "Lx" || text == "x") return BlochComponent::x;
    if (text == "Ly" || text == "y") return BlochComponent::y;
    if (text == "Lz" || text == "z") return BlochComponent::z;
    throw InvalidArgument("bjj: observable must be Lx, Ly or Lz, got '" + text + "'");
}

/// 2<L_component>/N at every sampling instant.
inline TimeSeries bloch_series(const SpinState& state0, const BJJOperatorSet& ops, const SamplingPlan& plan,
                               BlochComponent component = BlochComponent::x) {
    plan.validate();
    const SpectralPropagator prop(ops, state0);
    const double scale = 2.0 / static_cast<double>(ops.params.n_atoms);
    const ComplexMatrix ly = ops.ly;
    std::vector<double> values(plan.n_samples);
    const Eigen::Index dim = ops.dimension();
    for (std::size_t s = 0; s < plan.n_samples; ++s) {
        const ComplexVector psi = prop.at(plan.time(s));
        double value = 0.0;
        switch (component) {
        case BlochComponent::x: {
            // tridiagonal Lx: 2 Re sum psi_i^* Lx(i,i+1) psi_{i+1}
            double acc = 0.0;
            for (Eigen::Index i = 0; i + 1 < dim; ++i) acc += ops.lx(i, i + 1) * (std::conj(psi[i]) * psi[i + 1]).real();
            value = 2.0 * acc;
            break;
        }
        case BlochComponent::y:
            value = expect(ly, psi);
            break;
        case BlochComponent::z:
            value = expect(ops.lz, psi);
            break;
        }
        values[s] = scale * value;
    }
    Metadata meta{{"system", "bjj"},
                  {"observable", component == BlochComponent::x   ? "Lx"
                                 : component == BlochComponent::y ? "Ly"
                                                                  : "Lz"},
                  {"bjj.N", std::to_string(ops.params.n_atoms)},
                  {"bjj.J", format_double(ops.params.hopping)},
                  {"bjj.U", format_double(ops.params.interaction)},
                  {"bjj.u", format_double(ops.params.u())}};
    return TimeSeries(std::move(values), plan.dt, std::move(meta));
}

}  // namespace wavedyn::bjj
