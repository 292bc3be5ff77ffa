#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "wavedyn/morse.hpp"

using namespace wavedyn;
using namespace wavedyn::morse;

namespace {

const MorseEigenbasis& preset_basis() {
    static const MorseEigenbasis basis = build_eigenbasis(MorseParams{});
    return basis;
}

}  // namespace

TEST(Params, PresetDerivedValues) {
    const MorseParams p;
    EXPECT_DOUBLE_EQ(p.lambda(), 21.5);
    EXPECT_EQ(p.n_max(), 20);
    EXPECT_DOUBLE_EQ(p.x_e(), 1.0 / 43.0);
    EXPECT_DOUBLE_EQ(p.xe_omega_e(), 0.5);
    EXPECT_NEAR(p.omega_e(), 21.5, 1e-12);
    EXPECT_EQ(p.revival_denominator(), 1);
    EXPECT_NEAR(morse_revival_period(1, p), 4 * std::numbers::pi, 1e-12);
}

TEST(Params, HalfIntegerLambdaDropsZeroNormLevel) {
    MorseParams p;
    p.D = 220.5;  // lambda = 21: s_20 = 1, s_21 = -1
    EXPECT_EQ(p.n_max(), 20);
    p.D = 0.1;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Params, RevivalPeriodRule) {
    const MorseParams p;
    const double t = morse_revival_period(1, p);
    EXPECT_DOUBLE_EQ(morse_revival_period(2, p), t / 4);
    EXPECT_DOUBLE_EQ(morse_revival_period(3, p), t / 6);
    EXPECT_THROW(morse_revival_period(0, p), InvalidArgument);
}

TEST(Eigenbasis, Orthonormal) {
    const auto& b = preset_basis();
    EXPECT_EQ(b.levels(), 21);
    EXPECT_LT(b.orthonormality_residue, 1e-6);
}

TEST(Eigenbasis, GroundStateIsNodeless) {
    const auto& b = preset_basis();
    for (Eigen::Index i = 0; i < b.psi.rows(); ++i) EXPECT_GE(b.psi(i, 0), 0.0);
}

TEST(Eigenbasis, EnergySpacing) {
    const auto& b = preset_basis();
    const MorseParams& p = b.params;
    EXPECT_DOUBLE_EQ(b.energies[0], 0.0);
    for (int n = 0; n + 1 < b.levels(); ++n) {
        EXPECT_NEAR(b.energies[n + 1] - b.energies[n], p.omega() - p.xe_omega_e() * (2 * n + 1), 1e-9);
        EXPECT_GT(b.energies[n + 1], b.energies[n]);
    }
}

// <n|x|m> against 40-digit quadrature of the analytic eigenfunctions
TEST(Eigenbasis, PositionMatrixFrozenValues) {
    const auto& b = preset_basis();
    EXPECT_NEAR(b.x_matrix(0, 0), 0.035482497756280273, 1e-8);
    EXPECT_NEAR(b.x_matrix(5, 5), 0.45426161354372121, 1e-8);
    EXPECT_NEAR(std::abs(b.x_matrix(4, 5)), 0.36257154037340534, 1e-8);
    EXPECT_NEAR(b.x_matrix(20, 20), 5.5292290308123703, 1e-6);
}

TEST(Eigenbasis, OperatorSymmetry) {
    const auto& b = preset_basis();
    EXPECT_LT((b.x_matrix - b.x_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((b.d_matrix + b.d_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(b.hermiticity_residue, 1e-6);
}

TEST(Eigenbasis, CoarseGridIsDetected) {
    EXPECT_THROW(build_eigenbasis(MorseParams{}, GridSpec{-2.5, 8.0, 0.01}), ContractViolation);
}

TEST(Perelomov, TopCoefficientIsOne) {
    const Eigen::VectorXcd d = perelomov_coefficients(0.3, MorseParams{});
    EXPECT_EQ(d[20], std::complex<double>(1.0, 0.0));
}

TEST(Perelomov, ZeroAlphaIsTopLevel) {
    const MorseState s = perelomov_state(0.0, MorseParams{});
    EXPECT_EQ(s.coeffs()[20], std::complex<double>(1.0, 0.0));
    for (int n = 0; n < 20; ++n) EXPECT_EQ(s.coeffs()[n], std::complex<double>(0.0, 0.0));
}

TEST(Perelomov, NormalizedAndFrozenWeights) {
    const MorseState s = perelomov_state(0.3, MorseParams{});
    EXPECT_NEAR(s.coeffs().squaredNorm(), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(s.coeffs()[20]), 3.021597932991587e-5, 1e-15);
    EXPECT_NEAR(std::norm(s.coeffs()[15]), 0.22332016194467184, 1e-12);
}

TEST(Perelomov, OverflowIsReported) {
    EXPECT_THROW(perelomov_coefficients(1e200, MorseParams{}), InvalidArgument);
}

TEST(Superpose, EllOneIsPerelomov) {
    const MorseParams p;
    EXPECT_LT((superpose_morse(0.3, 1, p).coeffs() - perelomov_state(0.3, p).coeffs()).norm(), 1e-15);
}

TEST(Superpose, EvenStateOddLevelsVanish) {
    const MorseState s = superpose_morse(0.3, 2, MorseParams{});
    for (int n = 1; n <= 20; n += 2) EXPECT_EQ(s.coeffs()[n], std::complex<double>(0.0, 0.0));
}

TEST(Superpose, EvenStateIsTwoTermSum) {
    const MorseParams p;
    const Eigen::VectorXcd sum = perelomov_coefficients(0.3, p) + perelomov_coefficients(-0.3, p);
    EXPECT_LT((superpose_morse(0.3, 2, p).coeffs() - sum / sum.norm()).norm(), 1e-10);
}

TEST(Superpose, OddTopLevelRejectsEvenState) {
    MorseParams p;
    p.D = 0.5 * 20.5 * 20.5;  // lambda = 20.5: n' = 19
    ASSERT_EQ(p.n_max(), 19);
    EXPECT_THROW(superpose_morse(0.3, 2, p), InvalidArgument);
}

TEST(Evolve, IdentityAtZeroAndRevivals) {
    const auto& b = preset_basis();
    const MorseState s = perelomov_state(0.3, b.params);
    EXPECT_LT((evolve_morse(s, b, 0.0).coeffs() - s.coeffs()).norm(), 1e-15);
    const double t = morse_revival_period(1, b.params);
    EXPECT_NEAR(std::norm(inner(s, evolve_morse(s, b, t))), 1.0, 1e-8);
    const MorseState e = superpose_morse(0.3, 2, b.params);
    EXPECT_NEAR(std::norm(inner(e, evolve_morse(e, b, t / 4))), 1.0, 1e-8);
}

TEST(Autocorrelation, ValuesAndBound) {
    const auto& b = preset_basis();
    const MorseState s = perelomov_state(0.3, b.params);
    EXPECT_NEAR(std::abs(morse_autocorrelation(s, b, 0.0) - 1.0), 0.0, 1e-14);
    const auto a1 = morse_autocorrelation(s, b, 1.0);
    EXPECT_NEAR(a1.real(), 0.36825508799197133, 1e-12);
    EXPECT_NEAR(a1.imag(), -0.4384548771127332, 1e-12);
    EXPECT_NEAR(std::abs(morse_autocorrelation(s, b, morse_revival_period(1, b.params))), 1.0, 1e-8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> t(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) EXPECT_LE(std::abs(morse_autocorrelation(s, b, t(rng))), 1.0 + 1e-12);
}

TEST(Moments, CurvesCloseOverTheirPeriods) {
    const auto& b = preset_basis();
    const double t = morse_revival_period(1, b.params);
    const MorseState s = perelomov_state(0.3, b.params);
    const MorseState e = superpose_morse(0.3, 2, b.params);
    for (MorseObservable obs : {MorseObservable::x, MorseObservable::p}) {
        EXPECT_NEAR(expect(evolve_morse(s, b, t), b, obs), expect(s, b, obs), 1e-6);
        EXPECT_NEAR(expect(evolve_morse(e, b, t / 4), b, obs), expect(e, b, obs), 1e-6);
    }
}

TEST(Moments, SeriesShapeAndMetadata) {
    const auto& b = preset_basis();
    const MorseState s = perelomov_state(0.3, b.params);
    const TimeSeries x = morse_moments_series(s, b, {0.0, 0.01, 500}, MorseObservable::x);
    EXPECT_EQ(x.size(), 500u);
    EXPECT_EQ(x.origin().at("system"), "morse");
    EXPECT_NEAR(x[0], expect(s, b, MorseObservable::x), 1e-14);
    EXPECT_THROW(parse_morse_observable("q"), InvalidArgument);
}

TEST(Moments, GridRefinementIsStable) {
    const MorseParams p;
    const MorseEigenbasis fine = build_eigenbasis(p, GridSpec{-2.5, 60.0, 0.0025});
    const auto& b = preset_basis();
    const MorseState s = perelomov_state(0.3, p);
    for (double t : {0.0, 0.7, 2.9}) {
        const MorseState st = evolve_morse(s, b, t);
        EXPECT_NEAR(expect(st, b, MorseObservable::x), expect(st, fine, MorseObservable::x), 1e-6);
    }
}

TEST(Cache, RoundTripThroughDirectory) {
    const auto dir = std::filesystem::temp_directory_path() / "wavedyn_morse_cache_test";
    std::filesystem::remove_all(dir);
    const MorseParams p;
    const GridSpec g{-2.5, 60.0, 0.01};
    const MorseEigenbasis built = build_eigenbasis(p, g);
    const auto file = dir / (cache_key(p, g) + ".txt");
    save_eigenbasis(built, file);
    MorseEigenbasis loaded;
    ASSERT_TRUE(load_eigenbasis(file, p, g, loaded));
    EXPECT_EQ((loaded.x_matrix - built.x_matrix).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((loaded.d_matrix - built.d_matrix).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((loaded.energies - built.energies).cwiseAbs().maxCoeff(), 0.0);
    MorseParams other = p;
    other.D = 200.0;
    EXPECT_FALSE(load_eigenbasis(file, other, g, loaded));
    std::filesystem::remove_all(dir);
}
