#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ecstel/errors.hpp"
#include "ecstel/oracle.hpp"
#include "ecstel/quasi_bell.hpp"
#include "ecstel/teleport.hpp"
#include "test_oracles.hpp"

using namespace ecstel;

namespace {

constexpr double kPi = std::numbers::pi;

double oracle_entropy(const ChannelSpec &spec, int index, std::size_t keep = 0) {
    const auto cfg = oracle::OracleConfig::for_channel(spec);
    return ecstel::testing::shannon_bits(oracle::oracle_reduced(spec, index, cfg, keep).eigenvalues);
}

}  // namespace

TEST(Channel, ZeroLabel) {
    const auto spec = make_channel(0.0, 0.0);
    EXPECT_EQ(spec.s, 1.0);
    EXPECT_EQ(spec.theta, kPi / 4);
    EXPECT_EQ(spec.cos_2theta, 0.0);
}

TEST(Channel, HalfOverlap) {
    const double a = std::sqrt(std::log(2.0) / 2.0);
    const auto spec = make_channel(a, cplx(0.0, a));
    EXPECT_NEAR(spec.s, 0.5, 1e-15);
    EXPECT_NEAR(spec.s_prime, 0.5, 1e-15);
    EXPECT_NEAR(spec.theta, kPi / 12, 1e-15);
    EXPECT_NEAR(spec.theta_prime, kPi / 12, 1e-15);
}

TEST(Channel, LargeLabelSmallAngle) {
    const auto spec = make_channel(3.0, 3.0);
    EXPECT_NEAR(spec.s, std::exp(-18.0), 1e-22);
    EXPECT_NEAR(spec.s, 1.5e-8, 0.03e-8);
    EXPECT_LT(std::abs(spec.theta - spec.s / 2), spec.s * spec.s * spec.s);
}

TEST(Channel, FromAngles) {
    const auto spec = channel_from_angles(kPi / 12, kPi / 8);
    EXPECT_NEAR(spec.s, 0.5, 1e-15);
    EXPECT_NEAR(spec.s_prime, std::sin(kPi / 4), 1e-15);
    EXPECT_NEAR(spec.theta, kPi / 12, 1e-15);
    EXPECT_NEAR(std::exp(-2.0 * std::norm(spec.alpha)), 0.5, 1e-15);
    const auto edge = channel_from_angles(kPi / 4, kPi / 4);
    EXPECT_EQ(edge.cos_2theta, 0.0);
    EXPECT_EQ(std::abs(edge.alpha), 0.0);
    EXPECT_THROW(channel_from_angles(0.0, 0.1), InvalidArgument);
    EXPECT_THROW(channel_from_angles(0.1, 1.0), InvalidArgument);
}

TEST(States, VacuumProduct) {
    const auto spec = make_channel(0.0, 0.0);
    const auto state = quasi_bell_state(3, spec, 5);
    EXPECT_DOUBLE_EQ(state.norm_const, 0.5);
    EXPECT_NEAR(std::abs(state.ket[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(state.ket.norm(), 1.0, 1e-15);
}

TEST(States, DegenerateAndInvalid) {
    const auto spec = make_channel(0.0, 0.0);
    EXPECT_THROW(quasi_bell_state(4, spec, 5), DegenerateState);
    EXPECT_THROW(quasi_bell_state(2, spec, 5), DegenerateState);
    EXPECT_THROW(quasi_bell_state(0, make_channel(1.0, 1.0), 5), InvalidArgument);
    EXPECT_THROW(quasi_bell_state(5, make_channel(1.0, 1.0), 5), InvalidArgument);
    EXPECT_TRUE(odd_states_degenerate(spec));
    EXPECT_FALSE(odd_states_degenerate(make_channel(1e-5, 0.0)));
}

TEST(States, NormalisedAcrossGrid) {
    for (double a : {0.3, 0.6, 1.0, 1.5}) {
        for (double b : {0.3, 0.6, 1.0, 1.5}) {
            const auto spec = make_channel(a, b);
            for (int i = 1; i <= 4; ++i) {
                EXPECT_NEAR(quasi_bell_state(i, spec, heuristic_cutoff(std::max(a, b))).ket.norm(), 1.0, 1e-13);
            }
        }
    }
}

TEST(Gram, EqualLabelsDecoupleOddStates) {
    const auto g = gram_matrix(make_channel(0.8, 0.8));
    ASSERT_TRUE(g.g24());
    EXPECT_EQ(*g.g24(), 0.0);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(g.entries[i][i], 1.0);
    }
}

TEST(Gram, DegenerateBlockFlagged) {
    const auto g = gram_matrix(make_channel(0.0, 0.0));
    EXPECT_FALSE(g.odd_block_defined);
    EXPECT_FALSE(g.g24());
    EXPECT_TRUE(std::isnan(g.entries[1][3]));
    EXPECT_DOUBLE_EQ(g.g13(), 1.0);
}

TEST(Gram, MatchesExplicitOverlap) {
    const auto spec = make_channel(0.5, 1.0);
    const double s = std::exp(-0.5);
    const double sp = std::exp(-2.0);
    EXPECT_NEAR(gram_matrix(spec).g13(), (s + sp) / (1 + s * sp), 1e-15);
}

TEST(Reduced, ProductStateHasNoEntanglement) {
    const auto spec = make_channel(0.9, 0.0);
    const auto pair = reduced_eigs(1, spec);
    EXPECT_EQ(pair.lambda, 0.0);
    EXPECT_EQ(pair.lambda_prime, 1.0);
    EXPECT_EQ(entanglement_entropy(1, spec), 0.0);
}

TEST(Reduced, IndexSymmetry) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = make_channel(ecstel::testing::random_complex(rng), ecstel::testing::random_complex(rng));
        const auto a = reduced_eigs(1, spec);
        const auto b = reduced_eigs(3, spec);
        const auto c = reduced_eigs(2, spec);
        const auto d = reduced_eigs(4, spec);
        EXPECT_EQ(a.lambda, b.lambda);
        EXPECT_EQ(a.lambda_prime, b.lambda_prime);
        EXPECT_EQ(c.lambda, d.lambda);
        EXPECT_EQ(c.lambda_prime, d.lambda_prime);
        EXPECT_NEAR(a.lambda + a.lambda_prime, 1.0, 1e-15);
        EXPECT_NEAR(c.lambda + c.lambda_prime, 1.0, 1e-15);
    }
}

TEST(Reduced, MatchesOracleSpectrum) {
    for (double a : {0.3, 0.6, 1.0, 1.5}) {
        for (double b : {0.3, 0.6, 1.0, 1.5}) {
            const auto spec = make_channel(a, b);
            const auto cfg = oracle::OracleConfig::for_channel(spec);
            for (int i = 1; i <= 4; ++i) {
                const auto ev = oracle::oracle_reduced(spec, i, cfg).eigenvalues;
                const auto n = ev.size();
                const auto pair = reduced_eigs(i, spec);
                const double lo = std::min(pair.lambda, pair.lambda_prime);
                const double hi = std::max(pair.lambda, pair.lambda_prime);
                EXPECT_NEAR(ev[n - 1], hi, 1e-10);
                EXPECT_NEAR(ev[n - 2], lo, 1e-10);
                EXPECT_LT(std::abs(ev[n - 3]), 1e-10);
            }
        }
    }
}

TEST(Entropy, Limits) {
    EXPECT_NEAR(entanglement_entropy(3, make_channel(3.0, 3.0)), 1.0, 1e-6);
    EXPECT_EQ(entanglement_entropy(1, make_channel(1.2, 0.0)), 0.0);
}

TEST(Entropy, MatchesOracle) {
    const auto spec = make_channel(0.5, 1.0);
    for (int i = 1; i <= 4; ++i) {
        EXPECT_NEAR(entanglement_entropy(i, spec), oracle_entropy(spec, i), 1e-9) << i;
    }
}

TEST(Entropy, SchmidtSymmetry) {
    for (auto [a, b] : {std::pair{0.5, 1.0}, std::pair{1.5, 0.3}, std::pair{0.6, 0.6}}) {
        const auto spec = make_channel(a, b);
        for (int i = 1; i <= 4; ++i) {
            EXPECT_NEAR(oracle_entropy(spec, i, 0), oracle_entropy(spec, i, 1), 1e-9);
        }
    }
}

// On the diagonal the odd states carry exactly one bit at every label, so
// only the even states show the approach to maximal entanglement.
TEST(Entropy, DiagonalApproachToOneBit) {
    double previous = -1.0;
    for (double x : {0.2, 0.5, 1.0, 2.0, 3.0}) {
        const auto spec = make_channel(x, x);
        const double even = entanglement_entropy(1, spec);
        EXPECT_GT(even, previous) << x;
        EXPECT_LE(even, 1.0);
        EXPECT_EQ(even, entanglement_entropy(3, spec));
        previous = even;
        EXPECT_NEAR(entanglement_entropy(2, spec), 1.0, 1e-12);
        EXPECT_NEAR(entanglement_entropy(4, spec), 1.0, 1e-12);
    }
}

TEST(Entropy, BinaryEntropy) {
    EXPECT_EQ(binary_entropy({0.0, 1.0}), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy({0.5, 0.5}), 1.0);
    EXPECT_NEAR(binary_entropy({0.25, 0.75}), 0.8112781244591328, 1e-15);
}

TEST(Concurrence, Endpoints) {
    EXPECT_EQ(concurrence_channel(make_channel(0.0, 0.0)), 0.0);
    for (double t : {0.1, 0.3, kPi / 12, 0.7}) {
        const auto spec = channel_from_angles(t, t);
        const double s2 = std::sin(2 * t);
        const double c2 = std::cos(2 * t);
        EXPECT_NEAR(concurrence_channel(spec), c2 * c2 / (1 + s2 * s2), 1e-15);
    }
}

TEST(Concurrence, EqualsAmplitudeDeterminant) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = make_channel(ecstel::testing::random_complex(rng), ecstel::testing::random_complex(rng));
        const auto c = teleport::channel_in_onb(spec);
        const double det = 2.0 * std::abs(c[0][0] * c[1][1] - c[0][1] * c[1][0]);
        EXPECT_NEAR(concurrence_channel(spec), det, 1e-12);
    }
}

TEST(Invariance, LabelPhases) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> radius(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = radius(rng);
        const double b = radius(rng);
        const auto real = make_channel(a, b);
        const auto rotated = make_channel(std::polar(a, phase(rng)), std::polar(b, phase(rng)));
        const auto g0 = gram_matrix(real);
        const auto g1 = gram_matrix(rotated);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                EXPECT_NEAR(g0.entries[i][j], g1.entries[i][j], 1e-12);
            }
        }
        for (int i = 1; i <= 4; ++i) {
            EXPECT_NEAR(reduced_eigs(i, real).lambda, reduced_eigs(i, rotated).lambda, 1e-12);
            EXPECT_NEAR(entanglement_entropy(i, real), entanglement_entropy(i, rotated), 1e-12);
        }
        EXPECT_NEAR(concurrence_channel(real), concurrence_channel(rotated), 1e-12);
        EXPECT_NEAR(teleport::fidelity(real), teleport::fidelity(rotated), 1e-12);
        const auto p0 = teleport::measurement_probabilities(real);
        const auto p1 = teleport::measurement_probabilities(rotated);
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(p0[k], p1[k], 1e-12);
        }
    }
}

TEST(Invariance, OracleSeesOnlyModuli) {
    const auto real = make_channel(0.7, 1.1);
    const auto rotated = make_channel(std::polar(0.7, 1.3), std::polar(1.1, -2.2));
    const auto cfg = oracle::OracleConfig::for_channel(real);
    for (int i = 1; i <= 4; ++i) {
        const auto a = oracle::oracle_reduced(real, i, cfg).eigenvalues;
        const auto b = oracle::oracle_reduced(rotated, i, cfg).eigenvalues;
        EXPECT_NEAR(a.back(), b.back(), 1e-12);
    }
}
