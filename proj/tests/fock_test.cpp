#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ecstel/errors.hpp"
#include "ecstel/fock.hpp"
#include "ecstel/quasi_bell.hpp"
#include "test_oracles.hpp"

using namespace ecstel;
using ecstel::testing::gaussian_overlap;
using ecstel::testing::poisson_tail;

namespace {

void expect_density_invariants(const DensityMatrix &rho, double tol) {
    EXPECT_LT(rho.hermiticity_defect(), tol);
    EXPECT_NEAR(rho.trace().real(), 1.0, tol);
    EXPECT_NEAR(rho.trace().imag(), 0.0, tol);
    const auto eig = hermitian_eigs(rho);
    EXPECT_GT(eig.values.front(), -tol);
}

}  // namespace

TEST(Coherent, VacuumIsFirstBasisVector) {
    const auto c = coherent_ket(0.0, 4);
    ASSERT_EQ(c.ket.dim(), 4u);
    EXPECT_EQ(c.ket[0], cplx(1.0, 0.0));
    for (std::size_t n = 1; n < 4; ++n) {
        EXPECT_EQ(c.ket[n], cplx(0.0, 0.0));
    }
    EXPECT_EQ(c.deficit, 0.0);
}

TEST(Coherent, DeficitMatchesPoissonTail) {
    const auto c = coherent_ket(1.5, 40);
    EXPECT_LT(c.deficit, 1e-14);
    EXPECT_NEAR(c.deficit, poisson_tail(2.25, 40), 1e-15);

    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        for (std::size_t n : {5u, 10u, 15u}) {
            const auto k = coherent_ket(a, n);
            EXPECT_NEAR(k.deficit, poisson_tail(a * a, n), 1e-13) << a << " " << n;
        }
    }
}

TEST(Coherent, AmplitudesArePoissonian) {
    const cplx alpha(0.6, -0.9);
    const auto c = coherent_ket(alpha, 30);
    for (std::size_t n = 0; n < 30; ++n) {
        const cplx expected =
            std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, static_cast<double>(n)) / std::sqrt(std::tgamma(n + 1.0));
        EXPECT_NEAR(std::abs(c.ket[n] - expected), 0.0, 1e-14);
    }
}

TEST(Coherent, Errors) {
    EXPECT_THROW(coherent_ket(1.0, 0), InvalidArgument);
    try {
        coherent_ket(3.0, 12, 1e-13);
        FAIL() << "expected truncation error";
    } catch (const TruncationInsufficient &e) {
        EXPECT_EQ(e.code(), ErrorCode::truncation_insufficient);
        EXPECT_NEAR(e.deficit(), poisson_tail(9.0, 12), 1e-12);
    }
}

TEST(Coherent, HeuristicCutoff) {
    EXPECT_EQ(heuristic_cutoff(0.0), 20u);
    EXPECT_EQ(heuristic_cutoff(1.0), 31u);
    EXPECT_EQ(heuristic_cutoff(3.0), 59u);
    for (double a : {0.3, 1.0, 2.0, 3.0}) {
        EXPECT_LT(coherent_ket(a, heuristic_cutoff(a)).deficit, 1e-14);
    }
}

TEST(Inner, NormalisedSelfOverlapIsOne) {
    std::mt19937_64 rng(11);
    const auto x = ecstel::testing::random_ket(9, rng);
    EXPECT_NEAR(std::abs(inner(x, x) - 1.0), 0.0, 1e-14);
}

TEST(Inner, CoherentOverlapsAreGaussian) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx a = ecstel::testing::random_complex(rng, 0.8);
        const cplx b = ecstel::testing::random_complex(rng, 0.8);
        const auto n = heuristic_cutoff(std::max(std::abs(a), std::abs(b)));
        const auto got = inner(coherent_ket(a, n).ket, coherent_ket(b, n).ket);
        EXPECT_LT(std::abs(got - gaussian_overlap(a, b)), 1e-12);
    }
}

TEST(Inner, OppositeLabels) {
    const auto n = heuristic_cutoff(0.7);
    const auto got = inner(coherent_ket(0.7, n).ket, coherent_ket(-0.7, n).ket);
    EXPECT_NEAR(got.real(), std::exp(-0.98), 1e-12);
    EXPECT_NEAR(got.imag(), 0.0, 1e-15);
}

TEST(Inner, OppositeLabelPropertyOverRandomPhases) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> radius(0.0, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 40; ++trial) {
        const cplx a = std::polar(radius(rng), phase(rng));
        const auto n = heuristic_cutoff(std::abs(a));
        const auto got = inner(coherent_ket(a, n).ket, coherent_ket(-a, n).ket);
        EXPECT_LE(std::abs(got - std::exp(-2.0 * std::norm(a))), 1e-10);
    }
}

TEST(Inner, MismatchedCutoffThrows) {
    EXPECT_THROW(inner(TruncatedKet::zero(3), TruncatedKet::zero(4)), InvalidArgument);
}

TEST(Tensor, BasisKets) {
    const auto k = tensor(TruncatedKet::basis(2, 0), TruncatedKet::basis(3, 0));
    ASSERT_EQ(k.dim(), 6u);
    EXPECT_EQ(k[0], cplx(1.0));
    const auto k2 = tensor(TruncatedKet::basis(2, 1), TruncatedKet::basis(3, 2));
    EXPECT_EQ(k2[1 * 3 + 2], cplx(1.0));
    EXPECT_NEAR(k2.norm(), 1.0, 1e-15);
}

TEST(PartialTrace, ProductStateRoundTrip) {
    std::mt19937_64 rng(3);
    const auto ra = DensityMatrix::from_pure(ecstel::testing::random_ket(3, rng));
    const auto rb = DensityMatrix::from_pure(ecstel::testing::random_ket(4, rng));
    const auto joint = tensor(ra, rb);
    const ModeLayout layout{3, 4};
    EXPECT_LT(max_abs_difference(partial_trace(joint, layout, 0), ra), 1e-12);
    EXPECT_LT(max_abs_difference(partial_trace(joint, layout, 1), rb), 1e-12);
}

TEST(PartialTrace, SingletIsMaximallyMixed) {
    const double h = 1.0 / std::sqrt(2.0);
    const TruncatedKet singlet({0.0, h, -h, 0.0});
    const ModeLayout layout{2, 2};
    const double half[] = {0.5, 0.5};
    const auto mixed = DensityMatrix::diagonal(half);
    for (std::size_t keep : {0u, 1u}) {
        EXPECT_LT(max_abs_difference(partial_trace(singlet, layout, keep), mixed), 1e-12);
        EXPECT_LT(max_abs_difference(partial_trace(DensityMatrix::from_pure(singlet), layout, keep), mixed), 1e-12);
    }
}

TEST(PartialTrace, KetAndDensityPathsAgree) {
    std::mt19937_64 rng(17);
    const ModeLayout layout{2, 3, 4};
    const auto psi = ecstel::testing::random_ket(layout.total(), rng);
    const auto rho = DensityMatrix::from_pure(psi);
    for (std::size_t keep = 0; keep < 3; ++keep) {
        const auto a = partial_trace(psi, layout, keep);
        EXPECT_EQ(a.dim(), layout.dims()[keep]);
        EXPECT_LT(max_abs_difference(a, partial_trace(rho, layout, keep)), 1e-14);
        expect_density_invariants(a, 1e-12);
    }
}

TEST(PartialTrace, RandomLayoutsGiveDensityMatrices) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const ModeLayout layout{dim(rng), dim(rng), dim(rng)};
        const auto psi = ecstel::testing::random_ket(layout.total(), rng);
        for (std::size_t keep = 0; keep < 3; ++keep) {
            expect_density_invariants(partial_trace(psi, layout, keep), 1e-12);
        }
    }
}

TEST(PartialTrace, LayoutMismatchThrows) {
    const ModeLayout layout{2, 3};
    EXPECT_THROW(partial_trace(TruncatedKet::zero(5), layout, 0), InvalidArgument);
    EXPECT_THROW(partial_trace(DensityMatrix(5), layout, 0), InvalidArgument);
    EXPECT_THROW(partial_trace(TruncatedKet::zero(6), layout, 2), InvalidArgument);
}

TEST(PartialTrace, QuasiBellOnEqualLabels) {
    const auto spec = make_channel(0.8, 0.8);
    const auto state = quasi_bell_state(1, spec, heuristic_cutoff(0.8));
    const auto eig = hermitian_eigs(partial_trace(state.ket, state.layout(), 0));
    const double sp = std::exp(-2.0 * 0.64);
    const double denom = 2.0 * (1.0 + std::exp(-2.0 * (0.64 + 0.64)));
    const double lambda = (1.0 - sp) * (1.0 - sp) / denom;
    const double lambda_prime = (1.0 + sp) * (1.0 + sp) / denom;
    const auto n = eig.values.size();
    EXPECT_NEAR(eig.values[n - 1], lambda_prime, 1e-10);
    EXPECT_NEAR(eig.values[n - 2], lambda, 1e-10);
}

TEST(Eigen, Diagonal) {
    const double d[] = {0.7, 0.3};
    const auto eig = hermitian_eigs(DensityMatrix::diagonal(d));
    EXPECT_NEAR(eig.values[0], 0.3, 1e-15);
    EXPECT_NEAR(eig.values[1], 0.7, 1e-15);
}

TEST(Eigen, RankOneProjector) {
    std::mt19937_64 rng(8);
    const auto eig = hermitian_eigs(DensityMatrix::from_pure(ecstel::testing::random_ket(8, rng)));
    for (std::size_t k = 0; k < 7; ++k) {
        EXPECT_NEAR(eig.values[k], 0.0, 1e-12);
    }
    EXPECT_NEAR(eig.values[7], 1.0, 1e-12);
}

TEST(Eigen, TraceIdentityAndEigenvectors) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = ecstel::testing::random_hermitian(6, rng);
        const auto eig = hermitian_eigs(m);
        double sum = 0.0;
        for (double v : eig.values) {
            sum += v;
        }
        EXPECT_NEAR(sum, m.trace().real(), 1e-11);
        EXPECT_TRUE(std::is_sorted(eig.values.begin(), eig.values.end()));

        const auto &v = eig.vectors;
        const auto vh = v.adjoint();
        DensityMatrix identity(6);
        for (std::size_t i = 0; i < 6; ++i) {
            identity(i, i) = 1.0;
        }
        EXPECT_LT(max_abs_difference(vh * v, identity), 1e-12);
        const auto d = vh * m * v;
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                const cplx expected = i == j ? cplx(eig.values[i]) : cplx(0.0);
                EXPECT_LT(std::abs(d(i, j) - expected), 1e-11);
            }
        }
    }
}

TEST(Eigen, UnitaryConjugationInvariance) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = ecstel::testing::random_hermitian(7, rng);
        const auto u = ecstel::testing::random_unitary(7, rng);
        const auto a = hermitian_eigs(m).values;
        const auto b = hermitian_eigs(u * m * u.adjoint()).values;
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_NEAR(a[k], b[k], 1e-10);
        }
    }
}

TEST(Eigen, RejectsNonHermitian) {
    DensityMatrix m(2);
    m(0, 1) = 1.0;
    EXPECT_THROW(hermitian_eigs(m), InvalidArgument);
}
